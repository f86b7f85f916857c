"""Deterministic data sets behind each published-figure CSV.

Each generator returns (rows, columns, metadata): plain Python lists a
CSV writer can dump verbatim.  Parameter defaults follow the published
panels: delta = 1.0 ueV, linewidths {0.66, 1.0, 2.0} ueV, beta in
{1, 0.9}, lossless sweeps on 21 x 21 (delta/Gamma1, Gamma2/Gamma1)
grids.
"""

from __future__ import annotations

import numpy as np

from .domain import EmitterParams, SystemParams
from .envelopes import JointEnvelope, SpectralProfile
from .errors import ParameterError
from .optimizer import optimize_frequency, sweep
from .protocols import (n_photon_monochromatic, single_photon_broadband,
                        single_photon_monochromatic, two_photon_broadband,
                        two_photon_monochromatic)

FIGURE_IDS = ("2b", "2c", "2d", "3a", "3b", "3c", "3d",
              "4a", "4b", "4c", "4d", "S1", "S2")

_DELTA = 1.0                 # ueV, headline detuning of Figs. 2-3
_LINEWIDTHS = (0.66, 1.0, 2.0)
_BETAS = (1.0, 0.9)
_PROFILES = ("lorentzian", "gaussian", "square")
_FIG4_INPUTS = {"4a": (1, 0), "4b": (1, 1), "4c": (2, 1), "4d": (2, 2)}


def _system(gamma1, delta=_DELTA, gamma2=None, beta=1.0):
    e1 = EmitterParams(energy=0.0, linewidth=gamma1, beta=beta)
    e2 = EmitterParams(energy=delta, linewidth=gamma2 or gamma1, beta=beta)
    return SystemParams(e1, e2)


def _mono_cavg(n, m, sys, omega):
    if (n, m) == (1, 0):
        return single_photon_monochromatic(sys, omega).c_avg
    if (n, m) == (1, 1):
        return two_photon_monochromatic(sys, omega).c_avg
    return n_photon_monochromatic(n, m, sys, omega).c_avg


def _fig_2b(points=281):
    rows = []
    omegas = np.linspace(-3.0, 4.0, points)
    for gamma in _LINEWIDTHS:
        for beta in _BETAS:
            sys = _system(gamma, beta=beta)
            for w in omegas:
                c = single_photon_monochromatic(sys, float(w)).c_avg
                rows.append([float(w), gamma, beta, c])
    return rows, ["omega_minus_E1_ueV", "gamma_ueV", "beta", "c_avg"], {
        "delta_ueV": _DELTA, "input": "1,0", "betas": "1.0,0.9"}


def _fig_2c(points=40):
    rows = []
    for gamma in np.linspace(0.1, 4.0, points):
        for beta in _BETAS:
            sys = _system(float(gamma), beta=beta)
            opt = optimize_frequency(
                lambda w: single_photon_monochromatic(sys, w).c_avg, sys=sys)
            rows.append([float(gamma), beta, opt.omega, opt.c_avg])
    return rows, ["gamma_ueV", "beta", "omega_opt_minus_E1_ueV", "c_avg_max"], {
        "delta_ueV": _DELTA, "input": "1,0"}


def _bandwidth_rows(n, m, points):
    rows = []
    sys = _system(1.0)
    sigmas = np.geomspace(0.01, 4.0, points)
    for kind in _PROFILES:
        for sigma in sigmas:
            prof = SpectralProfile(kind, sys.midpoint, float(sigma))
            if (n, m) == (1, 0):
                c = single_photon_broadband(sys, prof).c_avg
            else:
                c = two_photon_broadband(sys, JointEnvelope(prof, prof)).c_avg
            rows.append([float(sigma), kind, c])
    return rows, ["sigma_ueV", "profile", "c_avg"], {
        "delta_ueV": _DELTA, "gamma_ueV": 1.0, "input": f"{n},{m}",
        "center": "midpoint"}


def _fig_3a(points=281):
    rows = []
    omegas = np.linspace(-3.0, 4.0, points)
    for gamma in _LINEWIDTHS:
        sys = _system(gamma)
        for w in omegas:
            c = two_photon_monochromatic(sys, float(w)).c_avg
            rows.append([float(w), gamma, c])
    return rows, ["omega_minus_E1_ueV", "gamma_ueV", "c_avg"], {
        "delta_ueV": _DELTA, "input": "1,1", "beta": 1.0}


def _fig_3c(points=26):
    rows = []
    for beta in np.linspace(0.5, 1.0, points):
        sys = _system(1.0, beta=float(beta))
        omega = sys.midpoint
        rows.append([float(beta), "1,1",
                     two_photon_monochromatic(sys, omega).c_avg])
        rows.append([float(beta), "1,0",
                     single_photon_monochromatic(sys, omega).c_avg])
    return rows, ["beta", "input", "c_avg"], {
        "delta_ueV": _DELTA, "gamma_ueV": 1.0, "omega": "midpoint"}


def _fig_3d(points=31):
    rows = []
    for delta in np.linspace(0.0, 3.0, points):
        for inp in ((1, 0), (1, 1)):
            for beta in _BETAS:
                sys = _system(1.0, delta=float(delta), beta=beta)
                opt = optimize_frequency(
                    lambda w: _mono_cavg(*inp, sys, w), sys=sys)
                rows.append([float(delta), f"{inp[0]},{inp[1]}", beta,
                             opt.c_avg, opt.omega])
    return rows, ["delta_over_gamma", "input", "beta", "c_avg_max",
                  "omega_opt_minus_E1_ueV"], {"gamma_ueV": 1.0}


def _sweep_rows(n, m, grid_points):
    table = sweep(n, m, np.linspace(0.0, 3.0, grid_points),
                  np.linspace(0.2, 3.0, grid_points))
    rows = [list(r) for r in table.rows()]
    return rows, ["delta_over_g1", "g2_over_g1", "c_avg_max", "omega_opt"], {
        "input": f"{n},{m}", "beta": 1.0, "gamma1_ueV": 1.0,
        "omega_opt_units": "(omega_opt - E1) / Gamma1"}


def _fig_s1(grid_points=11):
    """One sweep per |n,m> (n >= m >= 0, 1 <= n+m <= 6)."""
    out = {}
    for total in range(1, 7):
        for m in range(total // 2 + 1):
            n = total - m
            rows, cols, meta = _sweep_rows(n, m, grid_points)
            out[f"S1_n{n}m{m}"] = (rows, cols, meta)
    return out


def _fig_s2(grid_points=21):
    out = {}
    for tag, (n, m) in (("S2_n1m0", (1, 0)), ("S2_n1m1", (1, 1))):
        rows, cols, meta = _sweep_rows(n, m, grid_points)
        meta = dict(meta, quantity="omega_opt map")
        out[tag] = (rows, cols, meta)
    return out


def figure_data(figure_id: str, grid_points: int | None = None) -> dict:
    """Data sets for one figure id: {name: (rows, columns, metadata)}."""
    if figure_id not in FIGURE_IDS:
        raise ParameterError(
            f"unknown figure id {figure_id!r}; expected one of {FIGURE_IDS}")
    if figure_id == "2b":
        return {"2b": _fig_2b()}
    if figure_id == "2c":
        return {"2c": _fig_2c()}
    if figure_id == "2d":
        return {"2d": _bandwidth_rows(1, 0, grid_points or 25)}
    if figure_id == "3a":
        return {"3a": _fig_3a()}
    if figure_id == "3b":
        return {"3b": _bandwidth_rows(1, 1, grid_points or 17)}
    if figure_id == "3c":
        return {"3c": _fig_3c()}
    if figure_id == "3d":
        return {"3d": _fig_3d()}
    if figure_id in _FIG4_INPUTS:
        n, m = _FIG4_INPUTS[figure_id]
        return {figure_id: _sweep_rows(n, m, grid_points or 21)}
    if figure_id == "S1":
        return _fig_s1(grid_points or 11)
    return _fig_s2(grid_points or 21)
