"""Photon-frequency optimization and (detuning, linewidth) sweeps.

The average concurrence as a function of probe frequency can be
bimodal (tuning toward either emitter), so the search is a dense coarse
scan followed by bounded refinement around the best few coarse cells.
Sweeps evaluate one frequency optimization per grid cell; cells are
independent and position-addressed, so results do not depend on
evaluation order or parallelism.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .domain import EmitterParams, SystemParams
from .errors import ParameterError
from .protocols import n_photon_monochromatic

#: environment variable selecting the sweep worker count
WORKERS_ENV = "MZHERALD_WORKERS"

#: ties within this concurrence slack resolve to the smallest frequency
TIE_TOLERANCE = 1e-9


def default_window(sys: SystemParams) -> tuple:
    """Frequency window guaranteed to bracket both emitter responses."""
    gmax = max(sys.emitter1.total_rate, sys.emitter2.total_rate)
    lo = min(sys.emitter1.energy, sys.emitter2.energy) - 2.0 * gmax
    hi = max(sys.emitter1.energy, sys.emitter2.energy) + 2.0 * gmax
    return lo, hi


@dataclass(frozen=True)
class FrequencySearch:
    """Search settings for optimize_frequency."""

    window: tuple | None = None      # (lo, hi) in ueV; None -> default_window
    coarse_points: int = 241
    tolerance: float = 1e-4          # ueV, refinement convergence
    refine_top: int = 3              # refine around this many best coarse cells

    def resolve_window(self, sys: SystemParams | None) -> tuple:
        if self.window is not None:
            lo, hi = self.window
        elif sys is not None:
            lo, hi = default_window(sys)
        else:
            raise ParameterError("search window required when no system is given")
        if not hi > lo:
            raise ParameterError(f"degenerate search window [{lo}, {hi}]")
        return float(lo), float(hi)


@dataclass(frozen=True)
class Optimum:
    omega: float
    c_avg: float
    boundary: bool


def optimize_frequency(objective, search: FrequencySearch = FrequencySearch(),
                       sys: SystemParams | None = None) -> Optimum:
    """Maximize objective(omega) over the search window.

    objective is any callable omega -> average concurrence (or other
    figure of merit).  Ties within TIE_TOLERANCE resolve to the
    smallest frequency; an optimum pinned against the window edge is
    flagged boundary=True.
    """
    lo, hi = search.resolve_window(sys)
    grid = np.linspace(lo, hi, search.coarse_points)
    values = np.array([objective(w) for w in grid])

    candidates = []
    order = np.argsort(values)[::-1][:search.refine_top]
    for idx in order:
        a = grid[max(idx - 1, 0)]
        b = grid[min(idx + 1, len(grid) - 1)]
        if b - a <= search.tolerance:
            candidates.append((float(grid[idx]), float(values[idx])))
            continue
        res = minimize_scalar(lambda w: -objective(w), bounds=(a, b),
                              method="bounded",
                              options={"xatol": search.tolerance})
        candidates.append((float(res.x), float(-res.fun)))
    candidates.extend((float(w), float(v)) for w, v in zip(grid, values))

    best_c = max(v for _, v in candidates)
    best_w = min(w for w, v in candidates if v >= best_c - TIE_TOLERANCE)
    best_c = max(v for w, v in candidates if abs(w - best_w) <= search.tolerance)
    boundary = (best_w - lo) <= search.tolerance or (hi - best_w) <= search.tolerance
    return Optimum(best_w, best_c, boundary)


@dataclass(frozen=True)
class SweepTable:
    """Per-cell frequency-optimized results on a (delta, Gamma2) grid.

    Axes are in units of Gamma1; cells are indexed [i_delta, i_gamma2].
    omega_opt is reported as (hbar*omega_opt - E1) / Gamma1.  Failed
    cells hold NaN and an error message in errors.
    """

    input_state: tuple
    delta_over_g1: np.ndarray
    gamma2_over_g1: np.ndarray
    c_max: np.ndarray
    omega_opt: np.ndarray
    errors: dict = field(default_factory=dict)

    def rows(self):
        """Yield (delta, gamma2, c_max, omega_opt) in row-major order."""
        for i, d in enumerate(self.delta_over_g1):
            for j, g in enumerate(self.gamma2_over_g1):
                yield float(d), float(g), float(self.c_max[i, j]), \
                    float(self.omega_opt[i, j])


def _sweep_cell(args):
    (n, m, delta, gamma2, gamma1, search) = args
    e1 = EmitterParams(energy=0.0, linewidth=gamma1)
    e2 = EmitterParams(energy=delta * gamma1, linewidth=gamma2 * gamma1)
    sys = SystemParams(e1, e2)

    def objective(w):
        return n_photon_monochromatic(n, m, sys, w).c_avg

    try:
        opt = optimize_frequency(objective, search, sys)
        return opt.c_avg, opt.omega / gamma1, None
    except Exception as exc:  # recorded per cell, sweep continues
        return float("nan"), float("nan"), f"{type(exc).__name__}: {exc}"


def sweep(n: int, m: int, delta_axis, gamma2_axis,
          search: FrequencySearch = FrequencySearch(),
          gamma1: float = 1.0, workers: int | None = None) -> SweepTable:
    """Frequency-optimized C_avg over a (delta/G1, Gamma2/G1) grid.

    delta_axis and gamma2_axis are in units of gamma1.  Worker count
    comes from the MZHERALD_WORKERS environment variable unless given.
    """
    delta_axis = np.asarray(delta_axis, dtype=float)
    gamma2_axis = np.asarray(gamma2_axis, dtype=float)
    if delta_axis.ndim != 1 or gamma2_axis.ndim != 1:
        raise ParameterError("sweep axes must be one-dimensional")
    if np.any(np.diff(delta_axis) <= 0) or np.any(np.diff(gamma2_axis) <= 0):
        raise ParameterError("sweep axes must be strictly increasing")
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1"))

    tasks = [(n, m, float(d), float(g), gamma1, search)
             for d in delta_axis for g in gamma2_axis]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_cell, tasks, chunksize=8))
    else:
        results = [_sweep_cell(t) for t in tasks]

    shape = (len(delta_axis), len(gamma2_axis))
    c_max = np.array([r[0] for r in results]).reshape(shape)
    omega = np.array([r[1] for r in results]).reshape(shape)
    errors = {divmod(k, shape[1]): r[2]
              for k, r in enumerate(results) if r[2] is not None}
    return SweepTable((n, m), delta_axis, gamma2_axis, c_max, omega, errors)
