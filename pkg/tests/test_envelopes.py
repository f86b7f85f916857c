"""Spectral profiles and the quadrature toolbox."""

import math

import numpy as np
import pytest

from mzherald import (JointEnvelope, MisuseError, ParameterError,
                      QuadratureError, QuadratureSpec, SpectralProfile,
                      evaluate, graded_nodes, integrate_1d, integrate_2d)

rng = np.random.default_rng(1234)


@pytest.mark.parametrize("kind", ["lorentzian", "gaussian", "square"])
@pytest.mark.parametrize("sigma", [0.05, 1.0, 3.7])
def test_profiles_are_normalized(kind, sigma):
    prof = SpectralProfile(kind, center=2.0, sigma=sigma)
    x, w = graded_nodes([(2.0, sigma)], 2.0 - 4000 * sigma, 2.0 + 4000 * sigma,
                        nodes_per_panel=32)
    norm = np.sum(w * np.abs(evaluate(prof, x)) ** 2)
    tol = 1e-3 if kind == "lorentzian" else 1e-9   # heavy Lorentzian tails
    assert norm == pytest.approx(1.0, abs=tol)


@pytest.mark.parametrize("kind,expected_fwhm", [
    ("lorentzian", 1.0), ("gaussian", 1.0), ("square", None)])
def test_sigma_is_intensity_fwhm(kind, expected_fwhm):
    prof = SpectralProfile(kind, center=0.0, sigma=1.0)
    peak = abs(evaluate(prof, 0.0)) ** 2
    if kind == "square":
        # top hat: support is exactly [-sigma/2, sigma/2]
        assert abs(evaluate(prof, 0.49)) ** 2 == pytest.approx(peak)
        assert abs(evaluate(prof, 0.51)) ** 2 == 0.0
    else:
        half = abs(evaluate(prof, expected_fwhm / 2)) ** 2
        assert half == pytest.approx(peak / 2, rel=1e-12)


def test_monochromatic_profile_cannot_be_evaluated():
    prof = SpectralProfile("monochromatic", center=1.0)
    assert prof.is_monochromatic
    with pytest.raises(MisuseError):
        evaluate(prof, 1.0)


def test_unknown_profile_kind_rejected():
    with pytest.raises(ParameterError):
        SpectralProfile("triangle", 0.0, 1.0)


def test_joint_envelope_product_and_identity():
    a = SpectralProfile("gaussian", 0.0, 1.0)
    b = SpectralProfile("gaussian", 2.0, 0.5)
    xi = JointEnvelope(a, b)
    assert not xi.identical
    assert xi(0.3, 1.9) == pytest.approx(
        complex(evaluate(a, 0.3) * evaluate(b, 1.9)))
    assert JointEnvelope(a, a).identical


def test_integrate_1d_gaussian():
    spec = QuadratureSpec(center=0.0, half_width=30.0)
    val = integrate_1d(lambda x: np.exp(-x ** 2), spec)
    assert val.value == pytest.approx(math.sqrt(math.pi), rel=1e-10)


def test_integrate_1d_reports_nonconvergence():
    # |x|^(1/2) has a cusp: panel doubling converges far too slowly to
    # hit 1e-12 in two rounds
    spec = QuadratureSpec(center=0.0, half_width=1.0, panels=8,
                          tolerance=1e-12, max_rounds=2)
    with pytest.raises(QuadratureError):
        integrate_1d(lambda x: np.sqrt(np.abs(x)), spec)


def test_integrate_2d_separable():
    spec = QuadratureSpec(center=0.0, half_width=20.0)
    val = integrate_2d(lambda x, y: np.exp(-x ** 2 - 0.5 * y ** 2), spec)
    assert val.value == pytest.approx(math.sqrt(math.pi)
                                      * math.sqrt(2 * math.pi), rel=1e-8)


def test_graded_nodes_resolve_multiscale_features():
    # A sum of two Lorentzian-squared humps, widths apart by 1e3
    def f(x):
        return 0.01 / (x ** 2 + 0.01 ** 2) + 10.0 / ((x - 5) ** 2 + 10.0 ** 2)

    x, w = graded_nodes([(0.0, 0.01), (5.0, 10.0)], -4000.0, 4000.0,
                        nodes_per_panel=24)
    exact = (math.pi + 0.0) + (math.atan(3995 / 10) + math.atan(4005 / 10))
    assert np.sum(w * f(x)) == pytest.approx(exact, rel=1e-6)
    # weights are positive and nodes sorted (prerequisites elsewhere)
    assert np.all(w > 0)
    assert np.all(np.diff(x) > 0)


def test_graded_nodes_refinement_doubles_density():
    x0, _ = graded_nodes([(0.0, 1.0)], -10.0, 10.0, nodes_per_panel=8)
    x1, _ = graded_nodes([(0.0, 1.0)], -10.0, 10.0, nodes_per_panel=8, refine=1)
    assert len(x1) == 2 * len(x0)


def test_pole_function_residue_oracle():
    """Int s(k) dk over a wide window approaches -i pi sqrt(G)."""
    from mzherald import EmitterParams, pole_functions
    em = EmitterParams(energy=0.3, linewidth=2.0, beta=0.8)
    x, w = graded_nodes([(0.3, em.total_rate)], 0.3 - 2e6, 0.3 + 2e6,
                        nodes_per_panel=32)
    s, sr = pole_functions(x, em)
    val = np.sum(w * s)
    assert val == pytest.approx(-1j * math.pi * math.sqrt(2.0), rel=1e-5)
    val_r = np.sum(w * sr)
    assert val_r == pytest.approx(-1j * math.pi * math.sqrt(em.loss_rate),
                                  rel=1e-5)
