"""Parameter containers, unit conversions, and density-matrix invariants."""

import math

import numpy as np
import pytest

from mzherald import (HBAR_UEV_NS, DetectionOutcome, EmitterParams,
                      ParameterError, ProtocolResult, SystemParams,
                      TwoQubitDensity, TwoQubitPure, density_from_pure_mixture,
                      gamma_from_beta, lifetime_from_linewidth)

rng = np.random.default_rng(20260826)


def test_gamma_from_beta():
    assert gamma_from_beta(1.0, 1.0) == 0.0
    assert gamma_from_beta(0.9, 0.9) == pytest.approx(0.1, rel=1e-12)
    # beta = G / (G + g) round-trips
    g = gamma_from_beta(2.0, 0.8)
    assert 2.0 / (2.0 + g) == pytest.approx(0.8, rel=1e-12)


def test_lifetime_linewidth_conversion():
    # 1 ns lifetime corresponds to hbar/(1 ns) in ueV
    assert lifetime_from_linewidth(HBAR_UEV_NS) == pytest.approx(1.0, rel=1e-12)
    assert lifetime_from_linewidth(0.66) == pytest.approx(
        HBAR_UEV_NS / 0.66, rel=1e-12)


def test_emitter_params_validation():
    with pytest.raises(ParameterError):
        EmitterParams(energy=0.0, linewidth=-1.0)
    with pytest.raises(ParameterError):
        EmitterParams(energy=0.0, linewidth=1.0, beta=0.0)
    with pytest.raises(ParameterError):
        EmitterParams(energy=0.0, linewidth=1.0, beta=1.2)
    em = EmitterParams(energy=1.0, linewidth=2.0, beta=0.8)
    assert em.loss_rate == pytest.approx(0.5, rel=1e-12)
    assert em.total_rate == pytest.approx(2.5, rel=1e-12)


def test_system_params_detuning_and_swap():
    sys = SystemParams(EmitterParams(0.0, 1.0), EmitterParams(1.5, 2.0))
    assert sys.detuning == pytest.approx(1.5)
    assert sys.midpoint == pytest.approx(0.75)
    swapped = sys.swapped()
    assert swapped.emitter1.energy == 1.5
    assert swapped.emitter2.linewidth == 1.0


def test_pure_state_normalization():
    vec = np.array([1.0, 1.0j, -1.0, 0.5])
    state = TwoQubitPure.normalized(vec)
    assert np.vdot(state.amplitudes, state.amplitudes).real == pytest.approx(1.0)
    proj = state.projector()
    assert np.allclose(proj, proj.conj().T)
    assert np.trace(proj).real == pytest.approx(1.0)


def test_density_validation_rejects_bad_matrices():
    with pytest.raises(ParameterError):
        TwoQubitDensity(np.eye(4) * 0.5)          # trace 2
    bad = np.eye(4) / 4.0
    bad[0, 1] = 0.3                               # non-Hermitian
    with pytest.raises(ParameterError):
        TwoQubitDensity(bad)
    neg = np.diag([0.7, 0.5, -0.1, -0.1])
    with pytest.raises(ParameterError):
        TwoQubitDensity(neg)


def test_density_from_pure_mixture_weight_invariance():
    states = [TwoQubitPure.normalized(rng.normal(size=4) + 1j * rng.normal(size=4))
              for _ in range(3)]
    weights = [0.2, 0.5, 0.3]
    rho1 = density_from_pure_mixture(list(zip(weights, states)))
    rho2 = density_from_pure_mixture(
        [(10 * w, s) for w, s in zip(weights, states)])
    assert np.allclose(rho1.matrix, rho2.matrix, atol=1e-12)
    vals = np.linalg.eigvalsh(rho1.matrix)
    assert vals.min() > -1e-12
    assert np.trace(rho1.matrix).real == pytest.approx(1.0)


def test_protocol_result_bookkeeping():
    rho = TwoQubitDensity.maximally_mixed()
    outcomes = (
        DetectionOutcome((1, 0), 0.25, rho, 0.0),
        DetectionOutcome((0, 1), 0.75, rho, 0.0),
    )
    res = ProtocolResult(outcomes, 0.0, {})
    assert res.probability_sum() == pytest.approx(1.0)
    assert res.outcome((0, 1)).probability == pytest.approx(0.75)
