"""Concurrence measures against the textbook matrix-square-root definition."""

import numpy as np
import pytest
from scipy.linalg import sqrtm

from mzherald import (ConsistencyError, DetectionOutcome, ProtocolResult,
                      TwoQubitDensity, TwoQubitPure, average_concurrence,
                      concurrence_mixed, concurrence_pure)

rng = np.random.default_rng(424242)

_SY = np.array([[0, -1j], [1j, 0]])
_SYY = np.kron(_SY, _SY)


def concurrence_oracle(mat: np.ndarray) -> float:
    """Wootters' definition via nested matrix square roots."""
    root = sqrtm(mat)
    r = sqrtm(root @ (_SYY @ mat.conj() @ _SYY) @ root)
    lam = np.sort(np.real(np.linalg.eigvals(r)))[::-1]
    return max(0.0, lam[0] - lam[1] - lam[2] - lam[3])


def random_density(rank=4):
    a = rng.normal(size=(4, rank)) + 1j * rng.normal(size=(4, rank))
    mat = a @ a.conj().T
    mat /= np.trace(mat).real
    return 0.5 * (mat + mat.conj().T)


def random_pure():
    return TwoQubitPure.normalized(rng.normal(size=4) + 1j * rng.normal(size=4))


def test_bell_state_concurrence_one():
    bell = TwoQubitPure.normalized(np.array([1.0, 0.0, 0.0, 1.0]))
    assert concurrence_pure(bell) == pytest.approx(1.0, abs=1e-14)
    assert concurrence_mixed(TwoQubitDensity.from_pure(bell)) \
        == pytest.approx(1.0, abs=1e-8)


def test_product_state_concurrence_zero():
    prod = TwoQubitPure.normalized(np.kron([1.0, 2.0], [0.5, -1.0]))
    assert concurrence_pure(prod) == pytest.approx(0.0, abs=1e-14)


def test_werner_state():
    """p |Bell><Bell| + (1-p) I/4 has C = max(0, (3p-1)/2); p=0.5 -> 0.25."""
    bell = TwoQubitPure.normalized(np.array([1.0, 0.0, 0.0, 1.0]))
    for p, expected in ((0.5, 0.25), (0.9, 0.85), (1.0 / 3.0, 0.0), (0.2, 0.0)):
        mat = p * bell.projector() + (1 - p) * np.eye(4) / 4.0
        rho = TwoQubitDensity(mat)
        assert concurrence_mixed(rho) == pytest.approx(expected, abs=1e-10)


@pytest.mark.parametrize("rank,tol", [(1, 1e-7), (2, 1e-7), (4, 1e-10)])
def test_lambda_product_matches_sqrt_oracle(rank, tol):
    # scipy's nested sqrtm is only ~1e-8 accurate on rank-deficient
    # inputs (where our route stays exact, see the rank-1 test below);
    # full-rank agreement is at 1e-10 and better.
    for _ in range(60):
        mat = random_density(rank)
        ours = concurrence_mixed(TwoQubitDensity(mat))
        assert ours == pytest.approx(concurrence_oracle(mat), abs=tol)


def test_mixed_route_is_exact_on_rank_one():
    for _ in range(40):
        state = random_pure()
        ours = concurrence_mixed(TwoQubitDensity.from_pure(state))
        assert ours == pytest.approx(concurrence_pure(state), abs=1e-12)


def test_pure_and_mixed_measures_agree():
    for _ in range(50):
        state = random_pure()
        rho = TwoQubitDensity.from_pure(state)
        assert concurrence_mixed(rho) == pytest.approx(
            concurrence_pure(state), abs=1e-8)


def test_local_unitary_invariance():
    def haar2():
        z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        q, r = np.linalg.qr(z)
        return q * (np.diag(r) / np.abs(np.diag(r)))

    for _ in range(20):
        mat = random_density()
        u = np.kron(haar2(), haar2())
        rotated = u @ mat @ u.conj().T
        rotated = 0.5 * (rotated + rotated.conj().T)
        assert concurrence_mixed(TwoQubitDensity(rotated)) == pytest.approx(
            concurrence_mixed(TwoQubitDensity(mat)), abs=1e-9)


def test_qubit_swap_invariance():
    # exchanging the two qubits permutes basis indices (1 <-> 2)
    perm = [0, 2, 1, 3]
    for _ in range(20):
        mat = random_density()
        swapped = mat[np.ix_(perm, perm)]
        assert concurrence_mixed(TwoQubitDensity(swapped)) == pytest.approx(
            concurrence_mixed(TwoQubitDensity(mat)), abs=1e-10)


def test_average_concurrence_weighting_and_audit():
    rho0 = TwoQubitDensity.maximally_mixed()
    bell = TwoQubitDensity.from_pure(
        TwoQubitPure.normalized(np.array([1.0, 0, 0, 1.0])))
    outcomes = (DetectionOutcome((1, 0), 0.25, bell, 1.0),
                DetectionOutcome((0, 1), 0.75, rho0, 0.0))
    res = ProtocolResult(outcomes, 0.0, {})
    assert average_concurrence(res) == pytest.approx(0.25)
    bad = ProtocolResult((DetectionOutcome((1, 0), 0.4, rho0, 0.0),), 0.0, {})
    with pytest.raises(ConsistencyError):
        average_concurrence(bad)
