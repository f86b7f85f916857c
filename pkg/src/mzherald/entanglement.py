"""Wootters concurrence for pure and mixed two-qubit states."""

from __future__ import annotations

import numpy as np

from .domain import ProtocolResult, TwoQubitDensity, TwoQubitPure
from .errors import ConsistencyError, NumericalError, ParameterError

# sigma_y (x) sigma_y in the fixed (uu, ud, du, dd) basis.
SIGMA_YY = np.array([
    [0, 0, 0, -1],
    [0, 0, 1, 0],
    [0, 1, 0, 0],
    [-1, 0, 0, 0],
], dtype=complex)

#: eigenvalue noise threshold for the spin-flipped product matrix
_CLAMP = 1e-8


def concurrence_pure(state: TwoQubitPure) -> float:
    """|<phi| sigma_y x sigma_y |phi*>| = 2 |a_uu a_dd - a_ud a_du|."""
    a = state.amplitudes
    norm = np.linalg.norm(a)
    if abs(norm - 1.0) > 1e-6:
        raise ParameterError(f"state norm {norm} deviates from 1 beyond 1e-6")
    return float(min(1.0, 2.0 * abs(a[0] * a[3] - a[1] * a[2])))


def concurrence_mixed(rho: TwoQubitDensity) -> float:
    """Concurrence via the lambda-product of rho and its spin flip.

    The lambdas (eigenvalue roots of rho (sy x sy) rho* (sy x sy), as
    in the nested-square-root construction) are computed as the
    singular values of B = sqrt(rho) (sy x sy) sqrt(rho)^T: B B+ is
    similar to the spin-flipped product, and singular values are
    perfectly conditioned where the non-normal eigenproblem is not.
    """
    mat = rho.matrix
    try:
        vals, vecs = np.linalg.eigh(mat)
        root = (vecs * np.sqrt(np.clip(vals, 0.0, None))) @ vecs.conj().T
        lam = np.linalg.svd(root @ SIGMA_YY @ root.T,
                            compute_uv=False)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NumericalError(f"eigensolver failed: {exc}") from exc
    value = lam[0] - lam[1] - lam[2] - lam[3]
    return float(min(1.0, max(0.0, value)))


def average_concurrence(result: ProtocolResult) -> float:
    """Probability-weighted mean concurrence over all detector signatures."""
    total = result.probability_sum()
    if abs(total - 1.0) > 1e-6:
        raise ConsistencyError(
            f"outcome probabilities sum to {total}, not 1 within 1e-6")
    return float(sum(o.probability * o.concurrence for o in result.outcomes))
