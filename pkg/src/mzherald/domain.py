"""Physical parameter types and two-qubit state representations.

Unit conventions: every energy-like quantity (transition energies,
linewidths, detunings, photon frequencies) is stored in micro-eV with
hbar = 1 internally, i.e. both hbar*omega and hbar*Gamma are carried
directly as micro-eV values.  Nanosecond lifetimes appear only at the
presentation layer via :func:`lifetime_from_linewidth`.

The two-qubit spin basis is fixed in the order
(up-up, up-down, down-up, down-down) everywhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMixtureError, ParameterError

#: hbar in micro-eV * ns, used only for lifetime <-> linewidth display conversion.
HBAR_UEV_NS = 0.6582119569

#: Basis labels in the fixed ordering used for all 4-vectors and 4x4 matrices.
BASIS_LABELS = ("uu", "ud", "du", "dd")


def gamma_from_beta(gamma_wg: float, beta: float) -> float:
    """Loss rate (in micro-eV) from the waveguide rate and the beta factor.

    beta is the fraction of emission into the guided mode, so the
    non-guided rate is Gamma * (1 - beta) / beta.
    """
    if gamma_wg <= 0:
        raise ParameterError(f"waveguide rate must be positive, got {gamma_wg}")
    if not 0 < beta <= 1:
        raise ParameterError(f"beta must lie in (0, 1], got {beta}")
    return gamma_wg * (1.0 - beta) / beta


def lifetime_from_linewidth(gamma_wg: float) -> float:
    """Radiative lifetime in ns for a linewidth given in micro-eV."""
    if gamma_wg <= 0:
        raise ParameterError(f"linewidth must be positive, got {gamma_wg}")
    return HBAR_UEV_NS / gamma_wg


@dataclass(frozen=True)
class EmitterParams:
    """One emitter: transition energy, waveguide rate and beta factor.

    energy and linewidth are in micro-eV; beta is dimensionless in (0, 1].
    """

    energy: float
    linewidth: float
    beta: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.energy):
            raise ParameterError(f"transition energy must be finite, got {self.energy}")
        if self.linewidth <= 0:
            raise ParameterError(f"linewidth must be positive, got {self.linewidth}")
        if not 0 < self.beta <= 1:
            raise ParameterError(f"beta must lie in (0, 1], got {self.beta}")

    @property
    def loss_rate(self) -> float:
        """Rate of emission into non-guided modes, in micro-eV."""
        return gamma_from_beta(self.linewidth, self.beta)

    @property
    def total_rate(self) -> float:
        """Guided plus non-guided emission rate, in micro-eV."""
        return self.linewidth + self.loss_rate


@dataclass(frozen=True)
class SystemParams:
    """The emitter pair sitting in the two interferometer arms."""

    emitter1: EmitterParams
    emitter2: EmitterParams

    @property
    def detuning(self) -> float:
        """E2 - E1 in micro-eV; either sign is allowed."""
        return self.emitter2.energy - self.emitter1.energy

    @property
    def midpoint(self) -> float:
        """(E1 + E2) / 2 in micro-eV."""
        return 0.5 * (self.emitter1.energy + self.emitter2.energy)

    def swapped(self) -> "SystemParams":
        return SystemParams(self.emitter2, self.emitter1)


def _as_amplitudes(values) -> np.ndarray:
    arr = np.asarray(values, dtype=complex)
    if arr.shape != (4,):
        raise ParameterError(f"expected 4 amplitudes, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class TwoQubitPure:
    """Pure two-qubit state as 4 complex amplitudes in the fixed basis."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = _as_amplitudes(self.amplitudes).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "amplitudes", arr)

    @classmethod
    def normalized(cls, values) -> "TwoQubitPure":
        arr = _as_amplitudes(values)
        norm = np.linalg.norm(arr)
        if norm == 0:
            raise ParameterError("cannot normalize the zero vector")
        return cls(arr / norm)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def projector(self) -> np.ndarray:
        return np.outer(self.amplitudes, self.amplitudes.conj())


@dataclass(frozen=True)
class TwoQubitDensity:
    """Two-qubit density matrix; validated Hermitian, trace-one, PSD."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.asarray(self.matrix, dtype=complex).copy()
        if mat.shape != (4, 4):
            raise ParameterError(f"expected a 4x4 matrix, got shape {mat.shape}")
        if np.max(np.abs(mat - mat.conj().T)) > 1e-12:
            raise ParameterError("density matrix is not Hermitian within 1e-12")
        if abs(np.trace(mat).real - 1.0) > 1e-10 or abs(np.trace(mat).imag) > 1e-10:
            raise ParameterError("density matrix trace deviates from 1 beyond 1e-10")
        eigvals = np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))
        if np.min(eigvals) < -1e-10:
            raise ParameterError("density matrix has an eigenvalue below -1e-10")
        mat.setflags(write=False)
        object.__setattr__(self, "matrix", mat)

    @classmethod
    def from_pure(cls, state: TwoQubitPure) -> "TwoQubitDensity":
        proj = state.projector()
        return cls(proj / np.trace(proj).real)

    @classmethod
    def maximally_mixed(cls) -> "TwoQubitDensity":
        return cls(np.eye(4, dtype=complex) / 4.0)


def density_from_pure_mixture(entries) -> TwoQubitDensity:
    """Weighted mixture sum_i w_i |phi_i><phi_i| / sum_i w_i.

    Weights must be non-negative with a positive total; the result does
    not depend on an overall rescaling of the weights.
    """
    total = 0.0
    acc = np.zeros((4, 4), dtype=complex)
    for weight, state in entries:
        if weight < 0:
            raise ParameterError(f"mixture weights must be non-negative, got {weight}")
        vec = state.amplitudes
        nrm2 = float(np.vdot(vec, vec).real)
        if nrm2 == 0:
            continue
        acc += (weight / nrm2) * np.outer(vec, vec.conj())
        total += weight
    if total <= 0:
        raise DegenerateMixtureError("all mixture weights are zero")
    mat = acc / total
    mat = 0.5 * (mat + mat.conj().T)
    return TwoQubitDensity(mat)


@dataclass(frozen=True)
class DetectionOutcome:
    """One detector signature with its probability, heralded state and concurrence."""

    signature: tuple[int, int]
    probability: float
    state: TwoQubitDensity
    concurrence: float


@dataclass(frozen=True)
class ProtocolResult:
    """All outcomes of one interferometer run plus the average concurrence."""

    outcomes: tuple[DetectionOutcome, ...]
    c_avg: float
    metadata: dict = field(default_factory=dict)

    def probability_sum(self) -> float:
        return float(sum(o.probability for o in self.outcomes))

    def outcome(self, signature: tuple[int, int]) -> DetectionOutcome:
        for out in self.outcomes:
            if out.signature == tuple(signature):
                return out
        raise KeyError(f"no outcome with signature {signature}")
