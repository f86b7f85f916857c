"""Single- and two-photon scattering off one emitter.

Transmission and reservoir (loss) coefficients, the pole functions they
are built from, and the scattered two-photon envelopes including the
bound-state term that encodes emitter saturation.  All frequencies are
hbar*omega in micro-eV.

The two-photon scattered envelope into the guided channel is

    xi~(w, w') = t(w) t(w') [xi(w, w') + xi(w', w)] / 2
               + (i/2) (sqrt(G)/pi) s(w) s(w') K(w + w')

with the bound-state integral

    K(S) = Int dk [s(k) + s(S - k)] xi(k, S - k),

which depends on (w, w') only through the total energy S.  Reservoir
variants swap guided pole factors s for reservoir ones s_r leg by leg;
the exact forms follow from treating loss as a second chiral channel in
which only the coupled field combination scatters.  The mixed
guided x reservoir channel is

    xi~r(w, w') = t(w) t_r(w') [xi(w, w') + xi(w', w)]
                + i (sqrt(G)/pi) s(w) s_r(w') K(w + w'),

and the test suite audits flux conservation (sum of channel norms equals
the input norm) for lossy emitters, which pins these prefactors down.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .domain import EmitterParams
from .envelopes import JointEnvelope, evaluate, graded_nodes
from .errors import ParameterError


def _denominator(omega, emitter: EmitterParams):
    w = np.asarray(omega, dtype=float)
    return w - emitter.energy + 0.5j * (emitter.linewidth + emitter.loss_rate)


def transmission(omega, emitter: EmitterParams):
    """Guided -> guided amplitude t(omega); a pi phase on resonance when lossless."""
    w = np.asarray(omega, dtype=float)
    num = w - emitter.energy - 0.5j * (emitter.linewidth - emitter.loss_rate)
    return num / _denominator(omega, emitter)


def reservoir_transmission(omega, emitter: EmitterParams):
    """Guided -> reservoir amplitude t_r(omega); zero for beta = 1."""
    g = emitter.loss_rate
    return -1j * math.sqrt(emitter.linewidth * g) / _denominator(omega, emitter)


def pole_functions(omega, emitter: EmitterParams):
    """(s, s_r): the guided and reservoir pole functions at omega."""
    den = _denominator(omega, emitter)
    return (math.sqrt(emitter.linewidth) / den,
            math.sqrt(emitter.loss_rate) / den)


@dataclass(frozen=True)
class ScatterCoeffs:
    """All four single-emitter coefficients evaluated at one frequency."""

    t: complex
    t_r: complex
    s: complex
    s_r: complex

    @classmethod
    def at(cls, omega: float, emitter: EmitterParams) -> "ScatterCoeffs":
        s, s_r = pole_functions(omega, emitter)
        return cls(
            t=complex(transmission(omega, emitter)),
            t_r=complex(reservoir_transmission(omega, emitter)),
            s=complex(s),
            s_r=complex(s_r),
        )


class BoundStateIntegral:
    """Evaluator (with a per-instance cache) for K(S) of one emitter.

    K is memoized on the total two-photon energy S, rounded to a fixed
    resolution; a cache instance must not be shared across different
    (envelope, emitter) pairs.
    """

    def __init__(self, xi: JointEnvelope, emitter: EmitterParams,
                 key_resolution: float = 1e-12):
        if xi.a.is_monochromatic or xi.b.is_monochromatic:
            raise ParameterError("bound-state integral needs a broadband envelope")
        self.xi = xi
        self.emitter = emitter
        self.key_resolution = key_resolution
        self._cache: dict[int, complex] = {}

    def _window(self, total: float):
        em = self.emitter
        a, b = self.xi.a, self.xi.b
        sigma = max(a.sigma, b.sigma)
        half = max(20.0 * em.total_rate, 20.0 * sigma,
                   abs(b.center - a.center) + 20.0 * em.linewidth)
        center = 0.5 * total
        # Make sure the envelope peaks (k ~ center_a, k ~ S - center_b)
        # and the emitter pole sit well inside the window.
        for point in (a.center, total - b.center, em.energy, total - em.energy):
            half = max(half, abs(point - center) + 20.0 * sigma)
        return center - half, center + half

    def _features(self, total: float):
        em = self.emitter
        a, b = self.xi.a, self.xi.b
        return [
            (a.center, a.sigma),
            (total - b.center, b.sigma),
            (em.energy, em.total_rate),
            (total - em.energy, em.total_rate),
        ]

    def _evaluate(self, total: float) -> complex:
        lo, hi = self._window(total)
        em = self.emitter
        s_of = lambda k: math.sqrt(em.linewidth) / (
            k - em.energy + 0.5j * (em.linewidth + em.loss_rate))
        previous = None
        for refine in range(4):
            k, w = graded_nodes(self._features(total), lo, hi,
                                nodes_per_panel=16, refine=refine)
            integrand = ((s_of(k) + s_of(total - k))
                         * evaluate(self.xi.a, k) * evaluate(self.xi.b, total - k))
            value = complex(np.sum(w * integrand))
            if previous is not None:
                scale = max(abs(value), abs(previous), 1e-300)
                if abs(value - previous) / scale < 1e-9:
                    return value
            previous = value
        return value

    def __call__(self, total) -> np.ndarray:
        totals = np.atleast_1d(np.asarray(total, dtype=float))
        out = np.empty(totals.shape, dtype=complex)
        for i, s in enumerate(totals.ravel()):
            key = round(s / self.key_resolution)
            val = self._cache.get(key)
            if val is None:
                val = self._evaluate(float(s))
                self._cache[key] = val
            out.ravel()[i] = val
        if np.isscalar(total) or np.asarray(total).ndim == 0:
            return out.ravel()[0]
        return out.reshape(np.asarray(total).shape)


def _symmetric_xi(xi: JointEnvelope, omega, omega_prime):
    return xi(omega, omega_prime) + xi(omega_prime, omega)


def scattered_envelope_guided(xi: JointEnvelope, emitter: EmitterParams,
                              omega, omega_prime,
                              bound: BoundStateIntegral | None = None,
                              include_bound: bool = True):
    """Two photons in, both back into the guided mode."""
    t = transmission(omega, emitter)
    tp = transmission(omega_prime, emitter)
    linear = 0.5 * t * tp * _symmetric_xi(xi, omega, omega_prime)
    if not include_bound:
        return linear
    if bound is None:
        bound = BoundStateIntegral(xi, emitter)
    s, _ = pole_functions(omega, emitter)
    sp, _ = pole_functions(omega_prime, emitter)
    total = np.asarray(omega) + np.asarray(omega_prime)
    pref = 0.5j * math.sqrt(emitter.linewidth) / math.pi
    return linear + pref * s * sp * bound(total)


def scattered_envelope_reservoir(xi: JointEnvelope, emitter: EmitterParams,
                                 omega, omega_prime, which: str,
                                 bound: BoundStateIntegral | None = None,
                                 include_bound: bool = True):
    """Scattered envelopes with one or both photons lost to the reservoir.

    which = "guided_reservoir": photon at omega stays guided, photon at
    omega_prime leaks.  which = "reservoir_reservoir": both leak.
    """
    if which not in ("guided_reservoir", "reservoir_reservoir"):
        raise ParameterError(f"unknown channel kind {which!r}")
    if emitter.beta == 1.0:
        return np.zeros(np.broadcast(np.asarray(omega),
                                     np.asarray(omega_prime)).shape, dtype=complex)
    t = transmission(omega, emitter)
    tp = transmission(omega_prime, emitter)
    tr = reservoir_transmission(omega, emitter)
    trp = reservoir_transmission(omega_prime, emitter)
    s, sr = pole_functions(omega, emitter)
    sp, srp = pole_functions(omega_prime, emitter)
    if which == "guided_reservoir":
        # Loss is a second chiral channel; only the coupled combination
        # (sqrt(G) u + sqrt(g) r)/sqrt(G+g) scatters, so the linear part
        # is the per-photon product t(w) t_r(w') acting on the
        # symmetrized envelope, and the bound term carries no 1/2 (the
        # outgoing legs are distinguishable) but does carry an i.  Both
        # points are fixed by the flux-conservation audit: the sum of
        # all channel norms equals the input norm only with this form.
        linear = t * trp * _symmetric_xi(xi, omega, omega_prime)
        pref = 1j * math.sqrt(emitter.linewidth) / math.pi
        pole_pair = s * srp
    else:
        linear = 0.5 * tr * trp * _symmetric_xi(xi, omega, omega_prime)
        pref = 0.5j * math.sqrt(emitter.linewidth) / math.pi
        pole_pair = sr * srp
    if not include_bound:
        return linear
    if bound is None:
        bound = BoundStateIntegral(xi, emitter)
    total = np.asarray(omega) + np.asarray(omega_prime)
    return linear + pref * pole_pair * bound(total)
