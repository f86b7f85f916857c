"""Heralded entanglement generation between two spectrally distinct
waveguide emitters in a Mach-Zehnder interferometer.

Public API: system/emitter parameters, spectral envelopes, scattering
coefficients, protocol pipelines for |n,m> Fock inputs, concurrence
measures, and frequency optimization / parameter sweeps.
"""

from .domain import (BASIS_LABELS, HBAR_UEV_NS, DetectionOutcome,
                     EmitterParams, ProtocolResult, SystemParams,
                     TwoQubitDensity, TwoQubitPure, density_from_pure_mixture,
                     gamma_from_beta, lifetime_from_linewidth)
from .entanglement import (average_concurrence, concurrence_mixed,
                           concurrence_pure)
from .envelopes import (PROFILE_KINDS, JointEnvelope, QuadratureSpec,
                        SpectralProfile, evaluate, graded_nodes, integrate_1d,
                        integrate_2d)
from .errors import (ConfigError, ConsistencyError, MisuseError, MZHeraldError,
                     NumericalError, ParameterError, QuadratureError,
                     UnsupportedConfigError)
from .optimizer import (FrequencySearch, Optimum, SweepTable, default_window,
                        optimize_frequency, sweep)
from .protocols import (N_PHOTON_CAP, DetectorModel, NPhotonCoeffs,
                        coefficient_tables, n_photon_monochromatic,
                        single_photon_broadband, single_photon_monochromatic,
                        two_photon_broadband, two_photon_monochromatic,
                        two_photon_monochromatic_identical)
from .scattering import (BoundStateIntegral, ScatterCoeffs, pole_functions,
                         reservoir_transmission, scattered_envelope_guided,
                         scattered_envelope_reservoir, transmission)

__version__ = "0.1.0"
