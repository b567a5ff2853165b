"""feshpulse computes dissociation spectra of Feshbach molecules.

A molecule held near a Feshbach resonance is dissociated by a magnetic
field pulse.  The spectrum of the pulse, the Fourier transform of the
uncoupled closed-channel amplitude, fixes the momentum distribution of
the released atom pair.  Spectra are computed by quadrature with
:func:`spectrum_numeric` or in closed and asymptotic form with the
functions of :mod:`feshpulse.asymptotics`.  :mod:`feshpulse.dynamics`
adds the decay of the molecule, :mod:`feshpulse.dissstate` turns a
spectrum into the two-atom state, and :mod:`feshpulse.optimize` searches
pulse families for the sharpest spectrum.

"""
__version__ = "0.1.0"

import logging as _logging

from .errors import (FeshPulseError, ConfigurationError, DomainError,
                     GridRangeError, ErfiOverflowError, NumericalError,
                     CausticError, ResolutionError, CoverageError,
                     FeshPulseWarning, UnderflowWarning, ThresholdWarning,
                     AsymptoticWarning, MultiplicityWarning, RegimeWarning,
                     NoPeakWarning, BudgetWarning)
from .pulses import (PulseShape, PhaseFunction, PulseSequence,
                     DimensionlessDrive, square, gaussian, trapezoid,
                     raised_cosine, tabulated, read_tabulated, phase_at,
                     stationary_point, concatenate)
from .spectrum import (SpectrumGrid, spectrum_numeric, quadrature_oracle,
                       main_lobe)
from .asymptotics import (spectrum_gaussian_uniform,
                          spectrum_stationary_phase, spectrum_square_closed)
from .dynamics import (PhysicalSetup, li6_setup, coupling_strength,
                       decay_rate, decay_profile, convolve_spectrum,
                       lorentzian_spectrum, quasi_stationary_distribution,
                       memory_time, check_slow_sweep)
from .dissstate import (DissociationState, assemble_state, spectral_norm,
                        momentum_amplitude, dissociation_probability,
                        distribution_metrics, validate_regime)
from .optimize import PulseFamily, ripple_objective, optimize_pulse

_logging.getLogger(__name__).addHandler(_logging.NullHandler())
