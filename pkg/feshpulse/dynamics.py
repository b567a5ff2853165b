"""Channel coupling: decay of the molecule and smearing of its spectrum.

The closed-channel amplitude factorizes as ``C(t) = C0(t)*D(t)``, where
C0 is the uncoupled phase evolution and D the real, slowly decaying
envelope

    D(t) = exp(-1/2 * integral of Gamma up to t).

The decay rate is nonzero only above the continuum threshold of the
background channel and diverges like ``1/sqrt(E_res - threshold)`` there.
The energy shift of the closed channel vanishes in the contact-coupling
approximation and is not represented.

"""
import collections as _collections
import logging as _logging
import math as _math
import warnings as _warnings

import numpy as _np
from scipy import integrate as _integrate
from scipy import optimize as _optimize

from .constants import BOHR_RADIUS, HBAR, LI6_MASS, MU_B
from .errors import (ConfigurationError, DomainError, ResolutionError,
                     ThresholdWarning)
from .pulses import DimensionlessDrive
from .spectrum import SpectrumGrid

_log = _logging.getLogger(__name__)

_setup_fields = ('a_bg', 'mu_res', 'dB_res', 'omega_G', 'omega_T', 'm',
                 'U0_G', 'U0_T', 'B0', 'B_res')

# half width of the flagged band around the threshold pole, in hbar*omega_G
GUARD_BAND = 1e-3

# relative accuracy of the per-cell decay integrals
_QUAD_RTOL = 1e-11

SlowSweepReport = _collections.namedtuple(
    'SlowSweepReport', ['max_rate', 'bound', 'ratio', 'passed', 'note'])
SlowSweepReport.__doc__ = """Outcome of :func:`check_slow_sweep`.

`max_rate` is max|dB/dt| [T/s], `bound` is hbar/(t_m**2*mu_res) [T/s];
the check passes if their ratio is below 0.1.

"""


class PhysicalSetup(object):
    """Spectroscopic resonance data and trap/guide parameters (SI units).

    Parameters
    ----------
    a_bg : float
        Background scattering length [m].
    mu_res : float
        Magnetic moment difference of the channels [J/T].
    dB_res : float
        Resonance width [T].
    omega_G, omega_T : float
        Transverse guide and longitudinal trap frequencies [rad/s].
    m : float
        Atomic mass [kg].
    U0_G, U0_T : float, optional
        Depths of the guide and trap laser potentials [J].
    B0, B_res : float, optional
        Base field of the pulse and resonance position [T].
    off_tuned : bool, optional
        User assertion that the pulse stays off-tuned from the trap
        bound states.
    delta_cm : bool, optional
        Replace the trap ground state in the center-of-mass momentum by
        a delta function.

    """

    def __init__(self, a_bg, mu_res, dB_res, omega_G, omega_T, m,
                 U0_G=0.0, U0_T=0.0, B0=0.0, B_res=0.0, off_tuned=True,
                 delta_cm=True):
        for name, value in (('a_bg', a_bg), ('mu_res', mu_res),
                            ('omega_G', omega_G), ('omega_T', omega_T),
                            ('m', m)):
            if not (_math.isfinite(value) and value > 0):
                raise ConfigurationError(
                    "{0} must be positive: {1!r}".format(name, value))
        if not (_math.isfinite(dB_res) and dB_res >= 0):
            raise ConfigurationError(
                "dB_res must be non-negative: {0!r}".format(dB_res))
        for name, value in (('U0_G', U0_G), ('U0_T', U0_T), ('B0', B0),
                            ('B_res', B_res)):
            if not _math.isfinite(value):
                raise ConfigurationError(
                    "{0} must be finite: {1!r}".format(name, value))
        self._values = dict(a_bg=float(a_bg), mu_res=float(mu_res),
                            dB_res=float(dB_res), omega_G=float(omega_G),
                            omega_T=float(omega_T), m=float(m),
                            U0_G=float(U0_G), U0_T=float(U0_T),
                            B0=float(B0), B_res=float(B_res))
        self._off_tuned = bool(off_tuned)
        self._delta_cm = bool(delta_cm)

    a_bg = property(lambda self: self._values['a_bg'])
    """Background scattering length [m]."""
    mu_res = property(lambda self: self._values['mu_res'])
    """Magnetic moment difference [J/T]."""
    dB_res = property(lambda self: self._values['dB_res'])
    """Resonance width [T]."""
    omega_G = property(lambda self: self._values['omega_G'])
    """Transverse guide frequency [rad/s]."""
    omega_T = property(lambda self: self._values['omega_T'])
    """Longitudinal trap frequency [rad/s]."""
    m = property(lambda self: self._values['m'])
    """Atomic mass [kg]."""
    U0_G = property(lambda self: self._values['U0_G'])
    """Guide potential depth [J]."""
    U0_T = property(lambda self: self._values['U0_T'])
    """Trap potential depth [J]."""
    B0 = property(lambda self: self._values['B0'])
    """Base field [T]."""
    B_res = property(lambda self: self._values['B_res'])
    """Resonance position [T]."""
    off_tuned = property(lambda self: self._off_tuned)
    """Whether the pulse is asserted to avoid trap bound states."""
    delta_cm = property(lambda self: self._delta_cm)
    """Whether the center-of-mass momentum is treated as sharp."""

    @property
    def mu(self):
        """Reduced mass m/2 [kg]."""
        return self.m / 2

    @property
    def M(self):
        """Total mass 2m [kg]."""
        return 2 * self.m

    @property
    def U_cl(self):
        """Zero-point and laser energy of the closed-channel molecule [J]."""
        return (-2 * self.U0_T + HBAR * self.omega_T / 2 -
                2 * self.U0_G + HBAR * self.omega_G)

    @property
    def U_bg(self):
        """Continuum threshold of the background channel [J]."""
        return -2 * self.U0_G + 2 * HBAR * self.omega_G

    @property
    def threshold(self):
        """Resonance energy above which the molecule decays [J]."""
        return self.U_bg - self.U_cl

    @property
    def a_perp(self):
        """Transverse oscillator length sqrt(hbar/(m*omega_G)) [m]."""
        return _math.sqrt(HBAR / (self.m * self.omega_G))

    @property
    def sigma_p(self):
        """Momentum width of the trap ground state, sqrt(M*hbar*omega_T/2)."""
        return _math.sqrt(self.M * HBAR * self.omega_T / 2)

    @property
    def E0(self):
        """Base energy E_res(B0) + U_cl [J]."""
        return float(self.E_res(self.B0)) + self.U_cl

    def E_res(self, B):
        """Resonance energy mu_res*(B - B_res) [J] at field `B`."""
        return self.mu_res * (_np.asarray(B) - self.B_res)

    def make_drive(self, T, epsilon=None, dB=None):
        """Return the :class:`DimensionlessDrive` of a pulse on this setup.

        Give exactly one of `epsilon` and the field pulse height `dB` [T].

        """
        if (epsilon is None) == (dB is None):
            raise ConfigurationError("give exactly one of epsilon and dB")
        if dB is not None:
            return DimensionlessDrive.from_field(dB, self.mu_res, T, self.E0)
        return DimensionlessDrive(epsilon, T, self.E0)

    def to_dict(self):
        d = dict(self._values)
        d['off_tuned'] = self._off_tuned
        d['delta_cm'] = self._delta_cm
        return d

    def replace(self, **changes):
        """Return a copy with some fields changed."""
        d = self.to_dict()
        unknown = set(changes) - set(d)
        if unknown:
            raise ConfigurationError(
                "Unknown setup fields: {0!r}".format(sorted(unknown)))
        d.update(changes)
        return PhysicalSetup(**d)

    def __repr__(self):
        return "PhysicalSetup({0})".format(", ".join(
            "{0}={1!r}".format(k, self._values[k]) for k in _setup_fields))


def li6_setup(**changes):
    """Return a 6Li-like reference setup.

    A narrow resonance (mu_res = 0.01 Bohr magnetons, width 10 mG) with
    the base field 1 G below resonance, a 5 kHz guide and a 10 Hz
    longitudinal trap.  Pulses that lift the molecule about 1e-30 J above
    the continuum threshold release atoms at about 1 cm/s, well inside the
    single-mode regime.  Keyword arguments override fields.

    """
    B_res = 0.0543
    setup = PhysicalSetup(a_bg=5e-9, mu_res=1e-2 * MU_B, dB_res=1e-6,
                          omega_G=2 * _math.pi * 5e3,
                          omega_T=2 * _math.pi * 10.0, m=LI6_MASS,
                          U0_G=0.0, U0_T=0.0, B0=B_res - 1e-4, B_res=B_res)
    return setup.replace(**changes) if changes else setup


def coupling_strength(setup):
    """Squared coupling matrix element between closed and open channel.

    ``(4*pi*hbar**2/(m*(2*pi*hbar)**3))*a_bg*mu_res*dB_res``.

    """
    return (4 * _math.pi * HBAR ** 2 / (setup.m * (2 * _math.pi * HBAR) ** 3)
            * setup.a_bg * setup.mu_res * setup.dB_res)


def _rate_constant(setup):
    return (2 * setup.omega_G * setup.a_bg * setup.mu_res * setup.dB_res *
            _math.sqrt(2 * setup.mu) / HBAR)


def decay_rate(E_res, setup, guard=GUARD_BAND):
    """Return the decay rate Gamma [1/s] at resonance energy `E_res` [J].

    Zero at and below ``setup.threshold``; above it

        Gamma = 2*omega_G*a_bg*mu_res*dB_res/hbar
                * sqrt(2*mu/(E_res - threshold)).

    Within ``guard*hbar*omega_G`` above the threshold the pole is not
    evaluated: inf is returned and a
    :class:`~feshpulse.errors.ThresholdWarning` is issued.

    Parameters
    ----------
    E_res : float or array_like
    setup : PhysicalSetup
    guard : float, optional
        Guard band width in units of hbar*omega_G.

    """
    scalar = _np.ndim(E_res) == 0
    x = _np.atleast_1d(_np.asarray(E_res, dtype=float)) - setup.threshold
    band = guard * HBAR * setup.omega_G
    rate = _np.zeros_like(x)
    above = x >= band
    rate[above] = _rate_constant(setup) / _np.sqrt(x[above])
    flagged = (x > 0) & ~above
    if _np.any(flagged):
        rate[flagged] = _np.inf
        _warnings.warn("{0} resonance energies inside the threshold guard "
                       "band".format(int(_np.sum(flagged))),
                       ThresholdWarning, stacklevel=2)
    return float(rate[0]) if scalar else rate


class DecayProfile(object):
    """Decay rate and envelope D(t) on a time grid.

    Do not instantiate directly, use :func:`decay_profile`.

    """

    def __init__(self, times, gamma, D):
        self._times = times
        self._gamma = gamma
        self._D = D

    times = property(lambda self: self._times)
    """Time grid [s]."""
    gamma = property(lambda self: self._gamma)
    """Decay rate at the grid nodes [1/s]."""
    D = property(lambda self: self._D)
    """Envelope D(t), real and positive, D(t0) = 1."""

    @property
    def survival(self):
        """Probability |D|**2 that the molecule survives the pulse."""
        return float(self._D[-1] ** 2)

    def __repr__(self):
        return "DecayProfile(<{0} times>, survival={1!r})".format(
            len(self._times), self.survival)


def resonance_energy(phase, drive, setup, t):
    """Resonance energy E0 + dE*P(t/T) - U_cl [J] at times `t` [s]."""
    return drive.E0 + drive.dE * phase.pulse(t / drive.T) - setup.U_cl


def _cell_decay(excess, a, b, kappa):
    """Integral of kappa/sqrt(excess(t)) over the part of [a, b] above
    threshold; `excess` must be continuous inside the cell."""
    xa, xb = excess(a), excess(b)
    if xa <= 0 and xb <= 0:
        return 0.0
    if xa > 0 and xb > 0:
        def rate(t):
            x = excess(t)
            return kappa / _math.sqrt(x) if x > 0 else 0.0
        return _integrate.quad(rate, a, b, epsabs=0.0,
                               epsrel=_QUAD_RTOL, limit=200)[0]
    root = _optimize.brentq(excess, a, b, xtol=1e-14 * (b - a),
                            rtol=4 * _np.finfo(float).eps)

    # the threshold pole is carried by the algebraic weight
    def regular(t):
        x = excess(t)
        return kappa * _math.sqrt(abs(t - root) / x) if x > 0 else 0.0
    if xb > 0:
        if root >= b:
            return 0.0
        return _integrate.quad(regular, root, b, weight='alg',
                               wvar=(-0.5, 0.0), epsabs=0.0,
                               epsrel=_QUAD_RTOL, limit=200)[0]
    if root <= a:
        return 0.0
    return _integrate.quad(regular, a, root, weight='alg',
                           wvar=(0.0, -0.5), epsabs=0.0,
                           epsrel=_QUAD_RTOL, limit=200)[0]


def decay_profile(phase, drive, setup, times, max_variation=0.2):
    """Integrate the decay rate along a pulse.

    The resonance energy follows ``E0 + dE*P(t/T) - U_cl``.  Grid cells
    are split at the pulse breakpoints and integrated adaptively; in a
    cell where the resonance crosses threshold the crossing is located
    and the ``1/sqrt`` pole is integrated with an algebraic weight, so
    the result does not depend on how close a node comes to threshold.
    Square pulses decay exactly as exp(-Gamma*T).

    Parameters
    ----------
    phase : PhaseFunction
    drive : DimensionlessDrive
    setup : PhysicalSetup
    times : array_like
        Strictly increasing times [s].
    max_variation : float, optional
        Largest relative drop of D between neighbouring nodes.

    Returns
    -------
    DecayProfile
        `gamma` holds the rate at the nodes, inf for nodes inside the
        threshold guard band (see :func:`decay_rate`).

    Raises
    ------
    ResolutionError
        If D drops by more than `max_variation` between two nodes.

    """
    times = _np.asarray(times, dtype=float)
    if times.ndim != 1 or len(times) < 2 or not _np.all(_np.diff(times) > 0):
        raise ConfigurationError("times must be a strictly increasing grid "
                                 "of at least two points")
    gamma = decay_rate(resonance_energy(phase, drive, setup, times), setup)

    def excess(t):
        return float(resonance_energy(phase, drive, setup, t) -
                     setup.threshold)

    kinks = [drive.T * b for b in phase.breakpoints]
    edges = _np.union1d(times, [k for k in kinks
                                if times[0] < k < times[-1]])
    kappa = _rate_constant(setup)
    cells = [_cell_decay(excess, a, b, kappa)
             for a, b in zip(edges[:-1], edges[1:])]
    cumulative = _np.concatenate(([0.0], _np.cumsum(cells)))
    at_nodes = cumulative[_np.searchsorted(edges, times)]
    D = _np.exp(-at_nodes / 2)
    drop = 1 - D[1:] / D[:-1]
    if _np.any(drop > max_variation):
        worst = float(_np.max(drop))
        raise ResolutionError(
            "D drops by {0:.0%} between neighbouring nodes; refine the "
            "time grid".format(worst), achieved=worst)
    _log.debug("decay profile over %d cells, integral %g", len(cells),
               at_nodes[-1])
    return DecayProfile(times, gamma, D)


def convolve_spectrum(c0, d):
    """Convolve two spectra, ``(1/2pi) * integral c0(x)*d(nu - x) dx``.

    Both grids must be uniform with equal spacing.  The shorter array is
    integrated with trapezoid weights; the result lives on the subgrid on
    which the shorter array lies fully inside the longer one.

    Parameters
    ----------
    c0, d : SpectrumGrid

    Returns
    -------
    SpectrumGrid
        Method ``'convolved'``, on the grid
        ``c0.omega_T[0] + d.omega_T[0] + k*step``.

    """
    step = c0.spacing
    other = d.spacing
    if step is None or other is None:
        raise ConfigurationError("convolution needs uniform grids")
    if not _math.isclose(step, other, rel_tol=1e-9):
        raise ConfigurationError(
            "grid spacings differ: {0!r} != {1!r}".format(step, other))
    longer, shorter = c0.values, d.values
    if len(shorter) > len(longer):
        longer, shorter = shorter, longer
    weights = shorter.copy()
    if len(weights) > 1:
        weights[0] /= 2
        weights[-1] /= 2
    full = _np.convolve(longer, weights)
    k = _np.arange(len(shorter) - 1, len(longer))
    nu = c0.omega_T[0] + d.omega_T[0] + k * step
    values = full[k] * step / (2 * _np.pi)
    return SpectrumGrid(nu, values, 'convolved', c0.drive or d.drive,
                        {'kernel': d.method, 'source': c0.method})


def lorentzian_spectrum(rate_T, omega_T):
    """Spectrum of the constant-rate envelope exp(-Gamma*t/2), t > 0.

    ``1/(rate_T/2 - i*omega*T)`` with ``rate_T = Gamma*T``; the grid may
    contain negative frequencies.

    """
    if not rate_T > 0:
        raise DomainError("rate_T must be positive: {0!r}".format(rate_T))
    nu = _np.asarray(omega_T, dtype=float)
    values = 1 / (rate_T / 2 - 1j * nu)
    return SpectrumGrid(nu, values, 'lorentzian', None, {'rate_T': rate_T})


class QuasiStationaryDistribution(object):
    """Energy distribution of atoms released along a monotone ramp.

    Do not instantiate directly, use :func:`quasi_stationary_distribution`.

    """

    def __init__(self, edges, exponent):
        self._edges = edges
        self._exponent = exponent

    edges = property(lambda self: self._edges)
    """Resonance energies along the ramp [J]."""
    exponent = property(lambda self: self._exponent)
    """Integrated decay, integral of Gamma/(dE/dt) dE up to each edge."""

    @property
    def energies(self):
        """Cell centers [J]."""
        return (self._edges[:-1] + self._edges[1:]) / 2

    @property
    def density(self):
        """Cell averages of n(E) [1/J]."""
        surviving = _np.exp(-self._exponent)
        return -_np.diff(surviving) / _np.diff(self._edges)

    @property
    def survival(self):
        """Probability that the molecule survives the ramp."""
        return float(_np.exp(-self._exponent[-1]))

    @property
    def dissociated(self):
        """Total released probability, integral of n(E) dE."""
        return float(-_np.expm1(-self._exponent[-1]))


def quasi_stationary_distribution(times, E_res, setup):
    """Energy distribution n(E) = -d/dE exp(-integral Gamma/(dE/dt) dE).

    With ``u = sqrt(E - threshold)`` the integrand becomes
    ``2*kappa/(dE/dt)``, which removes the threshold singularity; the
    exponent is integrated by the trapezoid rule in u and n(E) is returned
    as exact cell averages of the derivative, so that the sum of
    ``n*dE`` and the survival probability is one.

    Parameters
    ----------
    times : array_like
        Strictly increasing times [s].
    E_res : array_like
        Resonance energies along the ramp [J], strictly increasing.
    setup : PhysicalSetup

    Returns
    -------
    QuasiStationaryDistribution

    """
    times = _np.asarray(times, dtype=float)
    energy = _np.asarray(E_res, dtype=float)
    if times.shape != energy.shape or times.ndim != 1 or len(times) < 2:
        raise ConfigurationError("times and E_res must be 1-D arrays of "
                                 "equal length >= 2")
    if not _np.all(_np.diff(times) > 0):
        raise ConfigurationError("times must be strictly increasing")
    if not _np.all(_np.diff(energy) > 0):
        raise DomainError("the ramp must increase monotonically")
    rate = _np.gradient(energy, times)
    u = _np.sqrt(_np.maximum(energy - setup.threshold, 0.0))
    exponent = _integrate.cumulative_trapezoid(
        2 * _rate_constant(setup) / rate, u, initial=0.0)
    return QuasiStationaryDistribution(energy, exponent)


def memory_time(dx=100 * BOHR_RADIUS, m=LI6_MASS):
    """Return the memory time m*dx**2/hbar [s] of the coupling kernel.

    Examples
    --------
    >>> from feshpulse.dynamics import memory_time
    >>> round(memory_time() * 1e9, 1)
    2.7

    """
    if not dx > 0 or not m > 0:
        raise DomainError("dx and m must be positive")
    return m * dx ** 2 / HBAR


def check_slow_sweep(phase, drive, setup, t_m=None):
    """Compare the field sweep rate with hbar/(t_m**2*mu_res).

    Parameters
    ----------
    phase : PhaseFunction
    drive : DimensionlessDrive
    setup : PhysicalSetup
    t_m : float, optional
        Memory time [s]; defaults to :func:`memory_time` for the setup's
        mass.

    Returns
    -------
    SlowSweepReport

    """
    if t_m is None:
        t_m = memory_time(m=setup.m)
    if not t_m > 0:
        raise DomainError("t_m must be positive: {0!r}".format(t_m))
    dB = drive.dE / setup.mu_res
    slope = phase.max_slope
    max_rate = dB * slope / drive.T if dB > 0 else 0.0
    bound = HBAR / (t_m ** 2 * setup.mu_res)
    ratio = max_rate / bound
    note = ''
    if _math.isinf(slope) and dB > 0:
        note = 'idealized pulse edges have unbounded dB/dt'
    return SlowSweepReport(max_rate, bound, ratio, ratio < 0.1, note)
