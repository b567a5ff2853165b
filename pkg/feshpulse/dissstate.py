"""Asymptotic two-atom state after the dissociation pulse.

In the single-mode waveguide the released pair is described by its
longitudinal momenta p_cm (center of mass) and p_rel (relative motion).
The spectrum is evaluated at the total energy of the pair,

    omega*T = T*(U_bg + p_cm**2/(2*M) + p_rel**2/(2*mu) - E0)/hbar,

and weighted with the trap ground state in p_cm,

    Psi(p_cm, p_rel) = C~(omega)*<p_cm|psi_T>/||C~||.

With ``setup.delta_cm`` the center-of-mass distribution is replaced by a
delta function and the state depends on p_rel only.  The dissociation
probability ``omega_G*a_bg*mu_res*dB_res*||C~||**2/(pi*hbar**2)`` carries
the absolute scale that the normalized state drops.

"""
import collections as _collections
import logging as _logging
import math as _math
import warnings as _warnings

import numpy as _np
from scipy import integrate as _integrate
from scipy import interpolate as _interpolate

from .constants import HBAR
from .errors import (ConfigurationError, CoverageError, DomainError,
                     GridRangeError, NoPeakWarning, RegimeWarning)
from .spectrum import SpectrumGrid, main_lobe

_log = _logging.getLogger(__name__)

# dissociation probabilities above this leave the single-pair regime
FEW_PERCENT = 0.1

# fraction of the momentum band used to estimate the truncated tail
_EDGE_FRACTION = 0.05

DistributionMetrics = _collections.namedtuple('DistributionMetrics', [
    'peak_momentum', 'fwhm', 'rms_width', 'ripple', 'velocity',
    'relative_velocity', 'kinetic_energy', 'modes'])
DistributionMetrics.__doc__ = """Shape of the relative-momentum distribution.

Momenta in kg m/s, velocities in m/s, energy in J.  `velocity` is the
velocity of each atom, p0/m; `relative_velocity` is p0/mu.  `fwhm` is
None if the distribution has no dominant peak, in which case `modes`
lists the momenta of all local maxima.

"""

Check = _collections.namedtuple('Check', ['name', 'passed', 'detail'])


class RegimeReport(object):
    """Pass/fail lines of :func:`validate_regime`."""

    def __init__(self, checks):
        self._checks = tuple(checks)

    checks = property(lambda self: self._checks)
    """Tuple of :class:`Check` entries."""

    @property
    def passed(self):
        """True if every check passed."""
        return all(c.passed for c in self._checks)

    def __getitem__(self, name):
        for c in self._checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def __contains__(self, name):
        return any(c.name == name for c in self._checks)

    def to_dict(self):
        return {'passed': self.passed,
                'checks': [{'name': c.name, 'passed': bool(c.passed),
                            'detail': c.detail} for c in self._checks]}

    def __repr__(self):
        return "RegimeReport({0})".format(", ".join(
            "{0}={1}".format(c.name, 'pass' if c.passed else 'FAIL')
            for c in self._checks))


class DissociationState(object):
    """Normalized longitudinal momentum amplitude of the released pair.

    Do not instantiate directly, use :func:`assemble_state`.

    """

    def __init__(self, p_cm, p_rel, amplitude, norm_sq, prob, spectrum,
                 setup, info=None):
        self._p_cm = p_cm
        self._p_rel = p_rel
        self._amplitude = amplitude
        self._norm_sq = norm_sq
        self._prob = prob
        self._spectrum = spectrum
        self._setup = setup
        self._info = dict(info or {})

    p_cm = property(lambda self: self._p_cm)
    """Center-of-mass momenta (``[0.0]`` in the delta approximation)."""
    p_rel = property(lambda self: self._p_rel)
    """Relative momenta."""
    amplitude = property(lambda self: self._amplitude)
    """Complex amplitude, shape ``(len(p_cm), len(p_rel))``."""
    norm_sq = property(lambda self: self._norm_sq)
    """Squared spectral norm ||C~||**2 [s**2 kg m/s]."""
    prob = property(lambda self: self._prob)
    """Dissociation probability |C_bg|**2."""
    spectrum = property(lambda self: self._spectrum)
    """The :class:`~feshpulse.spectrum.SpectrumGrid` behind the state."""
    setup = property(lambda self: self._setup)
    """The :class:`~feshpulse.dynamics.PhysicalSetup`."""
    info = property(lambda self: self._info)
    """Provenance metadata (coverage loss, masked points)."""

    @property
    def delta_cm(self):
        """Whether the center-of-mass momentum is treated as sharp."""
        return len(self._p_cm) == 1

    @property
    def density(self):
        """Probability density |Psi|**2 on the momentum grid."""
        return _np.abs(self._amplitude) ** 2

    @property
    def marginal(self):
        """Density of p_rel, integrated over p_cm."""
        if self.delta_cm:
            return self.density[0]
        return _integrate.trapezoid(self.density, self._p_cm, axis=0)

    def total_probability(self):
        """Integral of the density over the grid (1 for a covered band)."""
        return float(_integrate.trapezoid(self.marginal, self._p_rel))

    def __repr__(self):
        return ("DissociationState(<{0}x{1} momenta>, prob={2!r}, "
                "method={3!r})".format(len(self._p_cm), len(self._p_rel),
                                       self._prob, self._spectrum.method))


def _drive_of(ctilde):
    if not isinstance(ctilde, SpectrumGrid):
        raise TypeError("Invalid spectrum: {0!r}".format(ctilde))
    if ctilde.drive is None:
        raise ConfigurationError("spectrum carries no drive; cannot map "
                                 "momenta to frequencies")
    if len(ctilde) < 4:
        raise ConfigurationError("spectrum needs at least 4 points")
    return ctilde.drive


def _reduced_frequency(setup, drive, p_cm, p_rel):
    energy = (setup.U_bg + p_cm ** 2 / (2 * setup.M) +
              p_rel ** 2 / (2 * setup.mu))
    return drive.omega_T(energy)


def _interpolant(ctilde):
    real = _interpolate.CubicSpline(ctilde.omega_T, ctilde.values.real)
    imag = _interpolate.CubicSpline(ctilde.omega_T, ctilde.values.imag)
    return lambda nu: real(nu) + 1j * imag(nu)


def _trap_ground_state(setup, p_cm):
    sigma = setup.sigma_p
    return ((2 * _math.pi * sigma ** 2) ** -0.25 *
            _np.exp(-p_cm ** 2 / (4 * sigma ** 2)))


def momentum_grid(setup, drive, omega_T_max, points=None):
    """Return a symmetric uniform p_rel grid reaching up to `omega_T_max`.

    By default the spacing resolves the narrowest spectral lobe (2*pi in
    omega*T, at the upper end of the band) with 16 points.

    """
    energy = drive.E0 + HBAR * omega_T_max / drive.T
    kinetic = (energy - setup.U_bg) * (1 - 1e-12)
    if not kinetic > 0:
        raise GridRangeError(
            "omega_T_max = {0:g} does not reach the continuum "
            "threshold".format(omega_T_max),
            band=(float(drive.omega_T(setup.U_bg)), omega_T_max))
    p_max = _math.sqrt(2 * setup.mu * kinetic)
    if points is None:
        nu0 = max(float(drive.omega_T(setup.U_bg)), 0.0)
        half = max(128, int(_math.ceil(32 * (omega_T_max - nu0) /
                                       (2 * _math.pi))))
        points = 2 * half + 1
    if points < 3:
        raise ConfigurationError("momentum grid needs at least 3 points")
    return _np.linspace(-p_max, p_max, points)


def cm_grid(setup, points=65, width=6.0):
    """Return a p_cm grid spanning +-`width` trap momentum widths."""
    sigma = setup.sigma_p
    return _np.linspace(-width * sigma, width * sigma, points)


def _check_axis(p, name):
    p = _np.asarray(p, dtype=float)
    if p.ndim != 1 or len(p) < 2 or not _np.all(_np.diff(p) > 0):
        raise ConfigurationError(
            "{0} must be a strictly increasing 1-D grid".format(name))
    return p


def _sampled_spectrum(ctilde, setup, p_cm, p_rel, delta_cm):
    """C~ on the (p_cm, p_rel) mesh, zero where outside the spectrum band."""
    drive = ctilde.drive
    nu = _reduced_frequency(setup, drive, p_cm[:, None], p_rel[None, :])
    low, high = ctilde.omega_T[0], ctilde.omega_T[-1]
    inside = (nu >= low) & (nu <= high)
    values = _np.zeros(nu.shape, dtype=complex)
    values[inside] = drive.T * _interpolant(ctilde)(nu[inside])
    if not delta_cm:
        values *= _trap_ground_state(setup, p_cm)[:, None]
    return values, inside, nu


def _axes(ctilde, setup, p_rel, p_cm, delta_cm):
    drive = _drive_of(ctilde)
    if delta_cm is None:
        delta_cm = setup.delta_cm
    if p_rel is None:
        p_rel = momentum_grid(setup, drive, ctilde.omega_T[-1])
    p_rel = _check_axis(p_rel, 'p_rel')
    if delta_cm:
        p_cm = _np.zeros(1)
    else:
        p_cm = _check_axis(cm_grid(setup) if p_cm is None else p_cm, 'p_cm')
    nu_min = float(_reduced_frequency(setup, drive, 0.0,
                                      _np.min(_np.abs(p_rel))))
    if nu_min < ctilde.omega_T[0]:
        raise GridRangeError(
            "spectrum starts at omega_T = {0:g} but the smallest momentum "
            "maps to {1:g}".format(ctilde.omega_T[0], nu_min),
            band=(nu_min, float(ctilde.omega_T[0])))
    return p_cm, p_rel, delta_cm


def _coverage_loss(marginal, p_rel):
    """Estimated fraction of the weight beyond the ends of the p_rel grid.

    The density beyond an end is extrapolated with a p**-4 tail from its
    mean over the outer 5% of the band.

    """
    total = _integrate.trapezoid(marginal, p_rel)
    if not total > 0:
        raise DomainError("spectral weight vanishes on the momentum grid")
    span = p_rel[-1] - p_rel[0]
    tail = 0.0
    if p_rel[-1] > 0:
        edge = p_rel >= p_rel[-1] - _EDGE_FRACTION * span
        tail += _np.mean(marginal[edge]) * p_rel[-1] / 3
    if p_rel[0] < 0:
        edge = p_rel <= p_rel[0] + _EDGE_FRACTION * span
        tail += _np.mean(marginal[edge]) * -p_rel[0] / 3
    return float(tail / total), float(total)


def _norm(values, p_cm, p_rel, delta_cm, coverage_tol):
    density = _np.abs(values) ** 2
    if delta_cm:
        marginal = density[0]
    else:
        marginal = _integrate.trapezoid(density, p_cm, axis=0)
    loss, total = _coverage_loss(marginal, p_rel)
    if loss > coverage_tol:
        raise CoverageError(
            "momentum grid truncates an estimated {0:.2e} of the spectral "
            "weight (tolerance {1:.1e}); extend the spectrum grid".format(
                loss, coverage_tol), loss=loss)
    return total, loss


def spectral_norm(ctilde, setup, p_rel=None, p_cm=None, delta_cm=None,
                  coverage_tol=1e-4):
    """Return ||C~||**2, the integral of |C~|**2*|<p_cm|psi_T>|**2.

    Parameters
    ----------
    ctilde : SpectrumGrid
        Spectrum with its drive; values in units of T.
    setup : PhysicalSetup
    p_rel, p_cm : array_like, optional
        Momentum grids; chosen by :func:`momentum_grid` and
        :func:`cm_grid` if omitted.
    delta_cm : bool, optional
        Overrides ``setup.delta_cm``.
    coverage_tol : float, optional
        Largest tolerated fraction of weight beyond the momentum grid.

    Raises
    ------
    CoverageError
        If the estimated truncation loss exceeds `coverage_tol`.

    """
    p_cm, p_rel, delta_cm = _axes(ctilde, setup, p_rel, p_cm, delta_cm)
    values, inside, nu = _sampled_spectrum(ctilde, setup, p_cm, p_rel,
                                           delta_cm)
    return _norm(values, p_cm, p_rel, delta_cm, coverage_tol)[0]


def momentum_amplitude(ctilde, setup, p_cm, p_rel, norm_sq=None,
                       delta_cm=None):
    """Return Psi(p_cm, p_rel) at arbitrary momenta.

    In the delta approximation the amplitude vanishes off p_cm = 0.

    Raises
    ------
    GridRangeError
        If a requested momentum maps outside the spectrum band.

    """
    drive = _drive_of(ctilde)
    if delta_cm is None:
        delta_cm = setup.delta_cm
    if norm_sq is None:
        norm_sq = spectral_norm(ctilde, setup, delta_cm=delta_cm)
    p_cm, p_rel = _np.broadcast_arrays(_np.asarray(p_cm, dtype=float),
                                       _np.asarray(p_rel, dtype=float))
    nu = _reduced_frequency(setup, drive, p_cm, p_rel)
    low, high = ctilde.omega_T[0], ctilde.omega_T[-1]
    outside = (nu < low) | (nu > high)
    if _np.any(outside):
        band = (float(_np.min(nu)), float(_np.max(nu)))
        raise GridRangeError(
            "momenta map to omega_T in [{0:g}, {1:g}], spectrum covers "
            "[{2:g}, {3:g}]".format(band[0], band[1], low, high), band=band)
    values = drive.T * _interpolant(ctilde)(nu)
    if delta_cm:
        values = _np.where(p_cm == 0, values, 0)
    else:
        values = values * _trap_ground_state(setup, p_cm)
    result = values / _math.sqrt(norm_sq)
    return complex(result) if result.ndim == 0 else result


def dissociation_probability(ctilde, setup, norm_sq=None):
    """Return |C_bg|**2 = omega_G*a_bg*mu_res*dB_res*||C~||**2/(pi*hbar**2).

    A :class:`~feshpulse.errors.RegimeWarning` is issued above 0.1, where
    the single-pair (few percent) regime is left.

    """
    if norm_sq is None:
        norm_sq = spectral_norm(ctilde, setup)
    prob = (setup.omega_G * setup.a_bg * setup.mu_res * setup.dB_res *
            norm_sq / (_math.pi * HBAR ** 2))
    if prob > FEW_PERCENT:
        _warnings.warn("dissociation probability {0:.3g} exceeds the few "
                       "percent regime".format(prob), RegimeWarning,
                       stacklevel=2)
    return prob


def assemble_state(ctilde, setup, p_rel=None, p_cm=None, delta_cm=None,
                   coverage_tol=1e-4):
    """Build the normalized :class:`DissociationState` from a spectrum.

    Parameters are those of :func:`spectral_norm`.  Mesh points that map
    beyond the spectrum band (large p_cm at the upper p_rel end) are set
    to zero and counted in ``info['masked']``.

    Examples
    --------
    >>> from feshpulse import asymptotics, dissstate, dynamics
    >>> setup = dynamics.li6_setup()
    >>> drive = setup.make_drive(T=7.5e-4, epsilon=100.0)
    >>> grid = asymptotics.spectrum_square_closed(
    ...     drive, dissstate.square_band(drive, setup))
    >>> state = dissstate.assemble_state(grid, setup)
    >>> round(state.total_probability(), 6)
    1.0

    """
    p_cm, p_rel, delta_cm = _axes(ctilde, setup, p_rel, p_cm, delta_cm)
    values, inside, nu = _sampled_spectrum(ctilde, setup, p_cm, p_rel,
                                           delta_cm)
    norm_sq, loss = _norm(values, p_cm, p_rel, delta_cm, coverage_tol)
    prob = dissociation_probability(ctilde, setup, norm_sq=norm_sq)
    amplitude = values / _math.sqrt(norm_sq)
    masked = int(_np.sum(~inside))
    _log.debug("state on %dx%d momenta, coverage loss %.2e, %d masked",
               len(p_cm), len(p_rel), loss, masked)
    return DissociationState(p_cm, p_rel, amplitude, norm_sq, prob, ctilde,
                             setup, {'coverage_loss': loss, 'masked': masked,
                              'delta_cm': bool(delta_cm)})


def square_band(drive, setup, coverage_tol=1e-4, points_per_lobe=16):
    """Return an omega*T grid wide enough for the square-pulse sinc tail.

    The grid starts one step below the continuum threshold (but above
    zero) and reaches ``max(1.3*eps, eps + 1/(pi*coverage_tol))``, with
    `points_per_lobe` points per 2*pi.

    """
    eps = drive.epsilon
    top = max(1.3 * eps, eps + 1 / (_math.pi * coverage_tol))
    step = 2 * _math.pi / points_per_lobe
    start = max(step, float(drive.omega_T(setup.U_bg)) - step)
    return _np.arange(start, top + step, step)


def _local_maxima(rho):
    inner = _np.nonzero((rho[1:-1] > rho[:-2]) & (rho[1:-1] >= rho[2:]))[0] + 1
    ends = [i for i, j in ((0, 1), (len(rho) - 1, len(rho) - 2))
            if rho[i] > rho[j]]
    return sorted(set(inner.tolist() + ends))


def _half_width(p, rho, k):
    half = rho[k] / 2
    i = k
    while i > 0 and rho[i - 1] >= half:
        i -= 1
    left = p[i] if i == 0 else _np.interp(half, [rho[i - 1], rho[i]],
                                          [p[i - 1], p[i]])
    j = k
    while j < len(p) - 1 and rho[j + 1] >= half:
        j += 1
    right = p[j] if j == len(p) - 1 else _np.interp(
        half, [rho[j + 1], rho[j]], [p[j + 1], p[j]])
    return float(right - left)


def distribution_metrics(state):
    """Return the :class:`DistributionMetrics` of a state.

    The distribution is symmetric in p_rel; all metrics refer to the half
    p_rel >= 0.  The ripple fraction is the probability outside the main
    lobe (see :func:`feshpulse.spectrum.main_lobe`); it is 1.0, with a
    :class:`~feshpulse.errors.NoPeakWarning`, if there is no main lobe.

    """
    setup = state.setup
    half = state.p_rel >= 0
    p = state.p_rel[half]
    rho = state.marginal[half]
    total = _integrate.trapezoid(rho, p)
    if len(p) < 3 or not total > 0:
        raise DomainError("state has no weight at p_rel >= 0")
    k = int(_np.argmax(rho))
    p0 = float(p[k])
    maxima = _local_maxima(rho)
    heights = sorted((rho[i] for i in maxima if i != k), reverse=True)
    multimodal = bool(heights) and 2 * heights[0] > rho[k]
    fwhm = None if multimodal else _half_width(p, rho, k)
    modes = [float(p[i]) for i in maxima] if multimodal else [p0]
    mean = _integrate.trapezoid(rho * p, p) / total
    rms = _math.sqrt(max(_integrate.trapezoid(rho * (p - mean) ** 2, p) /
                         total, 0.0))
    lobe = main_lobe(rho)
    if lobe is None:
        _warnings.warn("momentum distribution has no main lobe",
                       NoPeakWarning, stacklevel=2)
        ripple = 1.0
    else:
        lo, hi = lobe
        inside = _integrate.trapezoid(rho[lo:hi + 1], p[lo:hi + 1])
        ripple = float(max(1 - inside / total, 0.0))
    return DistributionMetrics(
        peak_momentum=p0, fwhm=fwhm, rms_width=rms, ripple=ripple,
        velocity=p0 / setup.m, relative_velocity=p0 / setup.mu,
        kinetic_energy=p0 ** 2 / (2 * setup.mu), modes=modes)


def validate_regime(state, setup, drive, slow_sweep=None):
    """Check the physical assumptions behind a dissociation state.

    Checks, in order: ``single_mode`` (kinetic energy at the peak below
    hbar*omega_G), ``confinement`` (a_perp/a_bg > 10), ``few_percent``
    (probability < 0.1), ``slow_sweep`` (if a
    :class:`~feshpulse.dynamics.SlowSweepReport` is given),
    ``base_below_threshold`` (E0 < 0) and ``off_tuned`` (user
    assertion in the setup).

    Returns
    -------
    RegimeReport

    """
    metrics = distribution_metrics(state)
    gap = HBAR * setup.omega_G
    checks = [Check('single_mode', metrics.kinetic_energy < gap,
                    "E_kin/(hbar*omega_G) = {0:.3g}".format(
                        metrics.kinetic_energy / gap))]
    confinement = setup.a_perp / setup.a_bg
    if confinement <= 10:
        _warnings.warn("a_perp/a_bg = {0:.3g}: close to a confinement-induced "
                       "resonance".format(confinement), RegimeWarning,
                       stacklevel=2)
    checks.append(Check('confinement', confinement > 10,
                        "a_perp/a_bg = {0:.3g}".format(confinement)))
    checks.append(Check('few_percent', state.prob < FEW_PERCENT,
                        "|C_bg|^2 = {0:.3g}".format(state.prob)))
    if slow_sweep is not None:
        detail = "sweep rate ratio = {0:.3g}".format(slow_sweep.ratio)
        if slow_sweep.note:
            detail += " ({0})".format(slow_sweep.note)
        checks.append(Check('slow_sweep', slow_sweep.passed, detail))
    checks.append(Check('base_below_threshold', drive.E0 < 0,
                        "E0 = {0:.3g} J".format(drive.E0)))
    checks.append(Check('off_tuned', setup.off_tuned,
                        "asserted in setup" if setup.off_tuned else
                        "not asserted"))
    return RegimeReport(checks)
