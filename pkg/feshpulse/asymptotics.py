"""Closed-form and asymptotic spectra.

* :func:`spectrum_square_closed` -- exact spectrum of the square pulse,
  ``sinc((omega*T - eps)/2)*eps/(omega*T)``.
* :func:`spectrum_gaussian_uniform` -- uniform Airy expansion for the
  Gaussian pulse, valid across the turning point ``omega*T/eps = 2/sqrt(pi)``
  where the two stationary points coalesce.
* :func:`spectrum_stationary_phase` -- leading stationary-phase formula for
  smooth symmetric pulses,
  ``sqrt(8*pi/(eps*|P'(t)|))*cos(omega*T*t - eps*phi(t) + pi/4)``.

All values follow the convention of :mod:`feshpulse.spectrum`.

"""
import collections as _collections
import logging as _logging
import math as _math
import warnings as _warnings

import numpy as _np

from . import specfun as _specfun
from .errors import AsymptoticWarning, CausticError, DomainError
from .pulses import PhaseFunction, stationary_point
from .spectrum import SpectrumGrid, _check_grid

_log = _logging.getLogger(__name__)

# omega*T/eps at which the stationary points of the Gaussian pulse merge
TURNING_RATIO = 2 / _math.sqrt(_math.pi)

# below this eps the Airy form deviates noticeably from quadrature
VALIDITY_FLOOR = 20.0

_SERIES_LIMIT = 1.0
_SERIES_TERMS = 30

AiryCoefficients = _collections.namedtuple(
    'AiryCoefficients', ['alpha', 'gamma_sq', 'a0_mod', 'branch'])
AiryCoefficients.__doc__ = """Coefficients of the uniform Airy expansion.

`gamma_sq` is the real square of gamma (negative on the ``'below'``
branch, where gamma is imaginary), so that the Airy argument is
``eps**(2/3)*gamma_sq``.  `a0_mod` is the modulus of the leading
amplitude; with the conventions used here the expansion is real.

"""


def _series(alpha, sign):
    """Regular factor s(alpha) of A = (2/sqrt(pi))*alpha**3*s(alpha)."""
    n = _np.arange(1, _SERIES_TERMS + 1)
    log_factorial = _np.cumsum(_np.log(n))
    coefficients = (sign ** (n + 1) * 2 * n /
                    (_np.exp(log_factorial) * (2 * n + 1)))
    powers = alpha[..., None] ** (2 * n - 2)
    return 1.5 * _np.sum(coefficients * powers, axis=-1)


def airy_coefficients(ratio):
    """Return the :class:`AiryCoefficients` at ``ratio = omega*T/eps``.

    With ``alpha = sqrt(|ln(ratio*sqrt(pi)/2)|)`` the stationary points
    sit at ``t = +-alpha`` (real below the turning point, imaginary above)
    and the Airy argument is fixed by

        A = 3/2*(erf(alpha) - ratio*alpha)    (below),
        A = 3/2*(ratio*alpha - erfi(alpha))   (above),
        gamma_sq = -+A**(2/3),  a0_mod = A**(1/6)/sqrt(ratio*alpha).

    Close to the turning point both brackets vanish like alpha**3; there
    the power series of A/alpha**3 is used, which stays regular and gives
    ``alpha = 0``, ``gamma_sq = 0`` and ``a0_mod = ratio**(-1/3)`` at the
    turning point itself.

    Parameters
    ----------
    ratio : float or array_like
        Positive ratios omega*T/eps.

    Examples
    --------
    >>> from feshpulse.asymptotics import airy_coefficients, TURNING_RATIO
    >>> airy_coefficients(TURNING_RATIO).alpha
    0.0

    """
    scalar = _np.ndim(ratio) == 0
    r = _np.atleast_1d(_np.asarray(ratio, dtype=float))
    if not _np.all(_np.isfinite(r)) or _np.any(r <= 0):
        raise DomainError("ratio omega*T/eps must be positive and finite")
    below = r <= TURNING_RATIO
    alpha = _np.sqrt(_np.abs(_np.log(r / TURNING_RATIO)))
    sign = _np.where(below, -1.0, 1.0)
    gamma_sq = _np.empty_like(r)
    a0 = _np.empty_like(r)

    near = alpha < _SERIES_LIMIT
    if _np.any(near):
        s = _np.where(below[near], _series(alpha[near], -1.0),
                      _series(alpha[near], 1.0))
        gamma_sq[near] = (sign[near] * TURNING_RATIO ** (2 / 3) *
                          alpha[near] ** 2 * s ** (2 / 3))
        a0[near] = TURNING_RATIO ** (1 / 6) * s ** (1 / 6) / _np.sqrt(r[near])

    far = ~near
    if _np.any(far):
        x, rf = alpha[far], r[far]
        area = _np.where(below[far], 1.5 * (_specfun.erf(x) - rf * x),
                         1.5 * (rf * x - _specfun.erfi(x)))
        gamma_sq[far] = sign[far] * area ** (2 / 3)
        a0[far] = area ** (1 / 6) / _np.sqrt(rf * x)

    branch = _np.where(below, 'below', 'above')
    if scalar:
        return AiryCoefficients(float(alpha[0]), float(gamma_sq[0]),
                                float(a0[0]), str(branch[0]))
    return AiryCoefficients(alpha, gamma_sq, a0, branch)


def _checked_epsilon(drive):
    if not drive.epsilon > 0:
        raise DomainError("asymptotic spectra require epsilon > 0")
    return drive.epsilon


def spectrum_gaussian_uniform(drive, omega_T, validity_floor=VALIDITY_FLOOR):
    """Uniform Airy expansion of the Gaussian-pulse spectrum.

    ``value = 2*pi*a0_mod*eps**(-1/3)*Ai(eps**(2/3)*gamma_sq)``.

    Below `validity_floor` the values are still computed, but an
    :class:`~feshpulse.errors.AsymptoticWarning` is issued and
    ``info['flags']`` contains ``'asymptotics unreliable'``.

    Parameters
    ----------
    drive : DimensionlessDrive
    omega_T : array_like
        Strictly increasing positive reduced frequencies.
    validity_floor : float, optional
        Smallest epsilon considered reliable.

    Returns
    -------
    SpectrumGrid

    """
    eps = _checked_epsilon(drive)
    nu = _check_grid(omega_T)
    flags = []
    if eps < validity_floor:
        _warnings.warn("epsilon = {0:g} below the validity floor {1:g} of "
                       "the uniform expansion".format(eps, validity_floor),
                       AsymptoticWarning, stacklevel=2)
        flags.append('asymptotics unreliable')
    coefficients = airy_coefficients(nu / eps)
    argument = eps ** (2 / 3) * coefficients.gamma_sq
    ai = _specfun.airy_ai(argument)
    if _np.any((ai == 0) & (argument > 0)):
        flags.append('airy underflow')
    values = 2 * _np.pi * coefficients.a0_mod * eps ** (-1 / 3) * ai
    return SpectrumGrid(nu, values, 'airy_uniform', drive,
                        {'flags': flags, 'turning_ratio': TURNING_RATIO})


def spectrum_stationary_phase(phase, drive, omega_T, caustic_tol=1e-8):
    """Leading-order stationary-phase spectrum of a smooth symmetric pulse.

    Points without an interior stationary point (level above the pulse
    maximum, or a discontinuous edge) get NaN; they are counted in
    ``info['invalid']`` and an
    :class:`~feshpulse.errors.AsymptoticWarning` is issued.

    Raises
    ------
    DomainError
        If the pulse is not symmetric about t = 0.
    CausticError
        If ``|P'(t)| < caustic_tol`` at a stationary point.

    """
    if not isinstance(phase, PhaseFunction):
        raise TypeError("Invalid phase function: {0!r}".format(phase))
    if not phase.symmetric:
        raise DomainError("stationary-phase formula needs a symmetric pulse")
    eps = _checked_epsilon(drive)
    nu = _check_grid(omega_T)
    values = _np.full(len(nu), _np.nan, dtype=complex)
    invalid = []
    for i, x in enumerate(nu):
        root = stationary_point(phase, x / eps)
        if root.time is None:
            invalid.append(i)
            continue
        slope = abs(float(phase.slope(root.time)))
        if slope < caustic_tol:
            raise CausticError(
                "P'(t) = {0:.3g} at the stationary point t = {1:g} "
                "(omega*T = {2:g})".format(slope, root.time, x))
        canonical = float(phase.phase(root.time)) - phase.phi0
        values[i] = (_math.sqrt(8 * _math.pi / (eps * slope)) *
                     _math.cos(x * root.time - eps * canonical + _math.pi / 4))
    if phase.phi0:
        values = values * _np.exp(-1j * eps * phase.phi0)
    flags = []
    if invalid:
        _warnings.warn("{0} of {1} points have no stationary point".format(
            len(invalid), len(nu)), AsymptoticWarning, stacklevel=2)
        flags.append('no stationary point')
    _log.debug("stationary phase: %d invalid points", len(invalid))
    return SpectrumGrid(nu, values, 'stationary_phase', drive,
                        {'flags': flags, 'invalid': len(invalid)})


def spectrum_square_closed(drive, omega_T):
    """Exact spectrum of the square pulse.

    The delta term at omega*T = 0 is omitted.

    Examples
    --------
    >>> from feshpulse import asymptotics, pulses
    >>> drive = pulses.DimensionlessDrive(100.0, T=1e-3)
    >>> asymptotics.spectrum_square_closed(drive, [100.0]).values
    array([1.+0.j])

    """
    eps = drive.epsilon
    nu = _check_grid(omega_T)
    values = _specfun.sinc((nu - eps) / 2) * eps / nu
    return SpectrumGrid(nu, values, 'square_closed', drive)
