"""Fourier transform of the uncoupled closed-channel amplitude.

The spectrum of a pulse is the regularized integral

    value(omega*T) = C0~(omega + E0/hbar)/T
                   = integral dt~ exp(i*omega*T*t~) exp(-i*eps*phi(t~)),

written in the reduced time t~ = t/T.  Outside the core window of the
pulse the phase is constant and the integral is taken in closed form by
adiabatic switching, which contributes the boundary terms

    (exp(i*nu*t_l - i*eps*phi(-inf)) - exp(i*nu*t_r - i*eps*phi(+inf)))/(i*nu)

at the window ends t_l < t_r.  The delta function at omega*T = 0 is never
represented; grids must exclude it.  The unit-modulus prefactor of the
transform is dropped.

"""
import logging as _logging
import math as _math
import warnings as _warnings

import numpy as _np
from scipy import integrate as _integrate

from .errors import DomainError, MultiplicityWarning, NumericalError
from .pulses import DimensionlessDrive, PhaseFunction, stationary_point

_log = _logging.getLogger(__name__)

_methods = ('numeric', 'oracle', 'airy_uniform', 'stationary_phase',
            'square_closed', 'convolved', 'lorentzian')

NORMALIZATION = 'C0(omega + E0/hbar)/T, unit-modulus prefactor dropped'

_GL_NODES, _GL_WEIGHTS = _np.polynomial.legendre.leggauss(16)
# absolute resolution of the core quadrature per unit window length
_ROUNDING = 1e3 * _np.finfo(float).eps
_TINY = _np.finfo(float).tiny


class SpectrumGrid(object):
    """Complex spectrum values sampled on a grid of reduced frequencies.

    Parameters
    ----------
    omega_T : array_like
        Strictly increasing reduced frequencies omega*T.
    values : array_like
        Complex values, convention C0~(omega + E0/hbar)/T.
    method : str
        How the values were obtained, e.g. ``'numeric'`` or
        ``'airy_uniform'``.
    drive : DimensionlessDrive or None
        None for kernel spectra that belong to no drive.
    info : dict, optional
        Provenance metadata (achieved tolerance, flags, ...).

    """

    def __init__(self, omega_T, values, method, drive, info=None):
        omega_T = _np.array(omega_T, dtype=float)
        values = _np.array(values, dtype=complex)
        if omega_T.ndim != 1 or omega_T.shape != values.shape:
            raise ValueError("omega_T and values must be 1-D and of equal "
                             "length")
        if len(omega_T) > 1 and not _np.all(_np.diff(omega_T) > 0):
            raise ValueError("omega_T must be strictly increasing")
        if method not in _methods:
            raise ValueError("Unknown spectrum method: {0!r}".format(method))
        if drive is not None and not isinstance(drive, DimensionlessDrive):
            raise TypeError("Invalid drive: {0!r}".format(drive))
        self._omega_T = omega_T
        self._values = values
        self._method = method
        self._drive = drive
        self._info = dict(info or {})
        self._info.setdefault('normalization', NORMALIZATION)

    omega_T = property(lambda self: self._omega_T)
    """Reduced frequencies."""
    values = property(lambda self: self._values)
    """Complex spectrum values."""
    method = property(lambda self: self._method)
    """Method tag."""
    drive = property(lambda self: self._drive)
    """The drive the spectrum was computed for."""
    info = property(lambda self: self._info)
    """Provenance metadata."""

    def __len__(self):
        return len(self._omega_T)

    def __repr__(self):
        return ("SpectrumGrid(<{0} points in [{1:g}, {2:g}]>, "
                "method={3!r})".format(len(self), self._omega_T[0],
                                       self._omega_T[-1], self._method))

    @property
    def abs(self):
        """Modulus of the values."""
        return _np.abs(self._values)

    @property
    def density(self):
        """Squared modulus of the values."""
        return _np.abs(self._values) ** 2

    @property
    def spacing(self):
        """Grid spacing, or None if the grid is not uniform."""
        if len(self) < 2:
            return None
        steps = _np.diff(self._omega_T)
        if _np.allclose(steps, steps[0], rtol=1e-9, atol=0):
            return float(_np.mean(steps))
        return None


def _check_grid(omega_T):
    nu = _np.atleast_1d(_np.asarray(omega_T, dtype=float))
    if nu.ndim != 1 or not _np.all(_np.isfinite(nu)):
        raise DomainError("omega_T must be a finite 1-D grid")
    if _np.any(nu == 0):
        raise DomainError("omega_T = 0 is the location of the delta term "
                          "and cannot be evaluated")
    if _np.any(nu < 0):
        raise DomainError("negative omega_T are not supported")
    if len(nu) > 1 and not _np.all(_np.diff(nu) > 0):
        raise DomainError("omega_T must be strictly increasing")
    return nu


def _check_phase(phase):
    if not isinstance(phase, PhaseFunction):
        raise TypeError("Invalid phase function: {0!r}".format(phase))


def tail_terms(phase, epsilon, nu):
    """Closed-form contribution of the flat phase outside the core window."""
    left, right = phase.window
    low, high = phase.limits
    nu = _np.asarray(nu, dtype=float)
    return (_np.exp(1j * (nu * left - epsilon * low)) -
            _np.exp(1j * (nu * right - epsilon * high))) / (1j * nu)


def _max_frequency(phase, epsilon, nu):
    return max(abs(nu), epsilon * phase.peak, 1.0)


def _split_points(phase, epsilon, nu):
    """Breakpoints plus the stationary points of the integrand."""
    points = list(phase.breakpoints)
    if epsilon > 0:
        with _warnings.catch_warnings():
            _warnings.simplefilter('ignore', MultiplicityWarning)
            root = stationary_point(phase, nu / epsilon)
        if root.time is not None:
            points.append(root.time)
            if phase.symmetric:
                points.append(-root.time)
    left, right = phase.window
    return sorted(set(x for x in points if left <= x <= right))


def _panel_edges(points, k_max, per_period):
    edges = []
    for a, b in zip(points[:-1], points[1:]):
        n = max(1, int(_math.ceil((b - a) * k_max * per_period /
                                  (2 * _math.pi))))
        edges.append(_np.linspace(a, b, n + 1)[:-1])
    edges.append([points[-1]])
    return _np.concatenate(edges)


def _core_gauss(phase, epsilon, nu, edges):
    a = edges[:-1, None]
    h = _np.diff(edges)[:, None]
    t = a + h * (_GL_NODES + 1) / 2
    theta = nu * t - epsilon * phase.phase(t)
    return _np.sum(h / 2 * _GL_WEIGHTS * _np.exp(1j * theta))


def spectrum_numeric(phase, drive, omega_T, rtol=1e-9, max_refinements=6):
    """Evaluate the spectrum of a pulse by oscillation-resolving quadrature.

    The core window is split at the pulse breakpoints and at the
    stationary point of the integrand; every piece is covered by
    16-node Gauss-Legendre panels no longer than one period of the
    fastest local oscillation.  The panel count is doubled until two
    successive results agree to `rtol` (relative to the point's value,
    or to 1e-3 of the grid maximum for tiny values).  Differences at the
    rounding level of the core sum count as converged, so a vanishing
    drive gives a spectrum at rounding level instead of an error.

    Parameters
    ----------
    phase : PhaseFunction
    drive : DimensionlessDrive
    omega_T : array_like
        Strictly increasing positive reduced frequencies.
    rtol : float, optional
        Target relative accuracy.
    max_refinements : int, optional
        Number of panel doublings before giving up.

    Returns
    -------
    SpectrumGrid
        With ``info['tolerance']`` the estimated relative error reached.

    Raises
    ------
    DomainError
        If the grid contains omega_T <= 0.
    NumericalError
        If the quadrature did not converge; ``achieved`` holds the
        tolerance reached.

    Examples
    --------
    >>> from feshpulse import pulses, spectrum
    >>> phase = pulses.PhaseFunction(pulses.square())
    >>> drive = pulses.DimensionlessDrive(100.0, T=1e-3)
    >>> grid = spectrum.spectrum_numeric(phase, drive, [100.0])
    >>> round(abs(grid.values[0]), 9)
    1.0

    """
    _check_phase(phase)
    nu = _check_grid(omega_T)
    eps = drive.epsilon
    tails = tail_terms(phase, eps, nu)
    coarse = _np.empty(len(nu), dtype=complex)
    fine = _np.empty(len(nu), dtype=complex)
    points = [_split_points(phase, eps, x) for x in nu]
    k_max = [_max_frequency(phase, eps, x) for x in nu]
    for i, x in enumerate(nu):
        coarse[i] = _core_gauss(phase, eps, x,
                                _panel_edges(points[i], k_max[i], 1))
        fine[i] = _core_gauss(phase, eps, x,
                              _panel_edges(points[i], k_max[i], 2))
    left, right = phase.window
    floor = max(1e-3 * _np.max(_np.abs(fine + tails)), _TINY)
    # the core integrand has modulus one, so its sum is not resolved
    # below this; for a flat phase (eps = 0) the tails cancel it exactly
    rounding = _ROUNDING * (right - left)

    def relative_error(i):
        scale = max(abs(fine[i] + tails[i]), floor)
        return max(abs(fine[i] - coarse[i]) - rounding, 0.0) / scale

    errors = _np.array([relative_error(i) for i in range(len(nu))])
    per_period = {i: 2 for i in range(len(nu))}
    for refinement in range(max_refinements):
        pending = _np.nonzero(errors > rtol)[0]
        if len(pending) == 0:
            break
        _log.debug("refining %d of %d spectrum points (pass %d)",
                   len(pending), len(nu), refinement + 1)
        for i in pending:
            per_period[i] *= 2
            coarse[i] = fine[i]
            fine[i] = _core_gauss(phase, eps, nu[i], _panel_edges(
                points[i], k_max[i], per_period[i]))
            errors[i] = relative_error(i)
    achieved = float(_np.max(errors)) if len(errors) else 0.0
    if achieved > rtol:
        raise NumericalError(
            "spectrum quadrature did not converge: achieved relative "
            "tolerance {0:.3g} > {1:.3g}".format(achieved, rtol),
            achieved=achieved)
    return SpectrumGrid(nu, fine + tails, 'numeric', drive,
                        {'tolerance': achieved})


def quadrature_oracle(phase, drive, omega_T, nodes_per_period=80):
    """Brute-force reference spectrum by uniform composite Simpson rules.

    Each piece between breakpoints gets a uniform grid with at least
    `nodes_per_period` nodes per period of the fastest local oscillation;
    the tail regularization is the same as in :func:`spectrum_numeric`.
    Meant for verification only.

    """
    _check_phase(phase)
    if nodes_per_period < 40:
        raise ValueError("nodes_per_period must be at least 40")
    nu = _check_grid(omega_T)
    eps = drive.epsilon
    points = phase.breakpoints
    values = _np.empty(len(nu), dtype=complex)
    for i, x in enumerate(nu):
        k_max = _max_frequency(phase, eps, x)
        total = 0j
        for a, b in zip(points[:-1], points[1:]):
            n = int(_math.ceil((b - a) * k_max * nodes_per_period /
                               (2 * _math.pi)))
            n += n % 2
            t = _np.linspace(a, b, max(n, 2) + 1)
            total += _integrate.simpson(
                _np.exp(1j * (x * t - eps * phase.phase(t))), x=t)
        values[i] = total
    values += tail_terms(phase, eps, nu)
    return SpectrumGrid(nu, values, 'oracle', drive,
                        {'nodes_per_period': nodes_per_period})


def main_lobe(density, floor=1e-2):
    """Return index bounds ``(lo, hi)`` of the main lobe of a density.

    Starting from the global maximum, the search walks outward to the
    first local minimum below ``floor*peak`` on either side (an exact or
    sampled zero for sinc-like spectra, a deep dip otherwise).  Returns
    None if no such bracket exists on both sides.

    """
    d = _np.asarray(density, dtype=float)
    if len(d) < 3:
        return None
    k = int(_np.argmax(d))
    peak = d[k]
    if not peak > 0:
        return None
    level = floor * peak

    def is_dip(i):
        left = d[i - 1] if i > 0 else _np.inf
        right = d[i + 1] if i < len(d) - 1 else _np.inf
        return d[i] <= level and d[i] <= left and d[i] <= right

    hi = next((i for i in range(k + 1, len(d)) if is_dip(i)), None)
    lo = next((i for i in range(k - 1, -1, -1) if is_dip(i)), None)
    if lo is None or hi is None:
        return None
    return lo, hi
