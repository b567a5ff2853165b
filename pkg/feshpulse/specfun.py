"""Special functions needed by the asymptotic spectra.

All functions accept scalars or array_like input and return a float for
scalar input and a :class:`numpy.ndarray` otherwise.  They wrap
:mod:`scipy.special` and add the contracts the spectra rely on: domain
checks, an underflow flag for Ai and a scaled-value overflow error for
erfi.

"""
import warnings as _warnings

import numpy as _np
from scipy import special as _special

from .errors import DomainError, ErfiOverflowError, UnderflowWarning

AIRY_MAX_ARGUMENT = 1e4
ERFI_MAX_ARGUMENT = 26.0


def _as_result(x, scalar):
    return float(x) if scalar else x


def _check_finite(x, name):
    x = _np.asarray(x, dtype=float)
    if not _np.all(_np.isfinite(x)):
        raise DomainError("{0} requires finite arguments".format(name))
    return x


def airy_ai(x):
    """Return the Airy function Ai(x).

    For large positive `x` the value underflows; zeros are then returned
    and an :class:`~feshpulse.errors.UnderflowWarning` is issued.

    Parameters
    ----------
    x : float or array_like
        Real argument(s) with ``|x| <= 1e4``.

    Examples
    --------
    >>> from feshpulse.specfun import airy_ai
    >>> airy_ai(0.0)
    0.3550280538878172

    """
    scalar = _np.ndim(x) == 0
    x = _check_finite(x, 'airy_ai')
    if _np.any(_np.abs(x) > AIRY_MAX_ARGUMENT):
        raise DomainError(
            "airy_ai argument exceeds {0:g}".format(AIRY_MAX_ARGUMENT))
    ai = _special.airy(x)[0]
    underflow = (ai == 0) & (x > 0)
    if _np.any(underflow):
        _warnings.warn("Ai(x) underflows for x >= {0:g}".format(
            float(_np.min(x[underflow]))), UnderflowWarning, stacklevel=2)
    return _as_result(ai, scalar)


def erf(x):
    """Return the error function erf(x)."""
    scalar = _np.ndim(x) == 0
    x = _check_finite(x, 'erf')
    return _as_result(_special.erf(x), scalar)


def erfi(x):
    """Return the imaginary error function erfi(x) = -i erf(ix).

    Raises
    ------
    ErfiOverflowError
        If ``|x| > 26``.  The exception's ``scaled`` attribute holds
        :func:`erfi_scaled` of the argument.

    """
    scalar = _np.ndim(x) == 0
    x = _check_finite(x, 'erfi')
    if _np.any(_np.abs(x) > ERFI_MAX_ARGUMENT):
        raise ErfiOverflowError(
            "erfi overflows for |x| > {0:g}".format(ERFI_MAX_ARGUMENT),
            scaled=erfi_scaled(x))
    return _as_result(_special.erfi(x), scalar)


def erfi_scaled(x):
    """Return exp(-x**2)*erfi(x), which stays finite for all real x."""
    scalar = _np.ndim(x) == 0
    x = _check_finite(x, 'erfi_scaled')
    return _as_result(2 / _np.sqrt(_np.pi) * _special.dawsn(x), scalar)


def sinc(x):
    """Return sin(x)/x with sinc(0) = 1 (unnormalized convention)."""
    scalar = _np.ndim(x) == 0
    x = _check_finite(x, 'sinc')
    return _as_result(_np.sinc(x / _np.pi), scalar)


def pv_reciprocal(x):
    """Return the principal-value reciprocal: 1/x off zero, 0 at zero."""
    scalar = _np.ndim(x) == 0
    x = _check_finite(x, 'pv_reciprocal')
    out = _np.zeros_like(x)
    nonzero = x != 0
    out[nonzero] = 1 / x[nonzero]
    return _as_result(out, scalar)
