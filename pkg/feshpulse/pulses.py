"""Unit-height pulse shapes, their phase functions and pulse sequences.

A pulse enters the resonance energy as ``E0 + dE*P(t/T)``.  The phase
function is the running integral of P in units of T,

    phi(t) = integral of P up to t + phi0,

normalized so that ``phi(-t) = -phi(t)`` for symmetric pulses when
``phi0 = 0``.  The Gaussian pulse uses the erf normalization,
``P(t) = 2/sqrt(pi)*exp(-t**2)`` and ``phi(t) = erf(t)``.

Pulse shapes are created with the functions :func:`square`,
:func:`gaussian`, :func:`trapezoid`, :func:`raised_cosine`,
:func:`tabulated` and :func:`read_tabulated`.  :class:`PhaseFunction`
places one shape in time, :func:`concatenate` lays out a
:class:`PulseSequence`.

"""
import collections as _collections
import math as _math
import warnings as _warnings

import numpy as _np
from scipy import optimize as _optimize
from scipy import special as _special

from .constants import HBAR
from .errors import ConfigurationError, DomainError, MultiplicityWarning

_kinds = ('square', 'gaussian', 'trapezoid', 'raised_cosine', 'tabulated')

# |1 - |erf(t)|| drops below this beyond the Gaussian core window
GAUSSIAN_TAIL_TOLERANCE = 1e-14

_GAUSS_PEAK = 2 / _math.sqrt(_math.pi)

StationaryPoint = _collections.namedtuple('StationaryPoint', ['time', 'flag'])
StationaryPoint.__doc__ = """Positive stationary point of a phase function.

`time` is None if there is no interior stationary point.  `flag` is
None, ``'edge'`` (discontinuous pulse edge), ``'plateau'`` (the level is
attained on a whole interval), ``'beyond'`` (level above the pulse
maximum) or ``'multiple'`` (several roots, the one nearest to the
plateau edge is returned).

"""


class PulseShape(object):
    """A unit-height pulse shape P(t) in units of the pulse duration T.

    Do not instantiate directly, use :func:`square`, :func:`gaussian`,
    :func:`trapezoid`, :func:`raised_cosine` or :func:`tabulated`.

    """

    def __init__(self, kind, edge_fraction=None, samples=None):
        if kind not in _kinds:
            raise ConfigurationError("Unknown pulse kind: {0!r}".format(kind))
        self._kind = kind
        self._edge_fraction = edge_fraction
        self._samples = None
        if kind == 'trapezoid':
            if edge_fraction is None or not 0 < edge_fraction <= 0.5:
                raise ConfigurationError(
                    "trapezoid edge_fraction must be in (0, 0.5]: "
                    "{0!r}".format(edge_fraction))
        elif kind == 'raised_cosine':
            if edge_fraction is None or not 0 < edge_fraction <= 1:
                raise ConfigurationError(
                    "raised_cosine edge_fraction must be in (0, 1]: "
                    "{0!r}".format(edge_fraction))
        elif kind == 'tabulated':
            self._samples = _check_samples(samples)
        if kind in ('trapezoid', 'raised_cosine'):
            self._a = (1 - edge_fraction) / 2
            self._b = (1 + edge_fraction) / 2
        if kind == 'tabulated':
            t, p = self._samples
            steps = _np.diff(t)
            self._cumulative = _np.concatenate(
                ([0.0], _np.cumsum(steps * (p[1:] + p[:-1]) / 2)))
            self._slopes = _np.diff(p) / steps

    kind = property(lambda self: self._kind)
    """One of ``'square'``, ``'gaussian'``, ``'trapezoid'``,
    ``'raised_cosine'`` and ``'tabulated'``."""
    edge_fraction = property(lambda self: self._edge_fraction)
    """Edge width in units of T (trapezoid and raised cosine only)."""
    samples = property(lambda self: self._samples)
    """Tuple ``(t, P)`` of the tabulated samples, None otherwise."""

    def __repr__(self):
        if self._kind in ('trapezoid', 'raised_cosine'):
            return "PulseShape({0!r}, edge_fraction={1!r})".format(
                self._kind, self._edge_fraction)
        if self._kind == 'tabulated':
            return "PulseShape('tabulated', samples={0})".format(
                len(self._samples[0]))
        return "PulseShape({0!r})".format(self._kind)

    def __eq__(self, other):
        if not isinstance(other, PulseShape):
            return NotImplemented
        if self._kind != other._kind:
            return False
        if self._kind == 'tabulated':
            return all(_np.array_equal(a, b) for a, b in
                       zip(self._samples, other._samples))
        return self._edge_fraction == other._edge_fraction

    def __ne__(self, other):
        equal = self.__eq__(other)
        return equal if equal is NotImplemented else not equal

    __hash__ = None

    @property
    def window(self):
        """Interval ``(left, right)`` outside of which the phase is flat."""
        if self._kind == 'square':
            return -0.5, 0.5
        if self._kind == 'gaussian':
            cut = float(_special.erfcinv(GAUSSIAN_TAIL_TOLERANCE))
            return -cut, cut
        if self._kind == 'tabulated':
            t = self._samples[0]
            return float(t[0]), float(t[-1])
        return -self._b, self._b

    @property
    def support(self):
        """Half-width of the support in units of T (inf for gaussian)."""
        if self._kind == 'gaussian':
            return _math.inf
        left, right = self.window
        return max(-left, right)

    @property
    def breakpoints(self):
        """Points where P or one of its derivatives jumps."""
        if self._kind == 'square':
            return (-0.5, 0.5)
        if self._kind == 'gaussian':
            return ()
        if self._kind == 'tabulated':
            return tuple(self._samples[0])
        if self._a > 0:
            return (-self._b, -self._a, self._a, self._b)
        return (-self._b, 0.0, self._b)

    @property
    def area(self):
        """Integral of P over all times (phase ascent of the shape)."""
        if self._kind == 'gaussian':
            return 2.0
        if self._kind == 'tabulated':
            return float(self._cumulative[-1])
        return 1.0

    @property
    def peak(self):
        """Maximum of P: 1, or 2/sqrt(pi) for the erf-normalized gaussian."""
        return _GAUSS_PEAK if self._kind == 'gaussian' else 1.0

    @property
    def max_slope(self):
        """Maximum of |P'(t)| (inf for discontinuous pulses)."""
        if self._kind == 'square':
            return _math.inf
        if self._kind == 'gaussian':
            return _GAUSS_PEAK * _math.sqrt(2) * _math.exp(-0.5)
        if self._kind == 'trapezoid':
            return 1 / self._edge_fraction
        if self._kind == 'raised_cosine':
            return _math.pi / (2 * self._edge_fraction)
        return float(_np.max(_np.abs(self._slopes)))

    @property
    def symmetric(self):
        """Whether P(-t) == P(t)."""
        if self._kind != 'tabulated':
            return True
        t, p = self._samples
        return bool(_np.array_equal(t, -t[::-1]) and
                    _np.array_equal(p, p[::-1]))

    def pulse(self, t):
        """Evaluate P(t)."""
        t = _np.asarray(t, dtype=float)
        u = _np.abs(t)
        if self._kind == 'square':
            return _np.where(u <= 0.5, 1.0, 0.0)
        if self._kind == 'gaussian':
            return _GAUSS_PEAK * _np.exp(-t * t)
        if self._kind == 'tabulated':
            ts, ps = self._samples
            return _np.interp(t, ts, ps, left=0.0, right=0.0)
        a, b, s = self._a, self._b, self._edge_fraction
        if self._kind == 'trapezoid':
            edge = (b - u) / s
        else:
            edge = 0.5 * (1 + _np.cos(_np.pi * (u - a) / s))
        return _np.where(u <= a, 1.0, _np.where(u < b, edge, 0.0))

    def primitive(self, t):
        """Evaluate the canonical phase: running integral of P minus area/2."""
        t = _np.asarray(t, dtype=float)
        if self._kind == 'square':
            return _np.clip(t, -0.5, 0.5)
        if self._kind == 'gaussian':
            return _special.erf(t)
        if self._kind == 'tabulated':
            return self._tabulated_primitive(t)
        u = _np.abs(t)
        a, b, s = self._a, self._b, self._edge_fraction
        if self._kind == 'trapezoid':
            edge = a + (s * s - (b - u) ** 2) / (2 * s)
        else:
            edge = (a + 0.5 * (u - a) +
                    s / (2 * _np.pi) * _np.sin(_np.pi * (u - a) / s))
        return _np.sign(t) * _np.where(u <= a, u, _np.where(u < b, edge, 0.5))

    def slope(self, t):
        """Evaluate P'(t); jumps are not represented (zero on flat parts)."""
        t = _np.asarray(t, dtype=float)
        if self._kind == 'square':
            return _np.zeros_like(t)
        if self._kind == 'gaussian':
            return -2 * t * self.pulse(t)
        if self._kind == 'tabulated':
            ts = self._samples[0]
            k = _np.clip(_np.searchsorted(ts, t, side='right') - 1,
                         0, len(self._slopes) - 1)
            inside = (t >= ts[0]) & (t <= ts[-1])
            return _np.where(inside, self._slopes[k], 0.0)
        u = _np.abs(t)
        a, b, s = self._a, self._b, self._edge_fraction
        if self._kind == 'trapezoid':
            edge = _np.full_like(u, -1 / s)
        else:
            edge = -_np.pi / (2 * s) * _np.sin(_np.pi * (u - a) / s)
        return _np.sign(t) * _np.where((u > a) & (u < b), edge, 0.0)

    def stationary_point(self, nu):
        """Return the positive root of P(t) = nu as a :class:`StationaryPoint`.

        Parameters
        ----------
        nu : float
            Level ``omega*T/epsilon``, must be positive.

        """
        if not nu > 0:
            raise DomainError("stationary level must be positive: "
                              "{0!r}".format(nu))
        if nu > self.peak:
            return StationaryPoint(None, 'beyond')
        if self._kind == 'square':
            return StationaryPoint(None, 'edge' if nu < 1 else 'plateau')
        if self._kind == 'gaussian':
            return StationaryPoint(_math.sqrt(_math.log(_GAUSS_PEAK / nu)),
                                   None)
        if self._kind == 'tabulated':
            return self._tabulated_root(nu)
        a, b, s = self._a, self._b, self._edge_fraction
        if nu == 1:
            return StationaryPoint(a, 'plateau' if a > 0 else None)
        if self._kind == 'trapezoid':
            return StationaryPoint(b - s * nu, None)
        return StationaryPoint(a + s * _math.acos(2 * nu - 1) / _math.pi, None)

    def _tabulated_primitive(self, t):
        ts, ps = self._samples
        k = _np.clip(_np.searchsorted(ts, t, side='right') - 1,
                     0, len(ts) - 2)
        dt = _np.clip(t, ts[0], ts[-1]) - ts[k]
        value = (self._cumulative[k] + ps[k] * dt +
                 self._slopes[k] * dt * dt / 2)
        return value - self._cumulative[-1] / 2

    def _tabulated_root(self, nu):
        ts, ps = self._samples
        top = int(_np.argmax(ps))
        positive = ts >= 0
        roots = []
        for k in range(len(ts) - 1):
            if not (positive[k] or positive[k + 1]):
                continue
            lo, hi = ps[k] - nu, ps[k + 1] - nu
            if lo == 0 and hi == 0:
                continue
            if lo * hi <= 0 and lo != hi:
                root = ts[k] + lo / (lo - hi) * (ts[k + 1] - ts[k])
                if root > 0 and (not roots or root != roots[-1]):
                    roots.append(float(root))
        if not roots:
            return StationaryPoint(None, 'beyond')
        if len(roots) == 1:
            return StationaryPoint(roots[0], None)
        below = _np.nonzero(ps[top:] < ps[top])[0]
        edge = ts[top + below[0] - 1] if len(below) else ts[-1]
        best = min(roots, key=lambda r: abs(r - edge))
        _warnings.warn("{0} stationary points at level {1:g}".format(
            len(roots), nu), MultiplicityWarning, stacklevel=3)
        return StationaryPoint(best, 'multiple')


def _check_samples(samples):
    if samples is None:
        raise ConfigurationError("tabulated pulse requires samples")
    t, p = (_np.array(x, dtype=float) for x in samples)
    if t.ndim != 1 or t.shape != p.shape:
        raise ConfigurationError("samples must be two 1-D arrays of equal "
                                 "length")
    if len(t) < 4:
        raise ConfigurationError(
            "tabulated pulse needs at least 4 samples, got {0}".format(len(t)))
    if not _np.all(_np.isfinite(t)) or not _np.all(_np.isfinite(p)):
        raise ConfigurationError("tabulated samples must be finite")
    if not _np.all(_np.diff(t) > 0):
        raise ConfigurationError("tabulated times must be strictly increasing")
    p = _np.maximum(p, 0.0)
    top = p.max()
    if top == 0:
        raise ConfigurationError("tabulated pulse is identically zero")
    return t, p / top


def square():
    """Return the square pulse, P(t) = 1 for |t| <= 1/2."""
    return PulseShape('square')


def gaussian():
    """Return the Gaussian pulse with phase function erf(t)."""
    return PulseShape('gaussian')


def trapezoid(edge_fraction):
    """Return a trapezoid with linear edges of width `edge_fraction`.

    The flat top spans ``|t| <= (1 - s)/2`` and the edges reach zero at
    ``|t| = (1 + s)/2``, so the area is 1 for every s.  For ``s -> 0``
    the shape tends to :func:`square`.

    """
    return PulseShape('trapezoid', edge_fraction=edge_fraction)


def raised_cosine(edge_fraction=1.0):
    """Return a flat-top pulse with raised-cosine edges of `edge_fraction`.

    ``edge_fraction=1`` gives ``P(t) = (1 + cos(pi*t))/2`` on ``|t| <= 1``.

    """
    return PulseShape('raised_cosine', edge_fraction=edge_fraction)


def tabulated(t, P):
    """Return a pulse linearly interpolated from samples.

    Negative samples are clamped to zero and the samples are scaled to
    unit height.  At least 4 samples are required.

    """
    return PulseShape('tabulated', samples=(t, P))


def read_tabulated(file):
    """Read a tabulated pulse from a CSV file with header line ``t,P``.

    Parameters
    ----------
    file : str or path-like or file-like object

    """
    if hasattr(file, 'read'):
        lines = file.read().splitlines()
    else:
        file = file.__fspath__() if hasattr(file, '__fspath__') else file
        with open(file) as f:
            lines = f.read().splitlines()
    if not lines or lines[0].replace(' ', '') != 't,P':
        raise ConfigurationError("tabulated pulse file must start with "
                                 "header 't,P': {0!r}".format(file))
    try:
        data = _np.loadtxt(lines[1:], delimiter=',', ndmin=2)
    except ValueError as e:
        raise ConfigurationError("Invalid pulse table: {0}".format(e))
    if data.shape[1] != 2:
        raise ConfigurationError("pulse table must have two columns")
    return tabulated(data[:, 0], data[:, 1])


class PhaseFunction(object):
    """Phase function of a pulse or pulse sequence.

    A phase function is a sum of placed elements
    ``height*width*primitive((t - center)/width)`` plus the integration
    constant `phi0`.  ``PhaseFunction(shape)`` places a single shape at
    the origin with the canonical (antisymmetric) constant.

    Parameters
    ----------
    shape : PulseShape
    phi0 : float, optional
        Integration constant.
    shift : float, optional
        Time shift of the pulse in units of T.

    """

    def __init__(self, shape, phi0=0.0, shift=0.0):
        if not isinstance(shape, PulseShape):
            raise TypeError("Invalid pulse shape: {0!r}".format(shape))
        self._elements = ((shape, 1.0, 1.0, float(shift)),)
        self._phi0 = float(phi0)

    @classmethod
    def _from_elements(cls, elements, phi0=0.0):
        self = cls.__new__(cls)
        self._elements = tuple(elements)
        self._phi0 = float(phi0)
        return self

    phi0 = property(lambda self: self._phi0)
    """The integration constant."""
    elements = property(lambda self: self._elements)
    """Tuples ``(shape, height, width, center)`` of the placed elements."""

    @property
    def underlying(self):
        """The pulse shape, or None for a composed sequence."""
        return self._elements[0][0] if len(self._elements) == 1 else None

    def __repr__(self):
        if self.underlying is not None:
            return "PhaseFunction({0!r}, phi0={1!r}, shift={2!r})".format(
                self.underlying, self._phi0, self._elements[0][3])
        return "PhaseFunction(<{0} elements>, phi0={1!r})".format(
            len(self._elements), self._phi0)

    def shifted(self, t0):
        """Return the phase function of the pulse delayed by `t0`."""
        return PhaseFunction._from_elements(
            [(s, h, w, c + t0) for s, h, w, c in self._elements], self._phi0)

    def phase(self, t):
        """Evaluate phi(t)."""
        t = _np.asarray(t, dtype=float)
        total = _np.full_like(t, self._phi0)
        for shape, height, width, center in self._elements:
            total = total + height * width * shape.primitive(
                (t - center) / width)
        return total

    def pulse(self, t):
        """Evaluate P(t) = phi'(t)."""
        t = _np.asarray(t, dtype=float)
        total = _np.zeros_like(t)
        for shape, height, width, center in self._elements:
            total = total + height * shape.pulse((t - center) / width)
        return total

    def slope(self, t):
        """Evaluate P'(t)."""
        t = _np.asarray(t, dtype=float)
        total = _np.zeros_like(t)
        for shape, height, width, center in self._elements:
            total = total + height / width * shape.slope((t - center) / width)
        return total

    @property
    def window(self):
        """Core interval ``(left, right)``; phi is constant outside of it."""
        lefts, rights = zip(*[(c + w * s.window[0], c + w * s.window[1])
                              for s, h, w, c in self._elements])
        return min(lefts), max(rights)

    @property
    def breakpoints(self):
        """Sorted kinks of P inside the core window, window ends included."""
        points = set(self.window)
        for shape, height, width, center in self._elements:
            points.update(center + width * x for x in shape.breakpoints)
            points.update(center + width * x for x in shape.window)
        return tuple(sorted(points))

    @property
    def limits(self):
        """Asymptotic levels ``(phi(-inf), phi(+inf))``."""
        half = sum(h * w * s.area for s, h, w, c in self._elements) / 2
        return self._phi0 - half, self._phi0 + half

    @property
    def ascent(self):
        """Total ascent phi(+inf) - phi(-inf), the weighted pulse area."""
        low, high = self.limits
        return high - low

    @property
    def peak(self):
        """Maximum of P."""
        return max(h * s.peak for s, h, w, c in self._elements)

    @property
    def max_slope(self):
        """Maximum of |P'|."""
        return max(h / w * s.max_slope for s, h, w, c in self._elements)

    @property
    def symmetric(self):
        """Whether the pulse is symmetric about t = 0."""
        shape = self.underlying
        return (shape is not None and shape.symmetric and
                self._elements[0][3] == 0)


def phase_at(p, t):
    """Return phi(t) of the phase function `p`.

    Examples
    --------
    >>> from feshpulse import pulses
    >>> pulses.phase_at(pulses.PhaseFunction(pulses.square()), 2.0)
    0.5

    """
    if not _np.all(_np.isfinite(t)):
        raise DomainError("phase_at requires finite times")
    value = p.phase(t)
    return float(value) if _np.ndim(value) == 0 else value


def stationary_point(p, nu, scan_points=4097):
    """Return the positive stationary point of `p` at level `nu`.

    The stationary point solves ``P(t) = nu`` for ``t > 0``.

    Parameters
    ----------
    p : PhaseFunction
    nu : float
        Positive level ``omega*T/eps``.
    scan_points : int, optional
        Number of scan points used for composed pulses.

    Returns
    -------
    StationaryPoint

    """
    if len(p.elements) == 1:
        shape, height, width, center = p.elements[0]
        root = shape.stationary_point(nu / height)
        if root.time is None:
            return root
        return StationaryPoint(center + width * root.time, root.flag)
    if not nu > 0:
        raise DomainError("stationary level must be positive: "
                          "{0!r}".format(nu))
    right = p.window[1]
    if right <= 0:
        return StationaryPoint(None, 'beyond')
    t = _np.linspace(0, right, scan_points)
    f = p.pulse(t) - nu
    changes = _np.nonzero(f[:-1] * f[1:] < 0)[0]
    if len(changes) == 0:
        return StationaryPoint(None, 'beyond')

    def level(x):
        return float(p.pulse(x)) - nu

    roots = [_optimize.brentq(level, t[k], t[k + 1]) for k in changes]
    if len(roots) == 1:
        return StationaryPoint(roots[0], None)
    edge = t[int(_np.argmax(p.pulse(t)))]
    _warnings.warn("{0} stationary points at level {1:g}".format(
        len(roots), nu), MultiplicityWarning, stacklevel=2)
    return StationaryPoint(min(roots, key=lambda r: abs(r - edge)), 'multiple')


class PulseSequence(object):
    """An ordered sequence of pulses.

    Parameters
    ----------
    elements : iterable of tuples
        ``(shape, height_ratio, duration_ratio, delay_before)``.  The
        delay is the gap (in units of T) between the end of the previous
        element's core window and the start of this one.

    """

    def __init__(self, elements):
        checked = []
        for element in elements:
            try:
                shape, height, width, delay = element
            except (TypeError, ValueError):
                raise ConfigurationError(
                    "Invalid sequence element: {0!r}".format(element))
            if not isinstance(shape, PulseShape):
                raise ConfigurationError(
                    "Invalid pulse shape: {0!r}".format(shape))
            if not height > 0 or not width > 0:
                raise ConfigurationError(
                    "height and duration ratios must be positive: "
                    "{0!r}".format(element))
            if not delay >= 0:
                raise ConfigurationError(
                    "delays must be non-negative (overlapping supports): "
                    "{0!r}".format(delay))
            checked.append((shape, float(height), float(width), float(delay)))
        if not checked:
            raise ConfigurationError("empty pulse sequence")
        self._elements = tuple(checked)

    elements = property(lambda self: self._elements)
    """The validated element tuples."""

    def __len__(self):
        return len(self._elements)

    def __repr__(self):
        return "PulseSequence({0!r})".format(list(self._elements))


def concatenate(seq):
    """Return the phase function of a :class:`PulseSequence`.

    The elements are laid out one after another and the whole sequence
    is centered on t = 0.  The total ascent is the sum of the element
    areas weighted by height and duration ratios.

    """
    if not isinstance(seq, PulseSequence):
        seq = PulseSequence(seq)
    placed = []
    cursor = None
    for shape, height, width, delay in seq.elements:
        left, right = shape.window
        start = delay if cursor is None else cursor + delay
        center = start - width * left
        placed.append((shape, height, width, center))
        cursor = center + width * right
    first = placed[0]
    offset = (first[3] + first[2] * first[0].window[0] + cursor) / 2
    return PhaseFunction._from_elements(
        [(s, h, w, c - offset) for s, h, w, c in placed])


class DimensionlessDrive(object):
    """Pulse height and width in reduced units.

    Parameters
    ----------
    epsilon : float
        Dimensionless energy ``dE*T/hbar``.  Zero describes the
        degenerate (undriven) case.
    T : float
        Pulse duration [s].
    E0 : float, optional
        Base energy ``E_res(B0) + U_cl`` [J].
    dE : float, optional
        Pulse height [J]; derived from `epsilon` if omitted.

    """

    def __init__(self, epsilon, T, E0=0.0, dE=None):
        if not (_math.isfinite(T) and T > 0):
            raise ConfigurationError("T must be positive: {0!r}".format(T))
        if not (_math.isfinite(epsilon) and epsilon >= 0):
            raise ConfigurationError(
                "epsilon must be non-negative: {0!r}".format(epsilon))
        if not _math.isfinite(E0):
            raise ConfigurationError("E0 must be finite: {0!r}".format(E0))
        if dE is None:
            dE = epsilon * HBAR / T
        elif abs(dE * T / HBAR - epsilon) > 4 * _math.ulp(epsilon):
            raise ConfigurationError(
                "epsilon {0!r} inconsistent with dE*T/hbar = {1!r}".format(
                    epsilon, dE * T / HBAR))
        self._epsilon = float(epsilon)
        self._T = float(T)
        self._E0 = float(E0)
        self._dE = float(dE)

    @classmethod
    def from_energy(cls, dE, T, E0=0.0):
        """Create a drive from the pulse height `dE` [J]."""
        if not dE >= 0:
            raise ConfigurationError("dE must be non-negative: "
                                     "{0!r}".format(dE))
        return cls(dE * T / HBAR, T, E0, dE)

    @classmethod
    def from_field(cls, dB, mu_res, T, E0=0.0):
        """Create a drive from a field pulse height `dB` [T]."""
        return cls.from_energy(mu_res * dB, T, E0)

    epsilon = property(lambda self: self._epsilon)
    """Dimensionless energy."""
    T = property(lambda self: self._T)
    """Pulse duration [s]."""
    E0 = property(lambda self: self._E0)
    """Base energy [J]."""
    dE = property(lambda self: self._dE)
    """Pulse height [J]."""

    def __repr__(self):
        return ("DimensionlessDrive(epsilon={0.epsilon!r}, T={0.T!r}, "
                "E0={0.E0!r}, dE={0.dE!r})".format(self))

    def omega(self, omega_T):
        """Map reduced frequencies to absolute angular frequencies [rad/s]."""
        return _np.asarray(omega_T) / self._T + self._E0 / HBAR

    def omega_T(self, energy):
        """Map a total energy [J] to the reduced frequency omega*T."""
        return self._T * (_np.asarray(energy) - self._E0) / HBAR

    def to_dict(self):
        return {'epsilon': self._epsilon, 'T': self._T, 'E0': self._E0,
                'dE': self._dE}
