"""Search pulse families for the sharpest dissociation spectrum.

A :class:`PulseFamily` maps a parameter vector to a pulse shape, an
objective scores the spectrum of that shape (smaller is sharper) and
:func:`optimize_pulse` runs a bounded Nelder-Mead search from the corners
and the center of the parameter box.

"""
import logging as _logging
import math as _math
import warnings as _warnings

import numpy as _np
from scipy import integrate as _integrate
from scipy import optimize as _optimize

from . import pulses as _pulses
from .errors import BudgetWarning, ConfigurationError, NoPeakWarning
from .spectrum import main_lobe, spectrum_numeric

_log = _logging.getLogger(__name__)

_families = {
    'trapezoid': (_pulses.trapezoid, (0.0, 0.5)),
    'raised_cosine': (_pulses.raised_cosine, (0.0, 1.0)),
}

_objectives = ('ripple_energy', 'rms_width', 'neg_peak_concentration')

# relative improvement that resets the evaluation budget
_IMPROVEMENT = 1e-4

# below this omega*T the 1/omega_T pole of the plateau tails, common to
# every pulse of a given area, outweighs the main lobe
_POLE_GUARD = 4 * _math.pi


class PulseFamily(object):
    """A one-parameter family of pulse shapes.

    Parameters
    ----------
    kind : {'trapezoid', 'raised_cosine'}
        The parameter is the edge width in units of T.
    bounds : sequence of (low, high)
        Parameter box; must lie inside the valid edge widths of `kind`.

    Examples
    --------
    >>> from feshpulse.optimize import PulseFamily
    >>> PulseFamily('trapezoid', [(0.01, 0.45)]).make([0.1])
    PulseShape('trapezoid', edge_fraction=0.1)

    """

    def __init__(self, kind, bounds):
        if kind not in _families:
            raise ConfigurationError(
                "Unknown pulse family: {0!r}".format(kind))
        bounds = [tuple(float(x) for x in b) for b in bounds]
        if len(bounds) != 1:
            raise ConfigurationError("{0} family has one parameter, got {1} "
                                     "bounds".format(kind, len(bounds)))
        low, high = _families[kind][1]
        for lo, hi in bounds:
            if not low < lo <= hi <= high:
                raise ConfigurationError(
                    "bounds ({0!r}, {1!r}) outside the {2} range ({3}, "
                    "{4}]".format(lo, hi, kind, low, high))
        self._kind = kind
        self._bounds = tuple(bounds)

    kind = property(lambda self: self._kind)
    """Family name."""
    bounds = property(lambda self: self._bounds)
    """Parameter box as a tuple of ``(low, high)`` pairs."""

    def __repr__(self):
        return "PulseFamily({0!r}, {1!r})".format(self._kind,
                                                  list(self._bounds))

    def make(self, params):
        """Return the :class:`~feshpulse.pulses.PulseShape` for `params`."""
        (s,) = params
        return _families[self._kind][0](float(s))

    def seeds(self):
        """Lower corner, upper corner and center of the box."""
        low = _np.array([b[0] for b in self._bounds])
        high = _np.array([b[1] for b in self._bounds])
        return [low, high, (low + high) / 2]


def default_grid(drive, points=4096):
    """Reduced frequencies ``(0, 1.3*eps]`` used to score pulses."""
    top = 1.3 * drive.epsilon
    return _np.linspace(top / points, top, points)


def _density(pulse, drive, grid):
    """Spectral density on the part of `grid` above the pole guard."""
    if drive.epsilon == 0:
        return grid, None
    nu = grid[grid >= min(_POLE_GUARD, drive.epsilon / 2)]
    if len(nu) < 3:
        return nu, None
    phase = _pulses.PhaseFunction(pulse)
    return nu, spectrum_numeric(phase, drive, nu).density


def _no_peak():
    _warnings.warn("spectrum has no identifiable main lobe",
                   NoPeakWarning, stacklevel=3)
    return 1.0


def ripple_objective(pulse, drive, grid):
    """Fraction of the spectral weight outside the main lobe.

    Grid points below ``min(4*pi, eps/2)`` are ignored by all
    objectives: there the 1/omega_T pole of the plateau tails, which is
    the same for every pulse of unit area, dominates the density.
    Returns 1.0 (the worst score) with a
    :class:`~feshpulse.errors.NoPeakWarning` if the spectrum has no main
    lobe, e.g. for a vanishing pulse height.

    """
    grid, density = _density(pulse, drive, _np.asarray(grid, float))
    lobe = None if density is None else main_lobe(density)
    if lobe is None:
        return _no_peak()
    total = _integrate.trapezoid(density, grid)
    lo, hi = lobe
    inside = _integrate.trapezoid(density[lo:hi + 1], grid[lo:hi + 1])
    return float(max(1 - inside / total, 0.0))


def rms_width(pulse, drive, grid):
    """RMS width of |value|**2 in omega*T, in units of the sinc lobe 4*pi."""
    grid, density = _density(pulse, drive, _np.asarray(grid, float))
    if density is None or not _np.any(density > 0):
        return _no_peak()
    total = _integrate.trapezoid(density, grid)
    mean = _integrate.trapezoid(density * grid, grid) / total
    var = _integrate.trapezoid(density * (grid - mean) ** 2, grid) / total
    return _math.sqrt(var) / (4 * _math.pi)


def neg_peak_concentration(pulse, drive, grid):
    """One minus the weight within +-2*pi of the spectral peak."""
    grid, density = _density(pulse, drive, _np.asarray(grid, float))
    if density is None or not _np.any(density > 0):
        return _no_peak()
    total = _integrate.trapezoid(density, grid)
    center = grid[int(_np.argmax(density))]
    near = _np.abs(grid - center) <= 2 * _math.pi
    inside = _integrate.trapezoid(density[near], grid[near])
    return float(max(1 - inside / total, 0.0))


def objective_function(kind):
    """Return the scoring function named `kind`."""
    if kind not in _objectives:
        raise ConfigurationError("Unknown objective: {0!r}".format(kind))
    return {'ripple_energy': ripple_objective,
            'rms_width': rms_width,
            'neg_peak_concentration': neg_peak_concentration}[kind]


class _BudgetExhausted(Exception):
    pass


class OptimizationResult(object):
    """Outcome of :func:`optimize_pulse`.

    Do not instantiate directly.

    """

    def __init__(self, params, score, trace, iterations, exhausted,
                 restarts=()):
        self._params = params
        self._restarts = tuple(restarts)
        self._score = score
        self._trace = trace
        self._iterations = iterations
        self._exhausted = exhausted

    params = property(lambda self: self._params)
    """Best parameter vector."""
    score = property(lambda self: self._score)
    """Objective value at `params`."""
    trace = property(lambda self: self._trace)
    """List of ``(params, score)`` for every evaluation, in order."""
    iterations = property(lambda self: self._iterations)
    """Simplex iterations summed over all restarts."""
    exhausted = property(lambda self: self._exhausted)
    """True if the evaluation budget ran out without improvement."""
    restarts = property(lambda self: self._restarts)
    """``(params, score)`` reached from each seed."""

    def __repr__(self):
        return ("OptimizationResult(params={0!r}, score={1!r}, "
                "evaluations={2}, exhausted={3})".format(
                    list(self._params), self._score, len(self._trace),
                    self._exhausted))


def optimize_pulse(family, drive, objective='ripple_energy', grid=None,
                   budget=500):
    """Minimize an objective over a pulse family.

    Nelder-Mead with bounds is started from the lower corner, the upper
    corner and the center of the box; the best evaluation over all
    restarts is returned, so the result is never worse than the best
    seed.  The evaluation grid is fixed for the whole run.

    Parameters
    ----------
    family : PulseFamily
    drive : DimensionlessDrive
    objective : str, optional
        ``'ripple_energy'``, ``'rms_width'`` or
        ``'neg_peak_concentration'``.
    grid : array_like, optional
        Reduced frequencies; :func:`default_grid` if omitted.
    budget : int, optional
        Evaluations allowed without a relative improvement of 1e-4.  If
        exceeded, the best point so far is returned with
        ``exhausted=True`` and a :class:`~feshpulse.errors.BudgetWarning`.

    Returns
    -------
    OptimizationResult

    """
    score_of = objective_function(objective)
    grid = default_grid(drive) if grid is None else _np.asarray(grid, float)
    low = _np.array([b[0] for b in family.bounds])
    high = _np.array([b[1] for b in family.bounds])
    trace = []
    cache = {}
    state = {'best': _math.inf, 'stale': 0}

    def evaluate(x):
        x = _np.clip(_np.asarray(x, dtype=float), low, high)
        key = tuple(x)
        if key not in cache:
            with _warnings.catch_warnings():
                _warnings.simplefilter('ignore', NoPeakWarning)
                cache[key] = score_of(family.make(x), drive, grid)
            trace.append((x.copy(), cache[key]))
            score = cache[key]
            best = state['best']
            if _math.isinf(best) or score < best - _IMPROVEMENT * abs(best):
                state['stale'] = 0
            else:
                state['stale'] += 1
            state['best'] = min(state['best'], score)
            if state['stale'] > budget:
                raise _BudgetExhausted()
        return cache[key]

    if _np.all(low == high):
        evaluate(low)
        return OptimizationResult(low, trace[0][1], trace, 0, False)

    iterations = 0
    exhausted = False
    restarts = []
    for seed in family.seeds():
        try:
            result = _optimize.minimize(
                evaluate, seed, method='Nelder-Mead',
                bounds=list(zip(low, high)),
                options={'xatol': 1e-4, 'fatol': 1e-6})
        except _BudgetExhausted:
            exhausted = True
            break
        iterations += result.nit
        restarts.append((_np.clip(result.x, low, high), float(result.fun)))
        _log.debug("restart from %s: %s after %d iterations", seed,
                   result.fun, result.nit)
    if exhausted:
        _warnings.warn("no relative improvement in {0} evaluations".format(
            budget), BudgetWarning, stacklevel=2)
    params, score = min(trace, key=lambda item: item[1])
    return OptimizationResult(params, score, trace, iterations, exhausted,
                              restarts)
