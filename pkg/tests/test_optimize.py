import numpy as np
import pytest

from feshpulse import optimize, pulses
from feshpulse.errors import BudgetWarning, ConfigurationError, NoPeakWarning


@pytest.fixture(scope='module')
def drive():
    return pulses.DimensionlessDrive(100.0, T=7.5e-4)


@pytest.fixture(scope='module')
def grid(drive):
    return optimize.default_grid(drive, points=2048)


@pytest.fixture(scope='module')
def family():
    return optimize.PulseFamily('trapezoid', [(0.01, 0.45)])


@pytest.fixture(scope='module')
def result(family, drive, grid):
    return optimize.optimize_pulse(family, drive, grid=grid)


# -----------------------------------------------------------------------------
# Pulse families
# -----------------------------------------------------------------------------


def test_family_makes_shapes(family):
    assert family.make([0.2]) == pulses.trapezoid(0.2)
    assert family.kind == 'trapezoid'
    assert family.bounds == ((0.01, 0.45),)
    seeds = family.seeds()
    assert [s[0] for s in seeds] == pytest.approx([0.01, 0.45, 0.23])


def test_raised_cosine_family():
    family = optimize.PulseFamily('raised_cosine', [(0.1, 1.0)])
    assert family.make([1.0]) == pulses.raised_cosine(1.0)


@pytest.mark.parametrize('kind, bounds', [
    ('square', [(0.1, 0.2)]),
    ('trapezoid', [(0.0, 0.2)]),
    ('trapezoid', [(0.3, 0.2)]),
    ('trapezoid', [(0.1, 0.6)]),
    ('trapezoid', [(0.1, 0.2), (0.1, 0.2)]),
])
def test_invalid_family(kind, bounds):
    with pytest.raises(ConfigurationError):
        optimize.PulseFamily(kind, bounds)


def test_default_grid(drive):
    g = optimize.default_grid(drive, points=100)
    assert len(g) == 100
    assert g[0] == pytest.approx(1.3)
    assert g[-1] == pytest.approx(130.0)


# -----------------------------------------------------------------------------
# Objectives
# -----------------------------------------------------------------------------


def test_ripple_grows_with_edge_width(drive, grid):
    scan = np.linspace(0.01, 0.45, 45)
    scores = np.array([optimize.ripple_objective(pulses.trapezoid(s), drive,
                                                 grid) for s in scan])
    assert np.all((scores >= 0) & (scores < 1))
    assert np.all(np.diff(scores) >= -1e-3)


def test_smooth_edges_are_worse(drive, grid):
    sharp = optimize.ripple_objective(pulses.trapezoid(0.05), drive, grid)
    smooth = optimize.ripple_objective(pulses.trapezoid(0.4), drive, grid)
    assert smooth > sharp


def test_no_peak_gives_worst_score(grid):
    flat = pulses.DimensionlessDrive(0.0, T=7.5e-4)
    with pytest.warns(NoPeakWarning):
        score = optimize.ripple_objective(pulses.trapezoid(0.1), flat, grid)
    assert score == 1.0


@pytest.mark.parametrize('name', ['ripple_energy', 'rms_width',
                                  'neg_peak_concentration'])
def test_objectives_score_square_like_pulse(name, drive, grid):
    score = optimize.objective_function(name)(pulses.trapezoid(0.05), drive,
                                              grid)
    assert isinstance(score, float)
    assert score > 0


def test_unknown_objective():
    with pytest.raises(ConfigurationError):
        optimize.objective_function('sharpness')


# -----------------------------------------------------------------------------
# Search
# -----------------------------------------------------------------------------


def test_optimum_at_sharpest_edge(result):
    assert result.params[0] == pytest.approx(0.01, abs=1e-3)
    assert not result.exhausted
    assert result.iterations > 0
    assert result.score == min(score for params, score in result.trace)


def test_restarts_agree(result):
    assert len(result.restarts) == 3
    scores = [score for params, score in result.restarts]
    assert max(scores) <= 1.05 * min(scores)


def test_trace_is_within_bounds(result):
    params = np.array([p[0] for p, score in result.trace])
    assert np.all((params >= 0.01) & (params <= 0.45))
    assert repr(result).startswith('OptimizationResult(params=')


def test_single_point_box(drive, grid):
    family = optimize.PulseFamily('trapezoid', [(0.2, 0.2)])
    result = optimize.optimize_pulse(family, drive, grid=grid)
    assert result.params[0] == 0.2
    assert result.iterations == 0
    assert len(result.trace) == 1
    assert result.score == optimize.ripple_objective(pulses.trapezoid(0.2),
                                                     drive, grid)


def test_budget_exhausted(family, drive):
    grid = optimize.default_grid(drive, points=512)
    with pytest.warns(BudgetWarning):
        result = optimize.optimize_pulse(family, drive, grid=grid, budget=2)
    assert result.exhausted
    assert len(result.trace) < 50
    assert result.score == min(score for params, score in result.trace)


def test_optimize_rejects_unknown_objective(family, drive):
    with pytest.raises(ConfigurationError):
        optimize.optimize_pulse(family, drive, objective='sharpness')
