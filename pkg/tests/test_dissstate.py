import json

import numpy as np
import pytest

from feshpulse import dissstate, dynamics, export, pulses
from feshpulse.asymptotics import spectrum_square_closed
from feshpulse.constants import HBAR
from feshpulse.errors import (ConfigurationError, CoverageError,
                              GridRangeError, RegimeWarning)
from feshpulse.spectrum import SpectrumGrid

T = 7.5e-4


@pytest.fixture(scope='module')
def setup():
    return dynamics.li6_setup()


@pytest.fixture(scope='module')
def drive(setup):
    return setup.make_drive(T, epsilon=100.0)


@pytest.fixture(scope='module')
def spectrum(setup, drive):
    return spectrum_square_closed(drive, dissstate.square_band(drive, setup))


@pytest.fixture(scope='module')
def state(spectrum, setup):
    return dissstate.assemble_state(spectrum, setup)


# -----------------------------------------------------------------------------
# Momentum grids
# -----------------------------------------------------------------------------


def test_momentum_grid_is_symmetric(setup, drive):
    p = dissstate.momentum_grid(setup, drive, 130.0)
    assert len(p) % 2 == 1
    assert p[len(p) // 2] == 0
    assert np.allclose(p, -p[::-1])
    energy = setup.U_bg + p[-1] ** 2 / (2 * setup.mu)
    assert drive.omega_T(energy) == pytest.approx(130.0, rel=1e-9)


def test_momentum_grid_below_threshold(setup, drive):
    with pytest.raises(GridRangeError) as excinfo:
        dissstate.momentum_grid(setup, drive, 50.0)
    assert excinfo.value.band[1] == 50.0


def test_cm_grid(setup):
    p = dissstate.cm_grid(setup, points=5, width=2.0)
    assert np.allclose(p, setup.sigma_p * np.array([-2, -1, 0, 1, 2]))


def test_square_band_covers_threshold(setup, drive):
    band = dissstate.square_band(drive, setup)
    assert band[0] > 0
    assert band[0] < drive.omega_T(setup.U_bg)
    assert band[-1] >= 100 + 1 / (np.pi * 1e-4)


# -----------------------------------------------------------------------------
# Normalization
# -----------------------------------------------------------------------------


def test_state_is_normalized(state):
    assert state.total_probability() == pytest.approx(1.0, abs=1e-6)
    assert state.delta_cm
    assert state.amplitude.shape == (1, len(state.p_rel))
    assert state.info['coverage_loss'] <= 1e-4


def test_normalization_is_stable_under_refinement(spectrum, setup, state):
    p_rel = dissstate.momentum_grid(setup, spectrum.drive,
                                    spectrum.omega_T[-1],
                                    points=2 * len(state.p_rel) - 1)
    fine = dissstate.assemble_state(spectrum, setup, p_rel=p_rel)
    assert fine.total_probability() == pytest.approx(1.0, abs=1e-6)
    assert fine.norm_sq == pytest.approx(state.norm_sq, rel=1e-3)
    assert fine.prob == pytest.approx(state.prob, rel=1e-3)


def test_state_with_trap_ground_state(spectrum, setup):
    wide = setup.replace(delta_cm=False)
    state = dissstate.assemble_state(spectrum, wide)
    assert not state.delta_cm
    assert state.amplitude.shape == (65, len(state.p_rel))
    assert state.total_probability() == pytest.approx(1.0, abs=1e-6)


def test_spectral_norm_matches_state(spectrum, setup, state):
    assert dissstate.spectral_norm(spectrum, setup) == pytest.approx(
        state.norm_sq, rel=1e-12)


def test_sharp_cm_limit_of_spectral_norm(setup):
    errors = []
    for scale in (16.0, 4.0, 1.0):
        trap = setup.replace(omega_T=scale * setup.omega_T)
        d = trap.make_drive(T, epsilon=100.0)
        grid = spectrum_square_closed(d, dissstate.square_band(d, trap))
        sharp = dissstate.spectral_norm(grid, trap, delta_cm=True)
        wide = dissstate.spectral_norm(grid, trap, delta_cm=False)
        errors.append(abs(wide - sharp) / sharp)
    # the p_cm width shrinks as sqrt(omega_T)
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] <= 0.25 * errors[0]
    assert errors[0] < 0.05


def test_write_state_with_trap_ground_state(spectrum, setup, tmp_path):
    state = dissstate.assemble_state(spectrum, setup.replace(delta_cm=False))
    path = tmp_path / 'state.csv'
    export.write_state(str(path), state, 'abc')
    with open(str(path)) as f:
        assert f.readline().strip() == 'p_cm,p_rel,re,im,prob_density'
    data = np.loadtxt(str(path), delimiter=',', skiprows=1)
    n_cm, n_rel = state.amplitude.shape
    assert data.shape == (n_cm * n_rel, 5)
    assert np.array_equal(data[::n_rel, 0], state.p_cm)
    assert np.array_equal(data[:n_rel, 1], state.p_rel)
    assert np.array_equal(data[:, 2], state.amplitude.real.ravel())
    assert np.array_equal(data[:, 4], state.density.ravel())
    meta = json.loads((tmp_path / 'state.json').read_text())
    assert meta['delta_cm'] is False
    assert meta['prob'] == state.prob


def test_truncated_band_is_rejected(setup, drive):
    nu = np.arange(80, 110, 2 * np.pi / 16)
    grid = spectrum_square_closed(drive, nu)
    with pytest.raises(CoverageError) as excinfo:
        dissstate.assemble_state(grid, setup)
    assert excinfo.value.loss > 1e-4


def test_band_must_reach_threshold(setup, drive):
    grid = spectrum_square_closed(drive, np.linspace(95, 130, 200))
    with pytest.raises(GridRangeError):
        dissstate.assemble_state(grid, setup)


def test_spectrum_without_drive_is_rejected(setup):
    grid = SpectrumGrid(np.arange(1.0, 6.0), np.ones(5), 'numeric', None)
    with pytest.raises(ConfigurationError):
        dissstate.assemble_state(grid, setup)


# -----------------------------------------------------------------------------
# Amplitude and probability
# -----------------------------------------------------------------------------


def test_amplitude_on_grid(spectrum, setup, state):
    k = len(state.p_rel) // 2 + 100
    value = dissstate.momentum_amplitude(spectrum, setup, 0.0,
                                         state.p_rel[k],
                                         norm_sq=state.norm_sq)
    assert isinstance(value, complex)
    assert value == pytest.approx(state.amplitude[0, k], rel=1e-9)


def test_amplitude_vanishes_off_axis_for_sharp_cm(spectrum, setup, state):
    p = state.p_rel[len(state.p_rel) // 2 + 100]
    values = dissstate.momentum_amplitude(spectrum, setup, [0.0, 1e-30],
                                          [p, p], norm_sq=state.norm_sq)
    assert values[0] != 0
    assert values[1] == 0


def test_amplitude_outside_band(spectrum, setup, state):
    with pytest.raises(GridRangeError):
        dissstate.momentum_amplitude(spectrum, setup, 0.0,
                                     2 * state.p_rel[-1],
                                     norm_sq=state.norm_sq)


def test_dissociation_probability(spectrum, setup, state):
    assert 0 < state.prob < dissstate.FEW_PERCENT
    expected = (setup.omega_G * setup.a_bg * setup.mu_res * setup.dB_res *
                state.norm_sq / (np.pi * HBAR ** 2))
    assert state.prob == pytest.approx(expected)


def test_large_probability_warns(spectrum, setup, state):
    strong = setup.replace(dB_res=100 * setup.dB_res)
    with pytest.warns(RegimeWarning):
        prob = dissstate.dissociation_probability(spectrum, strong,
                                                  norm_sq=state.norm_sq)
    assert prob == pytest.approx(100 * state.prob)


# -----------------------------------------------------------------------------
# Metrics and regime checks
# -----------------------------------------------------------------------------


def test_metrics_of_square_pulse(state, setup, drive):
    metrics = dissstate.distribution_metrics(state)
    expected = drive.E0 + HBAR * 100.0 / T - setup.U_bg
    assert metrics.kinetic_energy == pytest.approx(expected, rel=1e-2)
    assert metrics.peak_momentum > 0
    assert metrics.velocity == pytest.approx(metrics.peak_momentum / setup.m)
    assert metrics.relative_velocity == pytest.approx(2 * metrics.velocity)
    assert metrics.fwhm is not None and metrics.fwhm > 0
    assert metrics.modes == [metrics.peak_momentum]
    assert 0 < metrics.ripple < 0.3
    assert metrics.rms_width > 0


def test_regime_of_reference_setup(state, setup, drive):
    report = dissstate.validate_regime(state, setup, drive)
    assert report.passed
    assert 'slow_sweep' not in report
    assert [c.name for c in report.checks] == [
        'single_mode', 'confinement', 'few_percent',
        'base_below_threshold', 'off_tuned']
    d = report.to_dict()
    assert d['passed'] is True
    assert len(d['checks']) == 5


def test_regime_reports_fast_sweep(state, setup, drive):
    sweep = dynamics.check_slow_sweep(pulses.PhaseFunction(pulses.square()),
                                      drive, setup)
    report = dissstate.validate_regime(state, setup, drive, slow_sweep=sweep)
    assert not report.passed
    assert not report['slow_sweep'].passed
    assert 'unbounded' in report['slow_sweep'].detail
    with pytest.raises(KeyError):
        report['colour']


def test_regime_warns_near_confinement_resonance(state, setup, drive):
    loose = setup.replace(a_bg=1e-7, off_tuned=False)
    with pytest.warns(RegimeWarning):
        report = dissstate.validate_regime(state, loose, drive)
    assert not report['confinement'].passed
    assert not report['off_tuned'].passed
