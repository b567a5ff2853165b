import json

import numpy as np
import pytest

from feshpulse import cli, export, pulses
from feshpulse.asymptotics import spectrum_square_closed
from feshpulse.errors import ConfigurationError

SQUARE = {'drive': {'T': 7.5e-4, 'epsilon': 100.0},
          'pulse': {'kind': 'square'}}


def write_config(directory, d, name='config.json'):
    path = directory / name
    path.write_text(json.dumps(d))
    return str(path)


def read_csv(path):
    with open(str(path)) as f:
        header = f.readline().strip()
    return header, np.loadtxt(str(path), delimiter=',', skiprows=1, ndmin=2)


def read_json(path):
    with open(str(path)) as f:
        return json.load(f)


def merged(**sections):
    d = json.loads(json.dumps(SQUARE))
    d.update(sections)
    return d


# -----------------------------------------------------------------------------
# Configuration
# -----------------------------------------------------------------------------


def test_default_config():
    config = cli.config_from_dict(cli.DEFAULT_CONFIG)
    assert config.shape.kind == 'square'
    assert config.drive.epsilon == 100.0
    assert config.method == 'auto'
    assert cli.resolve_method(config) == 'square'
    assert config.grids['omega_points'] == 4096
    assert config.optimize['budget'] == 500
    assert config.memory['t_m'] > 0


def test_physical_epsilon_from_field_pulse():
    config = cli.config_from_dict({'drive': {'T': 0.1, 'dB': 1e-5},
                                   'pulse': {'kind': 'square'}})
    assert config.setup.mu_res == pytest.approx(1e-2 * 9.2740100783e-24)
    assert config.drive.epsilon == pytest.approx(879.4, rel=1e-3)
    assert 500 <= config.drive.epsilon <= 2000


def test_consistent_epsilon_and_field_pulse():
    derived = cli.config_from_dict({'drive': {'T': 0.1, 'dB': 1e-5},
                                    'pulse': {'kind': 'square'}})
    config = cli.config_from_dict({
        'drive': {'T': 0.1, 'dB': 1e-5, 'epsilon': derived.drive.epsilon},
        'pulse': {'kind': 'square'}})
    assert config.drive.epsilon == pytest.approx(derived.drive.epsilon)


@pytest.mark.parametrize('d, field', [
    ({'pulse': {'kind': 'square'}}, 'drive'),
    ({'drive': {'T': 7.5e-4, 'epsilon': 100.0}}, 'pulse'),
    ({'drive': {'epsilon': 100.0}, 'pulse': {'kind': 'square'}}, 'drive.T'),
    ({'drive': {'T': -1.0, 'epsilon': 100.0}, 'pulse': {'kind': 'square'}},
     'drive.T'),
    ({'drive': {'T': 7.5e-4}, 'pulse': {'kind': 'square'}}, 'drive.epsilon'),
    ({'drive': {'T': 0.1, 'dB': 1e-5, 'epsilon': 1000.0},
      'pulse': {'kind': 'square'}}, 'conflicting'),
    ({'drive': {'T': 'long', 'epsilon': 100.0}, 'pulse': {'kind': 'square'}},
     'drive.T'),
    (merged(pulse={'kind': 'triangle'}), 'triangle'),
    (merged(pulse={'kind': 'trapezoid'}), 'pulse.edge_fraction'),
    (merged(method='exact'), 'exact'),
    (merged(setup={'preset': 'na23'}), 'na23'),
    (merged(setup={'a_bg': 5e-9}), 'setup.mu_res'),
    (merged(setup={'preset': 'li6', 'off_tuned': 'yes'}), 'setup.off_tuned'),
    (merged(setup={'preset': 'li6', 'delta_cm': 1}), 'setup.delta_cm'),
    (merged(colour='red'), 'colour'),
    (merged(optimize={'objective': 'sharpness'}), 'sharpness'),
])
def test_invalid_config(d, field):
    with pytest.raises(ConfigurationError) as excinfo:
        cli.config_from_dict(d)
    assert field in str(excinfo.value)


def test_parse_config_reads_file(tmp_path):
    (tmp_path / 'pulse.csv').write_text(
        't,P\n-1,0\n-0.5,1\n0,1\n0.5,1\n1,0\n')
    path = write_config(tmp_path, merged(
        pulse={'kind': 'tabulated', 'file': 'pulse.csv'}))
    config = cli.parse_config(path, overrides={'method': 'numeric'})
    assert config.shape.kind == 'tabulated'
    assert config.method == 'numeric'
    assert config.raw['method'] == 'numeric'


def test_parse_config_errors(tmp_path):
    with pytest.raises(ConfigurationError):
        cli.parse_config(str(tmp_path / 'missing.json'))
    bad = tmp_path / 'bad.json'
    bad.write_text('{"drive": ')
    with pytest.raises(ConfigurationError):
        cli.parse_config(str(bad))
    listing = tmp_path / 'list.json'
    listing.write_text('[1, 2]')
    with pytest.raises(ConfigurationError):
        cli.parse_config(str(listing))


def test_pulse_sequence_config():
    config = cli.config_from_dict(merged(pulse={'sequence': [
        {'kind': 'square'}, {'kind': 'square', 'delay': 4}]}))
    assert config.shape is None
    assert config.phase.ascent == pytest.approx(2.0)
    assert cli.resolve_method(config) == 'numeric'


def test_method_selection():
    gaussian = cli.config_from_dict(merged(pulse={'kind': 'gaussian'}))
    assert cli.resolve_method(gaussian) == 'airy'
    weak = cli.config_from_dict({'drive': {'T': 7.5e-4, 'epsilon': 10.0},
                                 'pulse': {'kind': 'gaussian'}})
    assert cli.resolve_method(weak) == 'numeric'
    trapezoid = cli.config_from_dict(merged(
        pulse={'kind': 'trapezoid', 'edge_fraction': 0.2}))
    assert cli.resolve_method(trapezoid) == 'numeric'
    assert cli._asymptotic_method(trapezoid) == 'stationary'


def test_method_must_fit_pulse():
    config = cli.config_from_dict(merged(method='airy'))
    with pytest.raises(ConfigurationError):
        cli.compute_spectrum(config, 'airy', [100.0])


def test_hash_ignores_output_location():
    a = cli.config_from_dict(merged(output={'dir': 'a'}))
    b = cli.config_from_dict(merged(output={'dir': 'b'}))
    assert a.hash == b.hash == export.config_hash(SQUARE)


# -----------------------------------------------------------------------------
# Subcommands
# -----------------------------------------------------------------------------


def test_spectrum_command(tmp_path):
    assert cli.main(['spectrum', '--out', str(tmp_path)]) == cli.EXIT_OK
    header, data = read_csv(tmp_path / 'spectrum.csv')
    assert header == 'omega_T,re,im,abs'
    assert data.shape == (4096, 4)
    nu, magnitude = data[:, 0], data[:, 3]
    exact = spectrum_square_closed(pulses.DimensionlessDrive(100.0, T=7.5e-4),
                                   nu)
    assert np.allclose(magnitude, exact.abs, rtol=1e-9, atol=1e-12)
    # the sidebands of the flat phase pull the main peak off epsilon
    main = nu > 20
    peak = nu[main][np.argmax(magnitude[main])]
    assert peak == nu[main][np.argmax(exact.abs[main])]
    assert peak == pytest.approx(100.0, abs=1.0)
    meta = read_json(tmp_path / 'spectrum.json')
    assert meta['method'] == 'square_closed'
    assert meta['config_hash'] == export.config_hash(cli.DEFAULT_CONFIG)
    assert meta['constants']['hbar'] == 1.054571817e-34
    assert meta['drive']['epsilon'] == 100.0


def test_output_is_deterministic(tmp_path):
    for name in ('a', 'b'):
        assert cli.main(['spectrum', '--method', 'numeric', '--grid-points',
                         '512', '--out', str(tmp_path / name)]) == 0
    for name in ('spectrum.csv', 'spectrum.json'):
        first = (tmp_path / 'a' / name).read_bytes()
        assert first == (tmp_path / 'b' / name).read_bytes()


def test_compare_square(tmp_path):
    assert cli.main(['compare', '--grid-points', '1024', '--out',
                     str(tmp_path)]) == cli.EXIT_OK
    header, data = read_csv(tmp_path / 'residuals.csv')
    assert header == 'omega_T,abs_numeric,abs_square_closed,residual'
    assert np.max(data[:, 3]) <= 1e-6
    assert read_json(tmp_path / 'residuals.json')['max_residual'] <= 1e-6


def test_compare_without_asymptotic_form(tmp_path):
    path = write_config(tmp_path, merged(pulse={'sequence': [
        {'kind': 'square'}, {'kind': 'square', 'delay': 4}]}))
    status = cli.main(['compare', '--config', path, '--grid-points', '64',
                       '--out', str(tmp_path)])
    assert status == cli.EXIT_CONFIG


def test_state_command(tmp_path):
    assert cli.main(['state', '--out', str(tmp_path)]) == cli.EXIT_OK
    header, data = read_csv(tmp_path / 'state.csv')
    assert header == 'p_cm,p_rel,re,im,prob_density'
    p_cm, p_rel, re, im, density = data.T
    assert len(data) == len(np.unique(p_cm)) * len(np.unique(p_rel))
    assert np.all(np.diff(p_rel[p_cm == p_cm[0]]) > 0)
    assert np.all(density >= 0)
    assert density == pytest.approx(re ** 2 + im ** 2, rel=1e-12, abs=1e-300)
    metrics = read_json(tmp_path / 'metrics.json')
    assert 0 < metrics['prob'] < 0.1
    assert metrics['peak_momentum'] > 0


def test_validate_command(tmp_path):
    assert cli.main(['validate', '--out', str(tmp_path)]) == cli.EXIT_OK
    report = read_json(tmp_path / 'report.json')
    assert report['passed'] is False
    failed = [c['name'] for c in report['checks'] if not c['passed']]
    assert failed == ['slow_sweep']
    assert cli.main(['validate', '--strict', '--out', str(tmp_path)]) == \
        cli.EXIT_INVALID


def test_strict_flags_unreliable_asymptotics(tmp_path):
    path = write_config(tmp_path, {
        'drive': {'T': 7.5e-4, 'epsilon': 10.0},
        'pulse': {'kind': 'gaussian'}, 'method': 'airy'})
    args = ['spectrum', '--config', path, '--grid-points', '64',
            '--out', str(tmp_path)]
    assert cli.main(args) == cli.EXIT_OK
    assert cli.main(args + ['--strict']) == cli.EXIT_INVALID


def test_decay_command(tmp_path):
    path = write_config(tmp_path, {
        'drive': {'T': 7.5e-4, 'epsilon': 50.0},
        'pulse': {'kind': 'gaussian'}})
    assert cli.main(['decay', '--config', path, '--out',
                     str(tmp_path)]) == cli.EXIT_OK
    header, data = read_csv(tmp_path / 'decay.csv')
    assert header == 't,gamma,absD'
    assert np.all(data[:, 2] == 1)
    header, data = read_csv(tmp_path / 'distribution.csv')
    assert header == 'E,n'
    assert read_json(tmp_path / 'distribution.json')['survival'] == 1.0


def test_decay_of_square_pulse(tmp_path):
    assert cli.main(['decay', '--out', str(tmp_path)]) == cli.EXIT_OK
    assert (tmp_path / 'decay.csv').exists()
    assert not (tmp_path / 'distribution.csv').exists()
    assert read_json(tmp_path / 'decay.json')['survival'] < 1


def test_numerical_error_exit_status(tmp_path):
    path = write_config(tmp_path, {
        'setup': {'preset': 'li6', 'dB_res': 1e-3},
        'drive': {'T': 7.5e-4, 'epsilon': 100.0},
        'pulse': {'kind': 'square'},
        'grids': {'time': {'points': 11, 'span': 2.0}}})
    status = cli.main(['decay', '--config', path, '--out', str(tmp_path)])
    assert status == cli.EXIT_NUMERIC


def test_decay_of_gaussian_crossing_threshold(tmp_path):
    path = write_config(tmp_path, {
        'drive': {'T': 7.5e-4, 'epsilon': 100.0},
        'pulse': {'kind': 'gaussian'}})
    assert cli.main(['decay', '--config', path, '--out',
                     str(tmp_path)]) == cli.EXIT_OK
    header, data = read_csv(tmp_path / 'decay.csv')
    assert 0 < data[-1, 2] < 1
    dist = read_json(tmp_path / 'distribution.json')
    assert 0 < dist['survival'] < 1


def test_optimize_command(tmp_path):
    path = write_config(tmp_path, {
        'drive': {'T': 7.5e-4, 'epsilon': 100.0},
        'pulse': {'kind': 'trapezoid', 'edge_fraction': 0.1},
        'grids': {'omega_T': {'max': 130.0, 'points': 256}},
        'optimize': {'budget': 3}})
    assert cli.main(['optimize', '--config', path, '--out',
                     str(tmp_path)]) == cli.EXIT_OK
    header, data = read_csv(tmp_path / 'trace.csv')
    assert header == 'iter,edge_fraction,score'
    assert np.array_equal(data[:, 0], np.arange(len(data)))
    assert np.all((data[:, 1] >= 0.01) & (data[:, 1] <= 0.45))


def test_configuration_error_exit_status(tmp_path):
    path = tmp_path / 'bad.json'
    path.write_text('not json')
    assert cli.main(['spectrum', '--config', str(path)]) == cli.EXIT_CONFIG


def test_unknown_command():
    with pytest.raises(SystemExit):
        cli.main(['plot'])
    with pytest.raises(ConfigurationError):
        cli.run('plot', cli.config_from_dict(cli.DEFAULT_CONFIG))


def test_value_error_exit_status(tmp_path, monkeypatch):
    def run(command, config, strict=False):
        raise ValueError("omega_T must be strictly increasing")
    monkeypatch.setattr(cli, 'run', run)
    assert cli.main(['spectrum', '--out', str(tmp_path)]) == cli.EXIT_CONFIG


def test_flag_must_be_boolean_exit_status(tmp_path):
    path = write_config(tmp_path, merged(
        setup={'preset': 'li6', 'delta_cm': 'no'}))
    assert cli.main(['state', '--config', path, '--out',
                     str(tmp_path)]) == cli.EXIT_CONFIG
