"""Command-line front end.

Usage::

    feshpulse {spectrum,state,decay,optimize,validate,compare}
              [--config PATH] [--out DIR]
              [--method {numeric,airy,stationary,square,auto}]
              [--grid-points N] [--strict] [--verbose]

The configuration is a JSON file (see :func:`parse_config`); without
``--config`` the 6Li reference setup with a square pulse at
``epsilon = 100`` is used.  Exit status: 0 on success, 2 on a
configuration error, 3 on a numerical error, 4 if ``--strict`` is given
and a validity check fails.

"""
import argparse as _argparse
import json as _json
import logging as _logging
import os as _os
import sys as _sys

import numpy as _np

from . import __version__
from . import asymptotics as _asymptotics
from . import dissstate as _dissstate
from . import dynamics as _dynamics
from . import export as _export
from . import optimize as _optimize
from . import pulses as _pulses
from .constants import BOHR_RADIUS, HBAR
from .errors import ConfigurationError, FeshPulseError
from .spectrum import spectrum_numeric

_log = _logging.getLogger(__name__)

_commands = ('spectrum', 'state', 'decay', 'optimize', 'validate', 'compare')
_methods = ('numeric', 'airy', 'stationary', 'square', 'auto')

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_INVALID = 4

DEFAULT_CONFIG = {
    'setup': {'preset': 'li6'},
    'drive': {'T': 7.5e-4, 'epsilon': 100.0},
    'pulse': {'kind': 'square'},
}

# relative mismatch tolerated between a given epsilon and mu_res*dB*T/hbar
_CONFLICT_TOLERANCE = 1e-9
_FLAGS = ('off_tuned', 'delta_cm')


def _section(d, name, required=False):
    value = d.get(name)
    if value is None:
        if required:
            raise ConfigurationError("missing field: {0!r}".format(name))
        return {}
    if not isinstance(value, dict):
        raise ConfigurationError(
            "field {0!r} must be an object: {1!r}".format(name, value))
    return value


def _number(d, name, prefix, default=None):
    value = d.get(name, default)
    if value is None:
        raise ConfigurationError("missing field: {0!r}".format(prefix + name))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigurationError("field {0!r} must be a number: {1!r}".format(
            prefix + name, value))
    return float(value)


def _flag(d, name, prefix):
    value = d[name]
    if not isinstance(value, bool):
        raise ConfigurationError("field {0!r} must be true or false: "
                                 "{1!r}".format(prefix + name, value))
    return value


def _parse_setup(d):
    if d.get('preset', 'li6' if not d else None) == 'li6':
        changes = {k: (_flag(d, k, 'setup.') if k in _FLAGS else
                       _number(d, k, 'setup.'))
                   for k in d if k != 'preset'}
        return _dynamics.li6_setup(**changes)
    if 'preset' in d:
        raise ConfigurationError("Unknown setup preset: {0!r}".format(
            d['preset']))
    values = {name: _number(d, name, 'setup.')
              for name in _dynamics._setup_fields}
    for name in _FLAGS:
        if name in d:
            values[name] = _flag(d, name, 'setup.')
    unknown = set(d) - set(values)
    if unknown:
        raise ConfigurationError(
            "Unknown setup fields: {0!r}".format(sorted(unknown)))
    return _dynamics.PhysicalSetup(**values)


def _parse_drive(d, setup):
    T = _number(d, 'T', 'drive.')
    if not T > 0:
        raise ConfigurationError("field 'drive.T' must be positive: "
                                 "{0!r}".format(T))
    epsilon = d.get('epsilon')
    dB = d.get('dB')
    if epsilon is None and dB is None:
        raise ConfigurationError("missing field: give 'drive.epsilon' or "
                                 "'drive.dB'")
    if dB is not None:
        dB = _number(d, 'dB', 'drive.')
        derived = setup.mu_res * dB * T / HBAR
        if epsilon is not None:
            epsilon = _number(d, 'epsilon', 'drive.')
            if abs(derived - epsilon) > _CONFLICT_TOLERANCE * abs(epsilon):
                raise ConfigurationError(
                    "conflicting fields 'drive.epsilon' = {0!r} and "
                    "'drive.dB' (epsilon = {1!r})".format(epsilon, derived))
        return setup.make_drive(T, dB=dB)
    return setup.make_drive(T, epsilon=_number(d, 'epsilon', 'drive.'))


def _parse_shape(d, base_dir, prefix):
    kind = d.get('kind')
    if kind is None:
        raise ConfigurationError("missing field: {0!r}".format(
            prefix + 'kind'))
    if kind == 'tabulated':
        if 'file' not in d:
            raise ConfigurationError("missing field: {0!r}".format(
                prefix + 'file'))
        return _pulses.read_tabulated(_os.path.join(base_dir, d['file']))
    if kind in ('trapezoid', 'raised_cosine'):
        default = 1.0 if kind == 'raised_cosine' else None
        return _pulses.PulseShape(kind, edge_fraction=_number(
            d, 'edge_fraction', prefix, default))
    return _pulses.PulseShape(kind)


def _parse_pulse(d, base_dir):
    if 'sequence' in d:
        items = d['sequence']
        if not isinstance(items, list):
            raise ConfigurationError("field 'pulse.sequence' must be a list")
        elements = []
        for i, item in enumerate(items):
            prefix = 'pulse.sequence[{0}].'.format(i)
            if not isinstance(item, dict):
                raise ConfigurationError("{0!r} must be an object".format(
                    prefix[:-1]))
            elements.append((_parse_shape(item, base_dir, prefix),
                             _number(item, 'height', prefix, 1.0),
                             _number(item, 'duration', prefix, 1.0),
                             _number(item, 'delay', prefix, 0.0)))
        sequence = _pulses.PulseSequence(elements)
        return sequence, _pulses.concatenate(sequence)
    shape = _parse_shape(d, base_dir, 'pulse.')
    return shape, _pulses.PhaseFunction(shape)


class RunConfig(object):
    """Validated run configuration.

    Do not instantiate directly, use :func:`parse_config` or
    :func:`config_from_dict`.

    """

    def __init__(self, raw, setup, drive, pulse, phase, grids, method,
                 optimize, memory, output):
        self._raw = raw
        self.setup = setup
        self.drive = drive
        self.pulse = pulse
        self.phase = phase
        self.grids = grids
        self.method = method
        self.optimize = optimize
        self.memory = memory
        self.output = output

    raw = property(lambda self: self._raw)
    """The configuration dict, including command-line overrides."""

    @property
    def hash(self):
        """SHA-256 of :attr:`raw` without its ``output`` section."""
        return _export.config_hash(
            {k: v for k, v in self._raw.items() if k != 'output'})

    @property
    def shape(self):
        """The single :class:`~feshpulse.pulses.PulseShape`, or None for
        a sequence."""
        if isinstance(self.pulse, _pulses.PulseShape):
            return self.pulse
        return None

    def __repr__(self):
        return "RunConfig(pulse={0!r}, drive={1!r}, method={2!r})".format(
            self.pulse, self.drive, self.method)


def config_from_dict(d, base_dir='.'):
    """Validate a configuration dict into a :class:`RunConfig`.

    Paths inside the configuration are resolved relative to `base_dir`.

    """
    if not isinstance(d, dict):
        raise ConfigurationError("configuration must be a JSON object")
    unknown = set(d) - {'setup', 'drive', 'pulse', 'grids', 'method',
                        'optimize', 'memory', 'output'}
    if unknown:
        raise ConfigurationError(
            "Unknown configuration fields: {0!r}".format(sorted(unknown)))
    setup = _parse_setup(_section(d, 'setup'))
    drive = _parse_drive(_section(d, 'drive', required=True), setup)
    pulse, phase = _parse_pulse(_section(d, 'pulse', required=True), base_dir)

    grids = _section(d, 'grids')
    omega = _section(grids, 'omega_T')
    time = _section(grids, 'time')
    momentum = _section(grids, 'momentum')
    parsed_grids = {
        'omega_max': omega.get('max'),
        'omega_points': int(_number(omega, 'points', 'grids.omega_T.', 4096)),
        'time_points': int(_number(time, 'points', 'grids.time.', 2001)),
        'time_span': time.get('span'),
        'momentum_points': momentum.get('points'),
        'cm_points': int(_number(momentum, 'cm_points', 'grids.momentum.',
                                 65)),
        'coverage_tol': _number(grids, 'coverage_tol', 'grids.', 1e-4),
    }
    if parsed_grids['omega_max'] is not None and not (
            _number(omega, 'max', 'grids.omega_T.') > 0):
        raise ConfigurationError("field 'grids.omega_T.max' must be positive")
    if parsed_grids['omega_points'] < 4:
        raise ConfigurationError("field 'grids.omega_T.points' must be at "
                                 "least 4")
    if parsed_grids['time_points'] < 2:
        raise ConfigurationError("field 'grids.time.points' must be at "
                                 "least 2")
    if parsed_grids['time_span'] is not None and not (
            _number(time, 'span', 'grids.time.') > 0):
        raise ConfigurationError("field 'grids.time.span' must be positive")
    if parsed_grids['momentum_points'] is not None:
        parsed_grids['momentum_points'] = int(_number(
            momentum, 'points', 'grids.momentum.'))

    method = d.get('method', 'auto')
    if method not in _methods:
        raise ConfigurationError("Unknown method: {0!r}".format(method))

    opt = _section(d, 'optimize')
    family = opt.get('family', 'trapezoid')
    bounds = opt.get('bounds', [[0.01, 0.45]] if family == 'trapezoid'
                     else [[0.05, 1.0]])
    optimize = {
        'family': _optimize.PulseFamily(family, bounds),
        'objective': opt.get('objective', 'ripple_energy'),
        'budget': int(_number(opt, 'budget', 'optimize.', 500)),
    }
    _optimize.objective_function(optimize['objective'])

    memory = _section(d, 'memory')
    if 't_m' in memory:
        t_m = _number(memory, 't_m', 'memory.')
    else:
        t_m = _dynamics.memory_time(
            _number(memory, 'dx', 'memory.', 100 * BOHR_RADIUS),
            setup.m)
    if not t_m > 0:
        raise ConfigurationError("field 'memory.t_m' must be positive")

    output = _section(d, 'output')
    out_dir = output.get('dir', '.')
    return RunConfig(d, setup, drive, pulse, phase, parsed_grids, method,
                     optimize, {'t_m': t_m}, {'dir': out_dir})


def _read_json(path):
    try:
        with open(path) as f:
            d = _json.load(f)
    except (IOError, OSError) as e:
        raise ConfigurationError("Error opening {0!r}: {1}".format(path, e))
    except ValueError as e:
        raise ConfigurationError("Invalid JSON in {0!r}: {1}".format(path, e))
    if not isinstance(d, dict):
        raise ConfigurationError("configuration must be a JSON object")
    return d


def parse_config(path, overrides=None):
    """Read and validate a JSON configuration file.

    Parameters
    ----------
    path : str
        Configuration file.
    overrides : dict, optional
        Top-level entries replacing those of the file.

    Returns
    -------
    RunConfig

    Raises
    ------
    ConfigurationError
        If the file cannot be read, is not valid JSON, a field is
        missing or invalid, or epsilon and dB contradict each other.

    """
    d = _read_json(path)
    if overrides:
        d.update(overrides)
    return config_from_dict(d, _os.path.dirname(_os.path.abspath(path)))


def resolve_method(config):
    """Map ``'auto'`` to the method that suits the configured pulse."""
    if config.method != 'auto':
        return config.method
    shape = config.shape
    if shape is not None and shape.kind == 'square':
        return 'square'
    if (shape is not None and shape.kind == 'gaussian' and
            config.drive.epsilon >= _asymptotics.VALIDITY_FLOOR):
        return 'airy'
    return 'numeric'


def _asymptotic_method(config):
    if config.method not in ('numeric', 'auto'):
        return config.method
    shape = config.shape
    if shape is not None and shape.kind == 'square':
        return 'square'
    if shape is not None and shape.kind == 'gaussian':
        return 'airy'
    if config.phase.symmetric:
        return 'stationary'
    raise ConfigurationError("no asymptotic method for pulse {0!r}".format(
        config.pulse))


def compute_spectrum(config, method, omega_T):
    """Evaluate the configured pulse's spectrum by `method`."""
    shape = config.shape
    drive = config.drive
    if method == 'numeric':
        return spectrum_numeric(config.phase, drive, omega_T)
    if method == 'airy':
        if shape is None or shape.kind != 'gaussian':
            raise ConfigurationError("method 'airy' needs a single gaussian "
                                     "pulse, got {0!r}".format(config.pulse))
        return _asymptotics.spectrum_gaussian_uniform(drive, omega_T)
    if method == 'square':
        if shape is None or shape.kind != 'square':
            raise ConfigurationError("method 'square' needs a single square "
                                     "pulse, got {0!r}".format(config.pulse))
        return _asymptotics.spectrum_square_closed(drive, omega_T)
    if method == 'stationary':
        if not config.phase.symmetric:
            raise ConfigurationError("method 'stationary' needs a symmetric "
                                     "pulse")
        return _asymptotics.spectrum_stationary_phase(config.phase, drive,
                                                      omega_T)
    raise ConfigurationError("Unknown method: {0!r}".format(method))


def _needs_epsilon(config):
    if not config.drive.epsilon > 0:
        raise ConfigurationError("this command needs epsilon > 0")


def omega_grid(config, top=None):
    """Reduced frequency grid ``(0, max]`` of the configuration.

    The default maximum is 1.3*eps, scaled by the largest height ratio
    for pulse sequences.

    """
    points = config.grids['omega_points']
    if top is None:
        top = config.grids['omega_max']
    if top is None:
        _needs_epsilon(config)
        scale = 1.0 if config.shape is not None else config.phase.peak
        top = 1.3 * config.drive.epsilon * scale
    return _np.linspace(top / points, top, points)


def time_grid(config):
    """Time grid [s] centered on the pulse."""
    span = config.grids['time_span']
    if span is None:
        left, right = config.phase.window
        span = 1.2 * (right - left)
    T = config.drive.T
    return _np.linspace(-span / 2 * T, span / 2 * T,
                        config.grids['time_points'])


def _path(config, name):
    return _os.path.join(config.output['dir'], name)


def _state(config, method):
    _needs_epsilon(config)
    if method == 'stationary':
        raise ConfigurationError("stationary-phase spectra leave gaps and "
                                 "cannot be normalized; use 'numeric'")
    setup, drive = config.setup, config.drive
    tol = config.grids['coverage_tol']
    shape = config.shape
    if shape is not None and shape.kind == 'square':
        nu = _dissstate.square_band(drive, setup, coverage_tol=tol)
    else:
        top = config.grids['omega_max']
        if top is None:
            top = 1.6 * drive.epsilon * max(1.0, config.phase.peak)
        points = config.grids['omega_points']
        step = top / points
        start = max(step, float(drive.omega_T(setup.U_bg)) - step)
        nu = _np.linspace(start, top, points)
    grid = compute_spectrum(config, method, nu)
    p_rel = _dissstate.momentum_grid(setup, drive, nu[-1],
                                     config.grids['momentum_points'])
    p_cm = None if setup.delta_cm else _dissstate.cm_grid(
        setup, config.grids['cm_points'])
    return _dissstate.assemble_state(grid, setup, p_rel=p_rel, p_cm=p_cm,
                                     coverage_tol=tol)


def _unreliable(grid):
    return 'asymptotics unreliable' in grid.info.get('flags', ())


def _rising_run(values):
    """Slice of the longest run of strictly increasing values."""
    best = (0, 1)
    start = 0
    for i in range(1, len(values) + 1):
        if i == len(values) or not values[i] > values[i - 1]:
            if i - start > best[1] - best[0]:
                best = (start, i)
            start = i
    return slice(*best)


def _run_spectrum(config, strict):
    method = resolve_method(config)
    grid = compute_spectrum(config, method, omega_grid(config))
    _export.write_spectrum(_path(config, 'spectrum.csv'), grid, config.hash)
    if strict and _unreliable(grid):
        return EXIT_INVALID
    return EXIT_OK


def _run_state(config, strict):
    state = _state(config, resolve_method(config))
    _export.write_state(_path(config, 'state.csv'), state, config.hash)
    metrics = _dissstate.distribution_metrics(state)
    _export.write_json(_path(config, 'metrics.json'), dict(
        metrics._asdict(), prob=state.prob, config_hash=config.hash))
    if strict and _unreliable(state.spectrum):
        return EXIT_INVALID
    return EXIT_OK


def _run_decay(config, strict):
    setup, drive, phase = config.setup, config.drive, config.phase
    times = time_grid(config)
    energy = _dynamics.resonance_energy(phase, drive, setup, times)
    run = _rising_run(energy)
    if run.stop - run.start >= 3:
        dist = _dynamics.quasi_stationary_distribution(
            times[run], energy[run], setup)
        _export.write_distribution(_path(config, 'distribution.csv'), dist,
                                   config.hash)
    else:
        _log.info("pulse has no rising ramp; n(E) not written")
    profile = _dynamics.decay_profile(phase, drive, setup, times)
    _export.write_decay(_path(config, 'decay.csv'), profile, config.hash)
    return EXIT_OK


def _run_optimize(config, strict):
    options = config.optimize
    family = options['family']
    grid = (None if config.grids['omega_max'] is None else
            omega_grid(config))
    result = _optimize.optimize_pulse(family, config.drive,
                                      options['objective'], grid=grid,
                                      budget=options['budget'])
    _log.info("best %s = %s, score %.6g", family.kind, list(result.params),
              result.score)
    _export.write_trace(_path(config, 'trace.csv'), result,
                        ['edge_fraction'], config.hash)
    return EXIT_OK


def _run_validate(config, strict):
    state = _state(config, resolve_method(config))
    sweep = _dynamics.check_slow_sweep(config.phase, config.drive,
                                       config.setup, config.memory['t_m'])
    report = _dissstate.validate_regime(state, config.setup, config.drive,
                                        slow_sweep=sweep)
    _export.write_json(_path(config, 'report.json'), dict(
        report.to_dict(), slow_sweep=sweep._asdict(), prob=state.prob,
        config_hash=config.hash))
    for check in report.checks:
        _log.info("%-20s %s  %s", check.name,
                  'pass' if check.passed else 'FAIL', check.detail)
    if strict and not report.passed:
        return EXIT_INVALID
    return EXIT_OK


def _run_compare(config, strict):
    nu = omega_grid(config)
    reference = compute_spectrum(config, 'numeric', nu)
    other = compute_spectrum(config, _asymptotic_method(config), nu)
    _export.write_residuals(_path(config, 'residuals.csv'), reference, other,
                            config.hash)
    if strict and _unreliable(other):
        return EXIT_INVALID
    return EXIT_OK


_runners = {
    'spectrum': _run_spectrum,
    'state': _run_state,
    'decay': _run_decay,
    'optimize': _run_optimize,
    'validate': _run_validate,
    'compare': _run_compare,
}


def run(command, config, strict=False):
    """Run one subcommand and write its artifacts.

    Returns the exit status; errors are raised, see :func:`main` for
    their mapping to exit codes.

    """
    if command not in _runners:
        raise ConfigurationError("Unknown command: {0!r}".format(command))
    if not _os.path.isdir(config.output['dir']):
        _os.makedirs(config.output['dir'])
    _log.info("%s: %r", command, config)
    return _runners[command](config, strict)


def _parser():
    parser = _argparse.ArgumentParser(
        prog='feshpulse',
        description="Dissociation spectra of Feshbach molecules driven by "
                    "magnetic field pulses.")
    parser.add_argument('command', choices=_commands)
    parser.add_argument('--config', metavar='PATH',
                        help="JSON configuration file")
    parser.add_argument('--out', metavar='DIR', help="output directory")
    parser.add_argument('--method', choices=_methods)
    parser.add_argument('--grid-points', type=int, metavar='N',
                        help="number of omega*T grid points")
    parser.add_argument('--strict', action='store_true',
                        help="exit with status 4 if a validity check fails")
    parser.add_argument('--verbose', action='store_true')
    parser.add_argument('--version', action='version',
                        version='%(prog)s ' + __version__)
    return parser


def _overrides(args, d):
    d = _json.loads(_json.dumps(d))
    if args.out is not None:
        d.setdefault('output', {})['dir'] = args.out
    if args.method is not None:
        d['method'] = args.method
    if args.grid_points is not None:
        grids = d.setdefault('grids', {})
        grids.setdefault('omega_T', {})['points'] = args.grid_points
    return d


def main(argv=None):
    """Entry point of the ``feshpulse`` command."""
    args = _parser().parse_args(argv)
    _logging.basicConfig(
        level=_logging.DEBUG if args.verbose else _logging.INFO,
        format='%(levelname)s %(name)s: %(message)s')
    _logging.captureWarnings(True)
    try:
        if args.config is None:
            d, base_dir = DEFAULT_CONFIG, '.'
        else:
            d = _read_json(args.config)
            base_dir = _os.path.dirname(_os.path.abspath(args.config))
        config = config_from_dict(_overrides(args, d), base_dir)
        return run(args.command, config, strict=args.strict)
    except ConfigurationError as e:
        _log.error("configuration error: %s", e)
        return EXIT_CONFIG
    except FeshPulseError as e:
        _log.error("%s: %s", type(e).__name__, e)
        return EXIT_NUMERIC
    except ValueError as e:
        _log.error("invalid input: %s", e)
        return EXIT_CONFIG


if __name__ == '__main__':
    _sys.exit(main())
