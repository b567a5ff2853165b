"""CSV data files and their JSON sidecars.

Every CSV written here has a header line and numbers formatted with
``'%.17g'``, so identical inputs give byte-identical files.  Next to each
``name.csv`` a ``name.json`` sidecar records the configuration hash, the
method tag, the tolerance reached and the physical constants used.

"""
import hashlib as _hashlib
import json as _json
import logging as _logging
import os as _os

import numpy as _np

from . import __version__
from .constants import HBAR, MU_B

_log = _logging.getLogger(__name__)

FLOAT_FORMAT = '%.17g'


def config_hash(config):
    """SHA-256 of the canonical JSON form of a configuration dict."""
    payload = _json.dumps(config, sort_keys=True, separators=(',', ':'))
    return _hashlib.sha256(payload.encode('utf-8')).hexdigest()


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, _np.ndarray):
        return [_jsonable(v) for v in value.tolist()]
    if isinstance(value, _np.generic):
        return value.item()
    if isinstance(value, float) and not _np.isfinite(value):
        return repr(value)
    return value


def write_json(path, obj):
    """Write `obj` as indented, key-sorted JSON."""
    with open(path, 'w') as f:
        _json.dump(_jsonable(obj), f, indent=2, sort_keys=True)
        f.write('\n')
    _log.info("wrote %s", path)


def write_csv(path, columns, data, sidecar=None):
    """Write columns of numbers to `path` and an optional sidecar.

    Parameters
    ----------
    path : str
        Target ``.csv`` file.
    columns : sequence of str
        Header names.
    data : sequence of array_like
        One 1-D array per column, all of equal length.
    sidecar : dict, optional
        Metadata written to the ``.json`` file of the same stem.

    """
    table = _np.column_stack([_np.asarray(c, dtype=float) for c in data])
    if table.shape[1] != len(columns):
        raise ValueError("{0} columns named, {1} given".format(
            len(columns), table.shape[1]))
    _np.savetxt(path, table, fmt=FLOAT_FORMAT, delimiter=',',
                header=','.join(columns), comments='')
    _log.info("wrote %s (%d rows)", path, len(table))
    if sidecar is not None:
        write_json(_os.path.splitext(path)[0] + '.json', sidecar)


def sidecar(hash_, method, tolerance=None, **extra):
    """Standard sidecar contents."""
    d = {'config_hash': hash_, 'method': method, 'tolerance': tolerance,
         'version': __version__,
         'constants': {'hbar': HBAR, 'mu_B': MU_B}}
    d.update(extra)
    return d


def write_spectrum(path, grid, hash_):
    """Write a :class:`~feshpulse.spectrum.SpectrumGrid` as
    ``omega_T,re,im,abs``."""
    info = dict(grid.info)
    meta = sidecar(hash_, grid.method, info.pop('tolerance', None),
                   drive=grid.drive.to_dict() if grid.drive else None,
                   info=info)
    write_csv(path, ('omega_T', 're', 'im', 'abs'),
              (grid.omega_T, grid.values.real, grid.values.imag, grid.abs),
              meta)


def write_state(path, state, hash_):
    """Write a state as ``p_cm,p_rel,re,im,prob_density``.

    One row per point of the momentum grid, p_rel running fastest.  In
    the delta approximation the p_cm column is all zeros.

    """
    p_cm, p_rel = _np.meshgrid(state.p_cm, state.p_rel, indexing='ij')
    amplitude = state.amplitude.ravel()
    meta = sidecar(hash_, state.spectrum.method,
                   state.spectrum.info.get('tolerance'),
                   prob=state.prob, norm_sq=state.norm_sq,
                   delta_cm=state.delta_cm, info=state.info)
    write_csv(path, ('p_cm', 'p_rel', 're', 'im', 'prob_density'),
              (p_cm.ravel(), p_rel.ravel(), amplitude.real, amplitude.imag,
               state.density.ravel()), meta)


def write_decay(path, profile, hash_):
    """Write a decay profile as ``t,gamma,absD``."""
    write_csv(path, ('t', 'gamma', 'absD'),
              (profile.times, profile.gamma, profile.D),
              sidecar(hash_, 'decay', survival=profile.survival))


def write_distribution(path, dist, hash_):
    """Write a quasi-stationary n(E) as ``E,n``."""
    write_csv(path, ('E', 'n'), (dist.energies, dist.density),
              sidecar(hash_, 'quasi_stationary', survival=dist.survival,
                      dissociated=dist.dissociated))


def write_trace(path, result, names, hash_):
    """Write an optimization trace as ``iter,<params...>,score``."""
    params = _np.array([p for p, _ in result.trace], dtype=float)
    scores = [s for _, s in result.trace]
    columns = ('iter',) + tuple(names) + ('score',)
    data = ([_np.arange(len(scores))] + [params[:, k] for k in
                                          range(params.shape[1])] + [scores])
    write_csv(path, columns, data,
              sidecar(hash_, 'nelder_mead', best=result.params,
                      score=result.score, exhausted=result.exhausted,
                      iterations=result.iterations))


def write_residuals(path, reference, other, hash_):
    """Write two spectra on the same grid and their difference."""
    residual = _np.abs(other.values - reference.values)
    write_csv(path, ('omega_T', 'abs_' + reference.method,
                     'abs_' + other.method, 'residual'),
              (reference.omega_T, reference.abs, other.abs, residual),
              sidecar(hash_, '{0}-vs-{1}'.format(reference.method,
                                                 other.method),
                      reference.info.get('tolerance'),
                      max_residual=float(_np.nanmax(residual))))
