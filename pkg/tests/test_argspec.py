"""Make sure that arguments of related functions don't diverge."""

from inspect import signature

from feshpulse import asymptotics, cli, dissstate, optimize, spectrum


def defaults(func):
    return dict((k, v) for k, v in signature(func).parameters.items()
                if v.default is not v.empty)


def remove_items(collection, subset):
    """From a collection of defaults, remove a subset and return the rest."""
    the_rest = collection.copy()
    for name, param in subset.items():
        assert (name, the_rest[name].default) == (name, param.default)
        del the_rest[name]
    return the_rest


def test_order_of_spectrum_arguments():
    for func in (spectrum.spectrum_numeric, spectrum.quadrature_oracle,
                 asymptotics.spectrum_stationary_phase):
        assert list(signature(func).parameters)[:3] == [
            'phase', 'drive', 'omega_T']
    for func in (asymptotics.spectrum_gaussian_uniform,
                 asymptotics.spectrum_square_closed):
        assert list(signature(func).parameters)[:2] == ['drive', 'omega_T']


def test_state_defaults():
    assemble_defaults = defaults(dissstate.assemble_state)
    norm_defaults = defaults(dissstate.spectral_norm)

    # Same default values as spectral_norm()
    assemble_defaults = remove_items(assemble_defaults, norm_defaults)
    assert not assemble_defaults  # No more arguments should be left


def test_coverage_tolerance_defaults():
    tol = defaults(dissstate.assemble_state)['coverage_tol'].default
    assert defaults(dissstate.square_band)['coverage_tol'].default == tol
    assert cli.config_from_dict(cli.DEFAULT_CONFIG).grids['coverage_tol'] \
        == tol


def test_optimizer_defaults_match_configuration():
    config = cli.config_from_dict(cli.DEFAULT_CONFIG)
    opt_defaults = defaults(optimize.optimize_pulse)
    assert config.optimize['budget'] == opt_defaults['budget'].default
    assert config.optimize['objective'] == opt_defaults['objective'].default
    assert config.grids['omega_points'] == \
        defaults(optimize.default_grid)['points'].default
