"""Brouwer degree computation and oscillation/BMO diagnostics."""

from topodeg._core import (  # noqa: F401
    Domain,
    MapField,
    __version__,
    bmo_seminorm,
    cov_check,
    degree_counting,
    degree_integral,
    degree_pullback,
    degree_raster,
    degree_winding,
    domain_from_spec,
    elastic_energy,
    essential_oscillation,
    f_set_diam,
    immersion_energy,
    load_grid_map,
    map_from_spec,
    mean_oscillation,
    preset,
    run_cli,
    sample_to_grid,
    save_grid_map,
    set_jobs,
    tilde_map,
    vmo_degree,
    vmo_modulus,
    zoo_names,
)
