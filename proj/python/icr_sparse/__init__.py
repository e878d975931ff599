"""Sparse signal recovery with a spike-and-slab prior (ICR solver, baselines, oracle)."""

from ._core import (
    IcrError,
    __version__,
    compute_rho,
    elastic_net,
    generate,
    global_map,
    icr_solve,
    map_cost,
    mse,
    run_synth_bench_csv,
    support_match,
)

__all__ = [
    "IcrError",
    "__version__",
    "compute_rho",
    "elastic_net",
    "generate",
    "global_map",
    "icr_solve",
    "map_cost",
    "mse",
    "run_synth_bench_csv",
    "support_match",
]
