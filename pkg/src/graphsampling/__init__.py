"""Sampling-set analysis for signals on weighted graphs.

Exact cut-off frequencies of node subsets, optimal sampling-set selection,
the Omega_k spectral lower bound, and random-sampling experiments.
"""

__version__ = "0.1.0"

from .cutoff import (
    CutoffReport,
    SamplingSet,
    bound_dim,
    exact_cutoff,
    is_uniqueness_set,
    omega_k_bound,
    reconstruct,
)
from .generators import (
    GenSpec,
    gen_cycle_bridge,
    gen_dense_sparse,
    gen_er_weighted,
    gen_geometric,
    generate,
)
from .graph import (
    WeightedGraph,
    degree_vector,
    load_graph,
    normalized_laplacian,
    save_graph,
)
from .sampling import (
    TrialReport,
    algorithm1_select,
    max_frequency_for_size,
    min_set_for_frequency,
    random_sampling_trials,
)
from .spectral import Spectrum, bandwidth, decompose, gft, graph_spectrum, igft, pw_dimension

__all__ = [
    "CutoffReport",
    "GenSpec",
    "SamplingSet",
    "Spectrum",
    "TrialReport",
    "WeightedGraph",
    "algorithm1_select",
    "bandwidth",
    "bound_dim",
    "decompose",
    "degree_vector",
    "exact_cutoff",
    "gen_cycle_bridge",
    "gen_dense_sparse",
    "gen_er_weighted",
    "gen_geometric",
    "generate",
    "gft",
    "graph_spectrum",
    "igft",
    "is_uniqueness_set",
    "load_graph",
    "max_frequency_for_size",
    "min_set_for_frequency",
    "normalized_laplacian",
    "omega_k_bound",
    "pw_dimension",
    "random_sampling_trials",
    "reconstruct",
    "save_graph",
]
