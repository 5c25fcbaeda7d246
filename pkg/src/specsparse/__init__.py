"""Spectral sparsification by graph partitioning and edge sampling."""
from .cuts import Cut, conductance, exact_sparsest_cut, ideal_decomp, max_volume_sparse_cut, sweep_cut
from .graph import Decomposition, DegreeContext, GraphError, WeightedGraph, build_graph
from .io import read_graph, write_graph
from .partitioning import ContractConstants, PartitionOutcome, approx_cut, partition, partition2
from .sampling import SampleParams, SampleResult, edge_probability, sample_graph, sample_subgraph
from .spectral import (
    ApproximationReport,
    lemma1_bound_check,
    loewner_leq,
    normalized_lambda2,
    path_domination_check,
    quadratic_form,
    relative_norm,
    sigma_approximation,
)
from .trace import Trace
from .unweighted import ContractViolation, PieceList, SparsifyConfig, partition_and_sample, unwted_sparsify
from .weighted import (
    BlowUpReport,
    ClusterMap,
    LevelDecomposition,
    blow_up,
    bounded_sparsify,
    contract,
    greedy_subdivide,
    pullback,
    sparsify,
    sparsify2,
    truncate_weights,
)

__version__ = "0.1.0"
