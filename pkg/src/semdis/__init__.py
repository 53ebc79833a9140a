"""Feature-similarity networks reconstructed from free-association norms."""

__version__ = "0.1.0"

from .compare import (
    ComparisonReport,
    ErrorScore,
    NeighborList,
    compare_lists,
    compare_networks,
    error_score,
    match_rate,
    neighbor_list,
)
from .core import (
    Vocabulary,
    WeightedNetwork,
    build_network,
    induced_subnetwork,
    read_network,
    symmetrize,
    write_network,
)
from .descriptors import (
    DescriptorReport,
    assortativity,
    clustering,
    describe,
    distribution_points,
    path_stats,
    strength_and_degree,
)
from .featuresim import fp_cosine_network
from .ingest import FeatureMatrix, intersect_vocabulary, parse_fa, parse_fp
from .rim import (
    AccumulatedTransition,
    RimConfig,
    SimilarityNetwork,
    TransitionMatrix,
    convergence_profile,
    cosine_project,
    mc_inheritance,
    power_sum,
    rim_pipeline,
    row_normalize,
)
