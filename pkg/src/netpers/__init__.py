"""Persistent homology of weighted directed networks."""
from .diagmetric import Dendrogram, DistanceMatrix, bottleneck_distance, bottleneck_matrix, single_linkage
from .filtration import (
    FilteredComplex,
    Relation,
    cech_circle_complex,
    dowker_pair_from_relation,
    dowker_sink_filtration,
    dowker_source_filtration,
    rips_filtration,
)
from .homology import PersistenceDiagram, betti_numbers, compute_persistence, induced_map_rank
from .network import (
    BudgetExceeded,
    Network,
    NetworkParseError,
    cycle_network,
    load_network,
    max_symmetrize,
    network_distance_correspondences,
    network_distance_maps,
    pair_swap,
    transpose,
)

__version__ = "0.1.0"
