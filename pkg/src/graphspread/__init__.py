"""Uncertainty curves for signals on graphs and the block structure that shrinks their search space."""

from .graph_core import (
    DistanceDiagonal,
    Graph,
    distance_matrix,
    gen_complete,
    gen_cycle,
    gen_path,
    gen_random,
    gen_star,
    geodesic_distances,
    normalized_laplacian,
)
from .reduction import (
    BlockPartition,
    ReducedSignal,
    SampleCloud,
    expand_signal,
    find_block_structure,
    hypersphere_grid,
    is_circulant,
    is_constant_by_row,
    pareto_frontier,
    sample_cloud,
    verify_property1,
)
from .spectral import EigenBasis, gft, graph_spread, spectral_spread, sym_eig
from .uncertainty import (
    SpreadPoint,
    UncertaintyCurve,
    curve_endpoints,
    curve_eval,
    curve_point,
    m_alpha,
    min_eigpair,
    sandwich_curve,
    uncertainty_curve,
)

__version__ = "0.1.0"
