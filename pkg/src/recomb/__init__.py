"""Balanced connected partitions under recombination moves."""

from .graphs import (
    BlockCutDecomposition,
    Graph,
    GraphFormatError,
    Tree,
    block_cut,
    connected_components,
    find_low_degree_block_vertex,
    format_graph,
    is_connected,
    parse_graph,
    spanning_tree,
    tree_center,
)
from .partitions import (
    SLACK_INF,
    MoveError,
    Partition,
    PartitionKey,
    RecombMove,
    SlackBound,
    ValidationReport,
    apply_move,
    canonical_key,
    enumerate_moves,
    format_moves,
    format_partition,
    parse_moves,
    parse_partition,
    partition_from_key,
    validate,
)
from .oracle import (
    ConfigGraph,
    OracleCapError,
    SpaceStats,
    WalkTrace,
    build_space,
    decide_br,
    enumerate_partitions,
    recom_walk,
    space_stats,
)
from .instances import (
    arc_partition,
    gen_cycle,
    gen_grid,
    gen_negative,
    gen_path,
    gen_random_connected,
)
from .ncl import (
    NCLInstance,
    Orientation,
    ReductionOutput,
    ReductionShapeError,
    check_orientation,
    flip_pairs,
    format_map,
    format_ncl,
    parse_ncl,
    partition_to_orientation,
    reduce_ncl,
    subdivide_ncl,
)
from .sequences import AbstractMove, abstract_of, inverted_abstract, replay, resolve_moves
from .unbounded import make_singleton_pair, transform_unbounded
from .hamiltonian import (
    CycleOrder,
    Fragment,
    FragmentTree,
    build_fragment_tree,
    canonical_transform,
    canonicalize,
    fragment_count,
    fragments_of,
    find_small_adjacent_pair,
    step_average,
    step_light,
    steps_singleton,
    transform_hamiltonian,
)

__version__ = "0.1.0"
