"""Stable-matching combinatorics: lattices, rotations, and counting.

The package computes stable matchings and their rotation structure,
counts and enumerates stable matchings through the downset bijection,
builds instances from geometric preference models with certified
comparisons, and generates count-preserving instances from bipartite
graphs (so counting stable matchings is as hard as counting bipartite
independent sets — and easy again in the one-attribute model).
"""

from .core import (
    Instance,
    Matching,
    ParseError,
    PersonId,
    Side,
    format_instance,
    format_matching,
    man,
    parse_instance,
    parse_matching,
    woman,
)
from .counting import (
    BipartiteGraph,
    Poset,
    SizeLimitError,
    brute_force_independent_sets,
    brute_force_stable_matchings,
    count_downsets,
    count_independent_sets,
    count_stable_matchings,
    enumerate_downsets,
    enumerate_stable_matchings,
    format_bipartite,
    matching_from_downset,
    parse_bipartite,
    poset_from_bipartite,
)
from .gale_shapley import blocking_pairs, is_stable, lattice_meet_join, propose_optimal
from .geometry import (
    AttributeSpec,
    EuclideanSpec,
    OneAttributeSpec,
    TieDetected,
    Value,
    compare_values,
    count_1attribute,
    format_geometric,
    induced_instance,
    instance_from_1attribute,
    instance_from_dot,
    instance_from_euclidean,
    parse_geometric,
)
from .reductions import (
    CyclePair,
    ReductionReport,
    build_instance,
    edge_cycles,
    gen_2euclidean,
    gen_3attribute,
    gen_partial_lists,
    read_tau,
    verify_reduction,
)
from .rotations import (
    Rotation,
    RotationPoset,
    apply_rotation,
    eliminated_pairs,
    explicitly_precedes,
    exposed_rotation_from,
    find_all_rotations,
    format_rotations,
    hasse_diagram,
    hasse_dot,
    parse_rotation,
    rotation_poset,
    suitor,
    truncated_lists,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
