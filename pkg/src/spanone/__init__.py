"""Span-one linked partition ideals, their generating functions, and
machine-checkable factorizations of the attached q-difference systems."""

from importlib import resources

from .series import DEFAULT_Q_MAX, Series, TruncationRangeError, geom_inverse, monomial
from .partitions import (
    EMPTY,
    Partition,
    format_partition,
    kr_i1_predicate,
    oplus,
    oracle_genfun,
    parse_partition,
    partitions_of,
    phi,
    s_tail,
    satisfies_gap,
)
from .ideals import (
    IdealError,
    ModifiedDigraph,
    SpanOneIdeal,
    associated_graph,
    contains,
    enumerate_members,
    ideal_from_json,
    ideal_genfun_vec,
    load_ideal,
    validate,
    walk_genfun_matrix,
    weight_diag,
)
from .qdiff import QDiffSystem, check_system, f_from_g, load_system, solve
from .multisum import (
    MultisumProfile,
    check_additional,
    check_positivity,
    eval_H,
    load_profile,
    rec_children,
    shift_beta,
    verify_recurrence_numeric,
)
from .prover import (
    AssemblyError,
    Expand,
    FactorizationSystem,
    Leaf,
    SearchExhausted,
    assemble_system,
    derive_row,
    equivalent_systems,
    expansions,
    leaf_combination,
    load_cert,
    load_system_spec,
    to_qdiff,
    tree_to_dot,
    validate_tree,
    verify_numeric,
)


def fixture_path(name: str):
    """Path to one of the bundled example definitions (json files)."""
    return resources.files(__name__) / "fixtures" / name
