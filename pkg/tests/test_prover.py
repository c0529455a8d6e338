"""Certificate search, assembly of factorizations, verification, export."""

from __future__ import annotations

import json

import pytest

from oracles import naive_min_expansions
from spanone.multisum import eval_H, shift_beta
from spanone.prover import (
    AssemblyError,
    Expand,
    Leaf,
    SearchExhausted,
    assemble_system,
    cert_from_json,
    cert_to_json,
    derive_row,
    equivalent_systems,
    expansions,
    leaf_combination,
    to_qdiff,
    tree_from_json,
    tree_to_dot,
    tree_to_json,
    validate_tree,
    verify_numeric,
)
from spanone.qdiff import solve
from spanone.series import Series, monomial

KR_TARGETS = frozenset({(4, 9), (5, 12), (6, 12)})


def test_root_in_targets_gives_single_leaf(ex1_profile):
    tree = derive_row(ex1_profile, (3,), frozenset({(3,), (4,)}))
    assert tree == Leaf((3,))


def test_derive_row_minimal_tree_rank_one(ex1_profile):
    tree = derive_row(ex1_profile, (1,), frozenset({(3,), (4,)}))
    assert tree == Expand(
        (1,), 1, Expand((2,), 1, Leaf((3,)), Leaf((4,))), Leaf((3,))
    )
    assert expansions(tree) == 2


def test_derive_row_kr_leaf_multisets(kr_profile):
    tree = derive_row(kr_profile, (1, 3), KR_TARGETS)
    assert expansions(tree) == 6
    assert leaf_combination(kr_profile, tree) == sorted(
        [
            ((4, 9), (0, 0)),
            ((4, 9), (1, 1)),
            ((4, 9), (1, 2)),
            ((4, 9), (2, 3)),
            ((5, 12), (1, 3)),
            ((5, 12), (2, 4)),
            ((6, 12), (2, 6)),
        ]
    )
    tree2 = derive_row(kr_profile, (2, 6), KR_TARGETS)
    assert leaf_combination(kr_profile, tree2) == sorted(
        [((4, 9), (0, 0)), ((4, 9), (1, 2)), ((5, 12), (1, 3)), ((6, 12), (2, 6))]
    )
    tree3 = derive_row(kr_profile, (3, 6), KR_TARGETS)
    assert leaf_combination(kr_profile, tree3) == sorted(
        [((4, 9), (0, 0)), ((5, 12), (1, 3)), ((6, 12), (2, 6))]
    )


def test_derive_row_budget_exhaustion(kr_profile):
    with pytest.raises(SearchExhausted, match="within 5 expansions"):
        derive_row(kr_profile, (1, 3), KR_TARGETS, max_expansions=5)


def test_derive_row_unreachable_targets(ex1_profile):
    with pytest.raises(SearchExhausted):
        derive_row(ex1_profile, (5,), frozenset({(3,)}))


def test_memoized_search_is_cost_transparent(ex1_profile, kr_profile):
    for p, root, targets in (
        (ex1_profile, (1,), frozenset({(3,), (4,)})),
        (ex1_profile, (2,), frozenset({(3,), (4,)})),
        (kr_profile, (1, 3), KR_TARGETS),
        (kr_profile, (2, 6), KR_TARGETS),
        (kr_profile, (3, 6), KR_TARGETS),
    ):
        tree = derive_row(p, root, targets)
        assert expansions(tree) == naive_min_expansions(p, root, targets)


def test_tree_monotone_along_paths(kr_profile):
    tree = derive_row(kr_profile, (1, 3), KR_TARGETS)

    def walk(node):
        if isinstance(node, Leaf):
            assert node.beta in KR_TARGETS
            return
        for child in (node.left, node.right):
            assert all(c >= b for b, c in zip(node.beta, child.beta))
            walk(child)

    walk(tree)


def test_validate_tree_accepts_and_rejects(kr_profile):
    tree = derive_row(kr_profile, (2, 6), KR_TARGETS)
    validate_tree(kr_profile, tree, KR_TARGETS)
    bad = Expand((2, 6), 1, Leaf((4, 9)), Leaf((5, 12)))
    with pytest.raises(AssemblyError, match="do not match coordinate"):
        validate_tree(kr_profile, bad, KR_TARGETS)
    with pytest.raises(AssemblyError, match="not a target"):
        validate_tree(kr_profile, Leaf((9, 9)), KR_TARGETS)


def test_node_by_node_soundness(kr_profile):
    # every expansion is itself a two-term identity; check them all numerically
    from spanone.multisum import verify_recurrence_numeric

    tree = derive_row(kr_profile, (1, 3), KR_TARGETS)

    def walk(node):
        if isinstance(node, Leaf):
            return
        assert verify_recurrence_numeric(kr_profile, node.beta, node.coord, 12, 12)
        walk(node.left)
        walk(node.right)

    walk(tree)


def test_leaf_combination_telescopes(kr_profile):
    # collecting leaves turns the tree into one series identity for the root
    q_max = 14
    for root in ((1, 3), (2, 6), (3, 6)):
        tree = derive_row(kr_profile, root, KR_TARGETS)
        rhs = Series.zero(q_max, q_max)
        for beta, (xe, qe) in leaf_combination(kr_profile, tree):
            rhs = rhs + monomial(1, xe, qe, q_max, q_max) * eval_H(kr_profile, beta, q_max, q_max)
        assert eval_H(kr_profile, root, q_max, q_max).eq_upto(rhs)


def test_assemble_rank_one(ex1_system):
    fs = assemble_system(*ex1_system)
    assert fs.U == ((1, 1, 1), (1, 1, 1), (1, 0, 1))
    assert fs.V == ((0, 0), (1, 1), (1, 2))
    assert set(fs.certs) == {(1,), (2,)}


def test_assemble_kr(kr_system):
    fs = assemble_system(*kr_system)
    assert fs.V == ((0, 0), (1, 1), (1, 2), (1, 3), (2, 3), (2, 4), (2, 6))
    ones = (1,) * 7
    assert fs.U == (
        ones,
        ones,
        ones,
        (1, 0, 1, 1, 0, 0, 1),
        ones,
        (1, 0, 1, 1, 0, 0, 1),
        (1, 0, 0, 1, 0, 0, 1),
    )
    # structural invariants of any assembled factorization
    assert all(e == 1 for e in fs.U[0])
    assert all(row[0] == 1 for row in fs.U)
    assert fs.V[0] == (0, 0)


def test_assemble_matches_known_kr_matrices(kr_system):
    fs = assemble_system(*kr_system)
    known_V = [(0, 0), (1, 1), (2, 3), (2, 4), (1, 2), (1, 3), (2, 6)]
    ones = (1,) * 7
    known_U = [
        ones,
        ones,
        ones,
        (1, 0, 0, 0, 1, 1, 1),
        ones,
        (1, 0, 0, 0, 1, 1, 1),
        (1, 0, 0, 0, 0, 1, 1),
    ]
    assert equivalent_systems(fs.betas, fs.U, fs.V, known_U, known_V)


def test_equivalence_is_sharp(kr_system):
    fs = assemble_system(*kr_system)
    # swapping two columns inside one beta group preserves equivalence
    perm = [0, 2, 1, 3, 4, 5, 6]  # columns 2 and 3 share beta (1,3)
    U2 = tuple(tuple(row[j] for j in perm) for row in fs.U)
    V2 = tuple(fs.V[j] for j in perm)
    assert equivalent_systems(fs.betas, fs.U, fs.V, U2, V2)
    # swapping across groups does not
    perm = [0, 3, 2, 1, 4, 5, 6]  # column 4 has beta (2,6)
    U3 = tuple(tuple(row[j] for j in perm) for row in fs.U)
    V3 = tuple(fs.V[j] for j in perm)
    assert not equivalent_systems(fs.betas, fs.U, fs.V, U3, V3)


def test_assemble_rejects_leaf_count_mismatch(ex1_profile):
    with pytest.raises(AssemblyError, match="row 1 produces 2 leaves"):
        assemble_system(ex1_profile, 2, [(1,), (2,)])


def test_assemble_rejects_missing_unit_diagonal(ex1_profile):
    with pytest.raises(AssemblyError, match="leading diagonal"):
        assemble_system(ex1_profile, 2, [(2,), (1,)])


def test_verify_numeric_passes(ex1_system, kr_system):
    for spec in (ex1_system, kr_system):
        fs = assemble_system(*spec)
        assert all(verify_numeric(fs, 16, 16))


def test_verify_numeric_detects_tampering(kr_system):
    fs = assemble_system(*kr_system)
    U = [list(r) for r in fs.U]
    U[3][1] ^= 1
    fs.U = tuple(tuple(r) for r in U)
    assert not all(verify_numeric(fs, 12, 12))


def test_factorization_solves_back_to_components(ex1_system, kr_system):
    # U and V double as a q-difference system; its solution is the H vector
    for spec, q_max in ((ex1_system, 16), (kr_system, 14)):
        fs = assemble_system(*spec)
        F = solve(to_qdiff(fs), q_max, q_max)
        for k, beta in enumerate(fs.betas):
            assert F[k].eq_upto(eval_H(fs.profile, beta, q_max, q_max))


def test_tree_json_round_trip(kr_profile):
    tree = derive_row(kr_profile, (1, 3), KR_TARGETS)
    assert tree_from_json(tree_to_json(tree)) == tree


def test_cert_document_round_trip(kr_profile):
    tree = derive_row(kr_profile, (1, 3), KR_TARGETS)
    doc = cert_to_json(kr_profile, 3, tree)
    p2, S2, tree2 = cert_from_json(json.loads(json.dumps(doc)))
    assert (p2, S2, tree2) == (kr_profile, 3, tree)
    # export, parse, export again: byte-identical
    assert json.dumps(cert_to_json(p2, S2, tree2), sort_keys=True) == json.dumps(
        doc, sort_keys=True
    )


def test_dot_export_structure(kr_profile):
    tree = derive_row(kr_profile, (1, 3), KR_TARGETS)
    dot = tree_to_dot(kr_profile, tree)
    assert dot.startswith("digraph certificate {")
    assert dot.count("label=\"H(") == 13  # 6 expansions + 7 leaves
    assert dot.count("->") == 12
    assert 'label="x^2 q^3"' in dot
    assert 'label="1"' in dot
    assert tree_to_dot(kr_profile, tree) == dot  # deterministic


def test_tree_from_json_rejects_malformed():
    with pytest.raises(ValueError):
        tree_from_json({"coord": 1})
    with pytest.raises(ValueError):
        tree_from_json({"beta": [1], "coord": 1, "left": {"beta": [2]}})
