"""Ideal structure, the associated digraph, and member generating functions."""

from __future__ import annotations

import json

import pytest

import spanone
from oracles import enumerate_walks
from spanone.ideals import (
    IdealError,
    ModifiedDigraph,
    SpanOneIdeal,
    associated_graph,
    contains,
    default_levels,
    enumerate_members,
    ideal_from_json,
    ideal_genfun_vec,
    ideal_to_json,
    validate,
    walk_genfun_matrix,
    weight_diag,
)
from spanone.partitions import (
    EMPTY,
    kr_i1_predicate,
    oracle_genfun,
    parse_partition,
    partitions_of,
    satisfies_gap,
)
from spanone.series import Series


def test_rr_fixture_shape(rr_ideal):
    validate(rr_ideal)
    g = associated_graph(rr_ideal)
    assert g.adjacency == ((1, 1, 1), (1, 1, 1), (1, 0, 1))
    assert weight_diag(g) == ((0, 0), (1, 1), (1, 2))
    assert rr_ideal.S == 2


def test_kr_fixture_shape(kr_ideal):
    validate(kr_ideal)
    g = associated_graph(kr_ideal)
    assert weight_diag(g) == ((0, 0), (1, 1), (2, 3), (2, 4), (1, 2), (1, 3), (2, 6))
    ones = (1,) * 7
    assert g.adjacency == (
        ones,
        ones,
        ones,
        (1, 0, 0, 0, 1, 1, 1),
        ones,
        (1, 0, 0, 0, 1, 1, 1),
        (1, 0, 0, 0, 0, 1, 1),
    )


def test_validate_rejects_small_span(rr_ideal):
    bad = SpanOneIdeal(pi=rr_ideal.pi, linking=rr_ideal.linking, S=1)
    with pytest.raises(IdealError, match="largest seed part"):
        validate(bad)


def test_validate_rejects_missing_empty_link(rr_ideal):
    linking = (rr_ideal.linking[0], rr_ideal.linking[1], frozenset({3}))
    with pytest.raises(IdealError, match="missing from the linking set"):
        validate(SpanOneIdeal(pi=rr_ideal.pi, linking=linking, S=2))


def test_validate_rejects_partial_empty_linking(rr_ideal):
    linking = (frozenset({1, 2}),) + rr_ideal.linking[1:]
    with pytest.raises(IdealError, match="link to every seed"):
        validate(SpanOneIdeal(pi=rr_ideal.pi, linking=linking, S=2))


def test_validate_rejects_nonempty_first_seed():
    pi = (parse_partition("1"), parse_partition("2"))
    linking = (frozenset({1, 2}), frozenset({1}))
    with pytest.raises(IdealError, match="pi_1 must be the empty"):
        validate(SpanOneIdeal(pi=pi, linking=linking, S=2))


def test_validate_reports_multiple_problems(rr_ideal):
    linking = (frozenset({1, 2}), rr_ideal.linking[1], frozenset({3}))
    try:
        validate(SpanOneIdeal(pi=rr_ideal.pi, linking=linking, S=1))
    except IdealError as exc:
        msg = str(exc)
        assert "missing from the linking set" in msg
        assert "largest seed part" in msg
    else:
        pytest.fail("expected IdealError")


def test_trivial_ideal_of_empty_partition():
    ideal = SpanOneIdeal(pi=(EMPTY,), linking=(frozenset({1}),), S=1)
    validate(ideal)
    g = associated_graph(ideal)
    assert g.adjacency == ((1,),)
    vec = ideal_genfun_vec(ideal, 6, 6)
    assert str(vec[0]) == "1"
    genfun, members = enumerate_members(ideal, 6)
    assert members == [EMPTY]
    assert str(genfun) == "1"


def test_digraph_requires_edges_to_start():
    with pytest.raises(IdealError, match="edge to vertex 1"):
        ModifiedDigraph(adjacency=((1, 1), (0, 1)), lengths=(0, 1), sizes=(0, 1))


def test_digraph_requires_weightless_start():
    with pytest.raises(IdealError, match="vertex 1 must carry"):
        ModifiedDigraph(adjacency=((1,),), lengths=(1,), sizes=(1,))


def test_walk_matrix_zero_steps_is_weight_diagonal(rr_ideal):
    g = associated_graph(rr_ideal)
    mat = walk_genfun_matrix(g, 0, rr_ideal.S, 8, 8)
    assert str(mat[0][0]) == "1"
    assert str(mat[1][1]) == "x*q"
    assert str(mat[2][2]) == "x*q^2"
    assert mat[0][1].is_zero()


def test_walk_matrix_one_step_row_sum(rr_ideal):
    g = associated_graph(rr_ideal)
    mat = walk_genfun_matrix(g, 1, rr_ideal.S, 10, 10)
    total = mat[0][0] + mat[0][1] + mat[0][2]
    assert str(total) == "1 + x*q^3 + x*q^4"


def _matpow(A, M):
    K = len(A)
    out = [[1 if i == j else 0 for j in range(K)] for i in range(K)]
    for _ in range(M):
        out = [
            [sum(out[i][t] * A[t][j] for t in range(K)) for j in range(K)]
            for i in range(K)
        ]
    return out


def test_walk_matrix_counts_walks_at_one(rr_ideal, kr_ideal):
    for ideal, M in ((rr_ideal, 2), (kr_ideal, 3)):
        g = associated_graph(ideal)
        # every M-step walk weight is a polynomial; large enough orders keep all of it
        q_bound = (M + 1) * max(g.sizes) + ideal.S * max(g.lengths) * M * (M + 1) // 2
        x_bound = (M + 1) * max(g.lengths)
        mat = walk_genfun_matrix(g, M, ideal.S, x_bound, q_bound)
        power = _matpow(g.adjacency, M)
        for i in range(g.K):
            for j in range(g.K):
                count = sum(c for _, c in mat[i][j].terms())
                assert count == power[i][j]
    # spot value: two 2-step walks from vertex 3 to vertex 1
    assert _matpow(associated_graph(rr_ideal).adjacency, 2)[2][0] == 2


def test_walk_matrix_matches_walk_enumeration(rr_ideal, kr_ideal):
    for ideal, M in ((rr_ideal, 3), (kr_ideal, 2)):
        g = associated_graph(ideal)
        q_bound = (M + 1) * max(g.sizes) + ideal.S * max(g.lengths) * M * (M + 1) // 2
        x_bound = (M + 1) * max(g.lengths)
        mat = walk_genfun_matrix(g, M, ideal.S, x_bound, q_bound)
        expect = [[dict() for _ in range(g.K)] for _ in range(g.K)]
        for i, j, xe, qe in enumerate_walks(g.adjacency, g.lengths, g.sizes, M, ideal.S):
            expect[i][j][(xe, qe)] = expect[i][j].get((xe, qe), 0) + 1
        for i in range(g.K):
            for j in range(g.K):
                assert mat[i][j] == Series(expect[i][j], x_bound, q_bound)


def test_rr_triple_agreement_moderate(rr_ideal):
    q_max = 16
    vec = ideal_genfun_vec(rr_ideal, q_max, q_max)
    total = vec[0] + vec[1] + vec[2]
    assert total.eq_upto(oracle_genfun(lambda p: satisfies_gap(p, 2, 1), q_max))
    genfun, _ = enumerate_members(rr_ideal, q_max)
    assert total.eq_upto(genfun)


def test_kr_triple_agreement_moderate(kr_ideal):
    q_max = 14
    vec = ideal_genfun_vec(kr_ideal, q_max, q_max)
    total = vec[0]
    for s in vec[1:]:
        total = total + s
    assert total.eq_upto(oracle_genfun(kr_i1_predicate, q_max))
    genfun, _ = enumerate_members(kr_ideal, q_max)
    assert total.eq_upto(genfun)


def test_genfun_stable_in_extra_levels(rr_ideal):
    q_max = 12
    base = default_levels(rr_ideal.S, q_max)
    vecs = [ideal_genfun_vec(rr_ideal, q_max, q_max, levels=base + extra) for extra in (0, 1, 2)]
    for k in range(3):
        assert vecs[0][k] == vecs[1][k] == vecs[2][k]


def test_first_component_counts_shifted_members(rr_ideal):
    # members with empty first window are exactly the S-fold upward shifts
    q_max = 14
    vec = ideal_genfun_vec(rr_ideal, q_max, q_max)
    total = vec[0] + vec[1] + vec[2]
    assert total.shift_x(rr_ideal.S).eq_upto(vec[0])


def test_contains_examples(rr_ideal):
    chain = contains(rr_ideal, parse_partition("6+4+1"))
    assert chain == (parse_partition("1"), parse_partition("2"), parse_partition("2"))
    assert contains(rr_ideal, EMPTY) == ()
    assert contains(rr_ideal, parse_partition("2+1")) is None
    # a chain passing through an empty middle window
    assert contains(rr_ideal, parse_partition("6+1")) == (
        parse_partition("1"),
        EMPTY,
        parse_partition("2"),
    )


def test_contains_kr_examples(kr_ideal):
    assert contains(kr_ideal, parse_partition("2+1")) == (parse_partition("2+1"),)
    assert contains(kr_ideal, parse_partition("4+3")) is None
    assert contains(kr_ideal, parse_partition("6+4+1")) == (
        parse_partition("1"),
        parse_partition("3+1"),
    )


def test_kr_members_small(kr_ideal):
    genfun, members = enumerate_members(kr_ideal, 3)
    assert [str(p) for p in members] == ["empty", "1", "2", "2+1", "3"]
    assert str(genfun) == "1 + x*q + x*q^2 + x*q^3 + x^2*q^3"


def test_contains_agrees_with_enumeration(rr_ideal, kr_ideal):
    bound = 13
    for ideal in (rr_ideal, kr_ideal):
        _, members = enumerate_members(ideal, bound)
        member_set = {p.parts for p in members}
        for n in range(bound + 1):
            for p in partitions_of(n):
                chain = contains(ideal, p)
                assert (chain is not None) == (p.parts in member_set), p


def test_member_chain_reconstructs_partition(rr_ideal, kr_ideal):
    from spanone.partitions import oplus, phi

    for ideal in (rr_ideal, kr_ideal):
        _, members = enumerate_members(ideal, 12)
        for p in members:
            chain = contains(ideal, p)
            assert chain is not None
            rebuilt = EMPTY
            for k, link in enumerate(chain):
                rebuilt = oplus(rebuilt, phi(link, k * ideal.S))
            assert rebuilt == p


def test_json_round_trip(rr_ideal):
    data = ideal_to_json(rr_ideal)
    assert ideal_from_json(data) == rr_ideal
    assert data["pi"] == ["empty", "1", "2"]
    assert data["linking"] == [[1, 2, 3], [1, 2, 3], [1, 3]]


def test_json_rejects_malformed():
    with pytest.raises(IdealError):
        ideal_from_json({"S": 2, "pi": ["empty"]})
    with pytest.raises(IdealError):
        ideal_from_json({"S": 2, "pi": ["empty", "1"], "linking": [[1, 2], "nope"]})


def test_fixture_files_parse():
    for name in ("rr.json", "kr_i1.json"):
        with open(spanone.fixture_path(name)) as fh:
            ideal = ideal_from_json(json.load(fh))
        validate(ideal)
