"""Binary certificate trees for factorizations F(x) = U V F(xq^S).

Given a profile and a shift S, each component of the unknown vector is an
H(beta).  Repeatedly applying the two-term contiguous relation

    H(beta) = H(beta + A_r e_r) + x^(gamma_r) q^(beta_r) H(beta + alpha_r)

unfolds H(root) into a binary tree: left edges carry weight 1, right edges
carry the monomial x^(gamma_r) q^(beta_r) of the node they leave.  A tree
certifies a row of the factorization when every leaf lies in the target set
{beta_j + S gamma}, because collecting leaves then expresses H(root) as a
0/1 combination of monomial multiples of the H(beta_j + S gamma), i.e. of
the components of F(xq^S).

The search is memoized: each beta value expands through the same coordinate
at every occurrence, so a certificate is really a choice function on beta
vectors and the tree is its unfolding.  Among choice functions we pick one
minimizing the number of expansions in the unfolded tree (ties broken by
the smallest coordinate), computed by dynamic programming over the finite
set of live beta vectors: a beta that exceeds every target in some
coordinate can never reach a leaf and is discarded.  Because both moves are
componentwise non-decreasing and a left move strictly increases one
coordinate, the only possible cycle is a right move along an all-zero alpha
row; under memoized semantics such a cycle cannot occur in a finite
certificate, and the search treats it as infeasible.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Union

from .multisum import Beta, MultisumProfile, eval_H, profile_from_json, profile_to_json, rec_children, shift_beta
from .qdiff import QDiffSystem
from .series import Series, monomial


class SearchExhausted(RuntimeError):
    """No certificate exists within the expansion budget (not a refutation)."""


class AssemblyError(ValueError):
    """Certificates found, but they do not assemble into a factorization."""


@dataclass(frozen=True)
class Leaf:
    beta: Beta


@dataclass(frozen=True)
class Expand:
    beta: Beta
    coord: int  # 1-based coordinate of the relation applied at this node
    left: "Node"
    right: "Node"


Node = Union[Leaf, Expand]


def expansions(tree: Node) -> int:
    """Number of relation applications in the unfolded tree."""
    if isinstance(tree, Leaf):
        return 0
    return 1 + expansions(tree.left) + expansions(tree.right)


def validate_tree(p: MultisumProfile, tree: Node, targets: frozenset[Beta]) -> None:
    """Structural soundness: children match the relation, leaves hit targets."""
    if isinstance(tree, Leaf):
        if tree.beta not in targets:
            raise AssemblyError(f"leaf {tree.beta} is not a target")
        return
    left, _, right = rec_children(p, tree.beta, tree.coord)
    if tree.left.beta != left or tree.right.beta != right:
        raise AssemblyError(f"children of {tree.beta} do not match coordinate {tree.coord}")
    validate_tree(p, tree.left, targets)
    validate_tree(p, tree.right, targets)


def derive_row(
    p: MultisumProfile,
    root: Beta,
    targets: frozenset[Beta] | set[Beta],
    max_expansions: int = 64,
) -> Node:
    """Expansion-minimal certificate tree from root into the target set.

    Raises SearchExhausted when no choice function yields a finite tree
    within max_expansions relation applications.
    """
    targets = frozenset(targets)
    if not targets:
        raise ValueError("target set must be nonempty")
    R = p.R
    in_progress = object()
    memo: dict[Beta, tuple[int, Node] | None] = {}

    def best(beta: Beta) -> tuple[int, Node] | None:
        if beta in targets:
            return 0, Leaf(beta)
        if all(any(beta[i] > t[i] for i in range(R)) for t in targets):
            return None  # beyond every target: no leaf reachable
        if beta in memo:
            entry = memo[beta]
            return None if entry is in_progress else entry
        memo[beta] = in_progress
        found: tuple[int, Node] | None = None
        for r in range(1, R + 1):
            left, _, right = rec_children(p, beta, r)
            lb = best(left)
            if lb is None:
                continue
            rb = best(right)
            if rb is None:
                continue
            cost = 1 + lb[0] + rb[0]
            if found is None or cost < found[0]:
                found = (cost, Expand(beta, r, lb[1], rb[1]))
        memo[beta] = found
        return found

    entry = best(root)
    if entry is None or entry[0] > max_expansions:
        raise SearchExhausted(
            f"no certificate for {root} within {max_expansions} expansions"
        )
    return entry[1]


def leaf_combination(p: MultisumProfile, tree: Node) -> list[tuple[Beta, tuple[int, int]]]:
    """Leaves with their accumulated edge-weight monomials, as (beta, (xe, qe)).

    Sorted by target beta then exponents; duplicates are meaningful (one
    entry per leaf occurrence in the unfolded tree).
    """
    out: list[tuple[Beta, tuple[int, int]]] = []

    def walk(node: Node, xe: int, qe: int) -> None:
        if isinstance(node, Leaf):
            out.append((node.beta, (xe, qe)))
            return
        _, (wx, wq), _ = rec_children(p, node.beta, node.coord)
        walk(node.left, xe, qe)
        walk(node.right, xe + wx, qe + wq)

    walk(tree, 0, 0)
    return sorted(out)


@dataclass
class FactorizationSystem:
    """A proved factorization F(x) = U V F(xq^S) for F_k = H(betas[k])."""

    profile: MultisumProfile
    S: int
    betas: tuple[Beta, ...]
    U: tuple[tuple[int, ...], ...]
    V: tuple[tuple[int, int], ...]
    certs: dict[Beta, Node]

    @property
    def K(self) -> int:
        return len(self.betas)


def _group_indices(p: MultisumProfile, S: int, betas: tuple[Beta, ...]) -> dict[Beta, list[int]]:
    """Column indices (0-based) grouped by shifted beta, insertion order."""
    groups: dict[Beta, list[int]] = {}
    for j, b in enumerate(betas):
        groups.setdefault(shift_beta(p, b, S), []).append(j)
    return groups


def assemble_system(
    p: MultisumProfile,
    S: int,
    betas: list[Beta] | tuple[Beta, ...],
    max_expansions: int = 64,
) -> FactorizationSystem:
    """Derive certificates for every distinct root and pin down U and V.

    The first row fixes V: within each column group sharing one shifted
    beta, its leaf monomials are sorted by (x-degree, q-degree) and written
    onto the group's columns in order.  Every further row then selects the
    columns whose monomials its own leaves realize.  Failure to match
    exactly is reported as AssemblyError naming the offending row.
    """
    betas = tuple(tuple(b) for b in betas)
    if not betas:
        raise ValueError("need at least one component")
    K = len(betas)
    groups = _group_indices(p, S, betas)
    targets = frozenset(groups)
    certs: dict[Beta, Node] = {}
    for root in dict.fromkeys(betas):
        certs[root] = derive_row(p, root, targets, max_expansions)

    # row 1 fixes the diagonal
    V: list[tuple[int, int] | None] = [None] * K
    first = Counter(leaf_combination(p, certs[betas[0]]))
    for t, idxs in groups.items():
        weights = sorted(w for (b, w), c in first.items() if b == t for _ in range(c))
        if len(weights) != len(idxs):
            raise AssemblyError(
                f"row 1 produces {len(weights)} leaves for target {t}, "
                f"but {len(idxs)} components shift onto it"
            )
        for j, w in zip(idxs, weights):
            V[j] = w
    if V[0] != (0, 0):
        raise AssemblyError(f"leading diagonal entry must be 1, got exponents {V[0]}")

    U: list[list[int]] = []
    for k in range(K):
        row = [0] * K
        leaves = Counter(leaf_combination(p, certs[betas[k]]))
        for t, idxs in groups.items():
            used = [False] * len(idxs)
            for (b, w), c in sorted(leaves.items()):
                if b != t:
                    continue
                for _ in range(c):
                    for pos, j in enumerate(idxs):
                        if not used[pos] and V[j] == w:
                            used[pos] = True
                            row[j] = 1
                            break
                    else:
                        raise AssemblyError(
                            f"row {k + 1}: no unmatched column with weight "
                            f"x^{w[0]} q^{w[1]} left for target {t}"
                        )
        U.append(row)

    if any(e != 1 for e in U[0]):
        raise AssemblyError("first row must select every column")
    if any(row[0] != 1 for row in U):
        raise AssemblyError("every row must select column 1 (weight-1 leaf missing)")
    return FactorizationSystem(
        profile=p,
        S=S,
        betas=betas,
        U=tuple(tuple(r) for r in U),
        V=tuple(V),  # type: ignore[arg-type]
        certs=certs,
    )


def verify_numeric(
    fs: FactorizationSystem, x_max: int | None = None, q_max: int = 30
) -> list[bool]:
    """Row-by-row truncated check of H(beta_k) = sum_j U_kj V_j H(beta_j + S gamma)."""
    if x_max is None:
        x_max = q_max
    p = fs.profile
    lhs = {b: eval_H(p, b, x_max, q_max) for b in dict.fromkeys(fs.betas)}
    shifted = {b: lhs[b].shift_x(fs.S) for b in lhs}
    results = []
    for k in range(fs.K):
        acc = Series.zero(x_max, q_max)
        for j in range(fs.K):
            if fs.U[k][j]:
                xe, qe = fs.V[j]
                acc = acc + monomial(1, xe, qe, x_max, q_max) * shifted[fs.betas[j]]
        results.append(lhs[fs.betas[k]].eq_upto(acc))
    return results


def equivalent_systems(
    betas: tuple[Beta, ...],
    U1, V1, U2, V2,
) -> bool:
    """Equality of two factorizations up to permuting columns within groups
    of equal beta.  Columns are compared as (diagonal monomial, U column)
    pairs, so duplicate monomials inside a group are handled correctly."""
    K = len(betas)

    def column_multisets(U, V):
        groups: dict[Beta, list] = {}
        for j in range(K):
            col = tuple(U[k][j] for k in range(K))
            groups.setdefault(betas[j], []).append((tuple(V[j]), col))
        return {b: sorted(cols) for b, cols in groups.items()}

    return column_multisets(U1, V1) == column_multisets(U2, V2)


def to_qdiff(fs: FactorizationSystem) -> QDiffSystem:
    """Reinterpret U and V as adjacency and vertex weights of a q-difference
    system; solving it must reproduce the eval_H vector."""
    return QDiffSystem(A=fs.U, weights=fs.V, S=fs.S)


# -- serialization -------------------------------------------------------


def tree_to_json(tree: Node) -> dict:
    if isinstance(tree, Leaf):
        return {"beta": list(tree.beta)}
    return {
        "beta": list(tree.beta),
        "coord": tree.coord,
        "left": tree_to_json(tree.left),
        "right": tree_to_json(tree.right),
    }


def tree_from_json(data: dict) -> Node:
    try:
        beta = tuple(int(b) for b in data["beta"])
        if "coord" not in data:
            return Leaf(beta)
        return Expand(
            beta,
            int(data["coord"]),
            tree_from_json(data["left"]),
            tree_from_json(data["right"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed certificate tree: {exc}") from exc


def cert_to_json(p: MultisumProfile, S: int, tree: Node) -> dict:
    return {
        "profile": profile_to_json(p),
        "S": S,
        "root": list(tree.beta),
        "tree": tree_to_json(tree),
    }


def cert_from_json(data: dict) -> tuple[MultisumProfile, int, Node]:
    try:
        p = profile_from_json(data["profile"])
        S = int(data["S"])
        tree = tree_from_json(data["tree"])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed certificate document: {exc}") from exc
    return p, S, tree


def load_cert(path: str | Path) -> tuple[MultisumProfile, int, Node]:
    with open(path) as fh:
        return cert_from_json(json.load(fh))


def _beta_label(beta: Beta) -> str:
    return "H(" + ",".join(str(b) for b in beta) + ")"


def _weight_label(xe: int, qe: int) -> str:
    if xe == 0 and qe == 0:
        return "1"
    xs = "" if xe == 0 else ("x" if xe == 1 else f"x^{xe}")
    qs = "" if qe == 0 else ("q" if qe == 1 else f"q^{qe}")
    return " ".join(s for s in (xs, qs) if s)


def tree_to_dot(p: MultisumProfile, tree: Node) -> str:
    """GraphViz rendering; node ids follow preorder, so output is stable."""
    lines = ["digraph certificate {", "  node [shape=box];"]
    counter = [0]

    def walk(node: Node) -> int:
        nid = counter[0]
        counter[0] += 1
        lines.append(f'  n{nid} [label="{_beta_label(node.beta)}"];')
        if isinstance(node, Expand):
            _, (wx, wq), _ = rec_children(p, node.beta, node.coord)
            lid = walk(node.left)
            lines.append(f'  n{nid} -> n{lid} [label="1"];')
            rid = walk(node.right)
            lines.append(f'  n{nid} -> n{rid} [label="{_weight_label(wx, wq)}"];')
        return nid

    walk(tree)
    lines.append("}")
    return "\n".join(lines) + "\n"


def system_result_to_json(fs: FactorizationSystem) -> dict:
    return {
        "profile": profile_to_json(fs.profile),
        "S": fs.S,
        "betas": [list(b) for b in fs.betas],
        "U": [list(r) for r in fs.U],
        "V": [list(v) for v in fs.V],
        "certs": [
            {"root": list(root), "tree": tree_to_json(tree)}
            for root, tree in sorted(fs.certs.items())
        ],
    }


def prove_system_from_json(data: dict, max_expansions: int = 64) -> FactorizationSystem:
    try:
        p = profile_from_json(data["profile"])
        S = int(data["S"])
        betas = [tuple(int(b) for b in row) for row in data["betas"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed system description: {exc}") from exc
    return assemble_system(p, S, betas, max_expansions)


def load_system_spec(path: str | Path) -> tuple[MultisumProfile, int, list[Beta]]:
    with open(path) as fh:
        data = json.load(fh)
    try:
        p = profile_from_json(data["profile"])
        S = int(data["S"])
        betas = [tuple(int(b) for b in row) for row in data["betas"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed system description: {exc}") from exc
    return p, S, betas
