"""The q-difference system attached to a vertex-weighted digraph.

With A the adjacency matrix, W(x) the diagonal of vertex monomials and S
the shift, the vector F(x) = A G(x) of walk generating functions satisfies

    F(x) = A W(x) F(x q^S),        F_k(0) = 1.

Comparing coefficients of x^n turns this into a recurrence on the series
f_k(n) in Z[[q]]: writing the vertex monomials as x^(m_j) q^(s_j) (with
m_1 = s_1 = 0 and m_j >= 1 otherwise),

    f_k(n) = q^(nS) f_1(n) + sum_{j >= 2} A[k][j] q^(s_j + (n - m_j) S) f_j(n - m_j).

The j >= 2 terms only involve strictly smaller x-degrees, so within each n
only f_1(n) is implicit; its own equation has the shape
(1 - q^(nS)) f_1(n) = known, and 1/(1 - q^(nS)) is a unit in Z[[q]].  That
makes the solution with integer coefficients unique, and also explains why
the coefficient of x^n always sits in q-order >= n: each x picked up along
a walk beyond the start is accompanied by at least one q.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .ideals import ModifiedDigraph, SpanOneIdeal, associated_graph, weight_diag
from .series import Series, geom_inverse, monomial


@dataclass(frozen=True)
class QDiffSystem:
    """Adjacency matrix, vertex monomial exponents (m, s) per vertex, shift."""

    A: tuple[tuple[int, ...], ...]
    weights: tuple[tuple[int, int], ...]
    S: int

    def __post_init__(self):
        K = len(self.A)
        if len(self.weights) != K:
            raise ValueError("need one weight pair per vertex")
        for row in self.A:
            if len(row) != K:
                raise ValueError("adjacency matrix must be square")
            if any(e not in (0, 1) for e in row):
                raise ValueError("adjacency entries must be 0 or 1")
            if row[0] != 1:
                raise ValueError("first adjacency column must be all ones")
        if any(e != 1 for e in self.A[0]):
            raise ValueError("first adjacency row must be all ones")
        if self.weights[0] != (0, 0):
            raise ValueError("vertex 1 must be weightless")
        for k in range(1, K):
            if self.weights[k][0] < 1:
                raise ValueError(f"vertex {k + 1} needs x-degree >= 1 in its weight")
            if self.weights[k][1] < 1:
                raise ValueError(f"vertex {k + 1} needs q-degree >= 1 in its weight")
        if self.S < 1:
            raise ValueError(f"shift must be >= 1, got {self.S}")

    @property
    def K(self) -> int:
        return len(self.A)

    @classmethod
    def from_ideal(cls, ideal: SpanOneIdeal) -> "QDiffSystem":
        g = associated_graph(ideal)
        return cls(A=g.adjacency, weights=weight_diag(g), S=ideal.S)

    @classmethod
    def from_graph(cls, g: ModifiedDigraph, S: int) -> "QDiffSystem":
        return cls(A=g.adjacency, weights=weight_diag(g), S=S)


def solve(sys: QDiffSystem, x_max: int | None = None, q_max: int = 30) -> list[Series]:
    """The unique solution of F(x) = A W(x) F(xq^S) with F_k(0) = 1.

    Works x-degree by x-degree; all divisions are by units of Z[[q]].
    """
    if x_max is None:
        x_max = q_max
    K, S = sys.K, sys.S
    # f[k][n]: coefficient of x^n in F_{k+1}, as a q-only series
    one = Series.one(0, q_max)
    zero = Series.zero(0, q_max)
    f: list[list[Series]] = [[one] for _ in range(K)]

    def known_part(k: int, n: int) -> Series:
        acc = zero
        for j in range(1, K):
            if not sys.A[k][j]:
                continue
            m_j, s_j = sys.weights[j]
            if n - m_j < 0:
                continue
            shift = s_j + (n - m_j) * S
            acc = acc + f[j][n - m_j] * monomial(1, 0, shift, 0, q_max)
        return acc

    for n in range(1, x_max + 1):
        if n > q_max:
            # q-order of the x^n coefficient is >= n, so nothing survives
            for k in range(K):
                f[k].append(zero)
            continue
        f1 = known_part(0, n) * geom_inverse(n * S, 0, q_max)
        f[0].append(f1)
        for k in range(1, K):
            f[k].append(f1 * monomial(1, 0, n * S, 0, q_max) + known_part(k, n))

    out = []
    for k in range(K):
        coeffs: dict[tuple[int, int], int] = {}
        for n in range(x_max + 1):
            for (_, d), c in f[k][n].terms():
                coeffs[(n, d)] = c
        out.append(Series(coeffs, x_max, q_max))
    return out


def f_from_g(sys: QDiffSystem, G: list[Series]) -> list[Series]:
    """F = A G: sum the walk generating functions along adjacency rows."""
    if len(G) != sys.K:
        raise ValueError(f"expected {sys.K} component series, got {len(G)}")
    out = []
    for row in sys.A:
        acc = None
        for j, e in enumerate(row):
            if e:
                acc = G[j] if acc is None else acc + G[j]
        out.append(acc)
    return out


def check_system(sys: QDiffSystem, F: list[Series]) -> bool:
    """Does F satisfy F(x) = A W(x) F(xq^S) on the shared truncation region?"""
    if len(F) != sys.K:
        raise ValueError(f"expected {sys.K} component series, got {len(F)}")
    shifted = [s.shift_x(sys.S) for s in F]
    for k in range(sys.K):
        acc = None
        for j in range(sys.K):
            if not sys.A[k][j]:
                continue
            m_j, s_j = sys.weights[j]
            term = shifted[j] * monomial(1, m_j, s_j, shifted[j].x_max, shifted[j].q_max)
            acc = term if acc is None else acc + term
        if not F[k].eq_upto(acc):
            return False
    return True


# -- JSON interface ------------------------------------------------------


def system_from_json(data: dict) -> QDiffSystem:
    try:
        A = tuple(tuple(int(e) for e in row) for row in data["A"])
        weights = tuple((int(m), int(n)) for m, n in data["weights"])
        S = int(data["S"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed q-difference system description: {exc}") from exc
    return QDiffSystem(A=A, weights=weights, S=S)


def system_to_json(sys: QDiffSystem) -> dict:
    return {
        "A": [list(row) for row in sys.A],
        "weights": [list(w) for w in sys.weights],
        "S": sys.S,
    }


def load_system(path: str | Path) -> QDiffSystem:
    with open(path) as fh:
        return system_from_json(json.load(fh))
