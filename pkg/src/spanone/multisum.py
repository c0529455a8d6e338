"""Multi-dimensional q-series of Nahm type and their contiguous relations.

A profile fixes a symmetric matrix alpha of nonnegative integers, a vector
gamma of positive x-exponents, and a vector A of Pochhammer moduli, all of
rank R.  For a linear-shift vector beta in Z^R the attached series is

    H(beta) = sum over n in N^R of
        q^E(n) x^(gamma . n) / prod_r (q^(A_r); q^(A_r))_{n_r},

    E(n) = sum_r alpha_rr n_r (n_r - 1) / 2
         + sum_{i < j} alpha_ij n_i n_j
         + sum_r beta_r n_r.

Splitting the n_r-sum at the range of its Pochhammer factor gives, for each
coordinate r, the two-term relation

    H(beta) = H(beta + A_r e_r) + x^(gamma_r) q^(beta_r) H(beta + alpha_r)

with alpha_r the r-th row of alpha; these relations are the edges of the
certificate trees built in the prover.  Substituting x -> x q^S simply
shifts beta by S gamma.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import ceil
from pathlib import Path

from .series import Series, geom_inverse, monomial

Beta = tuple[int, ...]


@dataclass(frozen=True)
class MultisumProfile:
    alpha: tuple[tuple[int, ...], ...]
    gamma: tuple[int, ...]
    A: tuple[int, ...]

    def __post_init__(self):
        R = len(self.alpha)
        if len(self.gamma) != R or len(self.A) != R:
            raise ValueError("alpha, gamma and A must share one rank")
        for i, row in enumerate(self.alpha):
            if len(row) != R:
                raise ValueError("alpha must be square")
            for j, e in enumerate(row):
                if e < 0:
                    raise ValueError(f"alpha entries must be >= 0, got {e}")
                if self.alpha[j][i] != e:
                    raise ValueError("alpha must be symmetric")
        if any(g < 1 for g in self.gamma):
            raise ValueError("gamma entries must be >= 1")
        if any(a < 1 for a in self.A):
            raise ValueError("Pochhammer moduli must be >= 1")

    @property
    def R(self) -> int:
        return len(self.alpha)


def _check_beta(p: MultisumProfile, beta: Beta) -> None:
    if len(beta) != p.R:
        raise ValueError(f"beta has rank {len(beta)}, profile has rank {p.R}")


def energy(p: MultisumProfile, beta: Beta, n: tuple[int, ...]) -> int:
    """The q-exponent E(n) of the summand indexed by n."""
    _check_beta(p, beta)
    e = 0
    for r in range(p.R):
        e += p.alpha[r][r] * n[r] * (n[r] - 1) // 2 + beta[r] * n[r]
        for s in range(r + 1, p.R):
            e += p.alpha[r][s] * n[r] * n[s]
    return e


def check_positivity(p: MultisumProfile, beta: Beta) -> bool:
    """Is E(n) > 0 for every nonzero n in N^R?

    Fast path: beta all >= 1 forces E(n) >= sum n_r > 0.  Otherwise test a
    box exhaustively and settle each axis ray separately: along e_r the
    exponent grows linearly in n once alpha_rr > 0, and stays at beta_r * n
    when alpha_rr = 0.
    """
    _check_beta(p, beta)
    if all(b >= 1 for b in beta):
        return True
    B = 2 + max(ceil(2 * abs(b) / max(p.alpha[r][r], 1)) for r, b in enumerate(beta))

    def box(prefix: tuple[int, ...]) -> bool:
        if len(prefix) == p.R:
            return not any(prefix) or energy(p, beta, prefix) > 0
        return all(box(prefix + (v,)) for v in range(B + 1))

    if not box(()):
        return False
    for r in range(p.R):
        if p.alpha[r][r] == 0 and beta[r] <= 0:
            return False
    return True


def eval_H(
    p: MultisumProfile, beta: Beta, x_max: int | None = None, q_max: int = 30
) -> Series:
    """Truncated evaluation of H(beta), enumerated by x-degree gamma . n.

    beta may be any integer vector, but a summand whose q-exponent E(n)
    would be negative cannot live in a power series and raises ValueError.
    """
    _check_beta(p, beta)
    if x_max is None:
        x_max = q_max
    R = p.R
    # cumulative reciprocal Pochhammers per coordinate: inv[r][k] = 1/(q^A_r; q^A_r)_k
    bound = [x_max // g for g in p.gamma]
    inv: list[list[Series]] = []
    for r in range(R):
        col = [Series.one(0, q_max)]
        for k in range(1, bound[r] + 1):
            col.append(col[-1] * geom_inverse(p.A[r] * k, 0, q_max))
        inv.append(col)

    acc = Series.zero(x_max, q_max)

    def walk(r: int, n: tuple[int, ...], xdeg: int, part: Series) -> None:
        nonlocal acc
        if r == R:
            e = energy(p, beta, n)
            if e < 0:
                raise ValueError(
                    f"summand n={n} of H(beta={beta}) has negative q-exponent {e}"
                )
            if e <= q_max:
                term: dict[tuple[int, int], int] = {}
                for (_, d), c in part.terms():
                    if e + d <= q_max:
                        term[(xdeg, e + d)] = c
                acc = acc + Series(term, x_max, q_max)
            return
        for k in range(0, (x_max - xdeg) // p.gamma[r] + 1):
            walk(r + 1, n + (k,), xdeg + k * p.gamma[r], part * inv[r][k])

    walk(0, (), 0, Series.one(0, q_max))
    return acc


def rec_children(
    p: MultisumProfile, beta: Beta, r: int
) -> tuple[Beta, tuple[int, int], Beta]:
    """Left child, right-edge weight exponents (gamma_r, beta_r), right child
    of the coordinate-r relation at beta.  r is 1-based."""
    _check_beta(p, beta)
    if not 1 <= r <= p.R:
        raise ValueError(f"coordinate must be in 1..{p.R}, got {r}")
    i = r - 1
    left = tuple(b + (p.A[i] if s == i else 0) for s, b in enumerate(beta))
    right = tuple(b + p.alpha[i][s] for s, b in enumerate(beta))
    return left, (p.gamma[i], beta[i]), right


def shift_beta(p: MultisumProfile, beta: Beta, S: int) -> Beta:
    """The parameter vector of H after substituting x -> x q^S."""
    _check_beta(p, beta)
    if S < 0:
        raise ValueError(f"shift must be >= 0, got {S}")
    return tuple(b + S * g for b, g in zip(beta, p.gamma))


def check_additional(p: MultisumProfile, S: int) -> bool:
    """Divisibility conditions tying the profile to a shift S: each modulus
    A_s must divide gamma_s * S and every alpha column entry alpha_rs."""
    for s in range(p.R):
        if (p.gamma[s] * S) % p.A[s] != 0:
            return False
        for r in range(p.R):
            if p.alpha[r][s] % p.A[s] != 0:
                return False
    return True


def verify_recurrence_numeric(
    p: MultisumProfile, beta: Beta, r: int, x_max: int | None = None, q_max: int = 30
) -> bool:
    """Check H(beta) = H(left) + x^gamma_r q^beta_r H(right) to truncation."""
    left, (xe, qe), right = rec_children(p, beta, r)
    if qe < 0:
        raise ValueError(f"weight exponent q^{qe} is negative; not a power series identity")
    if x_max is None:
        x_max = q_max
    lhs = eval_H(p, beta, x_max, q_max)
    rhs = eval_H(p, left, x_max, q_max) + monomial(1, xe, qe, x_max, q_max) * eval_H(
        p, right, x_max, q_max
    )
    return lhs.eq_upto(rhs)


# -- JSON interface ------------------------------------------------------


def profile_from_json(data: dict) -> MultisumProfile:
    try:
        alpha = tuple(tuple(int(e) for e in row) for row in data["alpha"])
        gamma = tuple(int(g) for g in data["gamma"])
        A = tuple(int(a) for a in data["A"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed profile description: {exc}") from exc
    return MultisumProfile(alpha=alpha, gamma=gamma, A=A)


def profile_to_json(p: MultisumProfile) -> dict:
    return {"alpha": [list(r) for r in p.alpha], "gamma": list(p.gamma), "A": list(p.A)}


def load_profile(path: str | Path) -> MultisumProfile:
    with open(path) as fh:
        return profile_from_json(json.load(fh))
