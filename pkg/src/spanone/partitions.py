"""Integer partitions and the predicates that carve out our partition classes.

Partitions are weakly decreasing tuples of positive parts.  The two
structural moves everything else is built from:

* ``phi`` adds 1 to every part (repeatedly: ``phi(p, k)``), so parts shift
  upward without changing their number;
* ``oplus`` is multiset union, merging two partitions part by part.

A brute-force generating function over all partitions of n <= q_max,
filtered by an arbitrary predicate, serves as the reference count that the
structured constructions elsewhere in the package are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from .series import Series


@dataclass(frozen=True)
class Partition:
    """Weakly decreasing tuple of positive integer parts; () is the empty partition."""

    parts: tuple[int, ...] = ()

    def __post_init__(self):
        for i, p in enumerate(self.parts):
            if p < 1:
                raise ValueError(f"parts must be positive, got {p}")
            if i and self.parts[i - 1] < p:
                raise ValueError(f"parts must be weakly decreasing, got {self.parts}")

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def num_parts(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __str__(self) -> str:
        return format_partition(self)

    def __repr__(self) -> str:
        return f"Partition({format_partition(self)!r})"


EMPTY = Partition()


def parse_partition(text: str) -> Partition:
    """Parse the literal syntax ``a+b+c`` (weakly decreasing) or ``empty``."""
    text = text.strip()
    if text == "empty":
        return EMPTY
    try:
        parts = tuple(int(tok) for tok in text.split("+"))
    except ValueError:
        raise ValueError(f"bad partition literal {text!r}") from None
    return Partition(parts)


def format_partition(p: Partition) -> str:
    return "empty" if not p.parts else "+".join(str(a) for a in p.parts)


def phi(p: Partition, k: int = 1) -> Partition:
    """Add k to every part (k >= 0).  The empty partition is fixed."""
    if k < 0:
        raise ValueError(f"phi exponent must be >= 0, got {k}")
    return Partition(tuple(a + k for a in p.parts))


def oplus(p: Partition, r: Partition) -> Partition:
    """Multiset union of the parts of p and r."""
    return Partition(tuple(sorted(p.parts + r.parts, reverse=True)))


def s_tail(p: Partition, s: int) -> Partition:
    """The sub-partition of parts that are <= s."""
    return Partition(tuple(a for a in p.parts if a <= s))


def satisfies_gap(p: Partition, d: int, k: int) -> bool:
    """True when every pair of parts at distance k differs by at least d."""
    parts = p.parts
    return all(parts[i] - parts[i + k] >= d for i in range(len(parts) - k))


def kr_i1_predicate(p: Partition) -> bool:
    """Difference at least 3 at distance 2, and any two consecutive parts
    that differ by at most 1 must sum to a multiple of 3."""
    if not satisfies_gap(p, 3, 2):
        return False
    parts = p.parts
    for i in range(len(parts) - 1):
        if parts[i] - parts[i + 1] <= 1 and (parts[i] + parts[i + 1]) % 3 != 0:
            return False
    return True


def partitions_of(n: int) -> Iterator[Partition]:
    """All partitions of n, in lexicographic order of their part lists."""

    def gen(remaining: int, cap: int) -> Iterator[tuple[int, ...]]:
        if remaining == 0:
            yield ()
            return
        for first in range(1, min(cap, remaining) + 1):
            for rest in gen(remaining - first, first):
                yield (first,) + rest

    for parts in gen(n, n):
        yield Partition(parts)


def oracle_genfun(
    pred: Callable[[Partition], bool], q_max: int, x_max: int | None = None
) -> Series:
    """Sum of x^(number of parts) q^(size) over all partitions of n <= q_max
    that satisfy pred.  Exhaustive, hence slow but authoritative."""
    if x_max is None:
        x_max = q_max
    coeffs: dict[tuple[int, int], int] = {}
    for n in range(q_max + 1):
        for p in partitions_of(n):
            if len(p) <= x_max and pred(p):
                key = (len(p), n)
                coeffs[key] = coeffs.get(key, 0) + 1
    return Series(coeffs, x_max, q_max)
