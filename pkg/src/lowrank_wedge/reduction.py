"""Permanent to D22 reduction through a two-color directed graph.

Each node ``i`` of the permanent's graph becomes ``N`` node pairs: a main
pair ``P_i`` and auxiliary pairs ``Q_ij`` for ``j != i``. Each pair has an
A node and a B node; edges only join nodes of the same letter, and the B
side repeats the A side with unit weights so the cycle-count signs of the
two halves cancel.

Pair slots (0-based here): ``P_i`` sits in slot ``i``, the ``Q_ij`` follow
in lexicographic ``(i, j)`` order. Slot ``s`` owns columns ``2s`` (A) and
``2s + 1`` (B).
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Any, Sequence

from .exterior import TwoFormFamily, d22_subset_sum
from .ring import (
    DimensionError,
    SizeGuardError,
    UnsupportedScalarError,
    _check_square,
    one_like,
    permanent_ryser,
    permutation_sign,
    rows_kind,
)

VERIFY_MAX_N = 4
CYCLE_COVER_MAX_NODES = 12


@dataclass(frozen=True)
class ReductionLayout:
    """Slot assignment of the ``N^2`` node pairs."""

    n: int

    @property
    def n_pairs(self) -> int:
        return self.n * self.n

    def main_slot(self, i: int) -> int:
        return i

    def aux_slot(self, i: int, j: int) -> int:
        if i == j:
            raise ValueError("auxiliary pairs need i != j")
        # row i holds n-1 auxiliary pairs; j skips the diagonal
        return self.n + i * (self.n - 1) + (j if j < i else j - 1)

    def aux_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in range(self.n) for j in range(self.n) if i != j]

    def label(self, slot: int) -> str:
        """1-based human label, e.g. ``P1`` or ``Q12``."""
        if slot < self.n:
            return f"P{slot + 1}"
        i, j = self.aux_pairs()[slot - self.n]
        return f"Q{i + 1}{j + 1}"


@dataclass(frozen=True)
class TwoColorGraph:
    """Directed graph on ``2M`` nodes with two edge colors.

    Row ``u`` of ``color1``/``color2`` holds the weights of the edges leaving
    node ``u``. Nodes ``2m`` and ``2m + 1`` form pair ``m`` and must leave
    through edges of one shared color.
    """

    color1: tuple
    color2: tuple

    def __post_init__(self):
        c1 = tuple(tuple(r) for r in self.color1)
        c2 = tuple(tuple(r) for r in self.color2)
        object.__setattr__(self, "color1", c1)
        object.__setattr__(self, "color2", c2)
        n = len(c1)
        if n % 2 or len(c2) != n:
            raise DimensionError("need an even number of nodes and equal row counts per color")
        for row in c1 + c2:
            if len(row) != n:
                raise DimensionError(f"edge rows must have length {n}, got {len(row)}")

    @property
    def m(self) -> int:
        return len(self.color1) // 2

    def to_family(self) -> TwoFormFamily:
        vectors = []
        for q in range(self.m):
            vectors += [self.color1[2 * q], self.color1[2 * q + 1], self.color2[2 * q], self.color2[2 * q + 1]]
        return TwoFormFamily(vectors)

    @classmethod
    def from_family(cls, family: TwoFormFamily) -> "TwoColorGraph":
        v = family.vectors
        c1, c2 = [], []
        for q in range(family.m):
            c1 += [v[4 * q], v[4 * q + 1]]
            c2 += [v[4 * q + 2], v[4 * q + 3]]
        return cls(c1, c2)


def reduce_permanent(a: Sequence[Sequence[Any]]) -> TwoFormFamily:
    """Family of ``4N^2`` vectors in dimension ``2N^2`` whose D22 is Per(a)."""
    n = _check_square(a)
    if n == 0:
        raise DimensionError("reduction needs N >= 1")
    if rows_kind(a) == "complex":
        raise UnsupportedScalarError("reduction is built over exact scalars")
    layout = ReductionLayout(n)
    one = one_like(a[0][0])
    zero = one * 0
    dim = 2 * layout.n_pairs

    def row(entries):
        r = [zero] * dim
        for col, val in entries:
            r[col] = val
        return r

    vectors: list = [None] * (4 * layout.n_pairs)

    def put(slot, c1a, c1b, c2a, c2b):
        vectors[4 * slot:4 * slot + 4] = [row(c1a), row(c1b), row(c2a), row(c2b)]

    for i in range(n):
        s = layout.main_slot(i)
        aux = [layout.aux_slot(i, j) for j in range(n) if j != i]
        put(
            s,
            [(2 * s, a[i][i])],
            [(2 * s + 1, one)],
            [(2 * layout.aux_slot(i, j), a[i][j]) for j in range(n) if j != i],
            [(2 * t + 1, one) for t in aux],
        )
    for i, j in layout.aux_pairs():
        s = layout.aux_slot(i, j)
        target = layout.main_slot(j)
        put(s, [(2 * s, one)], [(2 * s + 1, one)], [(2 * target, one)], [(2 * target + 1, one)])
    return TwoFormFamily(vectors)


def reduction_graph(a: Sequence[Sequence[Any]]) -> TwoColorGraph:
    return TwoColorGraph.from_family(reduce_permanent(a))


def verify_reduction(a: Sequence[Sequence[Any]], *, threads: int = 1, block_size: int | None = None):
    """``(Per(a), D22(reduce_permanent(a)), equal)`` from independent kernels."""
    n = _check_square(a)
    if n > VERIFY_MAX_N:
        raise SizeGuardError(f"verify_reduction limited to N <= {VERIFY_MAX_N}, got {n}")
    per = permanent_ryser(a)
    d22 = d22_subset_sum(reduce_permanent(a), threads=threads, block_size=block_size)
    return per, d22, per == d22


def _cycles(perm: Sequence[int]) -> int:
    n = len(perm)
    seen = [False] * n
    count = 0
    for u in range(n):
        if not seen[u]:
            count += 1
            while not seen[u]:
                seen[u] = True
                u = perm[u]
    return count


def cycle_cover_sum(g: TwoColorGraph):
    """Signed sum over cycle covers in which every pair uses one color.

    Each cover ``sigma`` is weighted by ``(-1)^(2M - cycles(sigma))``.
    For a fixed cover the colorings of different pairs are independent,
    so the ``2^M`` colorings are summed pair by pair:
    ``prod_m (w1(a)w1(b) + w2(a)w2(b))`` over the pair's nodes ``a, b``.
    Covers are grown by depth-first search over nonzero edges only.
    """
    n = 2 * g.m
    if n > CYCLE_COVER_MAX_NODES:
        raise SizeGuardError(f"cycle_cover_sum limited to {CYCLE_COVER_MAX_NODES} nodes, got {n}")
    if n == 0:
        return 1
    c1, c2 = g.color1, g.color2
    one = one_like(c1[0][0])
    total = one * 0
    targets = [[v for v in range(n) if c1[u][v] or c2[u][v]] for u in range(n)]
    sigma = [0] * n
    used = [False] * n

    def grow(u, acc):
        nonlocal total
        if u == n:
            sign = permutation_sign(sigma)
            total = total + acc if sign > 0 else total - acc
            return
        for v in targets[u]:
            if used[v]:
                continue
            used[v] = True
            sigma[u] = v
            if u % 2:
                a = u - 1
                w = c1[a][sigma[a]] * c1[u][v] + c2[a][sigma[a]] * c2[u][v]
                if w:
                    grow(u + 1, acc * w)
            else:
                grow(u + 1, acc)
            used[v] = False

    grow(0, one)
    return total


def cycle_cover_sum_explicit(g: TwoColorGraph):
    """Literal double loop over colorings and permutations. Tiny graphs only."""
    n = 2 * g.m
    if n > 8:
        raise SizeGuardError("explicit enumeration limited to 8 nodes")
    one = one_like(g.color1[0][0]) if n else 1
    total = one * 0
    for coloring in range(1 << g.m):
        rows = [(g.color2 if (coloring >> (u // 2)) & 1 else g.color1)[u] for u in range(n)]
        for sigma in permutations(range(n)):
            term = one
            for u in range(n):
                term = term * rows[u][sigma[u]]
            if (n - _cycles(sigma)) % 2:
                total = total - term
            else:
                total = total + term
    return total


def table_pattern(n: int) -> list[dict[int, str]]:
    """Symbolic nonzero pattern of the reduction vectors.

    Entry ``k`` maps 1-based column to ``"aij"`` or ``"1"`` for vector
    ``v_{k+1}``; used to compare against the tabulated N=3 layout.
    """
    layout = ReductionLayout(n)
    pattern: list[dict[int, str]] = [dict() for _ in range(4 * layout.n_pairs)]
    for i in range(n):
        s = layout.main_slot(i)
        pattern[4 * s][2 * s + 1] = f"a{i + 1}{i + 1}"
        pattern[4 * s + 1][2 * s + 2] = "1"
        for j in range(n):
            if j != i:
                t = layout.aux_slot(i, j)
                pattern[4 * s + 2][2 * t + 1] = f"a{i + 1}{j + 1}"
                pattern[4 * s + 3][2 * t + 2] = "1"
    for i, j in layout.aux_pairs():
        s = layout.aux_slot(i, j)
        t = layout.main_slot(j)
        pattern[4 * s][2 * s + 1] = "1"
        pattern[4 * s + 1][2 * s + 2] = "1"
        pattern[4 * s + 2][2 * t + 1] = "1"
        pattern[4 * s + 3][2 * t + 2] = "1"
    return pattern
