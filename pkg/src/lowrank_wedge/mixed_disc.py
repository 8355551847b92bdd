"""Mixed discriminants and their rank-2 embedding into D22.

The mixed discriminant here is the coefficient of ``t_1 t_2 ... t_M`` in
``det(t_1 A_1 + ... + t_M A_M)``, with no ``1/M!`` normalization, so that
``D(A, ..., A) = M! det(A)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Any, Sequence

from .exterior import TwoFormFamily, d22_subset_sum
from .ring import (
    DimensionError,
    SizeGuardError,
    UnsupportedScalarError,
    _check_square,
    det,
    one_like,
    rows_kind,
)

MIXED_DISC_MAX_M = 8
VERIFY_MAX_M = 6


@dataclass(frozen=True)
class Rank2Factors:
    """Vectors ``x0[i]``, ``x1[i]`` defining ``A_i = x0 x0^T + x1 x1^T``."""

    x0: tuple
    x1: tuple

    def __post_init__(self):
        x0 = tuple(tuple(v) for v in self.x0)
        x1 = tuple(tuple(v) for v in self.x1)
        object.__setattr__(self, "x0", x0)
        object.__setattr__(self, "x1", x1)
        m = len(x0)
        if len(x1) != m:
            raise DimensionError(f"x0 has {m} vectors but x1 has {len(x1)}")
        for v in x0 + x1:
            if len(v) != m:
                raise DimensionError(f"factor vectors must have length M={m}, got {len(v)}")

    @property
    def m(self) -> int:
        return len(self.x0)

    def matrices(self) -> list[list[list[Any]]]:
        """The assembled ``A_i``."""
        return [
            [[u[r] * u[c] + w[r] * w[c] for c in range(self.m)] for r in range(self.m)]
            for u, w in zip(self.x0, self.x1)
        ]


def _check_tuple(mats: Sequence) -> int:
    m = len(mats)
    for a in mats:
        if _check_square(a) != m:
            raise DimensionError(f"need {m} matrices of size {m}x{m}")
    return m


def mixed_discriminant(mats: Sequence[Sequence[Sequence[Any]]]):
    """Sum over bijections ``f`` of det of the matrix with row ``i`` taken from ``A_f(i)``."""
    m = _check_tuple(mats)
    if m > MIXED_DISC_MAX_M:
        raise SizeGuardError(f"mixed_discriminant limited to M <= {MIXED_DISC_MAX_M}, got {m}")
    if m == 0:
        return 1
    kind = rows_kind([row for a in mats for row in a])
    if kind == "complex":
        raise UnsupportedScalarError("mixed_discriminant is exact-only")
    total = one_like(mats[0][0][0]) * 0
    for f in permutations(range(m)):
        total = total + det([mats[f[i]][i] for i in range(m)], kind)
    return total


def mixed_discriminant_polarization(mats: Sequence[Sequence[Sequence[Any]]]):
    """Same quantity by inclusion-exclusion over subset sums:
    ``sum_S (-1)^(M-|S|) det(sum_{i in S} A_i)``.
    """
    m = _check_tuple(mats)
    if m == 0:
        return 1
    zero = one_like(mats[0][0][0]) * 0
    total = zero
    for size in range(1, m + 1):
        for subset in combinations(range(m), size):
            acc = [[zero] * m for _ in range(m)]
            for i in subset:
                acc = [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(acc, mats[i])]
            d = det(acc)
            total = total + d if (m - size) % 2 == 0 else total - d
    return total


def embed_rank2(f: Rank2Factors) -> TwoFormFamily:
    """``4M`` vectors in dimension ``2M``: each factor placed in the first or second half."""
    m = f.m
    vectors = []
    for u, w in zip(f.x0, f.x1):
        pad = [u[0] * 0 if m else 0] * m
        vectors += [list(u) + pad, pad + list(u), list(w) + pad, pad + list(w)]
    return TwoFormFamily(vectors)


def md_sign(m: int) -> int:
    return -1 if (m * (m - 1) // 2) % 2 else 1


def verify_md_identity(f: Rank2Factors):
    """``(D(A_1..A_M), (-1)^(M(M-1)/2) D22(embedding), equal)``."""
    if f.m > VERIFY_MAX_M:
        raise SizeGuardError(f"verify_md_identity limited to M <= {VERIFY_MAX_M}, got {f.m}")
    lhs = mixed_discriminant(f.matrices())
    d22 = d22_subset_sum(embed_rank2(f))
    rhs = d22 if md_sign(f.m) > 0 else -d22
    return lhs, rhs, lhs == rhs
