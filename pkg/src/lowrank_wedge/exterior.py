"""Top coefficients of exterior products of low-rank forms.

A family of ``M`` rank-two two-forms in dimension ``2M`` is stored as
``4M`` row vectors; quadruplet ``m`` (0-based here) holds vectors
``4m .. 4m+3`` and contributes the form ``v[4m]^v[4m+1] + v[4m+2]^v[4m+3]``.
Its wedge product is a multiple of the volume form, and that multiple is
what every evaluator below returns.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Iterator, Sequence

import numpy as np

from .ring import (
    DimensionError,
    SizeGuardError,
    UnsupportedScalarError,
    det,
    rows_kind,
)

WEDGE_TERM_LIMIT = 1 << 22
DKR_TERM_LIMIT = 1 << 24

# fast path: below this fraction of the Hadamard bound a step is refactored
SINGULAR_RTOL = 1e-12
LOG_SINGULAR_RTOL = math.log(SINGULAR_RTOL)
# updates whose determinant ratio leaves [1/CAP_RANGE, CAP_RANGE] are refactored
CAP_RANGE = 1e4
REFRESH_INTERVAL = 256


@dataclass(frozen=True)
class TwoFormFamily:
    """``4M`` row vectors of dimension ``2M``."""

    vectors: tuple

    def __post_init__(self):
        vecs = tuple(tuple(v) for v in self.vectors)
        object.__setattr__(self, "vectors", vecs)
        if len(vecs) % 4:
            raise DimensionError(f"need a multiple of 4 vectors, got {len(vecs)}")
        dim = len(vecs) // 2
        for i, v in enumerate(vecs):
            if len(v) != dim:
                raise DimensionError(f"vector {i + 1} has length {len(v)}, expected {dim}")

    @property
    def m(self) -> int:
        return len(self.vectors) // 4

    @property
    def dim(self) -> int:
        return 2 * self.m

    @property
    def kind(self) -> str:
        return rows_kind(self.vectors)

    def pair(self, quad: int, choice: int) -> tuple:
        """The two rows chosen from quadruplet ``quad`` by bit ``choice``."""
        base = 4 * quad + 2 * choice
        return self.vectors[base], self.vectors[base + 1]

    def stacked(self, choices: int) -> list:
        """``2M x 2M`` matrix for the choice bits packed in ``choices``."""
        rows = []
        for q in range(self.m):
            rows.extend(self.pair(q, (choices >> q) & 1))
        return rows

    def permuted(self, order: Sequence[int]) -> "TwoFormFamily":
        """Family with quadruplets reordered; ``order[i]`` is the old index."""
        return TwoFormFamily(tuple(v for q in order for v in self.vectors[4 * q:4 * q + 4]))


@dataclass(frozen=True)
class KFormFamily:
    """``M`` k-forms in dimension ``kM``, each a sum of at most ``r`` blades.

    ``forms[i][b]`` is blade ``b`` of form ``i``: a tuple of ``k`` vectors.
    """

    forms: tuple
    k: int
    r: int | None = None

    def __post_init__(self):
        forms = tuple(tuple(tuple(tuple(v) for v in blade) for blade in form) for form in self.forms)
        object.__setattr__(self, "forms", forms)
        if self.k < 1:
            raise DimensionError("form degree k must be >= 1")
        rank = max((len(f) for f in forms), default=0)
        if self.r is None:
            object.__setattr__(self, "r", max(rank, 1))
        elif rank > self.r:
            raise DimensionError(f"a form has {rank} blades, more than r={self.r}")
        dim = self.k * len(forms)
        for i, form in enumerate(forms):
            if not form:
                raise DimensionError(f"form {i + 1} has no blades")
            for blade in form:
                if len(blade) != self.k:
                    raise DimensionError(f"form {i + 1}: blade of {len(blade)} vectors, expected k={self.k}")
                for v in blade:
                    if len(v) != dim:
                        raise DimensionError(f"form {i + 1}: vector of length {len(v)}, expected {dim}")

    @property
    def m(self) -> int:
        return len(self.forms)

    @property
    def dim(self) -> int:
        return self.k * self.m

    @classmethod
    def from_two_forms(cls, family: TwoFormFamily) -> "KFormFamily":
        forms = [
            [family.pair(q, 0), family.pair(q, 1)]
            for q in range(family.m)
        ]
        return cls(forms, k=2, r=2)


def gray_code(i: int) -> int:
    return i ^ (i >> 1)


def gray_flip(i: int) -> int:
    """Bit that changes between ``gray_code(i - 1)`` and ``gray_code(i)``."""
    return (i & -i).bit_length() - 1


def block_ranges(total: int, block_size: int | None) -> list[tuple[int, int]]:
    if not block_size or block_size >= total:
        return [(0, total)]
    return [(lo, min(lo + block_size, total)) for lo in range(0, total, block_size)]


def _exact_block(family: TwoFormFamily, lo: int, hi: int):
    kind = family.kind
    code = gray_code(lo)
    rows = family.stacked(code)
    total = det(rows, kind)
    for i in range(lo + 1, hi):
        q = gray_flip(i)
        code ^= 1 << q
        rows[2 * q], rows[2 * q + 1] = family.pair(q, (code >> q) & 1)
        total = total + det(rows, kind)
    return total


def _run_blocks(worker, family, ranges, threads: int):
    if threads and threads > 1 and len(ranges) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(worker, [family] * len(ranges), *zip(*ranges)))
    else:
        parts = [worker(family, lo, hi) for lo, hi in ranges]
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total


def d22_subset_sum(family: TwoFormFamily, *, block_size: int | None = None, threads: int = 1):
    """Sum of ``2^M`` determinants, one per choice of pair in each quadruplet.

    Choices are walked in Gray-code order and every determinant is computed
    from scratch. ``block_size`` splits the walk into contiguous blocks that
    may run in separate processes; blocks are summed in block order.
    """
    if not isinstance(family, TwoFormFamily):
        family = TwoFormFamily(family)
    if family.m == 0:
        return 1
    ranges = block_ranges(1 << family.m, block_size)
    return _run_blocks(_exact_block, family, ranges, threads)


class _FastWalker:
    """Gray-code walk keeping the inverse of the current stacked matrix.

    Swapping the pair of quadruplet ``q`` replaces rows ``2q, 2q+1``. With
    ``A' = A + E D`` where ``E`` selects those rows and ``D`` is the row
    change, ``det A' = det A * det(I + D A^-1 E)`` and the inverse follows
    from the Woodbury identity.
    """

    def __init__(self, vectors: np.ndarray, m: int, code: int):
        self.v = vectors
        norms = np.linalg.norm(vectors, axis=1)
        with np.errstate(divide="ignore"):
            pair_log = np.log(norms).reshape(m, 2, 2).sum(axis=2)
        # log Hadamard bound contribution of each (quadruplet, choice)
        self.pair_log = pair_log.tolist()
        self.code = code
        self.a = np.concatenate([vectors[4 * q + 2 * ((code >> q) & 1):][:2] for q in range(m)])
        self.log_bound = sum(self.pair_log[q][(code >> q) & 1] for q in range(m))
        self.refactor()

    def _near_singular(self, value: complex) -> bool:
        if value == 0 or self.log_bound == -math.inf:
            return True
        return math.log(abs(value)) < self.log_bound + LOG_SINGULAR_RTOL

    def refactor(self):
        self.det = complex(np.linalg.det(self.a))
        self.since_refactor = 0
        self.inv = None if self._near_singular(self.det) else np.linalg.inv(self.a)

    def step(self, q: int):
        old_choice = (self.code >> q) & 1
        self.code ^= 1 << q
        base = 4 * q + 2 * (1 - old_choice)
        new = self.v[base:base + 2]
        self.log_bound += self.pair_log[q][1 - old_choice] - self.pair_log[q][old_choice]
        if math.isnan(self.log_bound):
            self.log_bound = sum(self.pair_log[j][(self.code >> j) & 1] for j in range(len(self.pair_log)))
        r = slice(2 * q, 2 * q + 2)
        if self.inv is None or self.since_refactor >= REFRESH_INTERVAL:
            self.a[r] = new
            self.refactor()
            return
        delta = new - self.a[r]
        inv_cols = self.inv[:, r]
        cap = delta @ inv_cols
        c00 = cap[0, 0] + 1
        c11 = cap[1, 1] + 1
        c01 = cap[0, 1]
        c10 = cap[1, 0]
        cap_det = c00 * c11 - c01 * c10
        new_det = self.det * cap_det
        self.a[r] = new
        if not 1 / CAP_RANGE <= abs(cap_det) <= CAP_RANGE or self._near_singular(new_det):
            self.refactor()
            return
        cap_inv = np.array([[c11, -c01], [-c10, c00]]) / cap_det
        self.inv -= (inv_cols @ cap_inv) @ (delta @ self.inv)
        self.det = new_det
        self.since_refactor += 1


def _fast_block(family_arr, lo: int, hi: int) -> complex:
    vectors, m = family_arr
    walker = _FastWalker(vectors, m, gray_code(lo))
    total = walker.det
    for i in range(lo + 1, hi):
        walker.step(gray_flip(i))
        total += walker.det
    return total


def d22_float_fast(family: TwoFormFamily, *, block_size: int | None = None, threads: int = 1) -> complex:
    """Floating-point D22 with one rank-2 determinant update per Gray step.

    A step is recomputed from a fresh LU factorization when its matrix is
    close to singular relative to its Hadamard bound, when the determinant
    ratio of the update is extreme (the carried inverse is then
    ill-conditioned), and every ``REFRESH_INTERVAL`` steps to bound drift.
    """
    if not isinstance(family, TwoFormFamily):
        family = TwoFormFamily(family)
    if family.kind != "complex":
        raise UnsupportedScalarError("d22_float_fast needs complex scalars")
    if family.m == 0:
        return 1 + 0j
    vectors = np.asarray(family.vectors, dtype=complex)
    ranges = block_ranges(1 << family.m, block_size)
    return complex(_run_blocks(_fast_block, (vectors, family.m), ranges, threads))


def _blade_sign(low: int, high: int) -> int:
    """Sign of ``e_low ^ e_high`` after sorting the union of both index sets.

    Counts pairs (a in low, b in high) with a > b.
    """
    inversions = 0
    h = high
    while h:
        b = h & -h
        inversions += bin(low & ~((b << 1) - 1)).count("1")
        h ^= b
    return -1 if inversions & 1 else 1


def _form_coefficients(form, dim: int) -> dict[int, Any]:
    """Coefficients of a sum of k-blades on the basis ``e_S``, ``|S| = k``."""
    coeffs: dict[int, Any] = {}
    k = len(form[0])
    for cols in combinations(range(dim), k):
        mask = 0
        for c in cols:
            mask |= 1 << c
        value = None
        for blade in form:
            minor = det([[v[c] for c in cols] for v in blade])
            value = minor if value is None else value + minor
        if value:
            coeffs[mask] = value
    return coeffs


def wedge_top(forms: Sequence, dim: int):
    """Top coefficient of ``forms[0] ^ forms[1] ^ ...`` via a sparse multivector."""
    state: dict[int, Any] = {0: 1}
    for form in forms:
        coeffs = _form_coefficients(form, dim)
        nxt: dict[int, Any] = {}
        for mask, c in state.items():
            for fmask, w in coeffs.items():
                if mask & fmask:
                    continue
                term = c * w if _blade_sign(mask, fmask) > 0 else -(c * w)
                key = mask | fmask
                if key in nxt:
                    nxt[key] = nxt[key] + term
                else:
                    nxt[key] = term
        state = {key: val for key, val in nxt.items() if val}
        if len(state) > WEDGE_TERM_LIMIT:
            raise SizeGuardError(f"multivector grew to {len(state)} terms (limit {WEDGE_TERM_LIMIT})")
        if not state:
            break
    top = (1 << dim) - 1
    if top in state:
        return state[top]
    # carry the ring's zero
    for form in forms:
        return form[0][0][0] * 0
    return 0


def d22_wedge(family: TwoFormFamily):
    """D22 as the product ``(v1^v2 + v3^v4) ^ ... `` expanded on subsets."""
    if not isinstance(family, TwoFormFamily):
        family = TwoFormFamily(family)
    if family.kind == "complex":
        raise UnsupportedScalarError("d22_wedge is exact-only")
    if family.m == 0:
        return 1
    forms = [[family.pair(q, 0), family.pair(q, 1)] for q in range(family.m)]
    return wedge_top(forms, family.dim)


def dkr_eval(family: KFormFamily):
    """``w_1 ^ ... ^ w_M`` as a sum of determinants over all blade choices."""
    if rows_kind([v for form in family.forms for blade in form for v in blade]) == "complex":
        raise UnsupportedScalarError("dkr_eval is exact-only")
    counts = [len(form) for form in family.forms]
    n_terms = math.prod(counts)
    if family.r ** family.m > DKR_TERM_LIMIT:
        raise SizeGuardError(f"r^M = {family.r ** family.m} exceeds {DKR_TERM_LIMIT}")
    if family.m == 0:
        return 1
    total = None
    for choice in product(*(range(c) for c in counts)):
        rows = [v for form, b in zip(family.forms, choice) for v in form[b]]
        d = det(rows)
        total = d if total is None else total + d
    assert n_terms > 0
    return total


def dkr_wedge(family: KFormFamily):
    """Same value as :func:`dkr_eval`, through the sparse multivector."""
    return wedge_top(family.forms, family.dim)


def random_family(rng: np.random.Generator, m: int, low: int = -9, high: int = 9) -> TwoFormFamily:
    """Integer family with entries uniform in ``[low, high]``."""
    data = rng.integers(low, high + 1, size=(4 * m, 2 * m))
    return TwoFormFamily([[int(x) for x in row] for row in data])


def random_complex_family(rng: np.random.Generator, m: int) -> TwoFormFamily:
    data = rng.standard_normal((4 * m, 2 * m)) + 1j * rng.standard_normal((4 * m, 2 * m))
    return TwoFormFamily([[complex(x) for x in row] for row in data])


def iter_choices(m: int) -> Iterator[int]:
    """Choice codes in Gray-code order."""
    for i in range(1 << m):
        yield gray_code(i)
