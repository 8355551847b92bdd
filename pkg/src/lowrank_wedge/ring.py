"""Ring-generic scalars and the two base kernels, determinant and permanent.

Scalars are plain Python objects:

* ``int`` for arbitrary-precision integers ("bigint"),
* :class:`fractions.Fraction` for rationals ("rational"),
* :class:`ModP` for integers modulo a prime ("modp"),
* ``complex`` for double-precision complex numbers ("complex").

Matrices are sequences of rows. Every kernel infers the ring from the
entries and refuses mixed variants.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations
from typing import Any, Sequence

import numpy as np

DEFAULT_PRIME = 1_000_000_007

NAIVE_PERMANENT_MAX = 10
RYSER_PERMANENT_MAX = 30

SCALAR_KINDS = ("bigint", "rational", "modp", "complex")


class DimensionError(ValueError):
    """Shape of an input does not satisfy the operation's contract."""


class SizeGuardError(ValueError):
    """Input exceeds the size guard of an exponential-time routine."""


class UnsupportedScalarError(TypeError):
    """Operation is not defined for the scalar variant it was given."""


class ModP:
    """Integer modulo a prime ``p``, always stored in ``[0, p)``."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int = DEFAULT_PRIME):
        if p < 2:
            raise ValueError(f"modulus must be >= 2, got {p}")
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return ModP(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return ModP(-self.value, self.p)

    def inverse(self) -> "ModP":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse modulo p")
        return ModP(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * ModP(o, self.p).inverse()

    def __pow__(self, exponent: int):
        return ModP(pow(self.value, exponent, self.p), self.p)

    def __eq__(self, other):
        if isinstance(other, ModP):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


def _kind_of_type(t: type) -> str:
    if issubclass(t, ModP):
        return "modp"
    if issubclass(t, Fraction):
        return "rational"
    if issubclass(t, (bool, np.bool_)):
        raise UnsupportedScalarError("booleans are not ring scalars")
    if issubclass(t, (int, np.integer)):
        return "bigint"
    if issubclass(t, (complex, float, np.complexfloating, np.floating)):
        return "complex"
    raise UnsupportedScalarError(f"unsupported scalar type {t.__name__}")


_KIND_BY_TYPE = {int: "bigint", Fraction: "rational", ModP: "modp", complex: "complex", float: "complex"}


def scalar_kind(x: Any) -> str:
    """Name of the scalar variant of ``x``."""
    return _KIND_BY_TYPE.get(type(x)) or _kind_of_type(type(x))


def rows_kind(rows: Sequence[Sequence[Any]]) -> str:
    """Common scalar variant of a matrix; raises on mixed variants."""
    types = {type(x) for row in rows for x in row}
    kinds = {_KIND_BY_TYPE.get(t) or _kind_of_type(t) for t in types}
    if not kinds:
        return "bigint"
    if len(kinds) > 1:
        raise UnsupportedScalarError(f"mixed scalar variants: {sorted(kinds)}")
    return kinds.pop()


def zero_like(x: Any):
    if isinstance(x, ModP):
        return ModP(0, x.p)
    if isinstance(x, Fraction):
        return Fraction(0)
    if scalar_kind(x) == "complex":
        return 0j
    return 0


def one_like(x: Any):
    if isinstance(x, ModP):
        return ModP(1, x.p)
    if isinstance(x, Fraction):
        return Fraction(1)
    if scalar_kind(x) == "complex":
        return 1 + 0j
    return 1


def _ring_identity(rows, default=1):
    for row in rows:
        for x in row:
            return one_like(x)
    return default


def _check_square(rows) -> int:
    n = len(rows)
    for row in rows:
        if len(row) != n:
            raise DimensionError(f"expected a square matrix, got {n} rows of length {len(row)}")
    return n


def _structurally_singular(rows, n: int) -> bool:
    """True when some row or column is identically zero."""
    covered = 0
    for row in rows:
        support = 0
        for j, x in enumerate(row):
            if x:
                support |= 1 << j
        if not support:
            return True
        covered |= support
    return covered != (1 << n) - 1


def _det_bareiss(rows, n: int) -> int:
    a = [list(map(int, row)) for row in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        row_k = a[k]
        for i in range(k + 1, n):
            row_i = a[i]
            lead = row_i[k]
            if lead == 0:
                if pivot != prev:
                    for j in range(k + 1, n):
                        if row_i[j]:
                            row_i[j] = row_i[j] * pivot // prev
            else:
                for j in range(k + 1, n):
                    row_i[j] = (pivot * row_i[j] - lead * row_k[j]) // prev
        prev = pivot
    return sign * a[n - 1][n - 1]


def _det_gauss(rows, n: int, one):
    a = [list(row) for row in rows]
    result = one
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return one * 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            result = -result
        pivot = a[k][k]
        result = result * pivot
        inv = one / pivot
        row_k = a[k]
        for i in range(k + 1, n):
            lead = a[i][k]
            if lead:
                factor = lead * inv
                row_i = a[i]
                for j in range(k + 1, n):
                    if row_k[j]:
                        row_i[j] = row_i[j] - factor * row_k[j]
    return result


def det(m: Sequence[Sequence[Any]], kind: str | None = None):
    """Determinant over the ring of the entries.

    Integers use fraction-free Bareiss elimination, rationals and residues
    use Gaussian elimination with exact division, complex entries use
    partially pivoted LU. ``kind`` skips scalar inference when the caller
    already knows it.
    """
    n = _check_square(m)
    if n == 0:
        return 1
    if kind is None:
        kind = rows_kind(m)
    if kind == "complex":
        return complex(np.linalg.det(np.asarray(m, dtype=complex)))
    if _structurally_singular(m, n):
        return _ring_identity(m) * 0
    if kind == "bigint":
        return _det_bareiss(m, n)
    return _det_gauss(m, n, _ring_identity(m))


def det_cofactor(m: Sequence[Sequence[Any]]):
    """Laplace expansion along the first row. Exponential; reference only."""
    n = _check_square(m)
    if n == 0:
        return 1
    if n == 1:
        return m[0][0]
    total = zero_like(m[0][0])
    for j in range(n):
        if not m[0][j]:
            continue
        minor = [row[:j] + row[j + 1:] for row in (list(r) for r in m[1:])]
        term = m[0][j] * det_cofactor(minor)
        total = total + term if j % 2 == 0 else total - term
    return total


def permutation_sign(perm: Sequence[int]) -> int:
    """Sign of a permutation of ``range(len(perm))`` from its cycle count."""
    n = len(perm)
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if not seen[start]:
            cycles += 1
            j = start
            while not seen[j]:
                seen[j] = True
                j = perm[j]
    return -1 if (n - cycles) % 2 else 1


def permanent_naive(m: Sequence[Sequence[Any]]):
    """Permanent by summing over all ``n!`` permutations."""
    n = _check_square(m)
    if n > NAIVE_PERMANENT_MAX:
        raise SizeGuardError(f"naive permanent limited to n <= {NAIVE_PERMANENT_MAX}, got {n}")
    one = _ring_identity(m)
    total = one * 0
    for sigma in permutations(range(n)):
        term = one
        for i in range(n):
            term = term * m[i][sigma[i]]
            if not term:
                break
        total = total + term
    return total


def permanent_ryser(m: Sequence[Sequence[Any]]):
    """Permanent by Ryser's inclusion-exclusion formula.

    Column subsets are visited in Gray-code order, so each step adds or
    removes one column from the running row sums: ``O(2^n n)`` operations.
    """
    n = _check_square(m)
    if n > RYSER_PERMANENT_MAX:
        raise SizeGuardError(f"Ryser permanent limited to n <= {RYSER_PERMANENT_MAX}, got {n}")
    one = _ring_identity(m)
    if n == 0:
        return one
    zero = one * 0
    row_sums = [zero] * n
    total = zero
    # the empty subset contributes prod(0) = 0 for n >= 1
    in_subset = [False] * n
    for g in range(1, 1 << n):
        j = (g & -g).bit_length() - 1
        in_subset[j] = not in_subset[j]
        if in_subset[j]:
            row_sums = [s + m[i][j] for i, s in enumerate(row_sums)]
        else:
            row_sums = [s - m[i][j] for i, s in enumerate(row_sums)]
        # subset size parity equals parity of the Gray index popcount
        prod = one
        for s in row_sums:
            prod = prod * s
            if not s:
                break
        if bin(g ^ (g >> 1)).count("1") % 2 == n % 2:
            total = total + prod
        else:
            total = total - prod
    return total


def matrix_kind_to_scalar(kind: str, value, p: int = DEFAULT_PRIME):
    """Lift a Python number into the scalar variant named ``kind``."""
    if kind == "bigint":
        return int(value)
    if kind == "rational":
        return Fraction(value)
    if kind == "modp":
        return ModP(int(value), p)
    if kind == "complex":
        return complex(value)
    raise UnsupportedScalarError(f"unknown scalar kind {kind!r}")


def convert_rows(rows, kind: str, p: int = DEFAULT_PRIME):
    return [[matrix_kind_to_scalar(kind, x, p) for x in row] for row in rows]
