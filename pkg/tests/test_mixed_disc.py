from fractions import Fraction
from math import factorial

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lowrank_wedge.exterior import d22_subset_sum, d22_wedge
from lowrank_wedge.mixed_disc import (
    Rank2Factors,
    embed_rank2,
    md_sign,
    mixed_discriminant,
    mixed_discriminant_polarization,
    verify_md_identity,
)
from lowrank_wedge.ring import DimensionError, SizeGuardError, UnsupportedScalarError, det
from lowrank_wedge.suites import random_factors

PINNED = Rank2Factors([[1, 0], [1, 1]], [[0, 1], [1, -1]])


def matrix_tuples(max_m=4):
    def build(m):
        mat = st.lists(st.lists(st.integers(-4, 4), min_size=m, max_size=m), min_size=m, max_size=m)
        return st.lists(mat, min_size=m, max_size=m)

    return st.integers(1, max_m).flatmap(build)


def test_m1():
    assert mixed_discriminant([[[5]]]) == 5


def test_identity_and_double_identity():
    eye = [[1, 0], [0, 1]]
    two = [[2, 0], [0, 2]]
    # det(s I + 2 t I) = (s + 2t)^2, coefficient of s t is 4
    assert mixed_discriminant([eye, two]) == 4


def test_pinned_m2_case():
    assert PINNED.matrices() == [[[1, 0], [0, 1]], [[2, 0], [0, 2]]]
    assert d22_subset_sum(embed_rank2(PINNED)) == -4
    assert verify_md_identity(PINNED) == (4, 4, True)


def test_embedding_m1():
    a, b = 3, -2
    f = embed_rank2(Rank2Factors([[a]], [[b]]))
    assert f.vectors == ((a, 0), (0, a), (b, 0), (0, b))
    assert d22_subset_sum(f) == a * a + b * b
    assert verify_md_identity(Rank2Factors([[a]], [[b]])) == (13, 13, True)


def test_zero_factors():
    f = Rank2Factors([[0, 0], [0, 0]], [[0, 0], [0, 0]])
    assert d22_subset_sum(embed_rank2(f)) == 0


def test_m3_random():
    rng = np.random.default_rng(3)
    for _ in range(5):
        lhs, rhs, ok = verify_md_identity(random_factors(rng, 3))
        assert ok, (lhs, rhs)


def test_sign_values():
    assert [md_sign(m) for m in range(1, 7)] == [1, -1, -1, 1, 1, -1]


def test_rational_factors():
    f = Rank2Factors(
        [[Fraction(1, 2), Fraction(1, 3)], [Fraction(1), Fraction(2)]],
        [[Fraction(0), Fraction(1)], [Fraction(-1, 5), Fraction(1)]],
    )
    lhs, rhs, ok = verify_md_identity(f)
    assert ok and lhs == mixed_discriminant_polarization(f.matrices())


@settings(max_examples=40, deadline=None)
@given(matrix_tuples())
def test_bijection_sum_matches_polarization(mats):
    assert mixed_discriminant(mats) == mixed_discriminant_polarization(mats)


@settings(max_examples=40, deadline=None)
@given(matrix_tuples(), st.data())
def test_symmetric_in_slots(mats, data):
    order = data.draw(st.permutations(range(len(mats))))
    assert mixed_discriminant([mats[i] for i in order]) == mixed_discriminant(mats)


@settings(max_examples=40, deadline=None)
@given(matrix_tuples(), st.data(), st.integers(-3, 3))
def test_linear_in_each_slot(mats, data, c):
    m = len(mats)
    i = data.draw(st.integers(0, m - 1))
    other = data.draw(st.lists(st.lists(st.integers(-4, 4), min_size=m, max_size=m), min_size=m, max_size=m))
    combo = [[c * x + y for x, y in zip(r1, r2)] for r1, r2 in zip(mats[i], other)]
    swapped = list(mats)
    swapped[i] = other
    mixed = list(mats)
    mixed[i] = combo
    assert mixed_discriminant(mixed) == c * mixed_discriminant(mats) + mixed_discriminant(swapped)


@settings(max_examples=30, deadline=None)
@given(matrix_tuples())
def test_equal_slots_give_factorial_det(mats):
    a = mats[0]
    m = len(a)
    assert mixed_discriminant([a] * m) == factorial(m) * det(a)


def test_identity_also_holds_through_wedge():
    rng = np.random.default_rng(4)
    f = random_factors(rng, 4)
    lhs, rhs, _ = verify_md_identity(f)
    assert md_sign(4) * d22_wedge(embed_rank2(f)) == lhs


def test_errors():
    with pytest.raises(DimensionError):
        Rank2Factors([[1, 2]], [[1, 2]])
    with pytest.raises(DimensionError):
        mixed_discriminant([[[1, 0], [0, 1]]])
    with pytest.raises(SizeGuardError):
        mixed_discriminant([[[0] * 9] * 9] * 9)
    with pytest.raises(SizeGuardError):
        verify_md_identity(Rank2Factors([[0] * 7] * 7, [[0] * 7] * 7))
    with pytest.raises(UnsupportedScalarError):
        mixed_discriminant([[[1j]]])
