"""Exit criteria, one test each, at the pinned tolerances and time budgets.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per
criterion in the terminal summary.
"""

import time

import numpy as np

from lowrank_wedge.cli import bench_rows
from lowrank_wedge.exterior import (
    KFormFamily,
    TwoFormFamily,
    d22_float_fast,
    d22_subset_sum,
    d22_wedge,
    dkr_eval,
    random_complex_family,
    random_family,
)
from lowrank_wedge.fermion import (
    ScatteringProblem,
    all_configs,
    amplitude_d22,
    amplitude_fock,
    haar_unitary,
    output_distribution,
)
from lowrank_wedge.mixed_disc import Rank2Factors, embed_rank2, verify_md_identity
from lowrank_wedge.reduction import cycle_cover_sum, reduce_permanent, table_pattern, verify_reduction
from lowrank_wedge.ring import det
from lowrank_wedge.suites import random_factors, random_graph, random_int_matrix, reduction_suite

from test_reduction import TABLE_N3, realize

SEED = 20240601


def test_c1_appendix_reproduction(criterion):
    t0 = time.perf_counter()
    primes = [[2, 3, 5], [7, 11, 13], [17, 19, 23]]
    layout_ok = table_pattern(3) == [TABLE_N3[k] for k in range(1, 37)]
    layout_ok &= [list(v) for v in reduce_permanent(primes).vectors] == realize(table_pattern(3), primes)
    suite = reduction_suite(SEED, 200, sizes=(3,))
    elapsed = time.perf_counter() - t0
    ok = layout_ok and suite.passed and suite.checked >= 200 and elapsed < 10
    criterion("1 appendix table", ok, f"layout={layout_ok}, {suite.checked} matrices exact={suite.passed}, {elapsed:.1f}s < 10s")
    assert layout_ok
    assert suite.passed, suite.failures[:3]
    assert elapsed < 10


def test_c2_reduction_n4(criterion):
    rng = np.random.default_rng([SEED, 2])
    t0 = time.perf_counter()
    results = [verify_reduction(random_int_matrix(rng, 4)) for _ in range(10)]
    elapsed = time.perf_counter() - t0
    ok = all(r[2] for r in results) and elapsed < 600
    criterion("2 reduction N=4", ok, f"10 instances exact={all(r[2] for r in results)}, {elapsed:.1f}s < 600s")
    assert all(r[2] for r in results), [r for r in results if not r[2]]
    assert elapsed < 600


def test_c3_subset_equals_wedge(criterion):
    rng = np.random.default_rng([SEED, 3])
    t0 = time.perf_counter()
    mismatches = []
    for t in range(120):
        f = random_family(rng, 1 + t % 6)
        a, b = d22_subset_sum(f), d22_wedge(f)
        if a != b:
            mismatches.append((t, a, b))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 30
    criterion("3 subset sum = wedge", ok, f"120 families M<=6, {len(mismatches)} mismatches, {elapsed:.1f}s < 30s")
    assert not mismatches
    assert elapsed < 30


def test_c4_cycle_cover(criterion):
    rng = np.random.default_rng([SEED, 4])
    t0 = time.perf_counter()
    mismatches = []
    for t in range(60):
        g = random_graph(rng, 1 + t % 4)
        a, b = cycle_cover_sum(g), d22_subset_sum(g.to_family())
        if a != b:
            mismatches.append((t, a, b))
    elapsed = time.perf_counter() - t0
    ok = not mismatches and elapsed < 60
    criterion("4 cycle covers", ok, f"60 graphs M<=4, {len(mismatches)} mismatches, {elapsed:.1f}s < 60s")
    assert not mismatches
    assert elapsed < 60


def test_c5_mixed_discriminant_identity(criterion):
    t0 = time.perf_counter()
    pinned = Rank2Factors([[1, 0], [1, 1]], [[0, 1], [1, -1]])
    pinned_ok = verify_md_identity(pinned) == (4, 4, True) and d22_subset_sum(embed_rank2(pinned)) == -4
    rng = np.random.default_rng([SEED, 5])
    failures = []
    for t in range(100):
        lhs, rhs, ok = verify_md_identity(random_factors(rng, 1 + t % 5))
        if not ok:
            failures.append((t, lhs, rhs))
    elapsed = time.perf_counter() - t0
    ok = pinned_ok and not failures and elapsed < 60
    criterion("5 mixed discriminant", ok, f"pinned M=2 ok={pinned_ok}, 100 sets M<=5, {len(failures)} failures, {elapsed:.1f}s < 60s")
    assert pinned_ok
    assert not failures
    assert elapsed < 60


def test_c6_ring_generality(criterion):
    t0 = time.perf_counter()
    modp = reduction_suite(SEED, 200, kind="modp", sizes=(3,))
    rational = reduction_suite(SEED, 200, kind="rational", sizes=(3,))
    elapsed = time.perf_counter() - t0
    ok = modp.passed and rational.passed
    criterion("6 ring generality", ok, f"modp exact={modp.passed}, rational exact={rational.passed}, 200 each, {elapsed:.1f}s")
    assert modp.passed, modp.failures[:3]
    assert rational.passed, rational.failures[:3]


def test_c7_fermion_oracle(criterion):
    t0 = time.perf_counter()
    worst = 0.0
    for seed in range(20):
        for m in (1, 2):
            p = ScatteringProblem(haar_unitary(4 * m, SEED + seed))
            for cfg in all_configs(4 * m, 2 * m):
                worst = max(worst, abs(amplitude_d22(p, cfg) - amplitude_fock(p, cfg)))
    norm_err = 0.0
    for m in (1, 2, 3):
        for seed in range(3):
            total = sum(r[2] for r in output_distribution(ScatteringProblem(haar_unitary(4 * m, SEED + seed))))
            norm_err = max(norm_err, abs(total - 1))
    elapsed = time.perf_counter() - t0
    ok = worst <= 1e-10 and norm_err <= 1e-8 and elapsed < 60
    criterion("7 fermion oracle", ok, f"max|d22-fock|={worst:.2e} <= 1e-10, max|sum p - 1|={norm_err:.2e} <= 1e-8, {elapsed:.1f}s < 60s")
    assert worst <= 1e-10
    assert norm_err <= 1e-8
    assert elapsed < 60


def _near_singular(rng, f: TwoFormFamily, variant: int) -> TwoFormFamily:
    v = [list(x) for x in f.vectors]
    m = f.m
    if variant == 1 and m >= 2:
        v[4] = list(v[0])  # exactly singular for choices (0, 0) on quadruplets 1, 2
    elif variant == 2 and m >= 2:
        v[4] = [x + 1e-9 * rng.standard_normal() for x in v[0]]
    elif variant == 3:
        v[1] = [0j] * f.dim
    elif variant == 4 and m >= 3:
        v[9] = [2 * x - 3j * y for x, y in zip(v[0], v[1])]  # rank drop across three quadruplets
    return TwoFormFamily(v)


def test_c8_float_fast_path(criterion):
    rng = np.random.default_rng([SEED, 8])
    worst = 0.0
    for t in range(120):
        m = 1 + t % 12
        f = _near_singular(rng, random_complex_family(rng, m), t % 5)
        full = d22_subset_sum(f)
        fast = d22_float_fast(f)
        worst = max(worst, abs(fast - full) / abs(full))
    ok = worst <= 1e-8
    criterion("8 float fast path", ok, f"120 families M<=12 incl. singular/near-singular, max rel err {worst:.2e} <= 1e-8")
    assert worst <= 1e-8


def test_c9_scaling(criterion):
    times = {}
    for repeat in range(2):
        for method, m, secs, _ in bench_rows(14, 20 if repeat == 0 else 18, SEED, exact=False):
            times[m] = min(times.get(m, secs), secs)
    ratios = {m: times[m] / times[m - 1] for m in range(15, 21)}
    ok = all(1.6 <= r <= 2.6 for r in ratios.values())
    detail = ", ".join(f"{m}:{r:.2f}" for m, r in ratios.items())
    criterion("9 fast-path scaling", ok, f"time ratios M/(M-1) in [1.6, 2.6]: {detail}")
    assert ok, ratios


def test_c10_k1_is_determinant(criterion):
    rng = np.random.default_rng([SEED, 10])
    mismatches = 0
    for t in range(100):
        m = 1 + t % 8
        vecs = rng.integers(-9, 10, size=(m, m)).tolist()
        if dkr_eval(KFormFamily([[[v]] for v in vecs], k=1)) != det(vecs):
            mismatches += 1
    criterion("10 k=1 determinant", mismatches == 0, f"100 instances, {mismatches} mismatches")
    assert mismatches == 0
