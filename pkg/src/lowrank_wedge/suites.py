"""Identity battery behind ``lowrank-wedge verify-all``.

Every suite draws its inputs from ``numpy.random.default_rng([seed, tag])``
so results depend only on the seed and trial count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .exterior import TwoFormFamily, d22_subset_sum, d22_wedge, random_family
from .fermion import ScatteringProblem, all_configs, amplitude_d22, amplitude_fock, haar_unitary
from .mixed_disc import Rank2Factors, verify_md_identity
from .reduction import TwoColorGraph, cycle_cover_sum, reduce_permanent
from .ring import DEFAULT_PRIME, ModP, permanent_ryser


@dataclass
class SuiteResult:
    name: str
    passed: bool = True
    checked: int = 0
    failures: list[str] = field(default_factory=list)

    def record(self, ok: bool, detail: str):
        self.checked += 1
        if not ok:
            self.passed = False
            self.failures.append(detail)


def random_int_matrix(rng, n: int, low: int = -9, high: int = 9) -> list[list[int]]:
    return [[int(x) for x in row] for row in rng.integers(low, high + 1, size=(n, n))]


def _corrupt(family: TwoFormFamily) -> TwoFormFamily:
    """Negate the first entry of ``v_1`` (the a11 slot of the reduction)."""
    vectors = [list(v) for v in family.vectors]
    vectors[0][0] = -vectors[0][0]
    return TwoFormFamily(vectors)


def reduction_suite(
    seed: int,
    trials: int,
    kind: str = "bigint",
    sizes: tuple[int, ...] = (1, 2, 3),
    inject_fault: bool = False,
) -> SuiteResult:
    name = "reduction" if kind == "bigint" else f"reduction_{kind}"
    result = SuiteResult(name)
    rng = np.random.default_rng([seed, 1, *sizes])
    for t in range(trials):
        for n in sizes:
            a = random_int_matrix(rng, n)
            if kind == "modp":
                a = [[ModP(x, DEFAULT_PRIME) for x in row] for row in a]
            elif kind == "rational":
                den = rng.integers(1, 6, size=(n, n))
                a = [[Fraction(x, int(d)) for x, d in zip(row, drow)] for row, drow in zip(a, den)]
            family = reduce_permanent(a)
            if inject_fault:
                family = _corrupt(family)
            per = permanent_ryser(a)
            d22 = d22_subset_sum(family)
            result.record(per == d22, f"trial {t} (N={n}): Per={per} D22={d22}")
    return result


def eq3_eq4_suite(seed: int, trials: int, max_m: int = 6) -> SuiteResult:
    result = SuiteResult("eq3_eq4")
    rng = np.random.default_rng([seed, 2])
    for t in range(trials):
        m = 1 + t % max_m
        f = random_family(rng, m)
        lhs, rhs = d22_subset_sum(f), d22_wedge(f)
        result.record(lhs == rhs, f"trial {t} (M={m}): subset={lhs} wedge={rhs}")
    return result


def random_graph(rng, m: int, low: int = -3, high: int = 3) -> TwoColorGraph:
    c1 = rng.integers(low, high + 1, size=(2 * m, 2 * m)).tolist()
    c2 = rng.integers(low, high + 1, size=(2 * m, 2 * m)).tolist()
    return TwoColorGraph(c1, c2)


def cycle_cover_suite(seed: int, trials: int, max_m: int = 4) -> SuiteResult:
    result = SuiteResult("cycle_cover")
    rng = np.random.default_rng([seed, 3])
    for t in range(trials):
        m = 1 + t % max_m
        g = random_graph(rng, m)
        lhs, rhs = cycle_cover_sum(g), d22_subset_sum(g.to_family())
        result.record(lhs == rhs, f"trial {t} (M={m}): covers={lhs} D22={rhs}")
    return result


def random_factors(rng, m: int, low: int = -3, high: int = 3) -> Rank2Factors:
    return Rank2Factors(
        rng.integers(low, high + 1, size=(m, m)).tolist(),
        rng.integers(low, high + 1, size=(m, m)).tolist(),
    )


def md_suite(seed: int, trials: int, max_m: int = 4) -> SuiteResult:
    result = SuiteResult("mixed_discriminant")
    rng = np.random.default_rng([seed, 4])
    for t in range(trials):
        m = 1 + t % max_m
        lhs, rhs, ok = verify_md_identity(random_factors(rng, m))
        result.record(ok, f"trial {t} (M={m}): D={lhs} signed D22={rhs}")
    return result


def fermion_suite(seed: int, trials: int, tol: float = 1e-10) -> SuiteResult:
    result = SuiteResult("fermion_oracle")
    for t in range(trials):
        for m in (1, 2):
            p = ScatteringProblem(haar_unitary(4 * m, seed + t))
            err = max(abs(amplitude_d22(p, c) - amplitude_fock(p, c)) for c in all_configs(4 * m, 2 * m))
            result.record(err <= tol, f"seed {seed + t} (M={m}): max |d22 - fock| = {err:.3e}")
    return result


def run_all(seed: int, trials: int, inject_fault: bool = False) -> list[SuiteResult]:
    return [
        reduction_suite(seed, trials, inject_fault=inject_fault),
        reduction_suite(seed, trials, kind="modp"),
        eq3_eq4_suite(seed, trials),
        cycle_cover_suite(seed, trials),
        md_suite(seed, trials),
        fermion_suite(seed, trials),
    ]
