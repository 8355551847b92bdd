"""Command-line front end.

Exit status: 0 on success or PASS, 1 when a verification fails, 2 on
usage, parse or guard errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass, field

import numpy as np

from . import io
from .exterior import (
    d22_float_fast,
    d22_subset_sum,
    d22_wedge,
    dkr_eval,
    dkr_wedge,
    random_complex_family,
    random_family,
)
from .fermion import ScatteringProblem, all_configs, amplitude_d22, haar_unitary, output_distribution
from .mixed_disc import verify_md_identity
from .reduction import cycle_cover_sum, reduce_permanent, verify_reduction
from .ring import UnsupportedScalarError, det, permanent_naive, permanent_ryser
from .suites import run_all

THREADS_ENV = "LOWRANK_WEDGE_THREADS"
DEFAULT_BLOCK_SIZE = 1 << 12
EXACT_BENCH_MAX_M = 10
FAST_BENCH_MAX_M = 24


@dataclass
class RunReport:
    command: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    timing_ms: float = 0.0
    passed: bool | None = None

    @property
    def exit_code(self) -> int:
        return 0 if self.passed in (None, True) else 1


class UsageError(Exception):
    pass


def _threads(args) -> int:
    n = args.threads
    if n is None:
        n = int(os.environ.get(THREADS_ENV, "1"))
    if n == 0:
        n = os.cpu_count() or 1
    return n


def _text(x) -> str:
    return io.scalar_to_text(x)


def cmd_permanent(args, report: RunReport):
    rows = io.matrix_from_doc(io.read_json(args.input))
    value = (permanent_naive if args.method == "naive" else permanent_ryser)(rows)
    report.results["permanent"] = _text(value)
    print(_text(value))


def cmd_det(args, report: RunReport):
    value = det(io.matrix_from_doc(io.read_json(args.input)))
    report.results["det"] = _text(value)
    print(_text(value))


def cmd_d22(args, report: RunReport):
    family = io.family_from_doc(io.read_json(args.input))
    threads = _threads(args)
    if args.method == "subset":
        value = d22_subset_sum(family, block_size=args.block_size, threads=threads)
    elif args.method == "wedge":
        value = d22_wedge(family)
    else:
        value = d22_float_fast(family, block_size=args.block_size, threads=threads)
    report.results["d22"] = _text(value)
    print(_text(value))


def cmd_dkr(args, report: RunReport):
    family = io.kform_from_doc(io.read_json(args.input))
    value = (dkr_eval if args.method == "det" else dkr_wedge)(family)
    report.results["dkr"] = _text(value)
    print(_text(value))


def cmd_reduce(args, report: RunReport):
    rows = io.matrix_from_doc(io.read_json(args.input))
    family = reduce_permanent(rows)
    doc = io.family_to_doc(family)
    if args.output:
        io.write_json(args.output, doc)
        report.results["output"] = args.output
    else:
        print(json.dumps(doc))


def _pass_line(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def cmd_verify(args, report: RunReport):
    rows = io.matrix_from_doc(io.read_json(args.input))
    per, d22, ok = verify_reduction(rows, threads=_threads(args), block_size=args.block_size)
    report.results.update(permanent=_text(per), d22=_text(d22))
    report.passed = ok
    print(f"permanent: {_text(per)}")
    print(f"d22: {_text(d22)}")
    print(_pass_line(ok))


def cmd_cycle_cover(args, report: RunReport):
    g = io.graph_from_doc(io.read_json(args.input))
    covers = cycle_cover_sum(g)
    d22 = d22_subset_sum(g.to_family())
    ok = covers == d22
    report.results.update(cycle_cover=_text(covers), d22=_text(d22))
    report.passed = ok
    print(f"cycle_cover: {_text(covers)}")
    print(f"d22: {_text(d22)}")
    print(_pass_line(ok))


def cmd_md(args, report: RunReport):
    f = io.factors_from_doc(io.read_json(args.input))
    lhs, rhs, ok = verify_md_identity(f)
    report.results.update(mixed_discriminant=_text(lhs), signed_d22=_text(rhs))
    report.passed = ok
    print(f"mixed_discriminant: {_text(lhs)}")
    print(f"signed_d22: {_text(rhs)}")
    print(_pass_line(ok))


def cmd_verify_all(args, report: RunReport):
    results = run_all(args.seed, args.trials, inject_fault=args.inject_fault)
    for r in results:
        print(f"{r.name}: {_pass_line(r.passed)} ({r.checked} checks)")
        for detail in r.failures[:3]:
            print(f"  {detail}")
        report.results[r.name] = _pass_line(r.passed)
    report.passed = all(r.passed for r in results)
    print(f"overall: {_pass_line(report.passed)}")


def bench_rows(m_min: int, m_max: int, seed: int, exact_max: int = EXACT_BENCH_MAX_M, fast: bool = True, exact: bool = True):
    """Yield ``(method, M, seconds, value)`` per evaluated family."""
    if m_max > FAST_BENCH_MAX_M:
        raise UsageError(f"--m-max is limited to {FAST_BENCH_MAX_M}")
    for m in range(m_min, m_max + 1):
        if exact and m <= exact_max:
            family = random_family(np.random.default_rng([seed, m, 0]), m)
            t0 = time.perf_counter()
            value = d22_subset_sum(family)
            yield "subset", m, time.perf_counter() - t0, value
        if fast:
            family = random_complex_family(np.random.default_rng([seed, m, 1]), m)
            t0 = time.perf_counter()
            value = d22_float_fast(family, block_size=DEFAULT_BLOCK_SIZE)
            yield "fast", m, time.perf_counter() - t0, value


def cmd_bench(args, report: RunReport):
    print("method,M,seconds,value")
    for method, m, secs, value in bench_rows(
        args.m_min, args.m_max, args.seed, exact_max=args.exact_max,
        fast=args.method in ("both", "fast"), exact=args.method in ("both", "subset"),
    ):
        print(f"{method},{m},{secs:.6f},{_text(value)}")
        report.results[f"{method}_{m}"] = secs


def _problem(args) -> ScatteringProblem:
    if args.unitary:
        return ScatteringProblem(np.array(io.matrix_from_doc(io.read_json(args.unitary)), dtype=complex))
    if args.m is None:
        raise UsageError("give --unitary or --m")
    return ScatteringProblem(haar_unitary(4 * args.m, args.seed))


def _config_line(cfg, amp) -> str:
    return f"{','.join(map(str, cfg))}: {amp.real:.17g} {amp.imag:.17g} {abs(amp) ** 2:.17g}"


def cmd_fermion_amp(args, report: RunReport):
    p = _problem(args)
    try:
        cfg = tuple(int(c) for c in args.out.split(","))
    except ValueError as exc:
        raise UsageError(f"bad --out {args.out!r}") from exc
    amp = amplitude_d22(p, cfg, method=args.method)
    print(_config_line(cfg, amp))
    report.results["amplitude"] = _text(amp)


def cmd_fermion_dist(args, report: RunReport):
    p = _problem(args)
    total = 0.0
    for cfg, amp, prob in output_distribution(p, method=args.method):
        print(_config_line(cfg, amp))
        total += prob
    print(f"total_prob: {total:.17g}")
    report.results["total_prob"] = total


def cmd_fermion_check_norm(args, report: RunReport):
    worst = 0.0
    for t in range(args.trials):
        p = ScatteringProblem(haar_unitary(4 * args.m, args.seed + t))
        total = sum(abs(amplitude_d22(p, c, method=args.method)) ** 2 for c in all_configs(4 * args.m, 2 * args.m))
        worst = max(worst, abs(total - 1.0))
        print(f"seed {args.seed + t}: total_prob: {total:.17g}")
    report.passed = worst <= args.tol
    print(f"max |total - 1|: {worst:.3e} {_pass_line(report.passed)}")


def cmd_haar(args, report: RunReport):
    u = haar_unitary(args.n, args.seed)
    doc = io.matrix_to_doc([[complex(x) for x in row] for row in u])
    if args.output:
        io.write_json(args.output, doc)
    else:
        print(json.dumps(doc))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lowrank-wedge", description=__doc__.splitlines()[0])
    parser.add_argument("--report", action="store_true", help="print a JSON run report to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text)
        sp.set_defaults(func=func)
        return sp

    def parallel(sp):
        sp.add_argument("--threads", type=int, default=None, help=f"worker processes, 0 = all cores (env {THREADS_ENV})")
        sp.add_argument("--block-size", type=int, default=DEFAULT_BLOCK_SIZE, help="Gray-code block length")

    sp = add("permanent", cmd_permanent, "permanent of a matrix file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--method", choices=["naive", "ryser"], default="ryser")

    sp = add("det", cmd_det, "determinant of a matrix file")
    sp.add_argument("--input", required=True)

    sp = add("d22", cmd_d22, "D22 of a two-form family file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--method", choices=["subset", "wedge", "fast"], default="subset")
    parallel(sp)

    sp = add("dkr", cmd_dkr, "wedge product of a k-form family file")
    sp.add_argument("--input", required=True)
    sp.add_argument("--method", choices=["det", "wedge"], default="det")

    sp = add("reduce", cmd_reduce, "two-form family whose D22 is the permanent of a matrix")
    sp.add_argument("--input", required=True)
    sp.add_argument("--output")

    sp = add("verify", cmd_verify, "check Per(A) = D22(reduce(A))")
    sp.add_argument("--input", required=True)
    parallel(sp)

    sp = add("cycle-cover", cmd_cycle_cover, "constrained cycle-cover sum of a graph file vs D22")
    sp.add_argument("--input", required=True)

    sp = add("md", cmd_md, "mixed discriminant identity for a factors file")
    sp.add_argument("--input", required=True)

    sp = add("verify-all", cmd_verify_all, "run the identity battery")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--trials", type=int, default=10)
    sp.add_argument("--inject-fault", action="store_true", help="negate one reduction entry; must FAIL")

    sp = add("bench", cmd_bench, "CSV timings of the D22 evaluators")
    sp.add_argument("--m-min", type=int, default=4)
    sp.add_argument("--m-max", type=int, default=12)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--exact-max", type=int, default=EXACT_BENCH_MAX_M)
    sp.add_argument("--method", choices=["both", "subset", "fast"], default="both")

    sp = add("haar", cmd_haar, "write a Haar-random unitary matrix file")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--output")

    fermion = sub.add_parser("fermion", help="entangled-quadruplet fermion amplitudes")
    fsub = fermion.add_subparsers(dest="fermion_command", required=True)

    def fermion_common(sp):
        sp.add_argument("--unitary", help="complex matrix file")
        sp.add_argument("--m", type=int, help="quadruplets, for a Haar unitary")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--method", choices=["subset", "fast"], default="subset")

    sp = fsub.add_parser("amp", help="one output amplitude")
    sp.set_defaults(func=cmd_fermion_amp)
    fermion_common(sp)
    sp.add_argument("--out", required=True, help='1-based output channels, e.g. "1,2,5,6"')

    sp = fsub.add_parser("dist", help="full output distribution")
    sp.set_defaults(func=cmd_fermion_dist)
    fermion_common(sp)

    sp = fsub.add_parser("check-norm", help="probabilities sum to one over random unitaries")
    sp.set_defaults(func=cmd_fermion_check_norm)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--trials", type=int, default=5)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--method", choices=["subset", "fast"], default="subset")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    name = args.command if args.command != "fermion" else f"fermion {args.fermion_command}"
    report = RunReport(name, inputs={k: v for k, v in vars(args).items() if k != "func"})
    t0 = time.perf_counter()
    try:
        args.func(args, report)
    except (UsageError, ValueError, UnsupportedScalarError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report.timing_ms = (time.perf_counter() - t0) * 1e3
    if args.report:
        print(json.dumps(asdict(report), default=str), file=sys.stderr)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
