"""Command-line front end.

Subcommands: ``params`` (plan generation), ``convolve`` (file-to-file
negacyclic products), ``verify`` (oracle-equivalence suites), ``bench``
(CSV-emitting microbenchmarks), and ``count-ops`` (operation-count audits).

Exit codes: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import os
import random
import statistics
import sys
import time

import numpy as np

from . import backend, verify
from .modarith import Modulus
from .nttcore import (
    OpCounter,
    Polynomial,
    batch_ntt,
    intt_gs_scaled,
    ntt_2d,
    ntt_ct,
    ntt_radix4,
)
from .params import (
    ParameterError,
    build_plan,
    load_plan,
    save_plan,
    validate_plan,
)
from .polymul import FusedPlan, negacyclic_naive, polymul_fused, polymul_ntt
from .rns import load_basis, polymul_rns

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2

BENCH_KERNELS = (
    "reduce-builtin", "barrett-classical", "barrett-dhem", "barrett-proposed",
    "ntt", "intt", "ntt-radix4", "ntt-2d", "polymul", "polymul-fused",
    "batch-ntt",
)

CSV_HEADER = ("kernel", "n", "bits", "variant", "reps",
              "min_ns", "mean_ns", "median_ns",
              "modmul", "addsub", "half", "twiddle_loads")

_BIN_MAGIC = b"NTTP"
_BIN_VERSION = 1


class InputError(Exception):
    """Bad input file or inconsistent arguments (exit code 2)."""


# ---------------------------------------------------------------------------
# polynomial file I/O

def write_poly(path: str, coeffs, n: int, q: int, binary: bool) -> None:
    if binary:
        with open(path, "wb") as fh:
            fh.write(_BIN_MAGIC)
            fh.write(bytes([_BIN_VERSION]))
            fh.write(n.to_bytes(8, "little"))
            fh.write(q.to_bytes(8, "little"))
            for c in coeffs:
                fh.write(int(c).to_bytes(8, "little"))
    else:
        with open(path, "w") as fh:
            fh.write(f"{n} {q}\n")
            for c in coeffs:
                fh.write(f"{int(c)}\n")


def read_poly(path: str, binary: bool) -> tuple[int, int, list[int]]:
    """Returns (n, q, coefficients); raises InputError with the offending
    line number on malformed text input."""
    if binary:
        with open(path, "rb") as fh:
            data = fh.read()
        if data[:4] != _BIN_MAGIC:
            raise InputError(f"{path}: bad magic, not a binary polynomial file")
        if data[4] != _BIN_VERSION:
            raise InputError(f"{path}: unsupported version {data[4]}")
        n = int.from_bytes(data[5:13], "little")
        q = int.from_bytes(data[13:21], "little")
        body = data[21:]
        if len(body) != 8 * n:
            raise InputError(f"{path}: expected {8 * n} payload bytes, "
                             f"got {len(body)}")
        coeffs = [int.from_bytes(body[8 * i:8 * i + 8], "little")
                  for i in range(n)]
        return n, q, coeffs
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise InputError(f"{path}:1: empty file")
    head = lines[0].split()
    if len(head) != 2:
        raise InputError(f"{path}:1: expected header 'n q'")
    try:
        n, q = int(head[0]), int(head[1])
    except ValueError:
        raise InputError(f"{path}:1: non-integer header") from None
    if len(lines) < n + 1:
        raise InputError(f"{path}: expected {n} coefficient lines, "
                         f"got {len(lines) - 1}")
    coeffs = []
    for i in range(n):
        try:
            c = int(lines[1 + i])
        except ValueError:
            raise InputError(f"{path}:{i + 2}: non-integer coefficient") from None
        if not 0 <= c < q:
            raise InputError(f"{path}:{i + 2}: coefficient {c} outside [0, q)")
        coeffs.append(c)
    return n, q, coeffs


# ---------------------------------------------------------------------------
# params

def cmd_params(args) -> int:
    plan = build_plan(args.n, bits=args.bits, seed=args.seed,
                      variant=args.variant)
    save_plan(plan, args.out)
    print(f"q = {plan.q}")
    print(f"psi = {plan.psi}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# convolve

def cmd_convolve(args) -> int:
    if args.method == "rns":
        basis = load_basis(args.plan)
        n, big_q = basis.n, basis.big_q
        if args.binary:
            raise InputError("the binary format is word-sized; "
                             "use text files with --method rns")
        na, qa, a = read_poly(args.a, False)
        nb, qb, b = read_poly(args.b, False)
        if (na, qa) != (n, big_q) or (nb, qb) != (n, big_q):
            raise InputError(f"input headers must be '{n} {big_q}' "
                             f"to match the basis")
        out = polymul_rns(a, b, basis)
        write_poly(args.out, out, n, big_q, False)
        return EXIT_OK
    plan = load_plan(args.plan)
    na, qa, a = read_poly(args.a, args.binary)
    nb, qb, b = read_poly(args.b, args.binary)
    if na != plan.n or nb != plan.n:
        raise InputError(f"input lengths {na}, {nb} do not match plan "
                         f"n={plan.n}")
    if qa != plan.q or qb != plan.q:
        raise InputError(f"input moduli {qa}, {qb} do not match plan "
                         f"q={plan.q}")
    if args.method == "naive":
        out = negacyclic_naive(a, b, plan.q)
    elif args.method == "ntt":
        out = polymul_ntt(a, b, plan)
    else:
        out = polymul_fused(a, b, plan)
    write_poly(args.out, out, plan.n, plan.q, args.binary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify

def _load_grid(spec: str):
    if spec == "default":
        return verify.DEFAULT_GRID
    grid = []
    with open(spec) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts or parts[0].startswith("#"):
                continue
            if len(parts) != 2:
                raise InputError(f"{spec}:{lineno}: expected 'n bits'")
            try:
                grid.append((int(parts[0]), int(parts[1])))
            except ValueError:
                raise InputError(f"{spec}:{lineno}: non-integer entry") from None
    if not grid:
        raise InputError(f"{spec}: empty grid file")
    return tuple(grid)


def cmd_verify(args) -> int:
    if args.plan:
        try:
            plan = load_plan(args.plan)
            validate_plan(plan)
        except ParameterError as exc:
            print(f"FAIL  plan-validation  ({exc})")
            return EXIT_VERIFY
        print(f"PASS  plan-validation  (n={plan.n}, q={plan.q})")
    grid = _load_grid(args.grid)
    results = verify.run_all(grid, args.samples, args.seed)
    failed = False
    for res in results:
        print(res.line())
        failed = failed or (not res.passed and not res.skipped)
    return EXIT_VERIFY if failed else EXIT_OK


# ---------------------------------------------------------------------------
# bench

def _time_samples(fn, reps: int, warmup: int):
    """Per-call wall times in nanoseconds."""
    for _ in range(warmup):
        fn()
    out = []
    for _ in range(reps):
        t0 = time.perf_counter_ns()
        fn()
        out.append(time.perf_counter_ns() - t0)
    return out


def _bench_reduction(kernel: str, bits: int, reps: int, warmup: int,
                     seed: int):
    """Per-reduction latency via bulk loops over a fixed operand block."""
    variant = {"reduce-builtin": "builtin",
               "barrett-classical": "classical",
               "barrett-dhem": "dhem",
               "barrett-proposed": "proposed"}[kernel]
    rng = random.Random(seed)
    q = build_plan(2, bits=bits, seed=seed).q
    mode, mu, s_in, s_out = Modulus(q).reduction_params(variant)
    block = 4096
    a = np.array([rng.randrange(q) for _ in range(block)], dtype=np.uint64)
    b = np.array([rng.randrange(q) for _ in range(block)], dtype=np.uint64)
    k = backend.kernels()
    chunks = max(1, reps // block)

    def one():
        k.mulmod_loop(a, b, q, mode, mu, s_in, s_out, 1)

    times = _time_samples(one, chunks, max(1, warmup // block))
    per_op = [t / block for t in times]
    ctr = OpCounter(modmul=chunks * block)
    return q, variant, chunks * block, per_op, ctr


def _bench_transform(kernel: str, n: int, bits: int, reps: int, warmup: int,
                     workers: int, seed: int, variant: str):
    plan = build_plan(n, bits=bits, seed=seed, variant=variant)
    rng = random.Random(seed)
    base = Polynomial.random(plan, rng)
    ctr = OpCounter()
    if kernel in ("ntt", "ntt-radix4", "ntt-2d"):
        fwd = {"ntt": ntt_ct, "ntt-radix4": ntt_radix4, "ntt-2d": ntt_2d}[kernel]
        fwd(base.copy(), plan, ctr)

        def one():
            fwd(base.copy(), plan)
    elif kernel == "intt":
        spec = ntt_ct(base.copy(), plan)
        intt_gs_scaled(spec.copy(), plan, ctr)

        def one():
            intt_gs_scaled(spec.copy(), plan)
    elif kernel in ("polymul", "polymul-fused"):
        b2 = Polynomial.random(plan, rng)
        if kernel == "polymul":
            fn = lambda c=None: polymul_ntt(base.coeffs, b2.coeffs, plan, c)
        else:
            fused = FusedPlan.from_plan(plan)
            fn = lambda c=None: polymul_fused(base.coeffs, b2.coeffs, fused, c)
        fn(ctr)

        def one():
            fn()
    else:  # batch-ntt
        nrows = max(8, 4 * workers)
        rows = [Polynomial.random(plan, rng) for _ in range(nrows)]
        batch_ntt([r.copy() for r in rows], plan, workers, ctr)

        def one():
            batch_ntt([r.copy() for r in rows], plan, workers)

    times = _time_samples(one, reps, warmup)
    return plan.q, variant, reps, times, ctr


def cmd_bench(args) -> int:
    if args.kernel.startswith(("reduce", "barrett")):
        q, variant, reps, times, ctr = _bench_reduction(
            args.kernel, args.bits, args.reps, args.warmup, args.seed)
        n = 1
    else:
        q, variant, reps, times, ctr = _bench_transform(
            args.kernel, args.n, args.bits, args.reps, args.warmup,
            args.workers, args.seed, args.variant)
        n = args.n
    row = (args.kernel, n, args.bits, variant, reps,
           round(min(times), 1), round(statistics.fmean(times), 1),
           round(statistics.median(times), 1),
           ctr.modmul, ctr.modadd_sub, ctr.half_scalings, ctr.twiddle_loads)
    if args.csv:
        fresh = not (os.path.exists(args.csv) and os.path.getsize(args.csv))
        with open(args.csv, "a", newline="") as fh:
            w = csv.writer(fh)
            if fresh:
                w.writerow(CSV_HEADER)
            w.writerow(row)
    else:
        w = csv.writer(sys.stdout)
        w.writerow(CSV_HEADER)
        w.writerow(row)
    return EXIT_OK


# ---------------------------------------------------------------------------
# count-ops

def _counted(fn, *a) -> OpCounter:
    ctr = OpCounter()
    fn(*a, ctr)
    return ctr


def cmd_count_ops(args) -> int:
    plan = load_plan(args.plan)
    rng = random.Random(args.seed)
    a = [rng.randrange(plan.q) for _ in range(plan.n)]
    b = [rng.randrange(plan.q) for _ in range(plan.n)]
    methods = [args.method] if args.method != "all" else ["naive", "ntt", "fused"]
    if "naive" in methods and plan.n > 4096 and args.method == "all":
        methods.remove("naive")  # quadratic oracle too slow at this size
    counters = {}
    for m in methods:
        if m == "naive":
            counters[m] = _counted(negacyclic_naive, a, b, plan.q)
        elif m == "ntt":
            counters[m] = _counted(polymul_ntt, a, b, plan)
        else:
            counters[m] = _counted(polymul_fused, a, b, plan)
    cols = ("modmul", "modadd_sub", "half_scalings", "twiddle_loads",
            "negations")
    print(f"n = {plan.n}, q = {plan.q}")
    print(f"{'method':<8}" + "".join(f"{c:>16}" for c in cols))
    for m, ctr in counters.items():
        print(f"{m:<8}" + "".join(f"{getattr(ctr, c):>16}" for c in cols))
    if "ntt" in counters and "fused" in counters:
        print(f"{'delta':<8}" + "".join(
            f"{getattr(counters['fused'], c) - getattr(counters['ntt'], c):>+16}"
            for c in cols))
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="nttmul",
        description="Negacyclic polynomial multiplication over prime fields.")
    p.add_argument("--backend", choices=("auto", "python", "native"),
                   default="auto", help="kernel backend selection")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("params", help="generate and save a transform plan")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--bits", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--variant", default="proposed",
                    choices=("builtin", "classical", "dhem", "proposed"))
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_params)

    sp = sub.add_parser("convolve", help="multiply two polynomial files")
    sp.add_argument("--plan", required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--method", default="fused",
                    choices=("naive", "ntt", "fused", "rns"))
    sp.add_argument("--out", required=True)
    sp.add_argument("--binary", action="store_true",
                    help="binary polynomial files (magic NTTP)")
    sp.set_defaults(fn=cmd_convolve)

    sp = sub.add_parser("verify", help="run the oracle-equivalence suites")
    sp.add_argument("--grid", default="default",
                    help="'default' or a file of 'n bits' lines")
    sp.add_argument("--samples", type=int, default=100_000,
                    help="randomized-suite sample budget (0 skips them)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--plan", help="also validate this plan file")
    sp.set_defaults(fn=cmd_verify)

    sp = sub.add_parser("bench", help="microbenchmark a kernel, emitting CSV")
    sp.add_argument("--kernel", required=True, choices=BENCH_KERNELS)
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--bits", type=int, default=30)
    sp.add_argument("--reps", type=int, default=100)
    sp.add_argument("--warmup", type=int, default=10)
    sp.add_argument("--workers", type=int, default=1)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--variant", default="proposed",
                    choices=("builtin", "classical", "dhem", "proposed"))
    sp.add_argument("--csv", help="append to this CSV file (default: stdout)")
    sp.set_defaults(fn=cmd_bench)

    sp = sub.add_parser("count-ops", help="operation-count audit")
    sp.add_argument("--plan", required=True)
    sp.add_argument("--method", default="all",
                    choices=("naive", "ntt", "fused", "all"))
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(fn=cmd_count_ops)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        backend.set_backend(args.backend)
        return args.fn(args)
    except (InputError, ParameterError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
