"""Oracle-equivalence and bound-checking suites.

Each suite compares an optimized path against an independent oracle
(native-division reduction, the quadratic schoolbook product, or the
big-integer schoolbook product) and reports the first counterexample as
(n, q, seed, index) when one exists.  The command-line ``verify`` command
and the acceptance tests both drive these functions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from . import backend
from .nttcore import Polynomial, intt_gs_scaled, ntt_ct
from .params import build_plan
from .polymul import negacyclic_naive, polymul_fused, polymul_ntt
from .rns import RnsBasis, negacyclic_naive_bigint, polymul_rns

_VARIANT_NAMES = ("classical", "dhem", "proposed")

# (n, bits) cells exercised by the default transform grid.
DEFAULT_GRID = ((4, 12), (16, 14), (64, 28), (256, 30), (1024, 62))


@dataclass
class SuiteResult:
    """Outcome of one verification suite."""

    name: str
    passed: bool
    skipped: bool = False
    detail: str = ""
    measurements: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.skipped:
            return "SKIP"
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        tail = f"  ({self.detail})" if self.detail else ""
        return f"{self.status}  {self.name}{tail}"


def _new_tallies() -> np.ndarray:
    return np.zeros((3, 4), dtype=np.uint64)


def check_subtraction_bounds(tallies) -> str | None:
    """Worst-case correctional-subtraction bounds: classical <= 2,
    dhem and proposed <= 1.  Returns a diagnostic or None."""
    if tallies[0][3]:
        return f"classical used 3+ subtractions in {int(tallies[0][3])} cases"
    for vi in (1, 2):
        extra = int(tallies[vi][2]) + int(tallies[vi][3])
        if extra:
            return f"{_VARIANT_NAMES[vi]} used 2+ subtractions in {extra} cases"
    return None


def reduction_exhaustive(q_lo: int = 3, q_hi: int = 255,
                         tallies=None) -> SuiteResult:
    """Every variant against division, all odd q in [q_lo, q_hi], all
    x in [0, q^2)."""
    t = _new_tallies() if tallies is None else tallies
    mism, first = backend.kernels().sweep_exhaustive(q_lo, q_hi, t)
    name = f"reduction-exhaustive q in [{q_lo}, {q_hi}]"
    if mism:
        q, x, vi = first
        return SuiteResult(name, False,
                           detail=f"{mism} mismatches; first: "
                                  f"{_VARIANT_NAMES[vi]}({x}) mod {q}")
    bound = check_subtraction_bounds(t)
    if bound:
        return SuiteResult(name, False, detail=bound)
    return SuiteResult(name, True)


def reduction_random(bits: int, samples: int, seed: int = 0,
                     tallies=None) -> SuiteResult:
    """Every admissible variant against division on ``samples`` random
    (a, b, q) triples with q a ``bits``-bit odd modulus."""
    name = f"reduction-random {bits}-bit x{samples}"
    if samples <= 0:
        return SuiteResult(name, True, skipped=True, detail="0 samples")
    t = _new_tallies() if tallies is None else tallies
    mism, first = backend.kernels().sweep_random(bits, samples, seed, t)
    if mism:
        q, x, vi = first
        return SuiteResult(name, False,
                           detail=f"{mism} mismatches; first: "
                                  f"{_VARIANT_NAMES[vi]}({x}) mod {q}")
    bound = check_subtraction_bounds(t)
    if bound:
        return SuiteResult(name, False, detail=bound)
    total = int(t[0].sum())
    two_sub = int(t[0][2])
    res = SuiteResult(name, True)
    res.measurements["classical_two_sub_fraction"] = (
        two_sub / total if total else 0.0)
    return res


def roundtrip(grid=DEFAULT_GRID, vectors: int = 50, seed: int = 0) -> SuiteResult:
    """intt_gs_scaled(ntt_ct(a)) == a over the grid."""
    name = f"ntt-roundtrip x{vectors}"
    if vectors <= 0:
        return SuiteResult(name, True, skipped=True, detail="0 vectors")
    for n, bits in grid:
        plan = build_plan(n, bits=bits, seed=seed)
        rng = random.Random(seed ^ (n << 8) ^ bits)
        for _ in range(vectors):
            a = Polynomial.random(plan, rng)
            orig = a.coeffs.copy()
            intt_gs_scaled(ntt_ct(a, plan), plan)
            if not np.array_equal(a.coeffs, orig):
                idx = int(np.nonzero(a.coeffs != orig)[0][0])
                return SuiteResult(
                    name, False,
                    detail=f"n={n}, q={plan.q}, seed={seed}, index={idx}")
    return SuiteResult(name, True)


def polymul_equivalence(grid=DEFAULT_GRID, pairs: int = 100,
                        seed: int = 0) -> SuiteResult:
    """Schoolbook == transform pipeline == fused pipeline, and the radix-4
    and 2D transforms agree with radix-2 inside the pipeline.  The grid is
    restricted to n <= 1024 for the quadratic oracle."""
    name = f"polymul-three-way x{pairs}"
    if pairs <= 0:
        return SuiteResult(name, True, skipped=True, detail="0 pairs")
    for n, bits in grid:
        if n > 1024:
            continue
        plan = build_plan(n, bits=bits, seed=seed)
        rng = random.Random(seed ^ (n << 16) ^ bits)
        for _ in range(pairs):
            a = [rng.randrange(plan.q) for _ in range(n)]
            b = [rng.randrange(plan.q) for _ in range(n)]
            ref = negacyclic_naive(a, b, plan.q)
            methods = [("ntt", polymul_ntt(a, b, plan)),
                       ("fused", polymul_fused(a, b, plan))]
            if plan.log_n % 2 == 0 and n >= 4:
                methods.append(
                    ("radix4", polymul_ntt(a, b, plan, transform="radix4")))
            if n >= 4:
                methods.append(("2d", polymul_ntt(a, b, plan, transform="2d")))
            for label, got in methods:
                if not np.array_equal(got, ref):
                    idx = int(np.nonzero(got != ref)[0][0])
                    return SuiteResult(
                        name, False,
                        detail=f"{label}: n={n}, q={plan.q}, seed={seed}, "
                               f"index={idx}")
    return SuiteResult(name, True)


def rns_equivalence(n_list=(8, 64), k_list=(2, 4), bits: int = 30,
                    pairs: int = 20, seed: int = 0) -> SuiteResult:
    """Residue-decomposed product against the big-integer schoolbook oracle."""
    name = f"rns-roundtrip x{pairs}"
    if pairs <= 0:
        return SuiteResult(name, True, skipped=True, detail="0 pairs")
    for n in n_list:
        for k in k_list:
            basis = RnsBasis.build(n, bits, k, seed=seed)
            rng = random.Random(seed ^ (n << 24) ^ k)
            for _ in range(pairs):
                a = [rng.randrange(basis.big_q) for _ in range(n)]
                b = [rng.randrange(basis.big_q) for _ in range(n)]
                got = polymul_rns(a, b, basis)
                ref = negacyclic_naive_bigint(a, b, basis.big_q)
                if got != ref:
                    idx = next(i for i, (x, y) in enumerate(zip(got, ref))
                               if x != y)
                    return SuiteResult(
                        name, False,
                        detail=f"n={n}, k={k}, seed={seed}, index={idx}")
    return SuiteResult(name, True)


def run_all(grid=DEFAULT_GRID, samples: int = 100_000,
            seed: int = 0) -> list[SuiteResult]:
    """The full verification battery.  ``samples`` scales only the
    randomized suites; exhaustive suites always run."""
    results = [reduction_exhaustive()]
    for bits in (28, 29, 30, 62):
        results.append(reduction_random(bits, samples, seed))
    vectors = min(50, samples) if samples > 0 else 0
    pairs = min(100, samples) if samples > 0 else 0
    rns_pairs = min(20, samples) if samples > 0 else 0
    results.append(roundtrip(grid, vectors, seed))
    results.append(polymul_equivalence(grid, pairs, seed))
    results.append(rns_equivalence(pairs=rns_pairs, seed=seed))
    return results
