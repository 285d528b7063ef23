"""Negacyclic polynomial multiplication.

The quadratic schoolbook oracle, the standard transform pipeline, the
Karatsuba-fused butterfly, and fused multiplication where the final forward
stage, the pointwise product, and the first inverse stage collapse into one
loop that touches only the first half of each twiddle table.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from .modarith import Modulus, mod_add, mod_sub, mulmod
from .nttcore import (
    NORMAL,
    OpCounter,
    Polynomial,
    _counts,
    _red_args,
    intt_gs_scaled,
    intt_radix4,
    ntt_2d,
    ntt_2d_inv,
    ntt_ct,
    ntt_radix4,
)
from .params import NttPlan

TRANSFORMS = ("radix2", "radix4", "2d")


@dataclass(frozen=True)
class FusedPlan:
    """Transform plan plus the halved twiddle tables fusion needs.

    Fusion never reads the second half of either table, so only n/2 forward
    and n/2 inverse twiddle words are kept.
    """

    base: NttPlan
    tw_fwd_half: np.ndarray
    tw_inv_half: np.ndarray

    @classmethod
    def from_plan(cls, plan: NttPlan) -> "FusedPlan":
        half = plan.n // 2
        return cls(
            base=plan,
            tw_fwd_half=plan.tw_fwd[:half].copy(),
            tw_inv_half=plan.tw_inv[:half].copy(),
        )


def _as_coeffs(a, n: int, q: int) -> np.ndarray:
    if isinstance(a, Polynomial):
        if a.ordering != NORMAL:
            raise ValueError(f"expected normal-order input, got {a.ordering}")
        arr = a.coeffs
    else:
        arr = np.array([int(v) for v in a], dtype=np.uint64)
    if len(arr) != n:
        raise ValueError(f"length {len(arr)} does not match n={n}")
    return arr


def negacyclic_naive(a, b, q: int, ctr: OpCounter | None = None) -> np.ndarray:
    """Schoolbook product mod x^n + 1; the independent O(n^2) oracle,
    reduced by native division only."""
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    out = np.empty(len(a), dtype=np.uint64)
    counts = _counts()
    backend.kernels().negacyclic_naive(a, b, out, q, counts)
    if ctr is not None:
        ctr.add_array(counts)
    return out


def hadamard(a, b, mod_or_plan, ctr: OpCounter | None = None) -> np.ndarray:
    """Entry-wise modular product of two equal-length vectors."""
    if isinstance(mod_or_plan, NttPlan):
        q, mode, mu, s_in, s_out = _red_args(mod_or_plan)
    else:
        mod: Modulus = mod_or_plan
        q = mod.q
        mode, mu, s_in, s_out = mod.reduction_params("proposed")
    a = np.asarray(a, dtype=np.uint64)
    b = np.asarray(b, dtype=np.uint64)
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    out = np.empty(len(a), dtype=np.uint64)
    counts = _counts()
    backend.kernels().hadamard(a, b, out, q, mode, mu, s_in, s_out, counts)
    if ctr is not None:
        ctr.add_array(counts)
    return out


def polymul_ntt(a, b, plan: NttPlan, ctr: OpCounter | None = None,
                transform: str = "radix2") -> np.ndarray:
    """Negacyclic product via forward transforms, pointwise product, and the
    scaled inverse.  All transform variants produce identical results."""
    if transform not in TRANSFORMS:
        raise ValueError(f"unknown transform {transform!r}")
    ah = Polynomial(_as_coeffs(a, plan.n, plan.q).copy())
    bh = Polynomial(_as_coeffs(b, plan.n, plan.q).copy())
    if transform == "radix2":
        fwd, inv = ntt_ct, intt_gs_scaled
    elif transform == "radix4":
        fwd, inv = ntt_radix4, intt_radix4
    else:
        fwd, inv = ntt_2d, ntt_2d_inv
    fwd(ah, plan, ctr)
    fwd(bh, plan, ctr)
    spec = Polynomial(hadamard(ah.coeffs, bh.coeffs, plan, ctr), ah.ordering)
    inv(spec, plan, ctr)
    return spec.coeffs


def fused_butterfly(a0: int, a1: int, b0: int, b1: int, alpha_sq: int,
                    mod: Modulus, ctr: OpCounter | None = None,
                    variant: str = "proposed") -> tuple[int, int]:
    """One Karatsuba-fused component: returns
    (a0*b0 + alpha_sq*a1*b1, a0*b1 + a1*b0) mod q using exactly 4 modular
    products and 5 sums/differences."""
    u = mulmod(a0, b0, mod, variant)
    v = mulmod(a1, b1, mod, variant)
    s1 = mod_add(a0, a1, mod)
    s2 = mod_add(b0, b1, mod)
    w = mulmod(s1, s2, mod, variant)
    z = mulmod(alpha_sq, v, mod, variant)
    c0 = mod_add(u, z, mod)
    y = mod_sub(w, u, mod)
    c1 = mod_sub(y, v, mod)
    if ctr is not None:
        ctr.modmul += 4
        ctr.modadd_sub += 5
    return c0, c1


def polymul_fused(a, b, plan: NttPlan | FusedPlan,
                  ctr: OpCounter | None = None) -> np.ndarray:
    """Negacyclic product with the fused middle loop: truncated forward
    transforms, the Karatsuba-combined stage, truncated inverse.

    For n = 2 there is no stage to truncate and the unfused pipeline is used.
    """
    fused = plan if isinstance(plan, FusedPlan) else FusedPlan.from_plan(plan)
    base = fused.base
    if base.n < 4:
        return polymul_ntt(a, b, base, ctr)
    ah = Polynomial(_as_coeffs(a, base.n, base.q).copy())
    bh = Polynomial(_as_coeffs(b, base.n, base.q).copy())
    q, mode, mu, s_in, s_out = _red_args(base)
    counts = _counts()
    k = backend.kernels()
    k.ntt_ct(ah.coeffs, fused.tw_fwd_half, q, mode, mu, s_in, s_out, True, counts)
    k.ntt_ct(bh.coeffs, fused.tw_fwd_half, q, mode, mu, s_in, s_out, True, counts)
    ch = np.empty(base.n, dtype=np.uint64)
    k.fused_middle(ah.coeffs, bh.coeffs, ch, fused.tw_fwd_half, q, mode, mu,
                   s_in, s_out, counts)
    k.intt_gs(ch, fused.tw_inv_half, q, base.mod.half_q_ceil, mode, mu,
              s_in, s_out, True, True, counts)
    if ctr is not None:
        ctr.add_array(counts)
    return ch


def polymul_batch(pairs, plan: NttPlan | FusedPlan, workers: int = 1,
                  ctr: OpCounter | None = None) -> list[np.ndarray]:
    """Independent fused multiplications, parallel across workers,
    deterministic for any worker count."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    fused = plan if isinstance(plan, FusedPlan) else FusedPlan.from_plan(plan)
    n = fused.base.n
    for a, b in pairs:
        if len(a) != n or len(b) != n:
            raise ValueError("ragged batch: all operands must have length n")
    counters = [OpCounter() if ctr is not None else None for _ in pairs]
    if workers == 1 or len(pairs) <= 1:
        out = [polymul_fused(a, b, fused, c) for (a, b), c in zip(pairs, counters)]
    else:
        # contiguous chunks, one task per worker (same scheme as batch_ntt)
        out = [None] * len(pairs)
        step = -(-len(pairs) // workers)
        spans = [(i, min(i + step, len(pairs)))
                 for i in range(0, len(pairs), step)]

        def run_span(span):
            lo, hi = span
            for j in range(lo, hi):
                a, b = pairs[j]
                out[j] = polymul_fused(a, b, fused, counters[j])

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_span, spans))
    if ctr is not None:
        for c in counters:
            ctr.merge(c)
    return out
