"""Negacyclic product equivalences and the fused-pipeline bookkeeping."""

import random

import numpy as np
import pytest

from nttmul.modarith import Modulus
from nttmul.nttcore import OpCounter
from nttmul.params import build_plan
from nttmul.polymul import (
    FusedPlan,
    fused_butterfly,
    hadamard,
    negacyclic_naive,
    polymul_batch,
    polymul_fused,
    polymul_ntt,
)


def _pair(plan, rng):
    a = [rng.randrange(plan.q) for _ in range(plan.n)]
    b = [rng.randrange(plan.q) for _ in range(plan.n)]
    return a, b


def _naive_ref(a, b, q):
    n = len(a)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            k = i + j
            if k < n:
                out[k] = (out[k] + a[i] * b[j]) % q
            else:
                out[k - n] = (out[k - n] - a[i] * b[j]) % q
    return out


@pytest.mark.parametrize("n,bits", [(2, 10), (4, 12), (16, 20), (64, 28),
                                    (256, 30)])
def test_naive_oracle_against_schoolbook(n, bits):
    plan = build_plan(n, bits=bits, seed=0)
    rng = random.Random(n * 31 + bits)
    a, b = _pair(plan, rng)
    got = negacyclic_naive(a, b, plan.q)
    assert got.tolist() == _naive_ref(a, b, plan.q)


@pytest.mark.parametrize("n,bits", [(2, 10), (4, 12), (16, 20), (64, 28),
                                    (256, 30), (512, 62)])
def test_three_way_equality(n, bits):
    plan = build_plan(n, bits=bits, seed=1)
    rng = random.Random(n ^ bits)
    for _ in range(10):
        a, b = _pair(plan, rng)
        ref = negacyclic_naive(a, b, plan.q)
        assert np.array_equal(polymul_ntt(a, b, plan), ref)
        assert np.array_equal(polymul_fused(a, b, plan), ref)


@pytest.mark.parametrize("transform", ["radix4", "2d"])
def test_alternate_transforms(transform):
    for n in (16, 64, 256):
        plan = build_plan(n, bits=30, seed=2)
        rng = random.Random(n + len(transform))
        a, b = _pair(plan, rng)
        ref = polymul_ntt(a, b, plan)
        assert np.array_equal(polymul_ntt(a, b, plan, transform=transform), ref)


def test_negacyclic_wraparound_sign():
    # x^(n-1) * x = x^n = -1 mod x^n + 1
    plan = build_plan(8, bits=12, seed=0)
    a = [0] * 8
    b = [0] * 8
    a[7] = 1
    b[1] = 1
    got = polymul_fused(a, b, plan)
    want = [plan.q - 1] + [0] * 7
    assert got.tolist() == want


def test_fused_butterfly_scalar():
    mod = Modulus(12289)
    rng = random.Random(8)
    ctr = OpCounter()
    for _ in range(100):
        a0, a1, b0, b1 = (rng.randrange(mod.q) for _ in range(4))
        alpha_sq = rng.randrange(1, mod.q)
        c0, c1 = fused_butterfly(a0, a1, b0, b1, alpha_sq, mod, ctr)
        assert c0 == (a0 * b0 + alpha_sq * a1 * b1) % mod.q
        assert c1 == (a0 * b1 + a1 * b0) % mod.q
    assert ctr.modmul == 400
    assert ctr.modadd_sub == 500


def test_fused_plan_halves_tables():
    plan = build_plan(1024, bits=30, seed=0)
    fused = FusedPlan.from_plan(plan)
    assert len(fused.tw_fwd_half) == 512
    assert len(fused.tw_inv_half) == 512
    assert np.array_equal(fused.tw_fwd_half, plan.tw_fwd[:512])


@pytest.mark.parametrize("n", [4, 64, 2048])
def test_fusion_op_count_deltas(n):
    plan = build_plan(n, bits=30, seed=0)
    rng = random.Random(n)
    a, b = _pair(plan, rng)
    c_plain, c_fused = OpCounter(), OpCounter()
    r1 = polymul_ntt(a, b, plan, c_plain)
    r2 = polymul_fused(a, b, plan, c_fused)
    assert np.array_equal(r1, r2)
    assert c_plain.modmul - c_fused.modmul == n // 2
    assert c_plain.half_scalings - c_fused.half_scalings == n
    assert c_plain.modadd_sub - c_fused.modadd_sub == n // 2
    assert c_fused.negations - c_plain.negations == n // 4


def test_hadamard():
    plan = build_plan(16, bits=14, seed=0)
    rng = random.Random(2)
    a, b = _pair(plan, rng)
    got = hadamard(a, b, plan)
    assert got.tolist() == [x * y % plan.q for x, y in zip(a, b)]
    got2 = hadamard(a, b, Modulus(plan.q))
    assert np.array_equal(got, got2)


def test_polymul_batch_matches_serial():
    plan = build_plan(64, bits=28, seed=0)
    rng = random.Random(6)
    pairs = [_pair(plan, rng) for _ in range(10)]
    serial = [polymul_fused(a, b, plan) for a, b in pairs]
    for workers in (1, 3):
        out = polymul_batch(pairs, plan, workers)
        for x, y in zip(out, serial):
            assert np.array_equal(x, y)


def test_polymul_batch_rejects_ragged():
    plan = build_plan(16, bits=12, seed=0)
    with pytest.raises(ValueError):
        polymul_batch([([0] * 16, [0] * 8)], plan)


def test_length_mismatch_rejected():
    plan = build_plan(16, bits=12, seed=0)
    with pytest.raises(ValueError):
        polymul_fused([0] * 8, [0] * 16, plan)
    with pytest.raises(ValueError):
        negacyclic_naive([0] * 8, [0] * 16, 17)
