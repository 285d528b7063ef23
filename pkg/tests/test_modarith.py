"""Reduction-variant unit tests against the native-division oracle."""

import random

import pytest

from nttmul.modarith import (
    Modulus,
    ModulusTooLargeError,
    ReductionStats,
    barrett_classical,
    barrett_dhem,
    barrett_proposed,
    half_mod,
    mod_add,
    mod_sub,
    mulmod,
    reduce_builtin,
)

VARIANT_FNS = {
    "classical": barrett_classical,
    "dhem": barrett_dhem,
    "proposed": barrett_proposed,
}


def test_modulus_rejects_bad_q():
    with pytest.raises(ValueError):
        Modulus(4)  # even
    with pytest.raises(ValueError):
        Modulus(1)
    with pytest.raises(ModulusTooLargeError):
        Modulus((1 << 63) - 25)  # 63-bit


def test_modulus_accepts_62_bit():
    q = (1 << 62) - 57
    mod = Modulus(q)
    assert mod.m == 62
    assert mod.mu_dhem is None  # inadmissible above 60 bits
    assert mod.mu_proposed == (1 << (2 * 62 + 1)) // q


def test_exhaustive_tiny_moduli():
    for q in range(3, 64, 2):
        mod = Modulus(q)
        for x in range(q * q):
            want = x % q
            assert barrett_classical(x, mod) == want
            assert barrett_dhem(x, mod) == want
            assert barrett_proposed(x, mod) == want


@pytest.mark.parametrize("bits", [28, 30, 60, 62])
def test_random_against_builtin(bits):
    rng = random.Random(bits)
    for _ in range(200):
        q = rng.randrange(1 << (bits - 1), 1 << bits) | 1
        mod = Modulus(q)
        for _ in range(50):
            a, b = rng.randrange(q), rng.randrange(q)
            x = a * b
            want = reduce_builtin(x, q)
            assert want == x % q
            assert barrett_classical(x, mod) == want
            assert barrett_proposed(x, mod) == want
            if mod.mu_dhem is not None:
                assert barrett_dhem(x, mod) == want


def test_subtraction_bounds_and_stats():
    rng = random.Random(7)
    stats = {v: ReductionStats() for v in VARIANT_FNS}
    for _ in range(2000):
        q = rng.randrange(1 << 29, 1 << 30) | 1
        mod = Modulus(q)
        x = rng.randrange(q) * rng.randrange(q)
        for v, fn in VARIANT_FNS.items():
            fn(x, mod, stats[v])
    for v, s in stats.items():
        assert s.calls == 2000
        assert s.subtractions_0 + s.subtractions_1 + s.subtractions_2 == 2000
        if v != "classical":
            assert s.subtractions_2 == 0


def test_named_triple():
    mod = Modulus(994705409)
    x = 994674970 * 994705408
    assert reduce_builtin(x, mod.q) == 30439
    for fn in VARIANT_FNS.values():
        assert fn(x, mod) == 30439
    s = ReductionStats()
    barrett_proposed(x, mod, s)
    assert s.subtractions_2 == 0


def test_classical_needs_two_subtractions_sometimes():
    # the named triple forces the classical variant's second subtraction
    mod = Modulus(994705409)
    s = ReductionStats()
    barrett_classical(994674970 * 994705408, mod, s)
    assert s.subtractions_2 == 1


def test_mod_add_sub_half():
    rng = random.Random(11)
    for _ in range(200):
        q = rng.randrange(1 << 20, 1 << 21) | 1
        mod = Modulus(q)
        a, b = rng.randrange(q), rng.randrange(q)
        assert mod_add(a, b, mod) == (a + b) % q
        assert mod_sub(a, b, mod) == (a - b) % q
        assert half_mod(a, mod) == a * pow(2, -1, q) % q


def test_mulmod_variants_agree():
    rng = random.Random(13)
    q = (1 << 30) - 35
    mod = Modulus(q)
    for _ in range(500):
        a, b = rng.randrange(q), rng.randrange(q)
        want = a * b % q
        for v in ("builtin", "classical", "dhem", "proposed"):
            assert mulmod(a, b, mod, v) == want


def test_stats_merge():
    s1 = ReductionStats(calls=3, subtractions_0=1, subtractions_1=2)
    s2 = ReductionStats(calls=2, subtractions_2=2)
    s1.merge(s2)
    assert s1.calls == 5
    assert (s1.subtractions_0, s1.subtractions_1, s1.subtractions_2) == (1, 2, 2)
