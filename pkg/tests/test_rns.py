"""Residue decomposition, CRT reconstruction, and the big-integer oracle."""

import random

import pytest

from nttmul.params import ParameterError, build_plan
from nttmul.rns import (
    RnsBasis,
    decompose,
    load_basis,
    negacyclic_naive_bigint,
    polymul_rns,
    reconstruct,
    workload_size,
)


def test_workload_size():
    assert workload_size(1240, 28) == 45
    assert workload_size(1240, 30) == 42
    assert workload_size(60, 30) == 2
    assert workload_size(61, 30) == 3
    with pytest.raises(ValueError):
        workload_size(0, 30)


def test_basis_build_properties():
    basis = RnsBasis.build(16, 30, 3, seed=0)
    assert len(basis.primes) == 3
    assert len(set(basis.primes)) == 3
    assert basis.big_q == basis.primes[0] * basis.primes[1] * basis.primes[2]
    for p in basis.plans:
        assert p.n == 16
        assert p.q.bit_length() == 30
    # weights invert the complementary products
    for q, (quotient, inv) in zip(basis.primes, basis.crt_weights):
        assert quotient * q == basis.big_q
        assert quotient % q * inv % q == 1


def test_basis_deterministic():
    b1 = RnsBasis.build(8, 28, 2, seed=5)
    b2 = RnsBasis.build(8, 28, 2, seed=5)
    assert b1.primes == b2.primes


def test_basis_rejects_duplicate_primes():
    plan = build_plan(8, bits=20, seed=0)
    with pytest.raises(ParameterError):
        RnsBasis.from_plans([plan, plan])


def test_decompose_reconstruct_roundtrip():
    basis = RnsBasis.build(8, 28, 3, seed=1)
    rng = random.Random(4)
    values = [rng.randrange(basis.big_q) for _ in range(8)]
    residues = decompose(values, basis)
    assert all(len(r) == 8 for r in residues)
    assert reconstruct(residues, basis) == values


def test_decompose_rejects_out_of_range():
    basis = RnsBasis.build(4, 20, 2, seed=0)
    with pytest.raises(ValueError):
        decompose([basis.big_q], basis)


def test_reconstruct_rejects_shape():
    basis = RnsBasis.build(4, 20, 2, seed=0)
    residues = decompose([1, 2, 3, 4], basis)
    with pytest.raises(ValueError):
        reconstruct(residues[:1], basis)


@pytest.mark.parametrize("n,k", [(8, 2), (8, 4), (64, 2)])
def test_polymul_rns_matches_bigint_oracle(n, k):
    basis = RnsBasis.build(n, 30, k, seed=2)
    rng = random.Random(n * 10 + k)
    for _ in range(5):
        a = [rng.randrange(basis.big_q) for _ in range(n)]
        b = [rng.randrange(basis.big_q) for _ in range(n)]
        assert polymul_rns(a, b, basis) == \
            negacyclic_naive_bigint(a, b, basis.big_q)


def test_bigint_oracle_wraparound():
    # x^(n-1) * x = -1 mod x^n + 1 over the composite modulus
    big_q = 97 * 113
    a = [0, 0, 0, 1]
    b = [0, 1, 0, 0]
    assert negacyclic_naive_bigint(a, b, big_q) == [big_q - 1, 0, 0, 0]


def test_basis_save_load(tmp_path):
    basis = RnsBasis.build(16, 28, 2, seed=3)
    path = tmp_path / "basis.txt"
    basis.save(path)
    back = load_basis(path)
    assert back.primes == basis.primes
    assert back.big_q == basis.big_q
    assert back.n == 16
