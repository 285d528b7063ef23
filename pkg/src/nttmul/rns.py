"""Residue-number-system decomposition of big-modulus negacyclic
multiplication into per-prime transform multiplications, with CRT
reconstruction.

Multi-word integers (Python ints) appear only here; everything under the
per-prime multiplications stays word-sized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .nttcore import OpCounter
from .params import NttPlan, ParameterError, build_plan, generate_prime
from .polymul import FusedPlan, polymul_fused


def workload_size(bits_q: int, m: int) -> int:
    """Number of m-bit prime tasks needed to cover a bits_q-bit modulus."""
    if bits_q < 1 or m < 1:
        raise ValueError("bits_q and m must be >= 1")
    return math.ceil(bits_q / m)


@dataclass(frozen=True)
class RnsBasis:
    """Ordered transform-friendly primes with CRT reconstruction constants."""

    plans: tuple[NttPlan, ...]
    big_q: int
    crt_weights: tuple[tuple[int, int], ...]  # (Q/q_i, (Q/q_i)^-1 mod q_i)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p.q for p in self.plans)

    @property
    def n(self) -> int:
        return self.plans[0].n

    @classmethod
    def build(cls, n: int, bits: int, k: int, seed: int = 0,
              variant: str = "proposed") -> "RnsBasis":
        """k distinct primes of the given bit size, deterministic in seed."""
        primes: list[int] = []
        plans: list[NttPlan] = []
        s = seed
        while len(primes) < k:
            q = generate_prime(bits, n, s)
            s += 1
            if q in primes:
                continue
            primes.append(q)
            plans.append(build_plan(n, q, seed=seed, variant=variant))
        return cls.from_plans(plans)

    @classmethod
    def from_plans(cls, plans: list[NttPlan]) -> "RnsBasis":
        primes = [p.q for p in plans]
        if len(set(primes)) != len(primes):
            raise ParameterError("basis primes must be pairwise distinct")
        n = plans[0].n
        if any(p.n != n for p in plans):
            raise ParameterError("all basis plans must share the same n")
        big_q = math.prod(primes)
        weights = []
        for q in primes:
            quotient = big_q // q
            weights.append((quotient, pow(quotient % q, -1, q)))
        return cls(plans=tuple(plans), big_q=big_q, crt_weights=tuple(weights))

    def save(self, path) -> None:
        """One plan line per prime, in basis order."""
        with open(path, "w") as fh:
            for p in self.plans:
                fh.write(f"{p.n} {p.q} {p.psi} {p.reduction_variant}\n")


def decompose(coeffs, basis: RnsBasis) -> list[np.ndarray]:
    """Residue polynomial i holds every coefficient mod q_i."""
    values = [int(c) for c in coeffs]
    for c in values:
        if not 0 <= c < basis.big_q:
            raise ValueError(f"coefficient {c} outside [0, big_q)")
    return [
        np.array([c % q for c in values], dtype=np.uint64)
        for q in basis.primes
    ]


def reconstruct(residues, basis: RnsBasis) -> list[int]:
    """Unique vector in [0, big_q)^n matching every residue polynomial."""
    if len(residues) != len(basis.plans):
        raise ValueError(f"expected {len(basis.plans)} residue polynomials, "
                         f"got {len(residues)}")
    n = len(residues[0])
    if any(len(r) != n for r in residues):
        raise ValueError("residue polynomials must share one length")
    out = []
    for j in range(n):
        acc = 0
        for r, q, (quotient, inv) in zip(residues, basis.primes, basis.crt_weights):
            acc += int(r[j]) * inv % q * quotient
        out.append(acc % basis.big_q)
    return out


def polymul_rns(a, b, basis: RnsBasis, ctr: OpCounter | None = None) -> list[int]:
    """Negacyclic product mod big_q: decompose, per-prime fused
    multiplications, CRT reconstruction."""
    res_a = decompose(a, basis)
    res_b = decompose(b, basis)
    products = [
        polymul_fused(ra, rb, FusedPlan.from_plan(plan), ctr)
        for ra, rb, plan in zip(res_a, res_b, basis.plans)
    ]
    return reconstruct(products, basis)


def negacyclic_naive_bigint(a, b, big_q: int) -> list[int]:
    """Schoolbook mod x^n + 1 over multi-word integers; the RNS oracle."""
    a = [int(x) for x in a]
    b = [int(x) for x in b]
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} vs {len(b)}")
    n = len(a)
    out = [0] * n
    for i in range(n):
        for j in range(n):
            k = i + j
            if k < n:
                out[k] = (out[k] + a[i] * b[j]) % big_q
            else:
                out[k - n] = (out[k - n] - a[i] * b[j]) % big_q
    return out


def load_basis(path) -> RnsBasis:
    """Read a basis saved as one plan line per prime."""
    from .params import _plan_from_root, is_prime
    from .modarith import Modulus

    plans = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            parts = line.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ParameterError(f"{path}:{lineno}: expected 'n q psi variant'")
            n, q, psi = int(parts[0]), int(parts[1]), int(parts[2])
            if not is_prime(q):
                raise ParameterError(f"{path}:{lineno}: q = {q} is not prime")
            if (q - 1) % (2 * n):
                raise ParameterError(f"{path}:{lineno}: 2n does not divide q - 1")
            plans.append(_plan_from_root(n, n.bit_length() - 1, Modulus(q), psi,
                                         parts[3]))
    if not plans:
        raise ParameterError(f"{path}: empty basis file")
    return RnsBasis.from_plans(plans)
