"""Transform parameters: NTT-friendly prime generation, primitive roots of
unity, bit reversal, and the precomputed twiddle tables shared by all
transforms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

import numpy as np

from .modarith import WORD_SIZE, Modulus, bit_length

# Sufficient Miller-Rabin witness set for all integers below 3.3 * 10^24,
# which covers the full 64-bit range.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


class ParameterError(ValueError):
    """Invalid or inconsistent transform parameters."""


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin for 64-bit integers."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def bit_reverse(i: int, bits: int) -> int:
    """Reverse the low ``bits`` bits of i."""
    if not 0 <= i < (1 << bits):
        raise ValueError(f"index {i} out of range for {bits} bits")
    r = 0
    for _ in range(bits):
        r = (r << 1) | (i & 1)
        i >>= 1
    return r


def generate_prime(bits: int, n: int, seed: int = 0) -> int:
    """Deterministically pick a ``bits``-bit prime q with q = 1 (mod 2n).

    Candidates q = 2n*k + 1 are scanned with k descending from the top of the
    range; the seed rotates the starting point.
    """
    if not 4 <= bits <= WORD_SIZE - 2:
        raise ParameterError(f"bits must be in [4, {WORD_SIZE - 2}], got {bits}")
    if n < 2 or n & (n - 1):
        raise ParameterError(f"n must be a power of two >= 2, got {n}")
    if 2 * n >= (1 << bits):
        raise ParameterError(f"2n = {2 * n} leaves no {bits}-bit candidates")
    two_n = 2 * n
    k_max = ((1 << bits) - 1 - 1) // two_n
    k_min = ((1 << (bits - 1)) - 1) // two_n + 1  # keep bit_length(q) == bits
    if k_min > k_max:
        raise ParameterError(f"no {bits}-bit candidates with q = 1 mod {two_n}")
    count = k_max - k_min + 1
    offset = seed % count
    for step in range(count):
        k = k_max - (offset + step) % count
        q = two_n * k + 1
        if is_prime(q):
            return q
    raise ParameterError(f"no {bits}-bit prime with q = 1 mod {two_n}")


def find_primitive_root(q: int, two_n: int, seed: int = 0) -> int:
    """A root of unity of exact order ``two_n`` (a power of two) mod prime q.

    Samples seeded candidates g and accepts psi = g^((q-1)/2n) iff
    psi^n = -1, which at 2-power order is equivalent to primitivity.
    """
    if (q - 1) % two_n:
        raise ParameterError(f"{two_n} does not divide q - 1 = {q - 1}")
    n = two_n // 2
    exp = (q - 1) // two_n
    rng = random.Random(seed)
    while True:
        g = rng.randrange(2, q - 1)
        psi = pow(g, exp, q)
        if pow(psi, n, q) == q - 1:
            return psi


@dataclass(frozen=True)
class NttPlan:
    """Precomputed context for all transforms of one (n, q) pair.

    tw_fwd[i] = psi^bit_reverse(i); tw_inv[i] = psi^-bit_reverse(i).
    """

    n: int
    log_n: int
    mod: Modulus
    psi: int
    psi_inv: int
    omega: int
    n_inv: int
    tw_fwd: np.ndarray
    tw_inv: np.ndarray
    reduction_variant: str = "proposed"
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def q(self) -> int:
        return self.mod.q


def build_plan(n: int, q: int | None = None, *, bits: int | None = None,
               seed: int = 0, variant: str = "proposed") -> NttPlan:
    """Build and validate a full transform plan.

    Either a prime q is given directly, or one is generated from (bits, seed).
    """
    if n < 2 or n & (n - 1):
        raise ParameterError(f"n must be a power of two >= 2, got {n}")
    if q is None:
        if bits is None:
            raise ParameterError("either q or bits must be given")
        q = generate_prime(bits, n, seed)
    log_n = n.bit_length() - 1
    if not is_prime(q):
        raise ParameterError(f"q = {q} is not prime")
    if (q - 1) % (2 * n):
        raise ParameterError(f"2n = {2 * n} does not divide q - 1")
    mod = Modulus(q)
    mod.reduction_params(variant)  # reject inadmissible variant early
    psi = find_primitive_root(q, 2 * n, seed)
    return _plan_from_root(n, log_n, mod, psi, variant)


def _plan_from_root(n: int, log_n: int, mod: Modulus, psi: int,
                    variant: str) -> NttPlan:
    q = mod.q
    psi_inv = pow(psi, q - 2, q)
    fwd_pows = [1] * n
    inv_pows = [1] * n
    for i in range(1, n):
        fwd_pows[i] = fwd_pows[i - 1] * psi % q
        inv_pows[i] = inv_pows[i - 1] * psi_inv % q
    tw_fwd = np.empty(n, dtype=np.uint64)
    tw_inv = np.empty(n, dtype=np.uint64)
    for i in range(n):
        br = bit_reverse(i, log_n)
        tw_fwd[i] = fwd_pows[br]
        tw_inv[i] = inv_pows[br]
    plan = NttPlan(
        n=n,
        log_n=log_n,
        mod=mod,
        psi=psi,
        psi_inv=psi_inv,
        omega=psi * psi % q,
        n_inv=pow(n, q - 2, q),
        tw_fwd=tw_fwd,
        tw_inv=tw_inv,
        reduction_variant=variant,
    )
    validate_plan(plan)
    return plan


def validate_plan(plan: NttPlan) -> None:
    """Check every structural invariant; raises ParameterError on corruption."""
    n, q = plan.n, plan.q
    if plan.n != 1 << plan.log_n or n < 2:
        raise ParameterError("n is not a power of two >= 2")
    if not is_prime(q):
        raise ParameterError(f"q = {q} failed the primality test")
    if (q - 1) % (2 * n):
        raise ParameterError("2n does not divide q - 1")
    if pow(plan.psi, 2 * n, q) != 1 or pow(plan.psi, n, q) != q - 1:
        raise ParameterError("psi is not a primitive 2n-th root of unity")
    if plan.psi * plan.psi_inv % q != 1:
        raise ParameterError("psi_inv is not the inverse of psi")
    if n % q * plan.n_inv % q != 1:
        raise ParameterError("n_inv is not the inverse of n")
    if plan.omega != plan.psi * plan.psi % q:
        raise ParameterError("omega is not psi^2")
    if len(plan.tw_fwd) != n or len(plan.tw_inv) != n:
        raise ParameterError("twiddle tables have the wrong length")
    if plan.tw_fwd[0] != 1 or plan.tw_inv[0] != 1:
        raise ParameterError("twiddle tables must start with 1")
    for i in range(n):
        if int(plan.tw_fwd[i]) * int(plan.tw_inv[i]) % q != 1:
            raise ParameterError(f"twiddle entries at index {i} are not inverses")


def save_plan(plan: NttPlan, path) -> None:
    """Write the plan header line ``n q psi variant``."""
    with open(path, "w") as fh:
        fh.write(f"{plan.n} {plan.q} {plan.psi} {plan.reduction_variant}\n")


def load_plan(path) -> NttPlan:
    """Read, rebuild, and validate a plan from its header line."""
    with open(path) as fh:
        line = fh.readline()
    parts = line.split()
    if len(parts) != 4:
        raise ParameterError(f"{path}: expected header 'n q psi variant'")
    try:
        n, q, psi = int(parts[0]), int(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ParameterError(f"{path}: malformed header: {exc}") from None
    variant = parts[3]
    if n < 2 or n & (n - 1):
        raise ParameterError(f"{path}: n must be a power of two >= 2")
    if not is_prime(q):
        raise ParameterError(f"{path}: q = {q} is not prime")
    if (q - 1) % (2 * n):
        raise ParameterError(f"{path}: 2n does not divide q - 1")
    mod = Modulus(q)
    mod.reduction_params(variant)
    return _plan_from_root(n, n.bit_length() - 1, mod, psi, variant)
