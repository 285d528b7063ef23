"""Word-size modular arithmetic: addition, subtraction, Barrett reduction
variants, the division-based oracle, and halving without division.

All reductions target odd moduli of up to 62 bits inside 64-bit words.
Scalar entry points here are pure Python; bulk sweeps and transforms go
through the kernel backend (see :mod:`nttmul.backend`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

WORD_SIZE = 64

# reduction codes shared with the kernel backends
RED_BUILTIN = 0
RED_TWO_SUB = 1  # classical: up to two correctional subtractions
RED_ONE_SUB = 2  # single correctional subtraction variants

VARIANTS = ("builtin", "classical", "dhem", "proposed")


class ModulusTooLargeError(ValueError):
    """Modulus exceeds the admissible bit length for the selected variant."""


def bit_length(a: int) -> int:
    """Number of bits in the binary representation of a positive integer."""
    if a < 1:
        raise ValueError(f"bit_length requires a >= 1, got {a}")
    return a.bit_length()


@dataclass(frozen=True)
class Modulus:
    """An odd modulus with its precomputed reduction constants.

    mu_classical, mu_proposed are always present; mu_dhem only when the
    modulus fits in WORD_SIZE - 4 bits.
    """

    q: int
    m: int = field(init=False)
    mu_classical: int = field(init=False)
    mu_dhem: int | None = field(init=False)
    mu_proposed: int = field(init=False)
    half_q_ceil: int = field(init=False)

    def __post_init__(self):
        q = self.q
        if q < 3:
            raise ValueError(f"modulus must be >= 3, got {q}")
        if q % 2 == 0:
            raise ValueError(f"modulus must be odd, got {q}")
        m = bit_length(q)
        if m > WORD_SIZE - 2:
            raise ModulusTooLargeError(
                f"modulus has {m} bits; at most {WORD_SIZE - 2} supported"
            )
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "mu_classical", (1 << (2 * m)) // q)
        object.__setattr__(
            self, "mu_dhem", (1 << (2 * m + 3)) // q if m <= WORD_SIZE - 4 else None
        )
        object.__setattr__(self, "mu_proposed", (1 << (2 * m + 1)) // q)
        object.__setattr__(self, "half_q_ceil", (q + 1) >> 1)

    def reduction_params(self, variant: str) -> tuple[int, int, int, int]:
        """Return (mode, mu, shift_in, shift_out) for a reduction variant."""
        m = self.m
        if variant == "builtin":
            return RED_BUILTIN, 0, 0, 0
        if variant == "classical":
            return RED_TWO_SUB, self.mu_classical, m - 1, m + 1
        if variant == "dhem":
            if self.mu_dhem is None:
                raise ModulusTooLargeError(
                    f"dhem variant requires m <= {WORD_SIZE - 4}, got m={m}"
                )
            return RED_ONE_SUB, self.mu_dhem, m - 2, m + 5
        if variant == "proposed":
            return RED_ONE_SUB, self.mu_proposed, m - 2, m + 3
        raise ValueError(f"unknown reduction variant {variant!r}")


@dataclass
class ReductionStats:
    """Tally of reduction calls by the number of correctional subtractions."""

    calls: int = 0
    subtractions_0: int = 0
    subtractions_1: int = 0
    subtractions_2: int = 0

    def record(self, nsubs: int) -> None:
        self.calls += 1
        if nsubs == 0:
            self.subtractions_0 += 1
        elif nsubs == 1:
            self.subtractions_1 += 1
        else:
            self.subtractions_2 += 1

    def merge(self, other: "ReductionStats") -> None:
        self.calls += other.calls
        self.subtractions_0 += other.subtractions_0
        self.subtractions_1 += other.subtractions_1
        self.subtractions_2 += other.subtractions_2


def mod_add(a: int, b: int, mod: Modulus) -> int:
    """(a + b) mod q with at most one correctional subtraction."""
    assert 0 <= a < mod.q and 0 <= b < mod.q, "inputs must be reduced"
    s = a + b
    if s >= mod.q:
        s -= mod.q
    return s


def mod_sub(a: int, b: int, mod: Modulus) -> int:
    """(a - b) mod q via conditional add of q."""
    assert 0 <= a < mod.q and 0 <= b < mod.q, "inputs must be reduced"
    d = a - b
    if d < 0:
        d += mod.q
    return d


def reduce_builtin(x: int, q: int) -> int:
    """x mod q by native integer division; the oracle for all variants."""
    if q < 1:
        raise ValueError(f"modulus must be >= 1, got {q}")
    return x % q


def _barrett(x: int, mod: Modulus, variant: str, stats: ReductionStats | None) -> int:
    mode, mu, s_in, s_out = mod.reduction_params(variant)
    q = mod.q
    assert 0 <= x < (1 << (2 * mod.m)), "operand exceeds 2^(2m)"
    c = x >> s_in
    quot = (c * mu) >> s_out
    rem = x - quot * q
    nsubs = 0
    while rem >= q:
        rem -= q
        nsubs += 1
    if stats is not None:
        stats.record(nsubs)
    return rem


def barrett_classical(x: int, mod: Modulus, stats: ReductionStats | None = None) -> int:
    """Classical Barrett reduction; zero, one, or two correctional subtractions."""
    return _barrett(x, mod, "classical", stats)


def barrett_dhem(x: int, mod: Modulus, stats: ReductionStats | None = None) -> int:
    """Dhem-Quisquater-style reduction; at most one correctional subtraction,
    moduli up to WORD_SIZE - 4 bits."""
    return _barrett(x, mod, "dhem", stats)


def barrett_proposed(x: int, mod: Modulus, stats: ReductionStats | None = None) -> int:
    """Single-subtraction Barrett variant admitting moduli up to
    WORD_SIZE - 2 bits."""
    return _barrett(x, mod, "proposed", stats)


def mulmod(a: int, b: int, mod: Modulus, variant: str = "proposed",
           stats: ReductionStats | None = None) -> int:
    """Double-word product followed by the selected reduction."""
    assert 0 <= a < mod.q and 0 <= b < mod.q, "inputs must be reduced"
    x = a * b
    if variant == "builtin":
        if stats is not None:
            stats.record(0)
        return x % mod.q
    return _barrett(x, mod, variant, stats)


def half_mod(x: int, mod: Modulus) -> int:
    """x * 2^-1 mod q without division, product-reduction, or branching."""
    assert 0 <= x < mod.q, "input must be reduced"
    return (x >> 1) + (x & 1) * mod.half_q_ceil
