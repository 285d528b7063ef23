"""Forward and inverse transforms over Z_q coefficient vectors.

Radix-2 forward/inverse (with twiddles and the 1/n factor merged into the
butterflies), truncated variants for fusion, a radix-4 formulation, a
four-step 2D decomposition, and a batch mode.

The radix-2 paths dispatch to the active kernel backend; the radix-4 and 2D
variants are correctness/locality formulations kept in Python.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import backend
from ._kernels_py import C_ADDSUB, C_HALF, C_MODMUL, C_NEG, C_TWIDDLE, _reducer
from .params import NttPlan, bit_reverse

NORMAL = "normal"
BIT_REVERSED = "bit_reversed"
TRUNCATED = "truncated"


@dataclass
class OpCounter:
    """Tallies of the arithmetic performed by the instrumented paths."""

    modmul: int = 0
    modadd_sub: int = 0
    half_scalings: int = 0
    twiddle_loads: int = 0
    negations: int = 0

    def add_array(self, counts: np.ndarray) -> None:
        self.modmul += int(counts[C_MODMUL])
        self.modadd_sub += int(counts[C_ADDSUB])
        self.half_scalings += int(counts[C_HALF])
        self.twiddle_loads += int(counts[C_TWIDDLE])
        self.negations += int(counts[C_NEG])

    def merge(self, other: "OpCounter") -> None:
        self.modmul += other.modmul
        self.modadd_sub += other.modadd_sub
        self.half_scalings += other.half_scalings
        self.twiddle_loads += other.twiddle_loads
        self.negations += other.negations


@dataclass
class Polynomial:
    """Length-n coefficient vector over Z_q with its ordering tag."""

    coeffs: np.ndarray
    ordering: str = NORMAL

    def __post_init__(self):
        self.coeffs = np.ascontiguousarray(self.coeffs, dtype=np.uint64)

    @classmethod
    def from_list(cls, values, ordering: str = NORMAL) -> "Polynomial":
        return cls(np.array([int(v) for v in values], dtype=np.uint64), ordering)

    @classmethod
    def random(cls, plan: NttPlan, rng) -> "Polynomial":
        return cls.from_list([rng.randrange(plan.q) for _ in range(plan.n)])

    @classmethod
    def unit(cls, n: int, index: int = 0) -> "Polynomial":
        c = np.zeros(n, dtype=np.uint64)
        c[index] = 1
        return cls(c)

    def copy(self) -> "Polynomial":
        return Polynomial(self.coeffs.copy(), self.ordering)

    def to_list(self) -> list[int]:
        return [int(x) for x in self.coeffs]

    def __len__(self) -> int:
        return len(self.coeffs)


def _check(a: Polynomial, plan: NttPlan, ordering: str) -> None:
    if len(a.coeffs) != plan.n:
        raise ValueError(f"length {len(a.coeffs)} does not match plan n={plan.n}")
    if a.ordering != ordering:
        raise ValueError(f"expected {ordering}-order input, got {a.ordering}")


def _red_args(plan: NttPlan):
    mode, mu, s_in, s_out = plan.mod.reduction_params(plan.reduction_variant)
    return plan.q, mode, mu, s_in, s_out


def _counts() -> np.ndarray:
    return np.zeros(5, dtype=np.uint64)


def ntt_ct(a: Polynomial, plan: NttPlan, ctr: OpCounter | None = None) -> Polynomial:
    """Merged forward NTT, in place; normal -> bit-reversed order."""
    _check(a, plan, NORMAL)
    q, mode, mu, s_in, s_out = _red_args(plan)
    counts = _counts()
    backend.kernels().ntt_ct(a.coeffs, plan.tw_fwd, q, mode, mu, s_in, s_out,
                             False, counts)
    if ctr is not None:
        ctr.add_array(counts)
    a.ordering = BIT_REVERSED
    return a


def ntt_ct_truncated(a: Polynomial, plan: NttPlan,
                     ctr: OpCounter | None = None) -> Polynomial:
    """Merged forward NTT with the final stage omitted."""
    if plan.n < 4:
        raise ValueError("truncation needs n >= 4")
    _check(a, plan, NORMAL)
    q, mode, mu, s_in, s_out = _red_args(plan)
    counts = _counts()
    backend.kernels().ntt_ct(a.coeffs, plan.tw_fwd, q, mode, mu, s_in, s_out,
                             True, counts)
    if ctr is not None:
        ctr.add_array(counts)
    a.ordering = TRUNCATED
    return a


def intt_gs(a: Polynomial, plan: NttPlan, ctr: OpCounter | None = None) -> Polynomial:
    """Merged inverse NTT without the 1/n factor; output is n times the
    true inverse."""
    _check(a, plan, BIT_REVERSED)
    q, mode, mu, s_in, s_out = _red_args(plan)
    counts = _counts()
    backend.kernels().intt_gs(a.coeffs, plan.tw_inv, q, plan.mod.half_q_ceil,
                              mode, mu, s_in, s_out, False, False, counts)
    if ctr is not None:
        ctr.add_array(counts)
    a.ordering = NORMAL
    return a


def intt_gs_scaled(a: Polynomial, plan: NttPlan,
                   ctr: OpCounter | None = None) -> Polynomial:
    """Merged inverse NTT with the 1/n factor folded in by halving both
    outputs of every butterfly."""
    _check(a, plan, BIT_REVERSED)
    q, mode, mu, s_in, s_out = _red_args(plan)
    counts = _counts()
    backend.kernels().intt_gs(a.coeffs, plan.tw_inv, q, plan.mod.half_q_ceil,
                              mode, mu, s_in, s_out, True, False, counts)
    if ctr is not None:
        ctr.add_array(counts)
    a.ordering = NORMAL
    return a


def intt_gs_truncated(a: Polynomial, plan: NttPlan,
                      ctr: OpCounter | None = None) -> Polynomial:
    """Scaled inverse NTT with the first stage omitted; composes with the
    fused middle loop to a full inverse."""
    if plan.n < 4:
        raise ValueError("truncation needs n >= 4")
    _check(a, plan, TRUNCATED)
    q, mode, mu, s_in, s_out = _red_args(plan)
    counts = _counts()
    backend.kernels().intt_gs(a.coeffs, plan.tw_inv, q, plan.mod.half_q_ceil,
                              mode, mu, s_in, s_out, True, True, counts)
    if ctr is not None:
        ctr.add_array(counts)
    a.ordering = NORMAL
    return a


def scale_by(factor: int, a: Polynomial, plan: NttPlan,
             ctr: OpCounter | None = None) -> Polynomial:
    """Multiply every coefficient by a scalar, in place."""
    q, mode, mu, s_in, s_out = _red_args(plan)
    counts = _counts()
    backend.kernels().scale(a.coeffs, factor, q, mode, mu, s_in, s_out, counts)
    if ctr is not None:
        ctr.add_array(counts)
    return a


# ---------------------------------------------------------------------------
# radix-4: two merged radix-2 stages per pass, four elements per butterfly.
# Output order (and the paired inverse) match the radix-2 transforms exactly.

def ntt_radix4(a: Polynomial, plan: NttPlan,
               ctr: OpCounter | None = None) -> Polynomial:
    """Forward NTT processing two stages per pass; requires even log2(n)."""
    if plan.log_n % 2:
        raise ValueError(f"radix-4 needs even log2(n), got n={plan.n}")
    _check(a, plan, NORMAL)
    q, mode, mu, s_in, s_out = _red_args(plan)
    red = _reducer(q, mode, mu, s_in, s_out)
    v = a.to_list()
    tw = [int(x) for x in plan.tw_fwd]
    n = plan.n
    n_mul = n_add = n_tw = 0
    m, k = 1, n // 2
    while m < n:
        for i in range(m):
            xi1 = tw[m + i]
            xi2 = tw[2 * m + 2 * i]
            xi3 = tw[2 * m + 2 * i + 1]
            n_tw += 3
            base = 2 * i * k
            half_k = k // 2
            for j in range(base, base + half_k):
                x0, x1 = v[j], v[j + half_k]
                x2, x3 = v[j + k], v[j + k + half_k]
                t = red(xi1 * x2)
                x0a = x0 + t
                if x0a >= q:
                    x0a -= q
                x2a = x0 - t
                if x2a < 0:
                    x2a += q
                t = red(xi1 * x3)
                x1a = x1 + t
                if x1a >= q:
                    x1a -= q
                x3a = x1 - t
                if x3a < 0:
                    x3a += q
                t = red(xi2 * x1a)
                y0 = x0a + t
                if y0 >= q:
                    y0 -= q
                y1 = x0a - t
                if y1 < 0:
                    y1 += q
                t = red(xi3 * x3a)
                y2 = x2a + t
                if y2 >= q:
                    y2 -= q
                y3 = x2a - t
                if y3 < 0:
                    y3 += q
                v[j], v[j + half_k] = y0, y1
                v[j + k], v[j + k + half_k] = y2, y3
            n_mul += 4 * half_k
            n_add += 8 * half_k
        m <<= 2
        k >>= 2
    a.coeffs[:] = v
    a.ordering = BIT_REVERSED
    if ctr is not None:
        ctr.modmul += n_mul
        ctr.modadd_sub += n_add
        ctr.twiddle_loads += n_tw
    return a


def intt_radix4(a: Polynomial, plan: NttPlan,
                ctr: OpCounter | None = None) -> Polynomial:
    """Scaled inverse paired with ntt_radix4; requires even log2(n)."""
    if plan.log_n % 2:
        raise ValueError(f"radix-4 needs even log2(n), got n={plan.n}")
    _check(a, plan, BIT_REVERSED)
    q, mode, mu, s_in, s_out = _red_args(plan)
    red = _reducer(q, mode, mu, s_in, s_out)
    half_q = plan.mod.half_q_ceil
    v = a.to_list()
    tw = [int(x) for x in plan.tw_inv]
    n = plan.n
    n_mul = n_add = n_half = n_tw = 0

    def halve(x):
        return (x >> 1) + (x & 1) * half_q

    m, k = n // 2, 1
    while m >= 2:
        for i2 in range(m // 2):
            xa = tw[m + 2 * i2]
            xb = tw[m + 2 * i2 + 1]
            xc = tw[m // 2 + i2]
            n_tw += 3
            base = 4 * i2 * k
            for j in range(base, base + k):
                u, t = v[j], v[j + k]
                s = u + t
                if s >= q:
                    s -= q
                d = u - t
                if d < 0:
                    d += q
                s, d = halve(s), halve(red(xa * d))
                u2, t2 = v[j + 2 * k], v[j + 3 * k]
                s2 = u2 + t2
                if s2 >= q:
                    s2 -= q
                d2 = u2 - t2
                if d2 < 0:
                    d2 += q
                s2, d2 = halve(s2), halve(red(xb * d2))
                ss = s + s2
                if ss >= q:
                    ss -= q
                sd = s - s2
                if sd < 0:
                    sd += q
                ds = d + d2
                if ds >= q:
                    ds -= q
                dd = d - d2
                if dd < 0:
                    dd += q
                v[j] = halve(ss)
                v[j + 2 * k] = halve(red(xc * sd))
                v[j + k] = halve(ds)
                v[j + 3 * k] = halve(red(xc * dd))
            n_mul += 4 * k
            n_add += 8 * k
            n_half += 8 * k
        m >>= 2
        k <<= 2
    a.coeffs[:] = v
    a.ordering = NORMAL
    if ctr is not None:
        ctr.modmul += n_mul
        ctr.modadd_sub += n_add
        ctr.half_scalings += n_half
        ctr.twiddle_loads += n_tw
    return a


# ---------------------------------------------------------------------------
# four-step 2D decomposition

def _grid_tables(plan: NttPlan):
    """Lazily built sub-transform tables for the four-step transform."""
    tables = plan._cache.get("2d")
    if tables is not None:
        return tables
    n, q = plan.n, plan.q
    if plan.log_n % 2 == 0:
        n1 = n2 = 1 << (plan.log_n // 2)
    else:
        n1 = 1 << ((plan.log_n + 1) // 2)
        n2 = 1 << ((plan.log_n - 1) // 2)
    omega = plan.omega
    omega_inv = pow(omega, q - 2, q)

    def powers(base, count):
        out = [1] * count
        for i in range(1, count):
            out[i] = out[i - 1] * base % q
        return out

    tables = {
        "n1": n1,
        "n2": n2,
        "psi_pows": powers(plan.psi, n),
        "omega_pows": powers(omega, n),
        "omega_inv_pows": powers(omega_inv, n),
        "col_root": powers(pow(omega, n1, q), n2),
        "row_root": powers(pow(omega, n2, q), n1),
        "col_root_inv": powers(pow(omega_inv, n1, q), n2),
        "row_root_inv": powers(pow(omega_inv, n2, q), n1),
    }
    # inverse post-scale folds 1/n and the psi un-merge into one pass
    psi_inv_pows = powers(plan.psi_inv, n)
    tables["post_inv"] = [plan.n_inv * p % q for p in psi_inv_pows]
    plan._cache["2d"] = tables
    return tables


def _fft_natural(v, root_pows, q, red, stats):
    """In-place iterative cyclic FFT, natural order in and out."""
    s = len(v)
    bits = s.bit_length() - 1
    for i in range(s):
        j = bit_reverse(i, bits)
        if j > i:
            v[i], v[j] = v[j], v[i]
    size = 2
    while size <= s:
        half = size // 2
        step = s // size
        for start in range(0, s, size):
            for j in range(half):
                w = root_pows[j * step]
                stats[1] += 1
                u = v[start + j]
                t = red(w * v[start + j + half])
                stats[0] += 1
                x = u + t
                if x >= q:
                    x -= q
                y = u - t
                if y < 0:
                    y += q
                v[start + j] = x
                v[start + j + half] = y
                stats[2] += 2
        size *= 2
    return v


def ntt_2d(a: Polynomial, plan: NttPlan,
           ctr: OpCounter | None = None) -> Polynomial:
    """Four-step forward transform: pre-scale, column FFTs, twiddle
    correction, row FFTs.

    With n = n1 * n2 (square split, or sqrt(2n) x sqrt(n/2) for odd log2(n)),
    the output "vendor order" places spectrum entry j2 + n2*j1 of the
    natural-order negacyclic spectrum at position j2*n1 + j1; see
    ntt_2d_permutation for the map onto the radix-2 output.
    """
    _check(a, plan, NORMAL)
    t = _grid_tables(plan)
    n1, n2, q = t["n1"], t["n2"], plan.q
    qq, mode, mu, s_in, s_out = _red_args(plan)
    red = _reducer(qq, mode, mu, s_in, s_out)
    stats = [0, 0, 0]  # modmul, twiddle loads, addsub
    psi_pows = t["psi_pows"]
    v = a.to_list()
    pre = [red(psi_pows[i] * v[i]) for i in range(plan.n)]
    stats[0] += plan.n
    stats[1] += plan.n
    cols = []
    for i1 in range(n1):
        col = pre[i1::n1]
        _fft_natural(col, t["col_root"], q, red, stats)
        cols.append(col)
    omega_pows = t["omega_pows"]
    out = [0] * plan.n
    for j2 in range(n2):
        row = [red(cols[i1][j2] * omega_pows[(i1 * j2) % plan.n]) for i1 in range(n1)]
        stats[0] += n1
        stats[1] += n1
        _fft_natural(row, t["row_root"], q, red, stats)
        out[j2 * n1:(j2 + 1) * n1] = row
    a.coeffs[:] = out
    a.ordering = "vendor_2d"
    if ctr is not None:
        ctr.modmul += stats[0]
        ctr.twiddle_loads += stats[1]
        ctr.modadd_sub += stats[2]
    return a


def ntt_2d_inv(a: Polynomial, plan: NttPlan,
               ctr: OpCounter | None = None) -> Polynomial:
    """Inverse of ntt_2d, consuming its vendor order."""
    if len(a.coeffs) != plan.n:
        raise ValueError(f"length {len(a.coeffs)} does not match plan n={plan.n}")
    if a.ordering != "vendor_2d":
        raise ValueError(f"expected vendor_2d-order input, got {a.ordering}")
    t = _grid_tables(plan)
    n1, n2, q = t["n1"], t["n2"], plan.q
    qq, mode, mu, s_in, s_out = _red_args(plan)
    red = _reducer(qq, mode, mu, s_in, s_out)
    stats = [0, 0, 0]
    v = a.to_list()
    omega_inv_pows = t["omega_inv_pows"]
    cols = [[0] * n2 for _ in range(n1)]
    for j2 in range(n2):
        row = v[j2 * n1:(j2 + 1) * n1]
        _fft_natural(row, t["row_root_inv"], q, red, stats)
        for i1 in range(n1):
            cols[i1][j2] = red(row[i1] * omega_inv_pows[(i1 * j2) % plan.n])
        stats[0] += n1
        stats[1] += n1
    out = [0] * plan.n
    post = t["post_inv"]
    for i1 in range(n1):
        col = cols[i1]
        _fft_natural(col, t["col_root_inv"], q, red, stats)
        for i2 in range(n2):
            i = i1 + n1 * i2
            out[i] = red(col[i2] * post[i])
    stats[0] += plan.n
    stats[1] += plan.n
    a.coeffs[:] = out
    a.ordering = NORMAL
    if ctr is not None:
        ctr.modmul += stats[0]
        ctr.twiddle_loads += stats[1]
        ctr.modadd_sub += stats[2]
    return a


def ntt_2d_permutation(plan: NttPlan) -> np.ndarray:
    """perm such that ntt_2d(a).coeffs[v] == ntt_ct(a).coeffs[perm[v]]."""
    t = _grid_tables(plan)
    n1, n2 = t["n1"], t["n2"]
    perm = np.empty(plan.n, dtype=np.int64)
    for v in range(plan.n):
        j2, j1 = divmod(v, n1)
        perm[v] = bit_reverse(j2 + n2 * j1, plan.log_n)
    return perm


# ---------------------------------------------------------------------------
# batch mode

def batch_ntt(rows: list[Polynomial], plan: NttPlan, workers: int = 1,
              ctr: OpCounter | None = None) -> list[Polynomial]:
    """Apply ntt_ct independently to every row, splitting work across at
    most ``workers`` threads.  Output is bit-identical for any worker count."""
    if workers < 1:
        raise ValueError("workers must be >= 1")
    for r in rows:
        if len(r.coeffs) != plan.n:
            raise ValueError("ragged batch: all rows must have length n")
    counters = [OpCounter() if ctr is not None else None for _ in rows]
    if workers == 1 or len(rows) <= 1:
        for r, c in zip(rows, counters):
            ntt_ct(r, plan, c)
    else:
        # contiguous chunks, one task per worker, to keep dispatch overhead
        # off the per-row path
        step = -(-len(rows) // workers)
        spans = [(i, min(i + step, len(rows)))
                 for i in range(0, len(rows), step)]

        def run_span(span):
            lo, hi = span
            for r, c in zip(rows[lo:hi], counters[lo:hi]):
                ntt_ct(r, plan, c)

        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(run_span, spans))
    if ctr is not None:
        for c in counters:
            ctr.merge(c)
    return rows
