"""Pure-Python kernel twin.

Mirrors the surface of the compiled extension ``nttmul._kernels``: in-place
radix-2 transforms, the fused Karatsuba middle loop, pointwise products, the
quadratic negacyclic oracle, and bulk reduction sweeps.  Operation counts
emitted here are bit-identical to the compiled kernels.

Counts array layout (uint64[5]): modmul, addsub, half, twiddle_loads, negations.
"""

from __future__ import annotations

NATIVE = False

# counts indices
C_MODMUL, C_ADDSUB, C_HALF, C_TWIDDLE, C_NEG = range(5)

# reduction modes (same codes as modarith / the compiled kernels)
RED_BUILTIN = 0
RED_TWO_SUB = 1
RED_ONE_SUB = 2


def _reducer(q, mode, mu, s_in, s_out):
    if mode == RED_BUILTIN:
        return lambda x: x % q

    def red(x):
        rem = x - (((x >> s_in) * mu) >> s_out) * q
        while rem >= q:
            rem -= q
        return rem

    return red


def ntt_ct(a, tw, q, mode, mu, s_in, s_out, truncate, counts):
    """Forward decimation NTT, twiddles premerged, in place (normal -> bit
    reversed order).  With ``truncate`` the final stage is omitted."""
    n = len(a)
    v = [int(x) for x in a]
    w = [int(x) for x in tw]
    red = _reducer(q, mode, mu, s_in, s_out)
    n_mul = n_add = n_tw = 0
    limit = n // 2 if truncate else n
    m, k = 1, n // 2
    while m < limit:
        for i in range(m):
            j_first = 2 * i * k
            xi = w[m + i]
            n_tw += 1
            for j in range(j_first, j_first + k):
                u = v[j]
                t = red(xi * v[j + k])
                s = u + t
                if s >= q:
                    s -= q
                d = u - t
                if d < 0:
                    d += q
                v[j] = s
                v[j + k] = d
            n_mul += k
            n_add += 2 * k
        m <<= 1
        k >>= 1
    a[:] = v
    counts[C_MODMUL] += n_mul
    counts[C_ADDSUB] += n_add
    counts[C_TWIDDLE] += n_tw


def intt_gs(a, tw, q, half_q, mode, mu, s_in, s_out, scaled, skip_first, counts):
    """Inverse decimation NTT, in place (bit reversed -> normal order).

    ``scaled`` halves both outputs of every butterfly, folding the 1/n factor
    into the stages.  ``skip_first`` omits the first (widest) stage.
    """
    n = len(a)
    v = [int(x) for x in a]
    w = [int(x) for x in tw]
    red = _reducer(q, mode, mu, s_in, s_out)
    n_mul = n_add = n_half = n_tw = 0
    m = n // 4 if skip_first else n // 2
    k = 2 if skip_first else 1
    while m >= 1:
        for i in range(m):
            j_first = 2 * i * k
            xi = w[m + i]
            n_tw += 1
            for j in range(j_first, j_first + k):
                u, t = v[j], v[j + k]
                s = u + t
                if s >= q:
                    s -= q
                d = u - t
                if d < 0:
                    d += q
                d = red(xi * d)
                if scaled:
                    s = (s >> 1) + (s & 1) * half_q
                    d = (d >> 1) + (d & 1) * half_q
                v[j] = s
                v[j + k] = d
            n_mul += k
            n_add += 2 * k
            if scaled:
                n_half += 2 * k
        m >>= 1
        k <<= 1
    a[:] = v
    counts[C_MODMUL] += n_mul
    counts[C_ADDSUB] += n_add
    counts[C_HALF] += n_half
    counts[C_TWIDDLE] += n_tw


def fused_middle(ah, bh, ch, tw, q, mode, mu, s_in, s_out, counts):
    """Karatsuba-combined replacement for final-CT-stage / pointwise product /
    first-GS-stage, on truncated-transform outputs."""
    n = len(ah)
    red = _reducer(q, mode, mu, s_in, s_out)
    w = [int(x) for x in tw]
    av = [int(x) for x in ah]
    bv = [int(x) for x in bh]
    cv = [0] * n
    n_neg = 0
    for i in range(n // 2):
        a0, a1 = av[2 * i], av[2 * i + 1]
        b0, b1 = bv[2 * i], bv[2 * i + 1]
        u = red(a0 * b0)
        v = red(a1 * b1)
        s1 = a0 + a1
        if s1 >= q:
            s1 -= q
        s2 = b0 + b1
        if s2 >= q:
            s2 -= q
        wprod = red(s1 * s2)
        y = wprod - u
        if y < 0:
            y += q
        c1 = y - v
        if c1 < 0:
            c1 += q
        z = red(v * w[n // 4 + i // 2])
        if i & 1:
            c0 = u - z
            if c0 < 0:
                c0 += q
            n_neg += 1
        else:
            c0 = u + z
            if c0 >= q:
                c0 -= q
        cv[2 * i] = c0
        cv[2 * i + 1] = c1
    ch[:] = cv
    half_n = n // 2
    counts[C_MODMUL] += 4 * half_n
    counts[C_ADDSUB] += 5 * half_n
    counts[C_TWIDDLE] += half_n
    counts[C_NEG] += n_neg


def hadamard(a, b, out, q, mode, mu, s_in, s_out, counts):
    """Entry-wise modular product."""
    red = _reducer(q, mode, mu, s_in, s_out)
    n = len(a)
    out[:] = [red(int(a[i]) * int(b[i])) for i in range(n)]
    counts[C_MODMUL] += n


def scale(a, factor, q, mode, mu, s_in, s_out, counts):
    """In-place multiplication of every entry by a scalar."""
    red = _reducer(q, mode, mu, s_in, s_out)
    f = int(factor)
    a[:] = [red(int(x) * f) for x in a]
    counts[C_MODMUL] += len(a)


def negacyclic_naive(a, b, out, q, counts):
    """Schoolbook product mod x^n + 1; division-based reduction only."""
    n = len(a)
    av = [int(x) for x in a]
    bv = [int(x) for x in b]
    cv = [0] * n
    for k in range(n):
        acc = 0
        for i in range(n):
            j = k - i
            p = (av[i] * bv[j]) % q if j >= 0 else (av[i] * bv[j + n]) % q
            if j >= 0:
                acc += p
                if acc >= q:
                    acc -= q
            else:
                acc -= p
                if acc < 0:
                    acc += q
        cv[k] = acc
    out[:] = cv
    counts[C_MODMUL] += n * n
    counts[C_ADDSUB] += n * n


# ---------------------------------------------------------------------------
# bulk reduction sweeps

_VARIANT_CODES = ("classical", "dhem", "proposed")


def _variant_params(q, variant):
    m = q.bit_length()
    if variant == "classical":
        return ((1 << (2 * m)) // q, m - 1, m + 1)
    if variant == "dhem":
        return ((1 << (2 * m + 3)) // q, m - 2, m + 5)
    return ((1 << (2 * m + 1)) // q, m - 2, m + 3)


def _reduce_counted(x, q, mu, s_in, s_out):
    rem = x - (((x >> s_in) * mu) >> s_out) * q
    nsubs = 0
    while rem >= q:
        rem -= q
        nsubs += 1
    return rem, nsubs


def sweep_exhaustive(q_lo, q_hi, tallies):
    """Check every variant against division for all odd q in [q_lo, q_hi]
    and all x in [0, q^2).  ``tallies`` is uint64[3][4]: per variant, counts
    of 0/1/2/3+ correctional subtractions.  Returns (mismatches, first) where
    ``first`` is (q, x, variant_index) or None."""
    mism = 0
    first = None
    t = [[0] * 4 for _ in range(3)]
    for q in range(q_lo | 1, q_hi + 1, 2):
        params = [_variant_params(q, v) for v in _VARIANT_CODES]
        for x in range(q * q):
            want = x % q
            for vi, (mu, s_in, s_out) in enumerate(params):
                got, nsubs = _reduce_counted(x, q, mu, s_in, s_out)
                t[vi][min(nsubs, 3)] += 1
                if got != want:
                    mism += 1
                    if first is None:
                        first = (q, x, vi)
    for vi in range(3):
        for si in range(4):
            tallies[vi][si] += t[vi][si]
    return mism, first


def _splitmix64(state):
    state = (state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
    return state, z ^ (z >> 31)


def sweep_random(bits, nsamples, seed, tallies):
    """Check variants against division on random (a, b, q) triples with q an
    odd ``bits``-bit modulus.  The dhem variant is skipped when bits > 60.
    Same return convention as sweep_exhaustive."""
    mism = 0
    first = None
    t = [[0] * 4 for _ in range(3)]
    state = seed & 0xFFFFFFFFFFFFFFFF
    lo = 1 << (bits - 1)
    span = 1 << (bits - 1)
    variants = [0, 2] if bits > 60 else [0, 1, 2]
    for _ in range(nsamples):
        state, r = _splitmix64(state)
        q = (lo + r % span) | 1
        state, r = _splitmix64(state)
        a = r % q
        state, r = _splitmix64(state)
        b = r % q
        x = a * b
        want = x % q
        for vi in variants:
            mu, s_in, s_out = _variant_params(q, _VARIANT_CODES[vi])
            got, nsubs = _reduce_counted(x, q, mu, s_in, s_out)
            t[vi][min(nsubs, 3)] += 1
            if got != want:
                mism += 1
                if first is None:
                    first = (q, x, vi)
    for vi in range(3):
        for si in range(4):
            tallies[vi][si] += t[vi][si]
    return mism, first


def mulmod_loop(a, b, q, mode, mu, s_in, s_out, passes):
    """Benchmark loop: reduce a[i] * b[i] over the arrays ``passes`` times,
    returning a xor-folded sink so the work cannot be skipped."""
    red = _reducer(q, mode, mu, s_in, s_out)
    av = [int(x) for x in a]
    bv = [int(x) for x in b]
    sink = 0
    for _ in range(passes):
        for x, y in zip(av, bv):
            sink ^= red(x * y)
    return sink
