# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel core.

Same surface and bit-identical results/counts as nttmul._kernels_py, with
all hot-loop arithmetic on machine words: operands are 64-bit, double-word
intermediates use the compiler's 128-bit integer type with explicit
high/low-word access via shifts.
"""

from libc.stdint cimport uint64_t, int64_t

cdef extern from *:
    # alias onto the compiler's 128-bit unsigned type
    ctypedef unsigned long long u128 "unsigned __int128"

NATIVE = True

C_MODMUL, C_ADDSUB, C_HALF, C_TWIDDLE, C_NEG = 0, 1, 2, 3, 4

RED_BUILTIN = 0
RED_TWO_SUB = 1
RED_ONE_SUB = 2


cdef inline uint64_t _red(u128 x, uint64_t q, int mode, uint64_t mu,
                          int s_in, int s_out) noexcept nogil:
    cdef uint64_t c, quot, rem
    if mode == 0:
        return <uint64_t>(x % q)
    c = <uint64_t>(x >> s_in)
    quot = <uint64_t>((<u128>c * mu) >> s_out)
    rem = <uint64_t>(x - <u128>quot * q)
    while rem >= q:
        rem -= q
    return rem


cdef inline uint64_t _red_counted(u128 x, uint64_t q, uint64_t mu,
                                  int s_in, int s_out, int* nsubs) noexcept nogil:
    cdef uint64_t c, quot, rem
    cdef int k = 0
    c = <uint64_t>(x >> s_in)
    quot = <uint64_t>((<u128>c * mu) >> s_out)
    rem = <uint64_t>(x - <u128>quot * q)
    while rem >= q:
        rem -= q
        k += 1
    nsubs[0] = k
    return rem


def ntt_ct(uint64_t[::1] a, uint64_t[::1] tw, uint64_t q, int mode,
           uint64_t mu, int s_in, int s_out, bint truncate,
           uint64_t[::1] counts):
    """Forward decimation NTT, twiddles premerged, in place (normal -> bit
    reversed order).  With ``truncate`` the final stage is omitted."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = 1, k = n // 2, limit = n // 2 if truncate else n
    cdef Py_ssize_t i, j, j_first
    cdef uint64_t xi, u, t, s, d
    cdef uint64_t n_mul = 0, n_add = 0, n_tw = 0
    with nogil:
        while m < limit:
            for i in range(m):
                j_first = 2 * i * k
                xi = tw[m + i]
                n_tw += 1
                for j in range(j_first, j_first + k):
                    u = a[j]
                    t = _red(<u128>xi * a[j + k], q, mode, mu, s_in, s_out)
                    s = u + t
                    if s >= q:
                        s -= q
                    d = u + q - t
                    if d >= q:
                        d -= q
                    a[j] = s
                    a[j + k] = d
                n_mul += k
                n_add += 2 * k
            m <<= 1
            k >>= 1
    counts[C_MODMUL] += n_mul
    counts[C_ADDSUB] += n_add
    counts[C_TWIDDLE] += n_tw


def intt_gs(uint64_t[::1] a, uint64_t[::1] tw, uint64_t q, uint64_t half_q,
            int mode, uint64_t mu, int s_in, int s_out, bint scaled,
            bint skip_first, uint64_t[::1] counts):
    """Inverse decimation NTT, in place (bit reversed -> normal order);
    ``scaled`` folds the 1/n factor in by halving every butterfly output."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t m = n // 4 if skip_first else n // 2
    cdef Py_ssize_t k = 2 if skip_first else 1
    cdef Py_ssize_t i, j, j_first
    cdef uint64_t xi, u, t, s, d
    cdef uint64_t n_mul = 0, n_add = 0, n_half = 0, n_tw = 0
    with nogil:
        while m >= 1:
            for i in range(m):
                j_first = 2 * i * k
                xi = tw[m + i]
                n_tw += 1
                for j in range(j_first, j_first + k):
                    u = a[j]
                    t = a[j + k]
                    s = u + t
                    if s >= q:
                        s -= q
                    d = u + q - t
                    if d >= q:
                        d -= q
                    d = _red(<u128>xi * d, q, mode, mu, s_in, s_out)
                    if scaled:
                        s = (s >> 1) + (s & 1) * half_q
                        d = (d >> 1) + (d & 1) * half_q
                    a[j] = s
                    a[j + k] = d
                n_mul += k
                n_add += 2 * k
                if scaled:
                    n_half += 2 * k
            m >>= 1
            k <<= 1
    counts[C_MODMUL] += n_mul
    counts[C_ADDSUB] += n_add
    counts[C_HALF] += n_half
    counts[C_TWIDDLE] += n_tw


def fused_middle(uint64_t[::1] ah, uint64_t[::1] bh, uint64_t[::1] ch,
                 uint64_t[::1] tw, uint64_t q, int mode, uint64_t mu,
                 int s_in, int s_out, uint64_t[::1] counts):
    """Karatsuba-combined replacement for final-CT-stage / pointwise product /
    first-GS-stage, on truncated-transform outputs."""
    cdef Py_ssize_t n = ah.shape[0]
    cdef Py_ssize_t i
    cdef uint64_t a0, a1, b0, b1, u, v, s1, s2, w, y, c0, c1, z
    cdef uint64_t n_neg = 0
    with nogil:
        for i in range(n // 2):
            a0 = ah[2 * i]
            a1 = ah[2 * i + 1]
            b0 = bh[2 * i]
            b1 = bh[2 * i + 1]
            u = _red(<u128>a0 * b0, q, mode, mu, s_in, s_out)
            v = _red(<u128>a1 * b1, q, mode, mu, s_in, s_out)
            s1 = a0 + a1
            if s1 >= q:
                s1 -= q
            s2 = b0 + b1
            if s2 >= q:
                s2 -= q
            w = _red(<u128>s1 * s2, q, mode, mu, s_in, s_out)
            y = w + q - u
            if y >= q:
                y -= q
            c1 = y + q - v
            if c1 >= q:
                c1 -= q
            z = _red(<u128>v * tw[n // 4 + i // 2], q, mode, mu, s_in, s_out)
            if i & 1:
                c0 = u + q - z
                if c0 >= q:
                    c0 -= q
                n_neg += 1
            else:
                c0 = u + z
                if c0 >= q:
                    c0 -= q
            ch[2 * i] = c0
            ch[2 * i + 1] = c1
    counts[C_MODMUL] += 4 * (n // 2)
    counts[C_ADDSUB] += 5 * (n // 2)
    counts[C_TWIDDLE] += n // 2
    counts[C_NEG] += n_neg


def hadamard(uint64_t[::1] a, uint64_t[::1] b, uint64_t[::1] out, uint64_t q,
             int mode, uint64_t mu, int s_in, int s_out, uint64_t[::1] counts):
    """Entry-wise modular product."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _red(<u128>a[i] * b[i], q, mode, mu, s_in, s_out)
    counts[C_MODMUL] += n


def scale(uint64_t[::1] a, uint64_t factor, uint64_t q, int mode, uint64_t mu,
          int s_in, int s_out, uint64_t[::1] counts):
    """In-place multiplication of every entry by a scalar."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            a[i] = _red(<u128>a[i] * factor, q, mode, mu, s_in, s_out)
    counts[C_MODMUL] += n


def negacyclic_naive(uint64_t[::1] a, uint64_t[::1] b, uint64_t[::1] out,
                     uint64_t q, uint64_t[::1] counts):
    """Schoolbook product mod x^n + 1; division-based reduction only."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, k
    cdef int64_t j
    cdef uint64_t acc, p
    with nogil:
        for k in range(n):
            acc = 0
            for i in range(n):
                j = k - i
                if j >= 0:
                    p = <uint64_t>((<u128>a[i] * b[j]) % q)
                    acc = acc + p
                    if acc >= q:
                        acc -= q
                else:
                    p = <uint64_t>((<u128>a[i] * b[j + n]) % q)
                    acc = acc + q - p
                    if acc >= q:
                        acc -= q
            out[k] = acc
    counts[C_MODMUL] += <uint64_t>n * <uint64_t>n
    counts[C_ADDSUB] += <uint64_t>n * <uint64_t>n


# ---------------------------------------------------------------------------
# bulk reduction sweeps

cdef inline uint64_t _splitmix64(uint64_t* state) noexcept nogil:
    cdef uint64_t z
    state[0] += <uint64_t>0x9E3779B97F4A7C15
    z = state[0]
    z = (z ^ (z >> 30)) * <uint64_t>0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * <uint64_t>0x94D049BB133111EB
    return z ^ (z >> 31)


cdef inline void _variant_params(uint64_t q, int vi, uint64_t* mu,
                                 int* s_in, int* s_out) noexcept nogil:
    cdef int m = 0
    cdef uint64_t t = q
    while t:
        m += 1
        t >>= 1
    # q must stay 128-bit in the divisions below or the numerator is
    # truncated to 64 bits before dividing.
    if vi == 0:  # classical
        mu[0] = <uint64_t>(((<u128>1) << (2 * m)) / <u128>q)
        s_in[0] = m - 1
        s_out[0] = m + 1
    elif vi == 1:  # dhem
        mu[0] = <uint64_t>(((<u128>1) << (2 * m + 3)) / <u128>q)
        s_in[0] = m - 2
        s_out[0] = m + 5
    else:  # proposed
        mu[0] = <uint64_t>(((<u128>1) << (2 * m + 1)) / <u128>q)
        s_in[0] = m - 2
        s_out[0] = m + 3


def sweep_exhaustive(uint64_t q_lo, uint64_t q_hi, uint64_t[:, ::1] tallies):
    """Check every variant against division for all odd q in [q_lo, q_hi]
    and all x in [0, q^2).  ``tallies`` is uint64[3][4]: per variant, counts
    of 0/1/2/3+ correctional subtractions.  Returns (mismatches, first) where
    ``first`` is (q, x, variant_index) or None."""
    cdef uint64_t q, want, got
    cdef u128 x, xmax
    cdef uint64_t mism = 0
    cdef uint64_t first_q = 0, first_x = 0
    cdef int first_v = -1
    cdef uint64_t mu[3]
    cdef int s_in[3]
    cdef int s_out[3]
    cdef int vi, nsubs, si
    cdef uint64_t t[3][4]
    for vi in range(3):
        for si in range(4):
            t[vi][si] = 0
    with nogil:
        q = q_lo | 1
        while q <= q_hi:
            for vi in range(3):
                _variant_params(q, vi, &mu[vi], &s_in[vi], &s_out[vi])
            xmax = <u128>q * q
            x = 0
            while x < xmax:
                want = <uint64_t>(x % q)
                for vi in range(3):
                    got = _red_counted(x, q, mu[vi], s_in[vi], s_out[vi], &nsubs)
                    t[vi][nsubs if nsubs < 3 else 3] += 1
                    if got != want:
                        mism += 1
                        if first_v < 0:
                            first_q = q
                            first_x = <uint64_t>x
                            first_v = vi
                x += 1
            q += 2
    for vi in range(3):
        for si in range(4):
            tallies[vi, si] += t[vi][si]
    first = (int(first_q), int(first_x), first_v) if first_v >= 0 else None
    return int(mism), first


def sweep_random(int bits, uint64_t nsamples, uint64_t seed,
                 uint64_t[:, ::1] tallies):
    """Check variants against division on random (a, b, q) triples with q an
    odd ``bits``-bit modulus.  The dhem variant is skipped when bits > 60.
    Same return convention as sweep_exhaustive."""
    cdef uint64_t state = seed
    cdef uint64_t lo = (<uint64_t>1) << (bits - 1)
    cdef uint64_t span = (<uint64_t>1) << (bits - 1)
    cdef uint64_t q, aa, bb, want, got, i
    cdef u128 x
    cdef uint64_t mism = 0
    cdef uint64_t first_q = 0, first_a = 0, first_b = 0
    cdef int first_v = -1
    cdef uint64_t mu
    cdef int s_in, s_out, vi, nsubs, si
    cdef bint with_dhem = bits <= 60
    cdef uint64_t t[3][4]
    for vi in range(3):
        for si in range(4):
            t[vi][si] = 0
    with nogil:
        for i in range(nsamples):
            q = (lo + _splitmix64(&state) % span) | 1
            aa = _splitmix64(&state) % q
            bb = _splitmix64(&state) % q
            x = <u128>aa * bb
            want = <uint64_t>(x % q)
            for vi in range(3):
                if vi == 1 and not with_dhem:
                    continue
                _variant_params(q, vi, &mu, &s_in, &s_out)
                got = _red_counted(x, q, mu, s_in, s_out, &nsubs)
                t[vi][nsubs if nsubs < 3 else 3] += 1
                if got != want:
                    mism += 1
                    if first_v < 0:
                        first_q = q
                        first_a = aa
                        first_b = bb
                        first_v = vi
    for vi in range(3):
        for si in range(4):
            tallies[vi, si] += t[vi][si]
    if first_v >= 0:
        first = (int(first_q), int(first_a) * int(first_b), first_v)
    else:
        first = None
    return int(mism), first


def mulmod_loop(uint64_t[::1] a, uint64_t[::1] b, uint64_t q, int mode,
                uint64_t mu, int s_in, int s_out, uint64_t passes):
    """Benchmark loop: reduce a[i] * b[i] over the arrays ``passes`` times,
    returning a xor-folded sink so the work cannot be skipped."""
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i
    cdef uint64_t p
    cdef uint64_t sink = 0
    with nogil:
        for p in range(passes):
            for i in range(n):
                sink ^= _red(<u128>a[i] * b[i], q, mode, mu, s_in, s_out)
    return int(sink)
