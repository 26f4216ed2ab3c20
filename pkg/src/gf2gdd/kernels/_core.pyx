# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled search kernel, a mirror of gf2gdd.kernels._fallback.

Same contract and same outputs; the subset-sum bitset lives in uint64
words and the recursion runs without the GIL.  See the fallback module
docstring for the algorithm.
"""

from libc.stdint cimport uint16_t, uint64_t

import numpy as np

cdef extern from *:
    """
    #include <stdint.h>
    static inline int gf2gdd_popcnt(uint64_t x) { return __builtin_popcountll(x); }
    static inline int gf2gdd_ctz(uint64_t x) { return __builtin_ctzll(x); }
    static inline int gf2gdd_msb(uint64_t x) { return 63 - __builtin_clzll(x); }
    """
    int gf2gdd_popcnt(uint64_t x) nogil
    int gf2gdd_ctz(uint64_t x) nogil
    int gf2gdd_msb(uint64_t x) nogil

BACKEND = "compiled"

cdef uint64_t FULL64 = <uint64_t>0xFFFFFFFFFFFFFFFF

cdef uint64_t[6] _INTRA
_INTRA[0] = <uint64_t>0x5555555555555555
_INTRA[1] = <uint64_t>0x3333333333333333
_INTRA[2] = <uint64_t>0x0F0F0F0F0F0F0F0F
_INTRA[3] = <uint64_t>0x00FF00FF00FF00FF
_INTRA[4] = <uint64_t>0x0000FFFF0000FFFF
_INTRA[5] = <uint64_t>0x00000000FFFFFFFF


cdef inline uint64_t _permute_word(uint64_t w, int re) nogil:
    # butterfly permutation of bit positions by r -> r ^ re, re < 64
    if re & 1:
        w = ((w & _INTRA[0]) << 1) | ((w >> 1) & _INTRA[0])
    if re & 2:
        w = ((w & _INTRA[1]) << 2) | ((w >> 2) & _INTRA[1])
    if re & 4:
        w = ((w & _INTRA[2]) << 4) | ((w >> 4) & _INTRA[2])
    if re & 8:
        w = ((w & _INTRA[3]) << 8) | ((w >> 8) & _INTRA[3])
    if re & 16:
        w = ((w & _INTRA[4]) << 16) | ((w >> 16) & _INTRA[4])
    if re & 32:
        w = ((w & _INTRA[5]) << 32) | ((w >> 32) & _INTRA[5])
    return w


cdef struct Env:
    int nv, nw, t, mode, seed_len   # mode: 0 count, 1 fill, 2 pair counts
    uint64_t* wstack                # (t + 1) levels of nw words
    uint64_t* xmask                 # nw words, the point set X
    uint16_t* out
    long long out_cap
    uint64_t* counts
    long long found
    int seed[8]
    int chosen[32]


cdef long long _rec(Env* env, int level, int psum, int lo, int hi) nogil:
    cdef int rem = env.t - level
    cdef uint64_t* w_cur = env.wstack + level * env.nw
    cdef uint64_t* w_next
    cdef long long total = 0
    cdef long long row
    cdef int f, c, h, i, j, e, we, re, w, wlo, whi, b, r
    cdef int nw = env.nw
    cdef uint64_t cw

    if rem == 1:
        f = 1 ^ psum
        if f < lo or f >= hi:
            return 0
        for i in range(env.seed_len):
            if env.seed[i] == f:
                return 0
        if env.mode == 1:
            if env.found < env.out_cap:
                row = env.found * env.t
                for i in range(env.t - 1):
                    env.out[row + i] = <uint16_t>env.chosen[i]
                env.out[row + env.t - 1] = <uint16_t>f
            env.found += 1
        elif env.mode == 2:
            env.chosen[env.t - 1] = f
            for i in range(env.t):
                for j in range(i + 1, env.t):
                    env.counts[(<long long>env.chosen[i]) * env.nv + env.chosen[j]] += 1
            env.found += 1
        return 1

    if lo >= hi:
        return 0
    wlo = lo >> 6
    whi = (hi - 1) >> 6

    if rem == 2 and env.mode == 0:
        # last free element e, then a forced mate f = c ^ e with f > e;
        # f > e holds exactly when bit h = msb(c) of e is clear
        c = 1 ^ psum
        h = gf2gdd_msb(<uint64_t>c)
        for w in range(wlo, whi + 1):
            if h >= 6 and ((w >> (h - 6)) & 1):
                continue
            cw = ~(w_cur[w] | _permute_word(w_cur[w], 1)) & env.xmask[w]
            if h < 6:
                cw &= _INTRA[h]
            if w == wlo:
                cw &= FULL64 << (lo & 63)
            if w == whi:
                r = hi - (w << 6)
                if r < 64:
                    cw &= ((<uint64_t>1) << r) - 1
            total += gf2gdd_popcnt(cw)
        for i in range(env.seed_len):
            # e = c ^ s would force f = s, a seed collision; remove it if
            # the popcount above admitted that e
            e = c ^ env.seed[i]
            if e < lo or e >= hi:
                continue
            if (e >> h) & 1:
                continue
            if ((env.xmask[e >> 6] >> (e & 63)) & 1) == 0:
                continue
            cw = w_cur[e >> 6] | _permute_word(w_cur[e >> 6], 1)
            if (cw >> (e & 63)) & 1:
                continue
            total -= 1
        return total

    w_next = env.wstack + (level + 1) * env.nw
    for w in range(wlo, whi + 1):
        cw = ~(w_cur[w] | _permute_word(w_cur[w], 1)) & env.xmask[w]
        if w == wlo:
            cw &= FULL64 << (lo & 63)
        if w == whi:
            r = hi - (w << 6)
            if r < 64:
                cw &= ((<uint64_t>1) << r) - 1
        while cw:
            b = gf2gdd_ctz(cw)
            cw &= cw - 1
            e = (w << 6) | b
            we = e >> 6
            re = e & 63
            for j in range(nw):
                w_next[j] = w_cur[j] | _permute_word(w_cur[j ^ we], re)
            w_next[we] |= (<uint64_t>1) << re
            if env.mode != 0:
                env.chosen[level] = e
            total += _rec(env, level + 1, psum ^ e, e + 1, env.nv)
    return total


def _prepare(int m, int k, seed, int first_lo, first_hi):
    """Shared wrapper setup; validation matches the fallback exactly."""
    from ._fallback import _seed_state
    cdef int nv = 1 << m
    cdef int nw = nv >> 6
    if nw == 0:
        nw = 1
    seed = tuple(int(s) for s in seed)
    if len(seed) > 8:
        raise ValueError("at most 8 seed elements supported")
    w0, p0, t = _seed_state(m, k, seed)
    if t > 31:
        raise ValueError(f"k={k} beyond supported depth")
    hi = int(nv) if first_hi is None else int(first_hi)
    lo = max(int(first_lo), 2)
    full = (1 << 64) - 1
    ws = np.zeros((t + 1) * nw, dtype=np.uint64)
    for i in range(nw):
        ws[i] = (w0 >> (64 * i)) & full
    xm = np.full(nw, full, dtype=np.uint64)
    # int(nv) forces Python arithmetic; a C shift by nv >= 32 is undefined
    word0 = full ^ 3 if nv >= 64 else ((1 << int(nv)) - 1) ^ 3
    xm[0] = word0
    return ws, xm, seed, int(p0), int(t), int(lo), int(hi)


cdef _init_env(Env* env, int m, uint64_t[::1] ws, uint64_t[::1] xm, seed, int t, int mode):
    env.nv = 1 << m
    env.nw = ws.shape[0] // (t + 1)
    env.t = t
    env.mode = mode
    env.seed_len = len(seed)
    for i in range(len(seed)):
        env.seed[i] = seed[i]
    env.wstack = &ws[0]
    env.xmask = &xm[0]
    env.out = NULL
    env.out_cap = 0
    env.counts = NULL
    env.found = 0


def count_completions(int m, int k, seed=(), int first_lo=2, first_hi=None):
    """Number of valid blocks of size k containing every seed element,
    whose smallest non-seed element lies in [first_lo, first_hi)."""
    ws, xm, seed, p0, t, lo, hi = _prepare(m, k, seed, first_lo, first_hi)
    if lo >= hi:
        return 0
    cdef uint64_t[::1] wsv = ws
    cdef uint64_t[::1] xmv = xm
    cdef Env env
    _init_env(&env, m, wsv, xmv, seed, t, 0)
    cdef int p0c = p0, loc = lo, hic = hi
    cdef long long res
    with nogil:
        res = _rec(&env, 0, p0c, loc, hic)
    return int(res)


def fill_completions(int m, int k, seed, out, int first_lo=2, first_hi=None):
    """Write the non-seed elements of each matching block into out, one
    ascending row per block in lexicographic order.  Returns row count."""
    ws, xm, seed, p0, t, lo, hi = _prepare(m, k, seed, first_lo, first_hi)
    if out.ndim != 2 or out.shape[1] != t:
        raise ValueError(f"out must have {t} columns")
    if out.dtype != np.uint16 or not out.flags.c_contiguous:
        raise ValueError("out must be a C-contiguous uint16 array")
    if lo >= hi:
        return 0
    cdef uint64_t[::1] wsv = ws
    cdef uint64_t[::1] xmv = xm
    cdef uint16_t[:, ::1] outv = out
    cdef Env env
    _init_env(&env, m, wsv, xmv, seed, t, 1)
    if outv.shape[0] > 0:
        env.out = &outv[0, 0]
    env.out_cap = outv.shape[0]
    cdef int p0c = p0, loc = lo, hic = hi
    cdef long long res
    with nogil:
        res = _rec(&env, 0, p0c, loc, hic)
    if res > env.out_cap:
        raise RuntimeError(f"out holds {env.out_cap} rows, found {res}")
    return int(res)


def accumulate_pair_counts(int m, int k, counts, int first_lo=2, first_hi=None):
    """Enumerate seedless blocks and bump counts[a, b] for every a < b in
    each block.  Returns the number of blocks visited."""
    ws, xm, seed, p0, t, lo, hi = _prepare(m, k, (), first_lo, first_hi)
    cdef int nv = 1 << m
    if counts.shape != (nv, nv):
        raise ValueError(f"counts must be ({nv}, {nv})")
    if counts.dtype != np.uint64 or not counts.flags.c_contiguous:
        raise ValueError("counts must be a C-contiguous uint64 array")
    if lo >= hi:
        return 0
    cdef uint64_t[::1] wsv = ws
    cdef uint64_t[::1] xmv = xm
    cdef uint64_t[:, ::1] cv = counts
    cdef Env env
    _init_env(&env, m, wsv, xmv, (), t, 2)
    env.counts = &cv[0, 0]
    cdef int p0c = p0, loc = lo, hic = hi
    cdef long long res
    with nogil:
        res = _rec(&env, 0, p0c, loc, hic)
    return int(res)
