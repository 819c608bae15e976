"""numba mirrors of the Frei iteration and the four-vessel algorithm.

These exist only so the exhaustive sweeps (hundreds of millions of states) run
in seconds. They follow the Python solvers pour for pour, including tie
breaking and float thresholds; ``tests/test_kernels.py`` compares the
recorded move sequences against the Python implementations.

Kernels cannot raise, so they return a status code (see ``STATUS``).
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

OK = 0
POOL_EXHAUSTED = 1
E_INVARIANT = 2
SMALLEST_TOO_BIG = 3
E_STALLED = 4
TOO_MANY_ITERATIONS = 5
NO_ODD_VESSEL = 6
INVALID_POUR = 7
BUFFER_FULL = 8
B_NOT_ABOVE_A = 9
BOUND_EXCEEDED = 10

STATUS = {
    OK: "ok",
    POOL_EXHAUSTED: "pool exhausted",
    E_INVARIANT: "gcd of A, B, C not exactly e-even",
    SMALLEST_TOO_BIG: "smallest vessel >= n/(2 log n)",
    E_STALLED: "e did not increase",
    TOO_MANY_ITERATIONS: "more than ceil(log2 n) loop iterations",
    NO_ODD_VESSEL: "no (e+1)-odd vessel",
    INVALID_POUR: "invalid pour",
    BUFFER_FULL: "move buffer full",
    B_NOT_ABOVE_A: "B fell to or below A in the batched branch",
    BOUND_EXCEEDED: "step bound exceeded",
}

SMALL_N = 16


@njit(cache=True)
def _pour(v, src, dst, moves, m):
    # returns the new move count, or -status
    x = v[dst]
    if src == dst or x == 0 or x > v[src]:
        return -INVALID_POUR
    if m >= moves.shape[0]:
        return -BUFFER_FULL
    v[dst] = 2 * x
    v[src] -= x
    moves[m, 0] = src
    moves[m, 1] = dst
    return m + 1


@njit(cache=True)
def _sort_roles(v, r):
    # stable insertion sort of role indices by value
    for i in range(1, r.shape[0]):
        x = r[i]
        j = i - 1
        while j >= 0 and v[r[j]] > v[x]:
            r[j + 1] = r[j]
            j -= 1
        r[j + 1] = x


@njit(cache=True)
def _bit_length(x):
    b = 0
    while x > 0:
        x >>= 1
        b += 1
    return b


@njit(cache=True)
def _parity(x):
    # caller guarantees x > 0
    e = 0
    while x & 1 == 0:
        x >>= 1
        e += 1
    return e


@njit(cache=True)
def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@njit(cache=True)
def _has_zero(v):
    for i in range(v.shape[0]):
        if v[i] == 0:
            return True
    return False


@njit(cache=True)
def _janson(v, a, b, c, moves, m):
    p = v[b] // v[a]
    for i in range(_bit_length(p)):
        if (p >> i) & 1:
            m = _pour(v, b, a, moves, m)
        else:
            m = _pour(v, c, a, moves, m)
        if m < 0 or _has_zero(v):
            return m
    return m


@njit(cache=True)
def _frei(v, a, b, c, moves, m):
    va = v[a]
    vb = v[b]
    p = vb // va
    q = -(-vb // va)
    if vb - p * va <= q * va - vb:
        return _janson(v, a, b, c, moves, m)
    for i in range(_bit_length(q) - 1):
        if (q >> i) & 1:
            m = _pour(v, b, a, moves, m)
        else:
            m = _pour(v, c, a, moves, m)
        if m < 0 or _has_zero(v):
            return m
    return _pour(v, a, b, moves, m)


@njit(cache=True)
def frei_solve(s, moves):
    """Frei iteration on a 3-state; returns (status, pour count)."""
    v = s.copy()
    m = 0
    while not _has_zero(v):
        r = np.arange(3)
        _sort_roles(v, r)
        m = _frei(v, r[0], r[1], r[2], moves, m)
        if m < 0:
            return -m, 0
    return OK, m


@njit(cache=True)
def frei_sweep(n_lo, n_hi):
    """Frei iteration on every sorted nonempty 3-state with total in [n_lo, n_hi].

    Returns (states checked, violations of the (log2 n)^2 bound, max pours /
    (log2 n)^2, a violating state or zeros, any status failures).
    """
    moves = np.empty((4096, 2), dtype=np.int64)
    s = np.empty(3, dtype=np.int64)
    worst = np.zeros(3, dtype=np.int64)
    count = 0
    bad = 0
    failures = 0
    max_ratio = 0.0
    for n in range(max(n_lo, 3), n_hi + 1):
        bound = math.log2(n) ** 2
        for a in range(1, n // 3 + 1):
            for b in range(a, (n - a) // 2 + 1):
                s[0] = a
                s[1] = b
                s[2] = n - a - b
                status, steps = frei_solve(s, moves)
                count += 1
                if status != OK:
                    failures += 1
                    worst[:] = s
                    continue
                ratio = steps / bound
                if ratio > max_ratio:
                    max_ratio = ratio
                if steps > bound:
                    bad += 1
                    worst[:] = s
    return count, bad, max_ratio, worst, failures


@njit(cache=True)
def _check_e(v, abc, e):
    g = _gcd(_gcd(v[abc[0]], v[abc[1]]), v[abc[2]])
    return _parity(g) == e


@njit(cache=True)
def _odd(x, e):
    return x & ((1 << (e + 1)) - 1) != 0


@njit(cache=True)
def four_solve(s, instrument, moves):
    """Four-vessel algorithm; returns (status, pour count, loop iterations)."""
    v = s.copy()
    n = v[0] + v[1] + v[2] + v[3]
    m = 0
    if n <= SMALL_N:
        r4 = np.arange(4)
        _sort_roles(v, r4)
        three = r4[:3].copy()
        while True:
            r = three.copy()
            _sort_roles(v, r)
            m = _frei(v, r[0], r[1], r[2], moves, m)
            if m < 0:
                return -m, 0, 0
            if _has_zero(v):
                return OK, m, 0
    log_n = math.log2(n)
    half_thr = n / (2 * log_n)
    quarter_thr = n / (4 * log_n)
    while True:
        order = np.arange(4)
        _sort_roles(v, order)
        if v[order[0]] < half_thr:
            break
        m = _frei(v, order[0], order[1], order[2], moves, m)
        if m < 0:
            return -m, 0, 0
        if _has_zero(v):
            return OK, m, 0
    abc = order[:3].copy()
    D = order[3]
    g = _gcd(_gcd(v[abc[0]], v[abc[1]]), v[abc[2]])
    e = _parity(g)
    max_iter = math.ceil(log_n)
    iterations = 0
    odd = np.empty(3, dtype=np.int64)
    while True:
        iterations += 1
        e_start = e
        if v[abc[0]] >= quarter_thr:
            m = _frei(v, abc[0], abc[1], abc[2], moves, m)
            if m < 0:
                return -m, 0, iterations
            if _has_zero(v):
                return OK, m, iterations
            _sort_roles(v, abc)
            if instrument and v[abc[0]] >= half_thr:
                return SMALLEST_TOO_BIG, m, iterations
            g = _gcd(_gcd(v[abc[0]], v[abc[1]]), v[abc[2]])
            e_now = _parity(g)
            if e_now > e:
                e = e_now
        n_odd = 0
        for i in range(3):
            if _odd(v[abc[i]], e):
                odd[n_odd] = abc[i]
                n_odd += 1
        if n_odd == 2:
            # lower role doubles on ties, matching the stable sort
            if v[odd[1]] < v[odd[0]]:
                dst, src = odd[1], odd[0]
            else:
                dst, src = odd[0], odd[1]
            m = _pour(v, src, dst, moves, m)
            if m < 0:
                return -m, 0, iterations
            if _has_zero(v):
                return OK, m, iterations
            e += 1
            if instrument and not _check_e(v, abc, e):
                return E_INVARIANT, m, iterations
            _sort_roles(v, abc)
            if instrument and v[abc[0]] >= half_thr:
                return SMALLEST_TOO_BIG, m, iterations
        else:
            if n_odd == 3:
                m = _pour(v, abc[2], abc[1], moves, m)
                if m < 0:
                    return -m, 0, iterations
                if _has_zero(v):
                    return OK, m, iterations
                _sort_roles(v, abc)
                if instrument and v[abc[0]] >= half_thr:
                    return SMALLEST_TOO_BIG, m, iterations
            if _odd(v[abc[2]], e):
                B = abc[1]
                C = abc[2]
                while v[B] <= v[C]:
                    m = _pour(v, C, B, moves, m)
                    if m < 0:
                        return -m, 0, iterations
                    if _has_zero(v):
                        return OK, m, iterations
                _sort_roles(v, abc)
                if instrument and v[abc[0]] >= half_thr:
                    return SMALLEST_TOO_BIG, m, iterations
            A = abc[0]
            B = abc[1]
            C = abc[2]
            if _odd(v[B], e) and v[B] < quarter_thr:
                if v[D] < v[B]:
                    return POOL_EXHAUSTED, m, iterations
                m = _pour(v, D, B, moves, m)
                if m < 0:
                    return -m, 0, iterations
                if _has_zero(v):
                    return OK, m, iterations
                e += 1
                if instrument and not _check_e(v, abc, e):
                    return E_INVARIANT, m, iterations
                _sort_roles(v, abc)
                if instrument and v[abc[0]] >= half_thr:
                    return SMALLEST_TOO_BIG, m, iterations
            elif _odd(v[B], e):
                t_a = math.log2(quarter_thr / v[A])
                t_c = _parity(v[C]) - e
                t = max(min(math.ceil(t_a / 2), t_c), 1)
                for _ in range(t - 1):
                    m = _pour(v, B, A, moves, m)
                    if m < 0:
                        return -m, 0, iterations
                    if _has_zero(v):
                        return OK, m, iterations
                if instrument and not v[A] < v[B]:
                    return B_NOT_ABOVE_A, m, iterations
                r = abc.copy()
                _sort_roles(v, r)
                m = _janson(v, r[0], r[1], r[2], moves, m)
                if m < 0:
                    return -m, 0, iterations
                if _has_zero(v):
                    return OK, m, iterations
                _sort_roles(v, abc)
                if instrument and v[abc[0]] >= half_thr:
                    return SMALLEST_TOO_BIG, m, iterations
                A = abc[0]
                for _ in range(t):
                    if v[D] < v[A]:
                        return POOL_EXHAUSTED, m, iterations
                    m = _pour(v, D, A, moves, m)
                    if m < 0:
                        return -m, 0, iterations
                    if _has_zero(v):
                        return OK, m, iterations
                e += t
                if instrument and not _check_e(v, abc, e):
                    return E_INVARIANT, m, iterations
                _sort_roles(v, abc)
                if instrument and v[abc[0]] >= half_thr:
                    return SMALLEST_TOO_BIG, m, iterations
            elif _odd(v[A], e):
                if v[D] < v[A]:
                    return POOL_EXHAUSTED, m, iterations
                m = _pour(v, D, A, moves, m)
                if m < 0:
                    return -m, 0, iterations
                if _has_zero(v):
                    return OK, m, iterations
                e += 1
                if instrument and not _check_e(v, abc, e):
                    return E_INVARIANT, m, iterations
                _sort_roles(v, abc)
                if instrument and v[abc[0]] >= half_thr:
                    return SMALLEST_TOO_BIG, m, iterations
            else:
                return NO_ODD_VESSEL, m, iterations
        if e <= e_start:
            return E_STALLED, m, iterations
        if instrument and iterations > max_iter:
            return TOO_MANY_ITERATIONS, m, iterations


@njit(cache=True)
def four_sweep(n_lo, n_hi, instrument, ordered=False):
    """``four_solve`` on every nonempty 4-state with total in [n_lo, n_hi].

    Sorted states only, or every ordering when ``ordered`` (tie breaking
    follows vessel order, so orderings can take different paths). Returns
    (states checked, failures, max pours, a failing state or zeros, status of
    that failure).
    """
    moves = np.empty((4096, 2), dtype=np.int64)
    s = np.empty(4, dtype=np.int64)
    worst = np.zeros(4, dtype=np.int64)
    count = 0
    failures = 0
    max_steps = 0
    last_status = 0
    for n in range(max(n_lo, 4), n_hi + 1):
        a_hi = n - 3 if ordered else n // 4
        for a in range(1, a_hi + 1):
            b_lo = 1 if ordered else a
            b_hi = n - a - 2 if ordered else (n - a) // 3
            for b in range(b_lo, b_hi + 1):
                c_lo = 1 if ordered else b
                c_hi = n - a - b - 1 if ordered else (n - a - b) // 2
                for c in range(c_lo, c_hi + 1):
                    s[0] = a
                    s[1] = b
                    s[2] = c
                    s[3] = n - a - b - c
                    status, steps, _ = four_solve(s, instrument, moves)
                    count += 1
                    if status != OK:
                        failures += 1
                        worst[:] = s
                        last_status = status
                    elif steps > max_steps:
                        max_steps = steps
    return count, failures, max_steps, worst, last_status
