import random

import numpy as np

from doublepour import _kernels as K
from doublepour.four_vessel import random_composition, solve4
from doublepour.three_vessel import solve3_frei

MOVES = np.empty((4096, 2), dtype=np.int64)


def _moves(m):
    return [tuple(int(x) for x in row) for row in MOVES[:m]]


def test_four_kernel_matches_python_on_ordered_states():
    for n in range(4, 40):
        for a in range(1, n):
            for b in range(1, n - a):
                for c in range(1, n - a - b):
                    s = (a, b, c, n - a - b - c)
                    status, m, _ = K.four_solve(np.array(s), True, MOVES)
                    assert status == K.OK
                    assert _moves(m) == solve4(s, instrument=True).trace.moves, s


def test_four_kernel_matches_python_on_large_states():
    rng = random.Random(5)
    for _ in range(500):
        s = random_composition(rng.randint(4, 10**6), 4, rng)
        status, m, _ = K.four_solve(np.array(s), True, MOVES)
        assert status == K.OK and _moves(m) == solve4(s).trace.moves, s


def test_frei_kernel_matches_python():
    for n in range(3, 70):
        for a in range(1, n):
            for b in range(1, n - a):
                s = (a, b, n - a - b)
                status, m = K.frei_solve(np.array(s), MOVES)
                assert status == K.OK and _moves(m) == solve3_frei(s).moves, s


def test_sweeps_report_counts():
    count, bad, ratio, _, failures = K.frei_sweep(3, 60)
    assert bad == failures == 0 and 0 < ratio <= 1
    assert count == sum(1 for n in range(3, 61) for a in range(1, n // 3 + 1) for b in range(a, (n - a) // 2 + 1))
    count, failures, max_steps, _, _ = K.four_sweep(4, 40, True)
    assert failures == 0 and max_steps > 0
