import random

import pytest

from doublepour.errors import InvalidState
from doublepour.four_vessel import SMALL_N, random_composition, solve4, step_count_profile


def test_small_example():
    run = solve4((5, 7, 9, 11), instrument=True)
    assert run.trace.success
    assert run.trace.replay() == run.trace.final


def test_fallback_for_small_totals():
    run = solve4((1, 2, 3, 4))
    assert run.phase_log[0] == "fallback" and run.trace.success
    assert sum((1, 2, 3, 4)) <= SMALL_N


def test_pool_is_largest_and_e_increases():
    run = solve4((5677, 7, 20011, 1234), instrument=True)
    assert run.pool_index == 2 and run.iterations >= 1
    es = [e for _, e in run.e_history]
    assert es == sorted(es)


def test_rejects_bad_input():
    with pytest.raises(InvalidState):
        solve4((1, 2, 3))
    with pytest.raises(InvalidState):
        solve4((0, 1, 2, 3))


def test_every_small_state_instrumented():
    for n in range(4, 60):
        for a in range(1, n // 4 + 1):
            for b in range(a, (n - a) // 3 + 1):
                for c in range(b, (n - a - b) // 2 + 1):
                    assert solve4((a, b, c, n - a - b - c), instrument=True).trace.success


def test_random_large_states():
    rng = random.Random(7)
    for _ in range(300):
        s = random_composition(rng.randint(4, 10**9), 4, rng)
        run = solve4(s, instrument=True)
        assert run.trace.success and run.trace.replay() == run.trace.final


def test_random_composition():
    rng = random.Random(0)
    for _ in range(100):
        s = random_composition(50, 4, rng)
        assert sum(s) == 50 and min(s) >= 1 and len(s) == 4


def test_profile():
    rows = step_count_profile([64, 256], samples=20)
    assert [r.n for r in rows] == [64, 256]
    assert all(r.max_pours >= r.mean_pours > 0 for r in rows)


def test_spec_examples():
    from doublepour import oracle

    assert solve4((1, 1, 1, 1)).steps == 1
    run = solve4((1, 2, 4, 8))
    assert run.trace.success and run.steps >= oracle.forward_pourability((1, 2, 4, 8))
    assert solve4((3, 5, 7, 9), instrument=True).trace.success
    assert step_count_profile([4], samples=1)[0].max_pours == 1
    assert step_count_profile([100], samples=50)[0].max_pours <= 44
