import math

import pytest

from doublepour.errors import InvalidState, NotPourable
from doublepour.two_vessel import f_step, iterate_until_empty, solve2, verdict


def test_examples():
    assert verdict(3, 5).pourable and verdict(3, 5).steps == 3
    assert solve2(3, 5).states == [(6, 2), (4, 4), (8, 0)]
    assert not verdict(1, 2).pourable
    assert verdict(4, 4).steps == 1


def test_not_pourable_message():
    with pytest.raises(NotPourable, match=r"\(a\+b\)/gcd = 3 is not a power of two"):
        solve2(1, 2)


def test_f_step_keeps_order():
    assert f_step(3, 5) == (6, 2)
    assert f_step(5, 3) == (2, 6)


@pytest.mark.parametrize("a,b", [(0, 3), (-1, 2)])
def test_rejects_empty_vessels(a, b):
    with pytest.raises(InvalidState):
        verdict(a, b)


def test_closed_form_against_iteration():
    for a in range(1, 200):
        for b in range(1, 200):
            v = verdict(a, b)
            direct = iterate_until_empty(a, b)
            assert v.pourable == (direct is not None)
            if v.pourable:
                assert v.steps == direct == math.log2((a + b) // math.gcd(a, b))
                assert solve2(a, b).steps == v.steps


def test_more_examples():
    assert f_step(6, 2) == (4, 4) and f_step(1, 1) == (2, 0)
    assert verdict(6, 10).steps == 3
    assert solve2(1, 1).states == [(2, 0)]
    assert solve2(4, 12).states == [(8, 8), (16, 0)]


def test_scaling_invariance():
    for a in range(1, 60):
        for b in range(1, 60):
            base = verdict(a, b)
            for c in range(1, 17):
                assert verdict(c * a, c * b) == base


def test_odd_sum_never_pourable():
    for a in range(1, 200):
        for b in range(1, 200, 2):
            if (a + b) % 2:
                assert not verdict(a, b).pourable
