import pytest

from doublepour import oracle
from doublepour.errors import TooSmall
from doublepour.instances import (
    a_closed,
    b_closed,
    ceil_root,
    g3_instance,
    g3_instance_sum,
    g4_lower_instance,
    gap_violations,
    omega_instance,
    omega_lower_bound,
    satisfies_gap_condition,
    seq_ab,
)


def test_sequences():
    p = seq_ab(9, check=True)
    assert p.a == (1, 2, 3, 5, 7, 10, 13, 17, 21)
    assert p.b == (1, 3, 6, 11, 18, 28, 41, 58, 79)
    assert seq_ab(1).a == (1,)


def test_closed_forms_long_run():
    p = seq_ab(10**5, check=True)
    assert p.a[-1] == a_closed(10**5) and p.b[-1] == b_closed(10**5)


def test_g3_instance():
    assert g3_instance(3) == (1, 4, 6)
    assert g3_instance(5) == (1, 4, 6, 9, 11)
    for k in range(3, 9):
        s = g3_instance(k)
        assert sum(s) == g3_instance_sum(k)
        assert oracle.forward_pourability(s) == 3


def test_g4_lower_instance():
    assert g4_lower_instance(3) == (1, 2, 3)
    assert sum(g4_lower_instance(4)) == 11
    assert sum(g4_lower_instance(9)) == 79


def test_gap_checker():
    assert satisfies_gap_condition((1, 2, 4, 8))
    # equal gaps chained through a shared vessel are allowed
    assert gap_violations((1, 3, 5)) == []
    # gaps 2 and 5 both repeat on disjoint pairs
    assert sorted(gap_violations((1, 3, 6, 8))) == [((0, 1), (2, 3)), ((0, 2), (1, 3))]
    assert not satisfies_gap_condition((2, 2, 5))


def test_gap_checker_flags_the_sequence():
    # a_3 - a_1 = a_5 - a_4 = 2 uses disjoint vessels
    assert ((0, 2), (3, 4)) in gap_violations(g4_lower_instance(5))
    assert all(not gap_violations(g4_lower_instance(k)) for k in (3, 4))


def test_ceil_root():
    assert ceil_root(100, 2) == 10
    assert ceil_root(101, 2) == 11
    assert ceil_root(100, 4) == 4
    assert ceil_root(10**6, 8) == 6
    assert ceil_root(0, 3) == 0 and ceil_root(1, 5) == 1
    for n in range(1, 3000):
        r = ceil_root(n, 3)
        assert r**3 >= n > (r - 1) ** 3


def test_omega_instance():
    assert omega_instance(3, 100) == (86, 10, 4)
    assert omega_instance(4, 10**6) == (10**6 - 1038, 1000, 32, 6)
    with pytest.raises(TooSmall, match="4 > 2\\*ceil"):
        omega_instance(3, 10)


def test_omega_pourability():
    for n in (100, 200, 400, 800):
        assert oracle.forward_pourability(omega_instance(3, n)) >= omega_lower_bound(n)
