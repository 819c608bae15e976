import random
from functools import lru_cache

import pytest

from doublepour import oracle
from doublepour.core import canonical, successors
from doublepour.errors import CapExceeded, NotFoundWithinCap
from doublepour.four_vessel import random_composition


@lru_cache(maxsize=None)
def partitions(n, k, largest=None):
    """Partitions of n into at most k parts, each <= largest."""
    if largest is None:
        largest = n
    if n == 0:
        return 1
    if k == 0:
        return 0
    return sum(partitions(n - p, k - 1, p) for p in range(1, min(n, largest) + 1))


def test_enumerate_examples():
    assert list(oracle.enumerate_states(3, 3)) == [(0, 0, 3), (0, 1, 2), (1, 1, 1)]
    assert list(oracle.enumerate_states(1, 2)) == [(0, 1)]
    assert list(oracle.enumerate_states(0, 3)) == [(0, 0, 0)]


@pytest.mark.parametrize("n,k", [(11, 3), (20, 4), (30, 5), (17, 8), (40, 2)])
def test_enumerate_counts_and_order(n, k):
    states = list(oracle.enumerate_states(n, k))
    assert len(states) == partitions(n, k)
    assert states == sorted(set(states))
    assert all(sum(s) == n and canonical(s) == s for s in states)


def test_table_examples():
    assert oracle.build_table(3, 3)[(1, 1, 1)] == 1
    assert oracle.build_table(11, 3)[(6, 1, 4)] == 3
    assert oracle.build_table(3, 2)[(1, 2)] is oracle.NOT_POURABLE
    assert oracle.build_table(3, 2).max() == 0


def test_table_rejects_wrong_total():
    with pytest.raises(KeyError):
        oracle.build_table(5, 3)[(1, 1, 1)]


def test_m_examples():
    assert oracle.m(11, 3) == 3
    assert oracle.m(3, 3) == 1
    assert oracle.m(5, 3) == 1
    assert max(oracle.m(n, 3) for n in range(1, 11)) == 2


def test_bellman_condition():
    for n in range(1, 40):
        t = oracle.build_table(n, 3)
        for s, v in t.items():
            if 0 in s:
                assert v == 0
            else:
                assert min(t[c] for c in successors(s)) == v - 1


def test_forward_and_backward_agree():
    rng = random.Random(3)
    for _ in range(200):
        k = rng.randint(2, 4)
        n = rng.randint(k, 60)
        s = random_composition(n, k, rng)
        assert oracle.build_table(n, k)[s] == oracle.forward_pourability(s)


def test_k2_matches_closed_form():
    from doublepour.two_vessel import verdict

    for n in range(2, 80):
        t = oracle.build_table(n, 2)
        for a in range(1, n // 2 + 1):
            v = verdict(a, n - a)
            assert t[(a, n - a)] == (v.steps if v.pourable else None)


def test_optimal_trace():
    t = oracle.optimal_trace((1, 4, 6))
    assert t.steps == 3 and t.success and t.replay() == t.final
    assert oracle.optimal_trace((1, 2)) is None
    assert oracle.optimal_trace((0, 5)).steps == 0


def test_g_and_h_examples():
    assert oracle.compute_g(3, 3).value == 11
    assert oracle.compute_g(5, 4).value == 76
    assert [oracle.compute_g(1, k).value for k in range(3, 7)] == [3, 4, 5, 6]
    r = oracle.compute_h(3, 3, 159)
    assert (r.value, r.exact) == (20, True)
    r = oracle.compute_h(1, 4, 40)
    assert (r.value, r.exact) == (9, False)
    assert oracle.compute_h(2, 5, 60).value == 30
    assert oracle.compute_g_prime(1, 3).value == 3
    assert oracle.compute_h_prime(1, 3, 39).value == 5


def test_g_record_witness():
    r = oracle.compute_g(4, 3)
    assert sum(r.witness) == r.value and r.exact
    assert oracle.forward_pourability(r.witness) >= 4
    assert all(oracle.m(n, 3) <= 3 for n in range(1, r.value))


def test_caps():
    with pytest.raises(CapExceeded):
        oracle.compute_g(9, 3, cap_n=50)
    with pytest.raises(CapExceeded):
        oracle.build_table(5000, 3)
    with pytest.raises(NotFoundWithinCap):
        oracle.compute_g_prime(5, 3, 10)


def test_cache_round_trip(tmp_path):
    t = oracle.build_table(30, 4, cache_dir=tmp_path)
    path = tmp_path / "slice-k4-n30.bin"
    raw = path.read_bytes()
    assert raw[:4] == oracle.CACHE_MAGIC
    assert len(raw) == oracle._HEADER.size + len(t) * (4 * 8 + 4)
    again = oracle.build_table(30, 4, cache_dir=tmp_path)
    assert (again.states == t.states).all() and (again.dist == t.dist).all()
    assert list(again.items()) == list(t.items())


def test_threaded_scan_matches_serial(tmp_path):
    serial = oracle.compute_g(6, 3)
    threaded = oracle.compute_g(6, 3, workers=4, cache_dir=tmp_path)
    assert serial == threaded
