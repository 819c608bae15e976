import math

from hypothesis import given, settings
from hypothesis import strategies as st

from doublepour import oracle
from doublepour.core import canonical, pour, reverse_pours, successors
from doublepour.four_vessel import solve4
from doublepour.three_vessel import frei_round, janson_round, solve3_frei
from doublepour.two_vessel import solve2, verdict

vol = st.integers(min_value=1, max_value=10**12)


@given(st.lists(st.integers(0, 50), min_size=2, max_size=6))
def test_reverse_then_forward(s):
    s = tuple(s)
    for t in reverse_pours(s):
        assert sum(t) == sum(s)
        assert canonical(s) in successors(t)


@given(vol, vol)
def test_two_vessel_verdict(a, b):
    v = verdict(a, b)
    if v.pourable:
        assert solve2(a, b).steps == v.steps
    else:
        r = (a + b) // math.gcd(a, b)
        assert r & (r - 1)


@given(vol, vol, vol)
def test_round_postconditions(x, y, z):
    a, b, c = sorted((x, y, z))
    j = janson_round((x, y, z))
    assert j.state[1] < a
    f = frei_round((x, y, z))
    a2, b2, _ = f.sorted_state
    assert 2 * a2 <= a or 2 * b2 < a
    for r in (j, f):
        cnt = r.pour_count
        assert cnt < 2 or a << (cnt - 2) <= b


@given(vol, vol, vol)
def test_frei_bound(a, b, c):
    t = solve3_frei((a, b, c))
    assert t.success and t.steps <= math.log2(a + b + c) ** 2


@settings(max_examples=300)
@given(vol, vol, vol, vol)
def test_four_vessel(a, b, c, d):
    run = solve4((a, b, c, d), instrument=True)
    assert run.trace.success
    assert run.steps <= math.log2(a + b + c + d) ** 2


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=3, max_size=4))
def test_optimal_trace_matches_table(s):
    s = tuple(s)
    t = oracle.optimal_trace(s)
    assert t.steps == oracle.build_table(sum(s), len(s))[s]
    cur = s
    for src, dst in t.moves:
        cur = pour(cur, src, dst)
    assert 0 in cur
