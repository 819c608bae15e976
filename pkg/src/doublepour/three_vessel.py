"""Three-vessel round algorithms and the special-case solvers built on them.

Rounds work on roles ``A <= B <= C`` (sorted by value, ties keep the caller's
vessel order). Moves in the returned traces always use the caller's vessel
indices, so a trace replays directly on the input state.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .core import (
    PourTrace,
    State,
    TraceBuilder,
    check_state,
    is_power_of_two,
    state_gcd,
)
from .errors import DegenerateState, InvariantViolation, NotPow2
from .two_vessel import solve2


@dataclass
class RoundResult:
    """Outcome of one round.

    ``state`` lists the values of the roles ``(A, B, C)`` as they were assigned
    before the round, so it is directly comparable to the sorted input.
    ``order`` maps those roles back to the caller's vessel indices.
    """

    state: State
    order: tuple[int, int, int]
    trace: PourTrace

    @property
    def pour_count(self) -> int:
        return self.trace.steps

    @property
    def sorted_state(self) -> State:
        return tuple(sorted(self.state))


def sort_roles(values: Sequence[int], idx: Sequence[int]) -> list[int]:
    """Indices ``idx`` ordered by value; equal values keep their order in ``idx``."""
    return sorted(idx, key=values.__getitem__)


def _janson(tb: TraceBuilder, a: int, b: int, c: int) -> None:
    v = tb.values
    p = v[b] // v[a]
    for i in range(p.bit_length()):
        if p >> i & 1:
            tb.pour(b, a)
        else:
            tb.pour(c, a)


def _frei(tb: TraceBuilder, a: int, b: int, c: int) -> None:
    v = tb.values
    va, vb = v[a], v[b]
    p = vb // va
    q = -(-vb // va)
    r1 = vb - p * va
    r2 = q * va - vb
    if r1 <= r2:
        _janson(tb, a, b, c)
        return
    for i in range(q.bit_length() - 1):
        if q >> i & 1:
            tb.pour(b, a)
        else:
            tb.pour(c, a)
    tb.pour(a, b)


def _state_shift(tb: TraceBuilder, a: int, b: int, c: int) -> None:
    v = tb.values
    q = v[b] // v[a]
    for i in range(q.bit_length() - 1):
        if q >> i & 1:
            tb.pour(b, a)
        else:
            tb.pour(c, a)


def _three(s: Sequence[int]) -> State:
    s = check_state(s, k=3)
    if 0 in s:
        raise DegenerateState(f"round algorithms need three nonempty vessels, got {s}")
    return s


def _run_round(s: Sequence[int], body) -> RoundResult:
    s = _three(s)
    tb = TraceBuilder(s)
    a, b, c = sort_roles(s, range(3))
    body(tb, a, b, c)
    v = tb.values
    return RoundResult((v[a], v[b], v[c]), (a, b, c), tb.trace)


def janson_round(s: Sequence[int]) -> RoundResult:
    """One round of Janson's algorithm; afterwards the old B role is below the old a.

    With ``p = b // a`` written in binary, bit ``i`` set pours B into A,
    bit clear pours C into A.
    """
    return _run_round(s, _janson)


def frei_round(s: Sequence[int]) -> RoundResult:
    """One round of Frei's algorithm.

    Takes the nearer of ``floor(b/a)`` and ``ceil(b/a)``: the floor case is a
    Janson round; the ceiling case pours by the low bits of ``q = ceil(b/a)``
    and finishes with one pour from A into B. Afterwards the sorted state has
    ``a' <= a/2`` or ``b' < a/2``.
    """
    return _run_round(s, _frei)


def state_shift(s: Sequence[int]) -> RoundResult:
    """Turn sorted ``(a, qa + r, c)`` into ``(2**h a, 2**h a + r, c')`` in ``h = floor(log2 q)`` pours."""
    res = _run_round(s, _state_shift)
    if res.state[2] < 1:
        raise InvariantViolation(f"state shift left C empty: {res.state}")
    return res


def solve3_frei(s: Sequence[int]) -> PourTrace:
    """Iterate Frei rounds until a vessel is empty; at most ``log2(n)**2`` pours."""
    s = _three(s)
    tb = TraceBuilder(s)
    while not tb.has_zero():
        _frei(tb, *sort_roles(tb.values, range(3)))
    n = sum(s)
    if tb.steps > math.log2(n) ** 2:
        raise InvariantViolation(
            f"Frei iteration used {tb.steps} pours on {s}, above (log2 {n})^2; moves={tb.trace.moves}"
        )
    return tb.trace


def solve3_remainder(s: Sequence[int]) -> PourTrace:
    """Repeat (state shift; pour B into A) until a vessel empties.

    Each repetition leaves the old remainder ``r = b mod a`` in B, so the
    smallest value strictly drops; the total is at most
    ``(r + 1) * floor(log2 n)`` pours for the initial remainder ``r``.
    """
    s = _three(s)
    tb = TraceBuilder(s)
    prev_min = None
    while not tb.has_zero():
        a, b, c = sort_roles(tb.values, range(3))
        cur_min = tb.values[a]
        if prev_min is not None and cur_min >= prev_min:
            raise InvariantViolation(
                f"smallest vessel did not shrink ({prev_min} -> {cur_min}); moves={tb.trace.moves}"
            )
        prev_min = cur_min
        _state_shift(tb, a, b, c)
        tb.pour(b, a)
    return tb.trace


def solve3_pow2(s: Sequence[int]) -> PourTrace:
    """Empty two vessels in exactly ``l`` pours when ``n / gcd = 2**l``.

    Each pour goes between the two vessels whose gcd-reduced values are odd
    (larger into smaller; on a tie the lower vessel index doubles). Once one
    vessel is empty the other two are finished with the two-vessel solver.
    """
    s = check_state(s, k=3)
    n = sum(s)
    g = state_gcd(s)
    ratio = n // g
    if ratio < 2 or not is_power_of_two(ratio):
        raise NotPow2(f"n/gcd = {ratio} for {s} is not a power of two >= 2")
    ell = ratio.bit_length() - 1
    tb = TraceBuilder(s)
    while not tb.has_zero():
        v = tb.values
        g = state_gcd(v)
        odd = [i for i in range(3) if (v[i] // g) & 1]
        if len(odd) != 2:
            raise InvariantViolation(f"expected two odd reduced vessels in {tuple(v)}")
        dst, src = sort_roles(v, odd)
        tb.pour(src, dst)
    rest = [i for i in range(3) if tb.values[i]]
    if len(rest) == 2:
        i, j = rest
        tail = solve2(tb.values[i], tb.values[j])
        for src, dst in tail.moves:
            tb.pour(rest[src], rest[dst])
    if tb.steps != ell or tb.values.count(0) < 2:
        raise InvariantViolation(f"power-of-two solver took {tb.steps} pours, expected {ell}, on {s}")
    return tb.trace
