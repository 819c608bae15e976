"""States, the pouring move, and the small number-theory helpers.

A state is a plain tuple of nonnegative ints. Vessel order is meaningful for
traces; pourability itself only depends on the multiset, so the oracle keys on
:func:`canonical` (sorted ascending).

Direction vocabulary: every function here names the *doubling* vessel ``dst``
and the vessel that gives water away ``src``. "Pour from B to A" therefore
means ``src=B, dst=A`` and A doubles. This is the reverse of the physical
picture of a jug emptying into another, so read signatures carefully.
"""

from __future__ import annotations

import math
import operator
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import AllZero, InvalidPour, InvalidState

State = tuple[int, ...]

#: Largest total accepted at API boundaries; pours never exceed the total,
#: so everything stays inside signed 64-bit arithmetic.
MAX_TOTAL = 1 << 62

#: Parity of zero. Zero is e-even for every e.
INF = math.inf


def check_state(values: Iterable[int], *, k: int | None = None, positive: bool = False) -> State:
    """Validate ``values`` and return them as a tuple, order preserved."""
    try:
        s = tuple(_as_int(v) for v in values)
    except TypeError as exc:
        raise InvalidState(f"vessel values must be integers: {exc}") from None
    if len(s) < 2:
        raise InvalidState(f"need at least 2 vessels, got {len(s)}")
    if k is not None and len(s) != k:
        raise InvalidState(f"expected {k} vessels, got {len(s)}")
    if any(v < 0 for v in s):
        raise InvalidState(f"negative vessel value in {s}")
    if positive and any(v == 0 for v in s):
        raise InvalidState(f"every vessel must be nonempty: {s}")
    if sum(s) > MAX_TOTAL:
        raise InvalidState(f"total {sum(s)} exceeds 2**62")
    return s


def _as_int(v) -> int:
    # bool is an int subclass but never a sensible volume
    if isinstance(v, bool):
        raise TypeError(f"{v!r} is a bool")
    return operator.index(v)


def canonical(s: Iterable[int]) -> State:
    return tuple(sorted(s))


def pour(s: Sequence[int], src: int, dst: int) -> State:
    """Pour from ``src`` into ``dst``: ``dst`` doubles, ``src`` loses that amount.

    Requires ``0 < s[dst] <= s[src]``. Pouring into an empty vessel would be a
    no-op and is rejected.
    """
    k = len(s)
    if not (0 <= src < k and 0 <= dst < k):
        raise InvalidPour(f"vessel index out of range: src={src}, dst={dst}, k={k}")
    if src == dst:
        raise InvalidPour(f"cannot pour vessel {src} into itself")
    x = s[dst]
    if x == 0:
        raise InvalidPour(f"vessel {dst} is empty; pouring into it changes nothing")
    if x > s[src]:
        raise InvalidPour(f"vessel {dst} holds {x} > {s[src]} in vessel {src}")
    out = list(s)
    out[dst] = 2 * x
    out[src] = s[src] - x
    return tuple(out)


def reverse_pours(s: Sequence[int]) -> set[State]:
    """All states ``t`` with ``pour(t, i, j) == s`` for some valid ``(i, j)``.

    Vessel ``d`` can be un-doubled when it is even and positive; the water goes
    back to any other vessel ``r``. The result keeps vessel order.
    """
    out: set[State] = set()
    k = len(s)
    for d in range(k):
        x = s[d]
        if x == 0 or x & 1:
            continue
        half = x >> 1
        for r in range(k):
            if r == d:
                continue
            t = list(s)
            t[d] = half
            t[r] = s[r] + half
            out.add(tuple(t))
    return out


def successors(s: Sequence[int]) -> set[State]:
    """Canonical states reachable from ``s`` with one pour."""
    out = set()
    k = len(s)
    for dst in range(k):
        if s[dst] == 0:
            continue
        for src in range(k):
            if src != dst and s[dst] <= s[src]:
                out.add(canonical(pour(s, src, dst)))
    return out


def parity(x: int) -> int | float:
    """2-adic valuation of ``x``; :data:`INF` for zero."""
    if x < 0:
        raise ValueError("parity is defined here for nonnegative integers")
    if x == 0:
        return INF
    return (x & -x).bit_length() - 1


def is_even_to(x: int, e: int) -> bool:
    """True when ``2**e`` divides ``x`` ("x is e-even"). Zero is e-even for all e."""
    return x & ((1 << e) - 1) == 0


def state_gcd(s: Iterable[int]) -> int:
    g = math.gcd(*s)
    if g == 0:
        raise AllZero("every vessel is empty")
    return g


def is_power_of_two(x: int) -> bool:
    return x > 0 and x & (x - 1) == 0


@dataclass
class PourTrace:
    """A sequence of pours from ``initial`` with the state after each one."""

    initial: State
    moves: list[tuple[int, int]] = field(default_factory=list)
    states: list[State] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.moves)

    @property
    def final(self) -> State:
        return self.states[-1] if self.states else self.initial

    @property
    def success(self) -> bool:
        return 0 in self.final

    def __len__(self) -> int:
        return len(self.moves)

    def replay(self) -> State:
        """Re-run every move through :func:`pour`, checking each snapshot."""
        cur = self.initial
        if len(self.moves) != len(self.states):
            raise InvalidPour("trace has mismatched moves and snapshots")
        for i, ((src, dst), expect) in enumerate(zip(self.moves, self.states)):
            cur = pour(cur, src, dst)
            if cur != tuple(expect):
                raise InvalidPour(f"step {i}: replay gives {cur}, trace says {tuple(expect)}")
        return cur


class TraceBuilder:
    """Mutable vessel list that records every pour it performs."""

    def __init__(self, initial: Sequence[int]):
        self.values = list(initial)
        self.trace = PourTrace(tuple(initial))

    def pour(self, src: int, dst: int) -> None:
        v = self.values
        x = v[dst]
        if src == dst or x == 0 or x > v[src]:
            raise InvalidPour(f"invalid pour {src}->{dst} at state {tuple(v)}")
        v[dst] = 2 * x
        v[src] -= x
        self.trace.moves.append((src, dst))
        self.trace.states.append(tuple(v))

    def has_zero(self) -> bool:
        return 0 in self.values

    @property
    def steps(self) -> int:
        return len(self.trace.moves)
