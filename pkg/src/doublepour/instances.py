"""Generators for extremal and hard instance families."""

from __future__ import annotations

import math
from collections import defaultdict
from collections.abc import Sequence
from dataclasses import dataclass

from .core import State
from .errors import TooSmall


@dataclass(frozen=True)
class SeqPair:
    a: tuple[int, ...]
    b: tuple[int, ...]


def a_closed(i: int) -> int:
    return i * i // 4 + 1


def b_closed(i: int) -> int:
    # floor(i^3/12 + i^2/8 + 11i/12) over a common denominator
    return (2 * i**3 + 3 * i * i + 22 * i) // 24


def seq_ab(i_max: int, *, check: bool = False) -> SeqPair:
    """``a_1 = 1, a_{i+1} = a_i + ceil(i/2)`` and its prefix sums ``b``.

    With ``check=True`` every term is compared against the closed forms.
    """
    if i_max < 1:
        raise ValueError(f"i_max must be at least 1, got {i_max}")
    a = [1]
    for i in range(1, i_max):
        a.append(a[-1] + (i + 1) // 2)
    b, total = [], 0
    for x in a:
        total += x
        b.append(total)
    if check:
        for i in range(1, i_max + 1):
            if a[i - 1] != a_closed(i) or b[i - 1] != b_closed(i):
                raise AssertionError(f"closed form disagrees with the recurrence at i={i}")
    return SeqPair(tuple(a), tuple(b))


def g3_instance(k: int) -> State:
    """``(1, 4, 6, 9, 11, ...)``: starts 1, 4 and then ``a_i = a_{i-2} + 5``."""
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    a = [1, 4]
    while len(a) < k:
        a.append(a[-2] + 5)
    return tuple(a)


def g3_instance_sum(k: int) -> int:
    return 5 * k * k // 4


def g4_lower_instance(k: int) -> State:
    """The first ``k`` terms of :func:`seq_ab`'s ``a``; sums to ``b_closed(k)``."""
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    return seq_ab(k).a


def gap_violations(state: Sequence[int]) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Index pairs with the same positive gap that do not share a middle vessel.

    Two pairs ``(j1, i1)`` and ``(j2, i2)`` (lower index first) with
    ``a[i1] - a[j1] == a[i2] - a[j2]`` are allowed only when chained, that is
    when one pair's upper vessel is the other's lower vessel. Anything else
    lets two pours produce equal vessels and a third pour empty one.
    """
    a = sorted(state)
    by_gap: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for i in range(len(a)):
        for j in range(i):
            if a[i] > a[j]:
                by_gap[a[i] - a[j]].append((j, i))
    bad = []
    for pairs in by_gap.values():
        for x in range(len(pairs)):
            for y in range(x + 1, len(pairs)):
                (j1, i1), (j2, i2) = pairs[x], pairs[y]
                if i1 != j2 and i2 != j1:
                    bad.append((pairs[x], pairs[y]))
    return bad


def satisfies_gap_condition(state: Sequence[int]) -> bool:
    """Distinct values and no unchained equal gaps."""
    a = sorted(state)
    if any(x == y for x, y in zip(a, a[1:])):
        return False
    return not gap_violations(a)


def ceil_root(n: int, m: int) -> int:
    """Smallest ``x >= 0`` with ``x**m >= n``, by integer binary search."""
    if n < 0 or m < 1:
        raise ValueError(f"need n >= 0 and m >= 1, got n={n}, m={m}")
    lo, hi = 0, 1
    while hi**m < n:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if mid**m >= n:
            hi = mid
        else:
            lo = mid + 1
    return lo


def omega_instance(t: int, n: int) -> State:
    """``(n - sum(r), r_1, ..., r_{t-1})`` with ``r_i = ceil(n ** (1/2**i))``.

    Raises :class:`TooSmall` naming the first separation that fails:
    ``r_i > 2 r_{i+1}`` for consecutive roots, and the first entry above
    ``2 r_1``.
    """
    if t < 3:
        raise ValueError(f"t must be at least 3, got {t}")
    roots = [ceil_root(n, 2**i) for i in range(1, t)]
    for i in range(len(roots) - 1):
        if not roots[i] > 2 * roots[i + 1]:
            raise TooSmall(
                f"n={n} too small for t={t}: need ceil(n^(1/{2 ** (i + 1)})) = {roots[i]}"
                f" > 2*ceil(n^(1/{2 ** (i + 2)})) = {2 * roots[i + 1]}"
            )
    first = n - sum(roots)
    if not first > 2 * roots[0]:
        raise TooSmall(f"n={n} too small for t={t}: need first entry {first} > 2*ceil(n^(1/2)) = {2 * roots[0]}")
    return (first, *roots)


def omega_lower_bound(n: int) -> int:
    """``floor(log2(n)/4 - 3/2)``, the step count the omega family guarantees."""
    return math.floor(math.log2(n) / 4 - 1.5)
