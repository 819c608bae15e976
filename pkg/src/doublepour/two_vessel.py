"""Two vessels: the move is forced, so solvability and step count are closed-form.

``(a, b)`` empties a vessel iff ``(a + b) / gcd(a, b)`` is a power of two
``2**k``, and then it takes exactly ``k`` pours.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import PourTrace, check_state, is_power_of_two
from .errors import InvalidState, NotPourable


@dataclass(frozen=True)
class TwoVesselVerdict:
    pourable: bool
    steps: int | None = None


def _check_pair(a: int, b: int) -> tuple[int, int]:
    a, b = check_state((a, b), k=2)
    if a < 1 or b < 1:
        raise InvalidState(f"both vessels must be nonempty, got ({a}, {b})")
    return a, b


def f_step(a: int, b: int) -> tuple[int, int]:
    """The forced move; output keeps vessel order."""
    if a <= b:
        return 2 * a, b - a
    return a - b, 2 * b


def verdict(a: int, b: int) -> TwoVesselVerdict:
    a, b = _check_pair(a, b)
    ratio = (a + b) // math.gcd(a, b)
    if not is_power_of_two(ratio):
        return TwoVesselVerdict(False)
    return TwoVesselVerdict(True, ratio.bit_length() - 1)


def solve2(a: int, b: int) -> PourTrace:
    """Iterate :func:`f_step` until a vessel is empty.

    Raises :class:`NotPourable` when the ratio ``(a+b)/gcd`` is not a power of two.
    """
    v = verdict(a, b)
    if not v.pourable:
        g = math.gcd(a, b)
        raise NotPourable(
            f"({a}, {b}) is not pourable: (a+b)/gcd = {(a + b) // g} is not a power of two"
        )
    trace = PourTrace((a, b))
    x, y = a, b
    while x and y:
        # in index terms: the smaller vessel doubles
        trace.moves.append((1, 0) if x <= y else (0, 1))
        x, y = f_step(x, y)
        trace.states.append((x, y))
    assert trace.steps == v.steps
    return trace


def iterate_until_empty(a: int, b: int, cap: int | None = None) -> int | None:
    """Apply :func:`f_step` directly; number of steps to a zero, or None.

    ``cap`` defaults to ``ceil(log2(a+b)) + 1``: a pourable pair needs exactly
    ``log2((a+b)/gcd) <= log2(a+b)`` steps, so running past that proves there
    is no zero ever.
    """
    if cap is None:
        cap = (a + b - 1).bit_length() + 1
    x, y = a, b
    for i in range(1, cap + 1):
        x, y = f_step(x, y)
        if x == 0 or y == 0:
            return i
    return None
