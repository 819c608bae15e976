"""The O(log n log log n) four-vessel algorithm.

Outline:

1. Run Frei rounds on the three smallest vessels until the smallest holds less
   than ``n / (2 log n)``.
2. The largest vessel becomes the pool D. Water is only ever poured out of
   the pool after this point, and it is never renamed.
3. ``e`` tracks the 2-adic valuation of ``gcd(A, B, C)``. Every loop iteration
   raises ``e`` by pouring so that all of A, B, C become ``(e+1)``-even. Once
   ``2**e >= n`` a vessel must be empty.

All logarithms are base 2 and the thresholds are floats (they only move the
constant in the step count, never correctness). Stops happen the moment any
vessel, the pool included, reaches zero.
"""

from __future__ import annotations

import math
import random
import statistics
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .core import PourTrace, TraceBuilder, check_state, is_even_to, parity, state_gcd
from .errors import InvariantViolation, PoolExhausted
from .three_vessel import _frei, _janson, sort_roles

#: Totals at or below this use plain Frei iteration on the three smallest
#: vessels; log log n is meaningless there.
SMALL_N = 16


@dataclass
class FourVesselRun:
    trace: PourTrace
    e_history: list[tuple[int, int]] = field(default_factory=list)
    pool_index: int | None = None
    phase_log: list[str] = field(default_factory=list)
    iterations: int = 0

    @property
    def steps(self) -> int:
        return self.trace.steps


class _Emptied(Exception):
    pass


class _Runner:
    # Exposes ``values`` and ``pour`` so the three-vessel round bodies can
    # drive it like a TraceBuilder.

    def __init__(self, s: Sequence[int], instrument: bool):
        self.tb = TraceBuilder(s)
        self.values = self.tb.values
        self.instrument = instrument
        self.n = n = sum(s)
        self.run = FourVesselRun(self.tb.trace)
        if n > SMALL_N:
            log_n = math.log2(n)
            self.half_thr = n / (2 * log_n)
            self.quarter_thr = n / (4 * log_n)
        self.pool: int | None = None
        self.abc: list[int] = []
        self.e = 0

    def pour(self, src: int, dst: int) -> None:
        v = self.values
        if src == self.pool and v[src] < v[dst]:
            raise PoolExhausted(
                f"pool holds {v[src]} but vessel {dst} holds {v[dst]} (state {tuple(v)})"
            )
        self.tb.pour(src, dst)
        if v[src] == 0 or v[dst] == 0:
            raise _Emptied

    def phase(self, name: str) -> None:
        self.run.phase_log.append(name)

    def rename(self) -> None:
        self.abc = sort_roles(self.values, self.abc)
        if self.instrument and self.values[self.abc[0]] >= self.half_thr:
            raise InvariantViolation(
                f"smallest vessel {self.values[self.abc[0]]} >= n/(2 log n) = {self.half_thr:.3f}"
                f" at step {self.tb.steps}"
            )

    def odd(self, i: int) -> bool:
        return not is_even_to(self.values[i], self.e + 1)

    def set_e(self, e: int) -> None:
        self.e = e
        self.run.e_history.append((self.tb.steps, e))
        if self.instrument:
            got = parity(state_gcd(self.values[i] for i in self.abc))
            if got != e:
                raise InvariantViolation(
                    f"gcd of A, B, C has parity {got}, expected exactly {e} (state {tuple(self.values)})"
                )

    def solve(self) -> None:
        v = self.values
        if self.n <= SMALL_N:
            self.phase("fallback")
            three = sort_roles(v, range(4))[:3]
            while True:
                _frei(self, *sort_roles(v, three))
        # step 1: shrink the smallest vessel
        while True:
            order = sort_roles(v, range(4))
            if v[order[0]] < self.half_thr:
                break
            self.phase("reduce")
            _frei(self, *order[:3])
        self.abc = order[:3]
        self.pool = D = order[3]
        self.run.pool_index = D
        self.set_e(parity(state_gcd(v[i] for i in self.abc)))
        max_iter = math.ceil(math.log2(self.n))
        while True:
            self.run.iterations += 1
            e_start = self.e
            A, B, C = self.abc
            if v[A] >= self.quarter_thr:
                self.phase("frei")
                _frei(self, A, B, C)
                self.rename()
                # the round can make all three (e+1)-even; resync so that
                # exactly the lowest-parity vessels count as odd below
                e_now = parity(state_gcd(v[i] for i in self.abc))
                if e_now > self.e:
                    self.set_e(e_now)
            odd = [i for i in self.abc if self.odd(i)]
            if len(odd) == 2:
                self.phase("pour-odd")
                dst, src = sort_roles(v, odd)
                self.pour(src, dst)
                self.set_e(self.e + 1)
                self.rename()
            else:
                if len(odd) == 3:
                    self.phase("cb-one")
                    A, B, C = self.abc
                    self.pour(C, B)
                    self.rename()
                A, B, C = self.abc
                if self.odd(C):
                    self.phase("cb-until")
                    while v[B] <= v[C]:
                        self.pour(C, B)
                    self.rename()
                A, B, C = self.abc
                if self.odd(B) and v[B] < self.quarter_thr:
                    self.phase("db")
                    self.pour(D, B)
                    self.set_e(self.e + 1)
                    self.rename()
                elif self.odd(B):
                    self.phase("t-batch")
                    t_a = math.log2(self.quarter_thr / v[A])
                    t_c = parity(v[C]) - self.e
                    t = max(min(math.ceil(t_a / 2), t_c), 1)
                    for _ in range(t - 1):
                        self.pour(B, A)
                    if self.instrument and not v[A] < v[B]:
                        raise InvariantViolation(f"B fell to or below A after {t - 1} pours: {tuple(v)}")
                    _janson(self, *sort_roles(v, self.abc))
                    self.rename()
                    A = self.abc[0]
                    for _ in range(t):
                        self.pour(D, A)
                    self.set_e(self.e + t)
                    self.rename()
                elif self.odd(A):
                    self.phase("da-one")
                    self.pour(D, A)
                    self.set_e(self.e + 1)
                    self.rename()
                else:
                    raise InvariantViolation(f"no vessel is (e+1)-odd, e={self.e}, state {tuple(v)}")
            if self.e <= e_start:
                raise InvariantViolation(f"e did not increase in iteration {self.run.iterations}")
            if self.instrument and self.run.iterations > max_iter:
                raise InvariantViolation(f"more than ceil(log2 n) = {max_iter} loop iterations")


def solve4(s: Sequence[int], *, instrument: bool = False) -> FourVesselRun:
    """Empty one of four nonempty vessels (the pool may be the one emptied).

    With ``instrument=True`` the run also checks, as it goes, that the gcd of
    A, B, C is exactly ``e``-even after each update, that the smallest vessel
    stays below ``n/(2 log n)``, and that the loop runs at most
    ``ceil(log2 n)`` times. A failed check raises
    :class:`~doublepour.errors.InvariantViolation`.
    """
    s = check_state(s, k=4, positive=True)
    runner = _Runner(s, instrument)
    try:
        runner.solve()
    except _Emptied:
        pass
    return runner.run


def random_composition(n: int, parts: int, rng: random.Random) -> tuple[int, ...]:
    """Uniform composition of ``n`` into ``parts`` positive parts."""
    cuts = sorted(rng.sample(range(1, n), parts - 1))
    bounds = [0, *cuts, n]
    return tuple(b - a for a, b in zip(bounds, bounds[1:]))


@dataclass(frozen=True)
class ProfileRow:
    n: int
    max_pours: int
    mean_pours: float


def step_count_profile(n_values: Iterable[int], samples: int, seed: int = 0) -> list[ProfileRow]:
    """Run :func:`solve4` on ``samples`` random compositions of each ``n``."""
    rng = random.Random(seed)
    rows = []
    for n in n_values:
        if n < 4:
            raise ValueError(f"n must be at least 4, got {n}")
        counts = [solve4(random_composition(n, 4, rng)).steps for _ in range(samples)]
        rows.append(ProfileRow(n, max(counts), statistics.fmean(counts)))
    return rows
