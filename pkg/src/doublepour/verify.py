"""Property suites shared by ``doublepour verify`` and the acceptance tests.

Every check returns a :class:`CheckResult`; nothing here raises on a failed
property, so a report can list all failures at once.
"""

from __future__ import annotations

import math
import random
from collections.abc import Iterable
from dataclasses import dataclass, field

from . import oracle
from .core import canonical, pour, successors
from .errors import PouringError
from .four_vessel import random_composition, solve4
from .three_vessel import frei_round, janson_round, solve3_pow2
from .two_vessel import iterate_until_empty, verdict


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str = ""
    counterexample: object = None
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        text = f"{'PASS' if self.passed else 'FAIL'} {self.name}"
        if self.detail:
            text += f": {self.detail}"
        if not self.passed and self.counterexample is not None:
            text += f" [counterexample {self.counterexample}]"
        return text


def _states3(n_max: int, n_min: int = 3) -> Iterable[tuple[int, int, int]]:
    for n in range(n_min, n_max + 1):
        for a in range(1, n // 3 + 1):
            for b in range(a, (n - a) // 2 + 1):
                yield a, b, n - a - b


# two vessels ---------------------------------------------------------------


def check_two_vessel(limit: int = 2000) -> CheckResult:
    """Closed-form verdict against direct iteration for all pairs up to ``limit``."""
    for a in range(1, limit + 1):
        for b in range(1, limit + 1):
            v = verdict(a, b)
            direct = iterate_until_empty(a, b)
            if v.pourable != (direct is not None):
                return CheckResult("two-vessel verdict", False, counterexample=(a, b))
            if v.pourable and v.steps != direct:
                return CheckResult("two-vessel step count", False, f"{v.steps} vs {direct}", (a, b))
    return CheckResult("two-vessel characterisation", True, f"{limit * limit} pairs")


# rounds and three-vessel solvers ---------------------------------------------


def _cost_ok(count: int, a: int, b: int) -> bool:
    # count <= log2(b/a) + 2, in integers
    return count < 2 or (a << (count - 2)) <= b


def check_rounds(n_max: int = 500) -> CheckResult:
    """Janson and Frei postconditions and costs on every nonempty sorted 3-state."""
    count = 0
    for s in _states3(n_max):
        a, b, _ = s
        try:
            j = janson_round(s)
            f = frei_round(s)
        except PouringError as exc:
            return CheckResult("round postconditions", False, str(exc), s)
        count += 1
        if not j.state[1] < a:
            return CheckResult("janson b' < a", False, f"after {j.state}", s)
        a2, b2, _ = f.sorted_state
        if not (2 * a2 <= a or 2 * b2 < a):
            return CheckResult("frei a' <= a/2 or b' < a/2", False, f"after {f.state}", s)
        if not _cost_ok(j.pour_count, a, b):
            return CheckResult("janson cost", False, f"{j.pour_count} pours", s)
        if not _cost_ok(f.pour_count, a, b):
            return CheckResult("frei cost", False, f"{f.pour_count} pours", s)
    return CheckResult("round postconditions and costs", True, f"{count} states, n <= {n_max}")


def check_frei_bound(n_max: int = 2000) -> CheckResult:
    """Frei iteration within ``(log2 n)**2`` pours on every 3-state (compiled sweep)."""
    from ._kernels import STATUS, frei_sweep

    count, bad, max_ratio, worst, failures = frei_sweep(3, n_max)
    ok = bad == 0 and failures == 0
    detail = f"{count} states, n <= {n_max}, max pours/(log2 n)^2 = {max_ratio:.3f}"
    if failures:
        detail += f", {failures} kernel failures ({STATUS})"
    return CheckResult("frei iteration <= (log2 n)^2", ok, detail, None if ok else tuple(int(x) for x in worst))


def check_pow2(n_max: int = 1024) -> CheckResult:
    """Exactly ``l`` pours and two zeros whenever ``n/gcd = 2**l``."""
    count = 0
    for n in range(3, n_max + 1):
        for s in _states3(n, n):
            g = math.gcd(*s)
            r = n // g
            if r & (r - 1):
                continue
            try:
                t = solve3_pow2(s)
            except PouringError as exc:
                return CheckResult("pow2 solver", False, str(exc), s)
            count += 1
            if t.steps != r.bit_length() - 1 or t.final.count(0) < 2:
                return CheckResult("pow2 solver", False, f"{t.steps} pours, final {t.final}", s)
    return CheckResult("pow2 solver exact step count", True, f"{count} states, n <= {n_max}")


def check_frei_vs_oracle(n_max: int = 200) -> CheckResult:
    """No Frei run is shorter than the exact optimum."""
    from .three_vessel import solve3_frei

    for n in range(3, n_max + 1):
        t = oracle.build_table(n, 3)
        for s in _states3(n, n):
            steps = solve3_frei(s).steps
            if steps < t[s]:
                return CheckResult("frei length >= optimum", False, f"{steps} < {t[s]}", s)
    return CheckResult("frei length >= optimum", True, f"n <= {n_max}")


# four vessels ---------------------------------------------------------------------


def check_four_exhaustive(n_max: int = 300, instrument: bool = True, ordered: bool = True) -> CheckResult:
    """Compiled four-vessel run on every 4-composition (or sorted state) up to ``n_max``."""
    from ._kernels import STATUS, four_sweep

    count, failures, max_steps, worst, status = four_sweep(4, n_max, instrument, ordered)
    ok = failures == 0
    kind = "compositions" if ordered else "sorted states"
    detail = f"{count} {kind}, n <= {n_max}, max pours {max_steps}"
    if not ok:
        detail += f", {failures} failures, last: {STATUS[int(status)]}"
    return CheckResult("four-vessel exhaustive", ok, detail, None if ok else tuple(int(x) for x in worst))


def check_four_random(samples: int = 10_000, n_max: int = 10**6, seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(4, n_max)
        s = random_composition(n, 4, rng)
        try:
            run = solve4(s, instrument=True)
        except PouringError as exc:
            return CheckResult("four-vessel random", False, str(exc), s)
        if not run.trace.success:
            return CheckResult("four-vessel random", False, "no empty vessel", s)
    return CheckResult("four-vessel random", True, f"{samples} states, n <= {n_max}")


def loglog(n: float) -> float:
    return math.log2(n) * math.log2(math.log2(n))


def _rel_residual(ys, fs) -> tuple[float, float]:
    """Least-squares ``c`` for ``y ~ c f`` and the RMS relative residual."""
    c = sum(y * f for y, f in zip(ys, fs)) / sum(f * f for f in fs)
    rms = math.sqrt(sum((y / (c * f) - 1) ** 2 for y, f in zip(ys, fs)) / len(ys))
    return c, rms


def check_complexity(exponents=range(8, 21), samples: int = 1000, seed: int = 0) -> CheckResult:
    """Step-count growth of the four-vessel solver on random states of size ``2**e``.

    * every sample stays within ``(log2 n)**2`` pours (hard bound);
    * ``c`` is the envelope constant: the smallest value with
      max pours <= c log n log log n at every sampled ``n``;
    * the max-pours curve fits ``c log n log log n`` better than
      ``c (log n)**2`` (lower least-squares relative residual).
    """
    rng = random.Random(seed)
    rows = []
    for ex in exponents:
        n = 1 << ex
        worst = 0
        for _ in range(samples):
            s = random_composition(n, 4, rng)
            steps = solve4(s).steps
            if steps > ex * ex:
                return CheckResult("four-vessel (log2 n)^2 envelope", False, f"{steps} pours", s)
            worst = max(worst, steps)
        rows.append((ex, worst))
    ys = [w for _, w in rows]
    f_loglog = [loglog(1 << ex) for ex, _ in rows]
    f_sq = [ex * ex for ex, _ in rows]
    c = max(y / f for y, f in zip(ys, f_loglog))
    c1, r1 = _rel_residual(ys, f_loglog)
    c2, r2 = _rel_residual(ys, f_sq)
    detail = (
        f"envelope c = {c:.3f}; residual log n log log n {r1:.3f} vs (log n)^2 {r2:.3f}; "
        + ", ".join(f"2^{ex}: {w}" for ex, w in rows)
    )
    data = {"c": c, "rows": rows, "fit_loglog": (c1, r1), "fit_square": (c2, r2)}
    return CheckResult("four-vessel step-count growth", r1 <= r2, detail, None if r1 <= r2 else (r1, r2), data)


# oracle --------------------------------------------------------------------------------


def check_bellman(n_max: int = 100, k: int = 3) -> CheckResult:
    """Every value-v state has a child at v-1 and none below."""
    for n in range(1, n_max + 1):
        t = oracle.build_table(n, k)
        for s, v in t.items():
            if v is None:
                return CheckResult("oracle Bellman condition", False, "unexpected NOT-POURABLE", s)
            if 0 in s:
                if v != 0:
                    return CheckResult("oracle zero states", False, f"value {v}", s)
                continue
            best = min(t[c] if 0 not in c else 0 for c in successors(s))
            if best != v - 1:
                return CheckResult("oracle Bellman condition", False, f"value {v}, best child {best}", s)
    return CheckResult("oracle Bellman condition", True, f"k={k}, n <= {n_max}")


def check_forward_backward(samples: int = 200, n_max: int = 60, seed: int = 0) -> CheckResult:
    rng = random.Random(seed)
    for _ in range(samples):
        k = rng.randint(2, 4)
        n = rng.randint(k, n_max)
        s = canonical(random_composition(n, k, rng))
        back = oracle.build_table(n, k)[s]
        fwd = oracle.forward_pourability(s)
        if back != fwd:
            return CheckResult("oracle forward/backward agreement", False, f"table {back}, BFS {fwd}", s)
    return CheckResult("oracle forward/backward agreement", True, f"{samples} random states")


def check_solver_replay(samples: int = 500, seed: int = 0) -> CheckResult:
    from .three_vessel import solve3_frei

    rng = random.Random(seed)
    for _ in range(samples):
        s3 = random_composition(rng.randint(3, 10**5), 3, rng)
        s4 = random_composition(rng.randint(4, 10**5), 4, rng)
        for t in (solve3_frei(s3), solve4(s4).trace):
            cur = t.initial
            for src, dst in t.moves:
                cur = pour(cur, src, dst)
            if cur != t.final or 0 not in cur:
                return CheckResult("solver trace replay", False, f"replay ends at {cur}", t.initial)
    return CheckResult("solver trace replay", True, f"{2 * samples} traces")


# tables ----------------------------------------------------------------------------------


@dataclass
class Tables:
    """Computed cells keyed by ``(N, k)``."""

    g: dict = field(default_factory=dict)
    h: dict = field(default_factory=dict)
    gprime: dict = field(default_factory=dict)
    hprime: dict = field(default_factory=dict)


def compute_tables(cells_g, cells_h, h_caps, *, cache_dir=None, workers: int = 1) -> Tables:
    """``cells_g``/``cells_h`` are ``(N, k)`` lists; ``h_caps[(N, k)]`` is the h scan cap.

    g' and h' are filled for every h cell.
    """
    t = Tables()
    for N, k in cells_g:
        t.g[N, k] = oracle.compute_g(N, k, cache_dir=cache_dir, workers=workers).value
    for N, k in cells_h:
        cap = h_caps[N, k]
        t.h[N, k] = oracle.compute_h(N, k, cap, cache_dir=cache_dir, workers=workers).value
        for name, fn in (("gprime", oracle.compute_g_prime), ("hprime", oracle.compute_h_prime)):
            try:
                rec = fn(N, k, cap, cache_dir=cache_dir, workers=workers)
            except PouringError:
                continue
            getattr(t, name)[N, k] = rec.value
    return t


def check_monotonicity(t: Tables) -> list[CheckResult]:
    out = []
    bad = [(N, k) for (N, k) in t.g if (N + 1, k) in t.g and t.g[N, k] > t.g[N + 1, k]]
    out.append(CheckResult("g(N,k) <= g(N+1,k)", not bad, f"{len(t.g)} cells", bad or None))
    bad = [(N, k) for (N, k) in t.g if (N, k + 1) in t.g and (k + 1) * t.g[N, k] > k * t.g[N, k + 1]]
    out.append(CheckResult("((k+1)/k) g(N,k) <= g(N,k+1)", not bad, f"{len(t.g)} cells", bad or None))
    bad = [(N, k) for (N, k) in t.h if (N + 1, k) in t.h and t.h[N, k] > t.h[N + 1, k]]
    out.append(CheckResult("h(N,k) <= h(N+1,k)", not bad, f"{len(t.h)} cells", bad or None))
    chain = [key for key in t.h if key in t.g and key in t.gprime and key in t.hprime]
    bad = [key for key in chain if not t.g[key] <= t.gprime[key] <= t.hprime[key] <= t.h[key]]
    out.append(CheckResult("g <= g' <= h' <= h", not bad, f"{len(chain)} cells", bad or None))
    return out


def check_bounds(t: Tables) -> list[CheckResult]:
    rows = [(N, v) for (N, k), v in t.g.items() if k == 3]
    # g >= 2^sqrt(N)  <=>  log2 g >= sqrt N, compared without float powers
    bad = [(N, v) for N, v in rows if math.log2(v) < math.sqrt(N)]
    out = [CheckResult("g(N,3) >= 2^sqrt(N)", not bad, f"{len(rows)} rows", bad or None)]
    rows = [(N, v) for (N, k), v in t.h.items() if k == 3]
    bad = [(N, v) for N, v in rows if v > 5 * 2**N - 1]
    out.append(CheckResult("h(N,3) <= 5*2^N - 1", not bad, f"{len(rows)} rows", bad or None))
    return out


def check_conjecture(N_max: int = 6, *, cache_dir=None, workers: int = 1) -> list[CheckResult]:
    out = []
    for N in range(1, N_max + 1):
        rec = oracle.compute_h(N, 3, 5 * 2**N - 1, cache_dir=cache_dir, workers=workers)
        want = 5 * 2 ** (N - 1)
        out.append(CheckResult(f"h({N},3) = 5*2^{N - 1} = {want}", rec.value == want, f"computed {rec.value}"))
    return out


def default_tables(*, cache_dir=None, workers: int = 1) -> Tables:
    """The cells the ``monotonicity`` and ``bounds`` suites run on."""
    cells_g = [(N, 3) for N in range(1, 10)] + [(N, 4) for N in range(1, 6)]
    cells_g += [(N, k) for k in range(5, 9) for N in range(1, 4)]
    cells_h = [(N, 3) for N in range(1, 6)] + [(1, k) for k in range(4, 9)] + [(2, 4), (2, 5)]
    caps = {(N, 3): 5 * 2**N - 1 for N in range(1, 6)}
    caps.update({(1, k): c for k, c in zip(range(4, 9), (18, 28, 40, 54, 70))})
    caps.update({(2, 4): 60, (2, 5): 60})
    return compute_tables(cells_g, cells_h, caps, cache_dir=cache_dir, workers=workers)


def run_suite(
    name: str, *, n_max: int | None = None, N_max: int | None = None, cache_dir=None, workers: int = 1, seed: int = 0
) -> list[CheckResult]:
    if name == "invariants":
        n = n_max or 200
        return [
            check_bellman(n, 3),
            check_forward_backward(seed=seed),
            check_solver_replay(seed=seed),
            check_two_vessel(min(n, 2000)),
            check_rounds(n),
            check_frei_vs_oracle(n),
            check_pow2(n),
        ]
    if name == "bounds":
        return check_bounds(default_tables(cache_dir=cache_dir, workers=workers))
    if name == "conjecture":
        return check_conjecture(N_max or 6, cache_dir=cache_dir, workers=workers)
    if name == "monotonicity":
        return check_monotonicity(default_tables(cache_dir=cache_dir, workers=workers))
    raise ValueError(f"unknown suite {name!r}")


SUITES = ("invariants", "bounds", "conjecture", "monotonicity")
