"""Exact pourability of every state in a slice, and the g/h tables built on it.

A *slice* is every canonical (sorted) state with total ``n`` and ``k`` vessels.
Pouring never changes the total, so one slice is a closed graph. States with
an empty vessel are distance 0, and a multi-source BFS backwards from them
prices the whole slice at once. The BFS is level-synchronous over a numpy
edge array. For sorted states, pouring from vessel ``j`` into vessel ``i < j``
covers every distinct successor, so a slice has ``k(k-1)/2`` edges per
zero-free state.

Function definitions (``m(n, k)`` = largest exact pourability in the slice):

* ``g(N, k)``  = min { n : m(n, k) >= N }
* ``g'(N, k)`` = min { n : m(n, k) == N }
* ``h(N, k)``  = max { n : m(n, k) <= N }
* ``h'(N, k)`` = max { n : m(n, k) == N }

``h`` and ``h'`` are maxima over an unbounded range, so scans stop at a cap.
They are exact only for ``k = 3`` with ``cap >= 5 * 2**N - 1``, the known
upper bound for ``h(N, 3)``. Otherwise they are lower bounds.
"""

from __future__ import annotations

import logging
import os
import struct
import tempfile
import threading
from collections import deque
from collections.abc import Iterable, Iterator, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .core import State, canonical, check_state, successors
from .errors import CapExceeded, NotFoundWithinCap

logger = logging.getLogger(__name__)

#: Default largest total per vessel count.
DEFAULT_CAP_N = {2: 1 << 20, 3: 4096, 4: 1024}
DEFAULT_CAP_N_LARGE_K = 300
#: Largest slice (number of canonical states) built in memory.
MAX_STATES = 6_000_000

NOT_POURABLE = None

CACHE_MAGIC = b"DPTB"
CACHE_VERSION = 1
_HEADER = struct.Struct("<4sHHQQ")


def default_cap(k: int) -> int:
    return DEFAULT_CAP_N.get(k, DEFAULT_CAP_N_LARGE_K)


def enumerate_array(n: int, k: int) -> np.ndarray:
    """All sorted k-tuples of nonnegative ints summing to ``n``, lexicographic, as rows."""
    if n < 0 or k < 1:
        raise ValueError(f"need n >= 0 and k >= 1, got n={n}, k={k}")
    prefix = np.zeros((1, 0), dtype=np.int64)
    rem = np.array([n], dtype=np.int64)
    prev = np.zeros(1, dtype=np.int64)
    for j in range(k - 1):
        # the next part is at least the previous one and leaves room for the rest
        hi = rem // (k - j)
        cnt = np.maximum(hi - prev + 1, 0)
        total = int(cnt.sum())
        if total > MAX_STATES:
            raise CapExceeded(f"slice n={n}, k={k} has more than {MAX_STATES} states")
        idx = np.repeat(np.arange(len(rem)), cnt)
        starts = np.repeat(np.cumsum(cnt) - cnt, cnt)
        val = prev[idx] + (np.arange(total) - starts)
        prefix = np.column_stack([prefix[idx], val])
        rem = rem[idx] - val
        prev = val
    return np.column_stack([prefix, rem])


def enumerate_states(n: int, k: int) -> Iterator[State]:
    """Canonical states of the slice, each exactly once, in lexicographic order."""
    for row in enumerate_array(n, k):
        yield tuple(int(x) for x in row)


def _keys(rows: np.ndarray, n: int) -> np.ndarray:
    k = rows.shape[1]
    if (n + 1) ** k >= 1 << 63:
        raise CapExceeded(f"slice n={n}, k={k} is too large to index")
    base = n + 1
    key = np.zeros(rows.shape[0], dtype=np.int64)
    for col in range(k):
        key = key * base + rows[:, col]
    return key


@dataclass
class PourabilityTable:
    """Exact pourability for every canonical state of one slice.

    ``dist[i]`` belongs to ``states[i]``; -1 marks a state from which no vessel
    can ever be emptied (this only happens for ``k = 2``).
    """

    n: int
    k: int
    states: np.ndarray
    dist: np.ndarray

    def __post_init__(self):
        self._keys = _keys(self.states, self.n)

    def __len__(self) -> int:
        return len(self.dist)

    def __getitem__(self, state: Sequence[int]) -> int | None:
        s = canonical(check_state(state, k=self.k))
        if sum(s) != self.n:
            raise KeyError(f"{s} does not sum to {self.n}")
        i = int(np.searchsorted(self._keys, _keys(np.array([s], dtype=np.int64), self.n)[0]))
        d = int(self.dist[i])
        return NOT_POURABLE if d < 0 else d

    def items(self) -> Iterator[tuple[State, int | None]]:
        for row, d in zip(self.states, self.dist):
            yield tuple(int(x) for x in row), (NOT_POURABLE if d < 0 else int(d))

    def max(self) -> int:
        return int(self.dist.max(initial=0))

    def hardest(self) -> State:
        """Lexicographically first state with the maximal pourability."""
        i = int(np.argmax(self.dist))
        return tuple(int(x) for x in self.states[i])


def _bfs(states: np.ndarray, n: int) -> np.ndarray:
    m, k = states.shape
    keys = _keys(states, n)
    dist = np.full(m, -1, dtype=np.int32)
    zero = states[:, 0] == 0
    dist[zero] = 0
    rows = np.flatnonzero(~zero)
    if rows.size == 0:
        return dist
    src = states[rows]
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    children = np.empty((rows.size, len(pairs)), dtype=np.int32)
    for e, (i, j) in enumerate(pairs):
        # pour from j into i; sorted rows make this always valid
        child = src.copy()
        child[:, i] = 2 * src[:, i]
        child[:, j] = src[:, j] - src[:, i]
        child.sort(axis=1)
        children[:, e] = np.searchsorted(keys, _keys(child, n))
    frontier = zero
    pending = np.arange(rows.size)
    level = 0
    while pending.size:
        hit = frontier[children[pending]].any(axis=1)
        if not hit.any():
            break
        level += 1
        newly = rows[pending[hit]]
        dist[newly] = level
        frontier = np.zeros(m, dtype=bool)
        frontier[newly] = True
        pending = pending[~hit]
    return dist


_write_lock = threading.Lock()


def _cache_path(cache_dir: os.PathLike | str, n: int, k: int) -> Path:
    return Path(cache_dir) / f"slice-k{k}-n{n}.bin"


def save_table(table: PourabilityTable, path: os.PathLike | str) -> None:
    """Write ``table`` in the fixed-width little-endian cache layout.

    Header: magic ``DPTB``, u16 version, u16 k, u64 n, u64 state count.
    Records: k x u64 vessel values, then i32 distance (-1 = not pourable).
    """
    path = Path(path)
    k = table.k
    rec = np.empty(len(table), dtype=[("v", "<u8", (k,)), ("d", "<i4")])
    rec["v"] = table.states
    rec["d"] = table.dist
    path.parent.mkdir(parents=True, exist_ok=True)
    with _write_lock:
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        with os.fdopen(fd, "wb") as fh:
            fh.write(_HEADER.pack(CACHE_MAGIC, CACHE_VERSION, k, table.n, len(table)))
            fh.write(rec.tobytes())
        os.replace(tmp, path)


def load_table(path: os.PathLike | str) -> PourabilityTable:
    data = Path(path).read_bytes()
    magic, version, k, n, count = _HEADER.unpack_from(data)
    if magic != CACHE_MAGIC or version != CACHE_VERSION:
        raise ValueError(f"{path}: not a version-{CACHE_VERSION} slice cache file")
    rec = np.frombuffer(data, dtype=[("v", "<u8", (k,)), ("d", "<i4")], count=count, offset=_HEADER.size)
    return PourabilityTable(n, k, rec["v"].astype(np.int64), rec["d"].astype(np.int32))


def build_table(n: int, k: int, *, cap_n: int | None = None, cache_dir=None) -> PourabilityTable:
    """Exact pourability of every canonical state with total ``n`` on ``k`` vessels."""
    if n < 1 or k < 2:
        raise ValueError(f"need n >= 1 and k >= 2, got n={n}, k={k}")
    cap = default_cap(k) if cap_n is None else cap_n
    if n > cap:
        raise CapExceeded(f"n={n} is above the cap {cap} for k={k}")
    if cache_dir is not None:
        path = _cache_path(cache_dir, n, k)
        if path.exists():
            return load_table(path)
    states = enumerate_array(n, k)
    table = PourabilityTable(n, k, states, _bfs(states, n))
    if cache_dir is not None:
        save_table(table, path)
    return table


@dataclass(frozen=True)
class SliceSummary:
    n: int
    k: int
    max: int
    hardest: State


_summaries: dict[tuple[int, int], SliceSummary] = {}


def slice_summary(n: int, k: int, *, cap_n: int | None = None, cache_dir=None) -> SliceSummary:
    key = (n, k)
    got = _summaries.get(key)
    # a memo hit still has to populate a cache directory it has not seen
    if got is None or (cache_dir is not None and not _cache_path(cache_dir, n, k).exists()):
        t = build_table(n, k, cap_n=cap_n, cache_dir=cache_dir)
        got = _summaries[key] = SliceSummary(n, k, t.max(), t.hardest())
        logger.debug("slice n=%d k=%d: %d states, max %d", n, k, len(t), got.max)
    return got


def m(n: int, k: int, **kw) -> int:
    """Largest exact pourability over all states of the slice."""
    return slice_summary(n, k, **kw).max


def scan(k: int, ns: Iterable[int], *, cap_n=None, cache_dir=None, workers: int = 1) -> Iterator[SliceSummary]:
    """Slice summaries for ``ns`` in order, built ``workers`` at a time."""
    ns = list(ns)
    if workers <= 1:
        for n in ns:
            yield slice_summary(n, k, cap_n=cap_n, cache_dir=cache_dir)
        return
    with ThreadPoolExecutor(workers) as pool:
        for i in range(0, len(ns), workers):
            batch = ns[i : i + workers]
            yield from pool.map(lambda n: slice_summary(n, k, cap_n=cap_n, cache_dir=cache_dir), batch)


@dataclass(frozen=True)
class GHRecord:
    """One table cell.

    ``exact`` is False when the value is only a lower bound because the scan
    stopped at its cap. ``witness`` is the hardest state of the slice at
    ``value``.
    """

    function: str
    N: int
    k: int
    value: int
    exact: bool
    witness: State


def _check_args(N: int, k: int) -> None:
    if N < 1 or k < 3:
        raise ValueError(f"need N >= 1 and k >= 3, got N={N}, k={k}")


def h_is_exact(N: int, k: int, cap: int) -> bool:
    return k == 3 and cap >= 5 * 2**N - 1


def compute_g(N: int, k: int, *, cap_n: int | None = None, cache_dir=None, workers: int = 1) -> GHRecord:
    """Smallest total for which some state is not ``(N-1)``-pourable."""
    _check_args(N, k)
    cap = default_cap(k) if cap_n is None else cap_n
    for sm in scan(k, range(1, cap + 1), cap_n=cap, cache_dir=cache_dir, workers=workers):
        if sm.max >= N:
            return GHRecord("g", N, k, sm.n, True, sm.hardest)
    raise CapExceeded(f"g({N},{k}) not reached for n <= {cap}")


def compute_g_prime(N: int, k: int, cap: int | None = None, *, cache_dir=None, workers: int = 1) -> GHRecord:
    """Smallest total ``<= cap`` whose slice maximum is exactly ``N``."""
    _check_args(N, k)
    cap = default_cap(k) if cap is None else cap
    for sm in scan(k, range(1, cap + 1), cap_n=cap, cache_dir=cache_dir, workers=workers):
        if sm.max == N:
            return GHRecord("gprime", N, k, sm.n, True, sm.hardest)
    raise NotFoundWithinCap(f"no n <= {cap} has m(n,{k}) = {N}")


def _scan_max(N, k, cap, cache_dir, workers, accept) -> SliceSummary | None:
    best = None
    for sm in scan(k, range(1, cap + 1), cap_n=cap, cache_dir=cache_dir, workers=workers):
        if accept(sm.max):
            best = sm
    return best


def compute_h(N: int, k: int, cap: int, *, cache_dir=None, workers: int = 1) -> GHRecord:
    """Largest total ``<= cap`` for which every state is ``N``-pourable."""
    _check_args(N, k)
    best = _scan_max(N, k, cap, cache_dir, workers, lambda mx: mx <= N)
    if best is None:
        raise NotFoundWithinCap(f"no n <= {cap} has m(n,{k}) <= {N}")
    return GHRecord("h", N, k, best.n, h_is_exact(N, k, cap), best.hardest)


def compute_h_prime(N: int, k: int, cap: int, *, cache_dir=None, workers: int = 1) -> GHRecord:
    """Largest total ``<= cap`` whose slice maximum is exactly ``N``."""
    _check_args(N, k)
    best = _scan_max(N, k, cap, cache_dir, workers, lambda mx: mx == N)
    if best is None:
        raise NotFoundWithinCap(f"no n <= {cap} has m(n,{k}) = {N}")
    return GHRecord("hprime", N, k, best.n, h_is_exact(N, k, cap), best.hardest)


def forward_pourability(state: Sequence[int], max_depth: int | None = None) -> int | None:
    """Breadth-first search forward from one state.

    Independent of the slice BFS; returns None if no vessel can be emptied
    (or not within ``max_depth`` pours when given).
    """
    s = canonical(check_state(state))
    if 0 in s:
        return 0
    seen = {s}
    frontier = deque([(s, 0)])
    while frontier:
        cur, d = frontier.popleft()
        if max_depth is not None and d >= max_depth:
            continue
        for nxt in successors(cur):
            if nxt[0] == 0:
                return d + 1
            if nxt not in seen:
                seen.add(nxt)
                frontier.append((nxt, d + 1))
    return None


def optimal_trace(state: Sequence[int]):
    """A shortest pour sequence on the caller's vessel order (forward BFS)."""
    from .core import PourTrace, pour

    s = check_state(state)
    if 0 in s:
        return PourTrace(s)
    parent: dict[State, tuple[State, tuple[int, int]] | None] = {s: None}
    frontier = deque([s])
    k = len(s)
    goal = None
    while frontier and goal is None:
        cur = frontier.popleft()
        for dst in range(k):
            if cur[dst] == 0:
                continue
            for src in range(k):
                if src == dst or cur[dst] > cur[src]:
                    continue
                nxt = pour(cur, src, dst)
                if nxt in parent:
                    continue
                parent[nxt] = (cur, (src, dst))
                if 0 in nxt:
                    goal = nxt
                    break
                frontier.append(nxt)
            if goal is not None:
                break
    if goal is None:
        return None
    moves, states = [], []
    node = goal
    while parent[node] is not None:
        prev, mv = parent[node]
        moves.append(mv)
        states.append(node)
        node = prev
    return PourTrace(s, moves[::-1], states[::-1])
