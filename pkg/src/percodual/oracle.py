"""Brute-force ground truth for the crossing detectors and the envelope.

Nothing here calls into :mod:`percodual.crossings` traversal code: the single
configuration check is a plain stack flood over cell tuples and the batch
check dilates boolean numpy arrays, so agreement with the bitboard detector
is meaningful evidence.
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterator, NamedTuple

import numpy as np

from .crossings import ALL_SPECS, CrossingSpec, Orientation, Rect
from .lattice import AdjacencyKind, Cell, CellSet, CellState, Configuration, neighbors
from .topology import Cycle, Position, TopologyError, edge_midpoint

ENUMERATE_CAP = 24
EXHAUSTIVE_CAP = 20
CAP_ENV = "PERCO_ENUM_CAP"


class CapExceeded(ValueError):
    pass


class Violation(NamedTuple):
    index: int
    description: str


class ViolationList(list):
    """``Violation`` records; empty means the property held everywhere."""

    @property
    def ok(self) -> bool:
        return not self


def _cap(default: int) -> int:
    raw = os.environ.get(CAP_ENV)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise CapExceeded(f"{CAP_ENV} must be an integer, got {raw!r}") from None


def _check_cap(m: int, n: int, default: int) -> None:
    if m < 1 or n < 1:
        raise ValueError("rectangle sides must be positive")
    cap = _cap(default)
    if m * n > cap:
        raise CapExceeded(f"{m}x{n} has {m * n} cells; enumeration is capped at {cap} (set {CAP_ENV})")


# -- single configuration --------------------------------------------------

def naive_crossing_exists(cfg: Configuration, r: Rect, spec: CrossingSpec) -> bool:
    """Flood the matching cells reachable from the start side and look for the end side.

    Existence only: any reachable end-side cell means a crossing, since a
    path can always be cut down to touch each side once.
    """
    m, n = r
    if m > cfg.width or n > cfg.height or m < 1 or n < 1:
        raise ValueError("rectangle does not fit the configuration")
    want = spec.state is CellState.OCCUPIED
    lr = spec.orientation is Orientation.LEFT_RIGHT

    def matches(col, row):
        return 0 <= col < m and 0 <= row < n and cfg.is_occupied((col, row)) == want

    if lr:
        starts = [(0, row) for row in range(n)]
    else:
        starts = [(col, n - 1) for col in range(m)]
    stack = [c for c in starts if matches(*c)]
    seen = set(stack)
    while stack:
        col, row = stack.pop()
        if (lr and col == m - 1) or (not lr and row == 0):
            return True
        for nb in neighbors(Cell(col, row), spec.kind):
            if nb not in seen and matches(*nb):
                seen.add(nb)
                stack.append(nb)
    return False


# -- batches ----------------------------------------------------------------

def config_array(cfgs, m: int, n: int) -> np.ndarray:
    """Occupancy of the ``m x n`` corner of each configuration as ``[b, row, col]``."""
    out = np.zeros((len(cfgs), n, m), dtype=bool)
    for b, cfg in enumerate(cfgs):
        size = cfg.width * cfg.height
        raw = np.frombuffer(cfg.bits.to_bytes((size + 7) // 8, "little"), dtype=np.uint8)
        full = np.unpackbits(raw, bitorder="little")[:size].reshape(cfg.height, cfg.width)
        out[b] = full[:n, :m]
    return out


def index_array(m: int, n: int, start: int = 0, stop: int | None = None) -> np.ndarray:
    """Configurations ``start .. stop-1`` in integer order; bit ``row*m + col``."""
    stop = 1 << (m * n) if stop is None else stop
    idx = np.arange(start, stop, dtype=np.int64)
    bits = (idx[:, None] >> np.arange(m * n, dtype=np.int64)) & 1
    return bits.astype(bool).reshape(-1, n, m)


def _dilate(x: np.ndarray, star: bool) -> np.ndarray:
    g = x.copy()
    g[:, :, 1:] |= x[:, :, :-1]
    g[:, :, :-1] |= x[:, :, 1:]
    g[:, 1:, :] |= x[:, :-1, :]
    g[:, :-1, :] |= x[:, 1:, :]
    if star:
        g[:, 1:, 1:] |= x[:, :-1, :-1]
        g[:, 1:, :-1] |= x[:, :-1, 1:]
        g[:, :-1, 1:] |= x[:, 1:, :-1]
        g[:, :-1, :-1] |= x[:, 1:, 1:]
    return g


def naive_crossing_batch(occupied: np.ndarray, spec: CrossingSpec) -> np.ndarray:
    """Vectorised existence check over a ``(B, n, m)`` occupancy array."""
    cells = occupied if spec.state is CellState.OCCUPIED else ~occupied
    start = np.zeros_like(cells[0])
    end = np.zeros_like(cells[0])
    if spec.orientation is Orientation.LEFT_RIGHT:
        start[:, 0] = True
        end[:, -1] = True
    else:
        start[-1, :] = True
        end[0, :] = True
    star = spec.kind is AdjacencyKind.STAR
    reach = cells & start
    while True:
        grown = _dilate(reach, star) & cells
        if np.array_equal(grown, reach):
            break
        reach = grown
    return (reach & end).any(axis=(1, 2))


# -- enumeration ------------------------------------------------------------

def enumerate_configs(m: int, n: int, visitor: Callable[[int, Configuration], None]) -> None:
    """Call ``visitor(index, cfg)`` for all ``2**(m*n)`` configurations in integer order."""
    _check_cap(m, n, ENUMERATE_CAP)
    for bits in range(1 << (m * n)):
        visitor(bits, Configuration(m, n, bits))


def iter_configs(m: int, n: int) -> Iterator[Configuration]:
    _check_cap(m, n, ENUMERATE_CAP)
    return (Configuration(m, n, bits) for bits in range(1 << (m * n)))


_CHUNK = 1 << 16


def _chunk_events(job) -> dict[CrossingSpec, np.ndarray]:
    m, n, lo, hi, specs = job
    arr = index_array(m, n, lo, hi)
    return {s: naive_crossing_batch(arr, s) for s in specs}


def _event_table(m: int, n: int, specs, workers: int = 1) -> dict[CrossingSpec, np.ndarray]:
    """Event flags for every configuration, indexed by configuration number.

    Chunks of the index range may run in separate processes; results are
    placed by index, so the table does not depend on ``workers``.
    """
    total = 1 << (m * n)
    specs = list(specs)
    jobs = [(m, n, lo, min(total, lo + _CHUNK), specs) for lo in range(0, total, _CHUNK)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_chunk_events, jobs))
    else:
        parts = [_chunk_events(job) for job in jobs]
    return {s: np.concatenate([part[s] for part in parts]) for s in specs}


def _exclusive_pairs():
    done, pairs = set(), []
    for s in ALL_SPECS:
        if s not in done:
            pairs.append((s, s.dual()))
            done.update((s, s.dual()))
    return pairs


def exhaustive_exclusivity(m: int, n: int, workers: int = 1) -> ViolationList:
    """Every configuration must realise exactly one event of each dual pair."""
    _check_cap(m, n, EXHAUSTIVE_CAP)
    return violations_in(_event_table(m, n, ALL_SPECS, workers))


def violations_in(table: dict[CrossingSpec, np.ndarray]) -> ViolationList:
    found = ViolationList()
    for a, b in _exclusive_pairs():
        both = table[a] & table[b]
        neither = ~(table[a] | table[b])
        for idx in np.flatnonzero(both):
            found.append(Violation(int(idx), f"{a} and {b} both occur"))
        for idx in np.flatnonzero(neither):
            found.append(Violation(int(idx), f"neither {a} nor {b} occurs"))
    found.sort()
    return found


def crossing_count(m: int, n: int, spec: CrossingSpec) -> int:
    _check_cap(m, n, EXHAUSTIVE_CAP)
    return int(_event_table(m, n, [spec])[spec].sum())


def crossing_counts(m: int, n: int, workers: int = 1) -> dict[CrossingSpec, int]:
    _check_cap(m, n, EXHAUSTIVE_CAP)
    return {s: int(v.sum()) for s, v in _event_table(m, n, ALL_SPECS, workers).items()}


def event_table(m: int, n: int, workers: int = 1) -> dict[CrossingSpec, np.ndarray]:
    _check_cap(m, n, EXHAUSTIVE_CAP)
    return _event_table(m, n, ALL_SPECS, workers)


def random_config(m: int, n: int, p: float, seed: int) -> Configuration:
    """Bernoulli(p) configuration from Python's Mersenne Twister.

    ``random.Random(seed)`` is seeded from the integer's bytes and
    ``random()`` yields the same double sequence on every platform, so the
    output is portable. Cells are drawn in row-major order and a cell is
    occupied iff its draw is below ``p``.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability {p} outside [0, 1]")
    draw = random.Random(seed).random
    bits = 0
    for i in range(m * n):
        if draw() < p:
            bits |= 1 << i
    return Configuration(m, n, bits)


# -- envelope cross-check ---------------------------------------------------

def enumerate_plus_scycles(cells) -> list[tuple[Cell, ...]]:
    """All plus-connected S-cycles (as cell sequences) using only ``cells``.

    Each cycle is listed once, starting at its row-major least cell and
    continuing towards the smaller of its two neighbours on the cycle.
    """
    pool = CellSet(cells)
    order = {c: i for i, c in enumerate(pool)}
    nbrs = {c: [d for d in neighbors(c, AdjacencyKind.PLUS) if d in order] for c in pool}
    found = []
    for start in pool:
        s = order[start]
        path = [start]
        on_path = {start}

        def extend(cur):
            for nb in nbrs[cur]:
                if order[nb] < s:
                    continue
                if nb == start:
                    if len(path) >= 4 and order[path[1]] < order[path[-1]]:
                        found.append(tuple(path))
                    continue
                if nb in on_path:
                    continue
                path.append(nb)
                on_path.add(nb)
                extend(nb)
                path.pop()
                on_path.discard(nb)

        extend(start)
    return found


def surrounds(cfg: Configuration, comp, cycle_cells) -> bool:
    """Conditions (i)-(iii) for a candidate vacant S-cycle around ``comp``."""
    comp = CellSet(comp)
    lam = set()
    for c in comp:
        lam.update(d for d in neighbors(c, AdjacencyKind.STAR) if not cfg.is_occupied(d))
    if any(cfg.is_occupied(c) or c not in lam for c in cycle_cells):
        return False
    try:
        skel = Cycle(tuple(c.center for c in cycle_cells))
    except TopologyError:
        return False
    if any(skel.classify(c.center) is not Position.INSIDE for c in comp):
        return False
    members = set(cycle_cells)
    return all(skel.classify(c.center) is Position.INSIDE for c in lam if c not in members)


def dominated_by(other: Cycle, outer: Cycle) -> bool:
    """Every edge of ``other`` lies on or inside ``outer``."""
    return all(outer.classify(edge_midpoint(e)) is not Position.OUTSIDE for e in other.edges)


def star_clusters_in_box(size: int) -> list[CellSet]:
    """Star-connected cell sets whose bounding box fits ``size x size``,
    one per translation class, anchored so the box starts at ``(0, 0)``."""
    found = []
    for bits in range(1, 1 << (size * size)):
        cells = [Cell(i % size, i // size) for i in range(size * size) if bits >> i & 1]
        if min(c[0] for c in cells) or min(c[1] for c in cells):
            continue
        stack, seen = [cells[0]], {cells[0]}
        pool = set(cells)
        while stack:
            for nb in neighbors(stack.pop(), AdjacencyKind.STAR):
                if nb in pool and nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        if len(seen) == len(pool):
            found.append(CellSet(cells))
    return found
