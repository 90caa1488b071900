"""Left-right and top-down crossings of the rectangle ``[0, m] x [0, n]``.

The rectangle holds cells ``(0..m-1) x (0..n-1)`` of a configuration. A cell
touches the left side iff ``col == 0``, the right side iff ``col == m-1``,
the top iff ``row == n-1`` and the bottom iff ``row == 0``.

Detection runs a breadth-first search on bitboards: each row of the
rectangle is packed into ``m`` bits followed by one always-clear guard bit,
so shifting by 1 / ``m+1`` / ``m`` / ``m+2`` moves a set of cells to its
E/N/NW/NE neighbours without wrapping.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .dualization import surrounding_vacant_scycle
from .lattice import (
    AdjacencyKind,
    Cell,
    CellSet,
    CellState,
    Configuration,
    adjacent,
    offsets,
)
from .topology import (
    Cycle,
    grid_edge,
    merge_cycle_square,
    outermost_boundary,
)


class Orientation(enum.Enum):
    LEFT_RIGHT = "lr"
    TOP_DOWN = "td"

    def other(self) -> "Orientation":
        return Orientation.TOP_DOWN if self is Orientation.LEFT_RIGHT else Orientation.LEFT_RIGHT


class Rect(NamedTuple):
    m: int
    n: int

    def contains(self, c: Cell) -> bool:
        return 0 <= c[0] < self.m and 0 <= c[1] < self.n


class CrossingSpec(NamedTuple):
    orientation: Orientation
    kind: AdjacencyKind
    state: CellState

    @property
    def key(self) -> str:
        return f"{self.orientation.value}_{self.kind.value}_{self.state.value}"

    def dual(self) -> "CrossingSpec":
        """The event that occurs exactly when this one does not."""
        return CrossingSpec(self.orientation.other(), self.kind.other(), self.state.flipped())

    def __str__(self):
        sym = "+" if self.kind is AdjacencyKind.PLUS else "*"
        return f"{self.orientation.value.upper()}{sym}({self.state.value[0].upper()})"


ALL_SPECS = tuple(
    CrossingSpec(o, k, s)
    for o in Orientation
    for k in (AdjacencyKind.PLUS, AdjacencyKind.STAR)
    for s in CellState
)

LR_PLUS_OCC = CrossingSpec(Orientation.LEFT_RIGHT, AdjacencyKind.PLUS, CellState.OCCUPIED)
LR_STAR_OCC = CrossingSpec(Orientation.LEFT_RIGHT, AdjacencyKind.STAR, CellState.OCCUPIED)
TD_PLUS_VAC = CrossingSpec(Orientation.TOP_DOWN, AdjacencyKind.PLUS, CellState.VACANT)
TD_STAR_VAC = CrossingSpec(Orientation.TOP_DOWN, AdjacencyKind.STAR, CellState.VACANT)


class PreconditionError(ValueError):
    """The occupied crossing that rules out the requested vacant one exists."""

    def __init__(self, message: str, crossing: "CrossingWitness"):
        super().__init__(message)
        self.crossing = crossing


class ConstructionError(RuntimeError):
    """A step of a duality construction did not produce the expected structure."""


def touches_start(c: Cell, r: Rect, o: Orientation) -> bool:
    return c[0] == 0 if o is Orientation.LEFT_RIGHT else c[1] == r.n - 1


def touches_end(c: Cell, r: Rect, o: Orientation) -> bool:
    return c[0] == r.m - 1 if o is Orientation.LEFT_RIGHT else c[1] == 0


@dataclass(frozen=True)
class CrossingWitness:
    cells: tuple[Cell, ...]
    spec: CrossingSpec
    provenance: dict = field(default_factory=dict, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(Cell(*c) for c in self.cells))


def _fits(cfg: Configuration, r: Rect) -> None:
    if r.m < 1 or r.n < 1 or r.m > cfg.width or r.n > cfg.height:
        raise ValueError(f"rectangle {r.m}x{r.n} does not fit a {cfg.width}x{cfg.height} configuration")


def _board(cfg: Configuration, r: Rect):
    key = ("board", r.m, r.n)
    if key not in cfg._cache:
        m, n, w = r.m, r.n, cfg.width
        stride = m + 1
        row_bits = (1 << m) - 1
        occ = full = 0
        for row in range(n):
            occ |= ((cfg.bits >> (row * w)) & row_bits) << (row * stride)
            full |= row_bits << (row * stride)
        left = sum(1 << (row * stride) for row in range(n))
        sides = {
            Orientation.LEFT_RIGHT: (left, left << (m - 1)),
            Orientation.TOP_DOWN: (row_bits << ((n - 1) * stride), row_bits),
        }
        cfg._cache[key] = (occ, full, stride, sides)
    return cfg._cache[key]


def _grow(x: int, s: int, star: bool) -> int:
    g = x | x << 1 | x >> 1 | x << s | x >> s
    if star:
        g |= x << (s + 1) | x << (s - 1) | x >> (s + 1) | x >> (s - 1)
    return g


def _prepare(cfg, r, spec):
    _fits(cfg, r)
    occ, full, stride, sides = _board(cfg, r)
    mask = occ if spec.state is CellState.OCCUPIED else full & ~occ
    start, end = sides[spec.orientation]
    return mask, stride, start, end


def crossing_exists(cfg: Configuration, r: Rect, spec: CrossingSpec) -> bool:
    mask, stride, start, end = _prepare(cfg, Rect(*r), spec)
    star = spec.kind is AdjacencyKind.STAR
    reach = start & mask
    while reach:
        if reach & end:
            return True
        grown = _grow(reach, stride, star) & mask
        if grown == reach:
            return False
        reach = grown
    return False


def find_crossing(cfg: Configuration, r: Rect, spec: CrossingSpec) -> Optional[CrossingWitness]:
    """Shortest crossing realising ``spec``, or ``None``.

    Breadth-first layers grow from every matching start-side cell at once.
    The path ends at the lowest row-major end-side cell of the first layer
    that reaches the end side and is traced back choosing, at each step, the
    first neighbour in E, N, W, S, NE, NW, SW, SE order that lies in the
    previous layer. A shortest path from the start side to the end side
    touches each side only at its extremities.
    """
    r = Rect(*r)
    mask, stride, start, end = _prepare(cfg, r, spec)
    star = spec.kind is AdjacencyKind.STAR
    layer = start & mask
    if not layer:
        return None
    layers = [layer]
    seen = layer
    while not layer & end:
        layer = _grow(layer, stride, star) & mask & ~seen
        if not layer:
            return None
        seen |= layer
        layers.append(layer)
    hit = layer & end
    idx = (hit & -hit).bit_length() - 1
    col, row = idx % stride, idx // stride
    path = [Cell(col, row)]
    steps = offsets(spec.kind)
    for prev in reversed(layers[:-1]):
        for dc, dr in steps:
            c, rr = col + dc, row + dr
            if 0 <= c < r.m and 0 <= rr < r.n and prev >> (rr * stride + c) & 1:
                col, row = c, rr
                break
        else:  # pragma: no cover - layers are built from these very moves
            raise ConstructionError("breadth-first trace lost its predecessor")
        path.append(Cell(col, row))
    path.reverse()
    return CrossingWitness(tuple(path), spec, {"method": "bfs"})


def trim_to_sides(cells, r: Rect, o: Orientation) -> tuple[Cell, ...]:
    """Cut a side-to-side path so only its first cell touches the start side
    and only its last touches the end side."""
    cells = list(cells)
    end = next(i for i, c in enumerate(cells) if touches_end(c, r, o))
    begin = max(i for i in range(end + 1) if touches_start(cells[i], r, o))
    return tuple(cells[begin:end + 1])


def validate_witness(r: Rect, w: CrossingWitness, cfg: Configuration) -> bool:
    r = Rect(*r)
    cells, spec = w.cells, w.spec
    if not cells or len(set(cells)) != len(cells):
        return False
    if not all(r.contains(c) and cfg.state(c) is spec.state for c in cells):
        return False
    if not all(adjacent(a, b, spec.kind) for a, b in zip(cells, cells[1:])):
        return False
    o = spec.orientation
    if not touches_start(cells[0], r, o) or not touches_end(cells[-1], r, o):
        return False
    if any(touches_start(c, r, o) for c in cells[1:]):
        return False
    return not any(touches_end(c, r, o) for c in cells[:-1])


class Label(enum.Enum):
    ONE = 1
    ZERO = 0
    UNLABELED = None


@dataclass(frozen=True)
class LabelField:
    """Labels grown from the column of cells just left of the rectangle.

    The column ``col == -1, row in 0..n-1`` is labelled ONE, as is every
    occupied cell of the rectangle joined to it through occupied rectangle
    cells. Unlabelled cells adjacent to a ONE cell are ZERO; they may lie
    outside the rectangle.
    """

    rect: Rect
    kind: AdjacencyKind
    labels: dict

    def label(self, c: Cell) -> Label:
        return self.labels.get(Cell(*c), Label.UNLABELED)

    def ones(self) -> CellSet:
        return CellSet(c for c, v in self.labels.items() if v is Label.ONE)

    def zeros(self) -> CellSet:
        return CellSet(c for c, v in self.labels.items() if v is Label.ZERO)

    def halo(self) -> tuple[Cell, ...]:
        """Halo cells from the top row down."""
        return tuple(Cell(-1, row) for row in reversed(range(self.rect.n)))


def label_from_left(cfg: Configuration, r: Rect, kind: AdjacencyKind) -> LabelField:
    r = Rect(*r)
    _fits(cfg, r)
    steps = offsets(kind)
    ones = {Cell(-1, row) for row in range(r.n)}
    stack = list(ones)
    while stack:
        col, row = stack.pop()
        for dc, dr in steps:
            nb = Cell(col + dc, row + dr)
            if nb not in ones and r.contains(nb) and cfg.is_occupied(nb):
                ones.add(nb)
                stack.append(nb)
    labels = {c: Label.ONE for c in ones}
    for col, row in ones:
        for dc, dr in steps:
            nb = Cell(col + dc, row + dr)
            if nb not in labels:
                labels[nb] = Label.ZERO
    return LabelField(r, kind, labels)


def _on_top_line(c: Cell, r: Rect) -> bool:
    return c[1] in (r.n - 1, r.n)


def _on_bottom_line(c: Cell, r: Rect) -> bool:
    return c[1] in (0, -1)


def _require_absent(cfg, r, spec, what):
    blocker = find_crossing(cfg, r, spec)
    if blocker is not None:
        raise PreconditionError(f"{spec} crossing exists, so no {what} crossing can", blocker)


def _finish(cells, cfg, r, spec, provenance):
    w = CrossingWitness(tuple(cells), spec, provenance)
    if not validate_witness(r, w, cfg):
        raise ConstructionError(f"constructed {spec} witness {list(map(tuple, cells))} is invalid")
    return w


def construct_vacant_plus_td(cfg: Configuration, r: Rect) -> CrossingWitness:
    """Vacant plus-connected top-down crossing read off the vacant envelope of
    the star cluster grown from the left halo.

    Requires that no occupied star-connected left-right crossing exists.
    """
    r = Rect(*r)
    _fits(cfg, r)
    _require_absent(cfg, r, LR_STAR_OCC, "vacant plus top-down")
    field_ = label_from_left(cfg, r, AdjacencyKind.STAR)
    c_left = field_.ones()

    # Labels as a configuration: ONE is occupied, everything else vacant.
    # Shift so the halo cluster keeps a two-cell margin inside the window.
    dc, dr = 3, 2
    label_cfg = Configuration.from_cells(r.m + 5, r.n + 4, c_left.shifted(dc, dr))
    env = surrounding_vacant_scycle(label_cfg, c_left.shifted(dc, dr))
    if not env.report.ok:
        raise ConstructionError(f"envelope of the halo cluster failed checks: {env.report.failures}")
    ring = [c.shifted(-dc, -dr) for c in env.g_out.cells]

    # The envelope runs down column -2 from row n to row -1 in one stretch.
    run = [i for i, c in enumerate(ring) if c[0] == -2]
    expected = [Cell(-2, row) for row in range(r.n, -2, -1)]
    if len(run) != r.n + 2:
        raise ConstructionError(f"envelope has {len(run)} cells in column -2, expected {r.n + 2}")
    k = len(ring)
    top = ring.index(Cell(-2, r.n))
    down = [ring[(top + i) % k] for i in range(r.n + 2)]
    if down != expected:
        ring = ring[::-1]
        top = ring.index(Cell(-2, r.n))
        down = [ring[(top + i) % k] for i in range(r.n + 2)]
        if down != expected:
            raise ConstructionError("column -2 cells are not consecutive on the envelope")
    rest = [ring[(top + r.n + 2 + i) % k] for i in range(k - r.n - 2)]
    rest.reverse()  # now starts beside the top of the run

    j1 = max(i for i, c in enumerate(rest) if _on_top_line(c, r))
    j2 = next(i for i in range(j1, len(rest)) if _on_bottom_line(rest[i], r))
    return _finish(rest[j1:j2 + 1], cfg, r, TD_PLUS_VAC, {
        "method": "envelope",
        "halo": [tuple(c) for c in field_.halo()],
        "left_run": [tuple(c) for c in expected],
        "ring": [tuple(c) for c in rest],
    })


def _right_cell(a, b) -> Cell:
    """Cell on the right of the directed corner edge ``a -> b``."""
    dx, dy = (b[0] - a[0]) // 2, (b[1] - a[1]) // 2
    mx, my = (a[0] + b[0]) // 2, (a[1] + b[1]) // 2
    return Cell((mx + dy - 1) // 2, (my - dx - 1) // 2)


def _left_cell(a, b) -> Cell:
    dx, dy = (b[0] - a[0]) // 2, (b[1] - a[1]) // 2
    mx, my = (a[0] + b[0]) // 2, (a[1] + b[1]) // 2
    return Cell((mx - dy - 1) // 2, (my + dx - 1) // 2)


def _arc_from(cyc: Cycle, src, dst, avoid) -> list:
    """Directed edges of ``cyc`` walked from ``src`` to ``dst``, leaving ``src``
    in the direction that does not step onto ``avoid``."""
    vs = list(cyc.vertices)
    i = vs.index(src)
    k = len(vs)
    if vs[(i + 1) % k] == avoid:
        vs.reverse()
        i = vs.index(src)
    out = []
    while vs[i % k] != dst:
        out.append((vs[i % k], vs[(i + 1) % k]))
        i += 1
    return out


def _loop_erase(cells):
    out, where = [], {}
    for c in cells:
        if c in where:
            cut = where[c] + 1
            for dropped in out[cut:]:
                del where[dropped]
            del out[cut:]
        else:
            where[c] = len(out)
            out.append(c)
    return out


def construct_vacant_star_td(cfg: Configuration, r: Rect) -> CrossingWitness:
    """Vacant star-connected top-down crossing from merging the ZERO cells along
    the outer boundary of the plus cluster grown from the left halo.

    Requires that no occupied plus-connected left-right crossing exists.
    """
    r = Rect(*r)
    _fits(cfg, r)
    _require_absent(cfg, r, LR_PLUS_OCC, "vacant star top-down")
    field_ = label_from_left(cfg, r, AdjacencyKind.PLUS)
    boundary = outermost_boundary(field_.ones(), AdjacencyKind.PLUS).single()

    top, bottom = (0, 2 * r.n), (0, 0)
    halo_path = [top, (-2, 2 * r.n)] + [(-2, 2 * y) for y in range(r.n - 1, -1, -1)] + [bottom]
    halo_edges = {grid_edge(a, b) for a, b in zip(halo_path, halo_path[1:])}
    if not halo_edges <= boundary.edge_set:
        raise ConstructionError("left side of the halo is not on the cluster boundary")

    # Boundary minus the halo side, walked from (0, n) down to (0, 0).
    rim = _arc_from(boundary, top, bottom, avoid=(-2, 2 * r.n))
    # Walking against the counter-clockwise orientation puts the cluster on the right.
    attached = [_left_cell(a, b) for a, b in rim]
    rim_edges = [grid_edge(a, b) for a, b in rim]

    d = boundary
    merges = 0
    while True:
        j = next((j for j, e in enumerate(rim_edges) if e in d.edge_set), None)
        if j is None:
            break
        d = merge_cycle_square(d, attached[j])
        merges += 1
    if not halo_edges <= d.edge_set:
        raise ConstructionError("merging disturbed the halo side")

    attached_set = set(attached)
    track = _arc_from(d, top, bottom, avoid=(-2, 2 * r.n))
    squares = []
    for a, b in track:
        # Interior lies on the right of a clockwise walk.
        z = _right_cell(a, b)
        if z not in attached_set:
            raise ConstructionError(f"final cycle edge {(a, b)} does not bound an attached zero cell")
        if not squares or squares[-1] != z:
            squares.append(z)

    k1 = max(i for i, c in enumerate(squares) if _on_top_line(c, r))
    k2 = next(i for i in range(k1, len(squares)) if _on_bottom_line(squares[i], r))
    path = _loop_erase(squares[k1:k2 + 1])
    return _finish(path, cfg, r, TD_STAR_VAC, {
        "method": "merge",
        "halo": [tuple(c) for c in field_.halo()],
        "attached": [tuple(c) for c in dict.fromkeys(attached)],
        "merges": merges,
        "track": [tuple(c) for c in squares],
    })


@dataclass(frozen=True)
class DualityReport:
    rect: Rect
    events: dict  # spec key -> bool

    @property
    def exclusivity_i(self) -> bool:
        return self.events[LR_PLUS_OCC.key] != self.events[TD_STAR_VAC.key]

    @property
    def exclusivity_ii(self) -> bool:
        return self.events[LR_STAR_OCC.key] != self.events[TD_PLUS_VAC.key]

    @property
    def ok(self) -> bool:
        return self.exclusivity_i and self.exclusivity_ii

    def to_json(self) -> dict:
        out = {"rect": [self.rect.m, self.rect.n]}
        out.update(self.events)
        out["exclusivity_i"] = self.exclusivity_i
        out["exclusivity_ii"] = self.exclusivity_ii
        return out


def duality_report(cfg: Configuration, r: Rect) -> DualityReport:
    r = Rect(*r)
    return DualityReport(r, {s.key: find_crossing(cfg, r, s) is not None for s in ALL_SPECS})


def rotate_spec(spec: CrossingSpec) -> CrossingSpec:
    return CrossingSpec(spec.orientation.other(), spec.kind, spec.state)
