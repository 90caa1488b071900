"""Corner-graph geometry: edges, cycles, interiors and outermost boundaries.

All points are in doubled coordinates (see :mod:`percodual.lattice`). A
:class:`Cycle` may live on the corner lattice (even-even vertices) or on the
centre lattice (odd-odd vertices, a dual cycle); the arithmetic is the same.
"""

from __future__ import annotations

import enum
from bisect import bisect_right
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lattice import (
    PLUS_OFFSETS,
    AdjacencyKind,
    Cell,
    CellSet,
    CornerPoint,
    is_connected,
    row_major,
)

GridEdge = tuple[CornerPoint, CornerPoint]


class TopologyError(ValueError):
    pass


def grid_edge(a: CornerPoint, b: CornerPoint) -> GridEdge:
    """Canonical undirected edge; raises unless ``a`` and ``b`` are grid-adjacent."""
    a, b = tuple(a), tuple(b)
    dx, dy = abs(a[0] - b[0]), abs(a[1] - b[1])
    if sorted((dx, dy)) != [0, 2]:
        raise TopologyError(f"{a} and {b} are not grid-adjacent")
    return (a, b) if a <= b else (b, a)


def edge_midpoint(e: GridEdge) -> CornerPoint:
    (ax, ay), (bx, by) = e
    return ((ax + bx) // 2, (ay + by) // 2)


def cell_edges(c: Cell) -> tuple[GridEdge, GridEdge, GridEdge, GridEdge]:
    """The four sides of a cell: bottom, right, top, left."""
    bl, br, tr, tl = c.corners()
    return (grid_edge(bl, br), grid_edge(br, tr), grid_edge(tl, tr), grid_edge(bl, tl))


def cells_of_edge(e: GridEdge) -> tuple[Cell, Cell]:
    """The two corner-lattice cells sharing edge ``e`` (below/left first)."""
    (ax, ay), (bx, by) = e
    if ax % 2 or ay % 2:
        raise TopologyError(f"{e} is not a corner-lattice edge")
    if ay == by:
        col = min(ax, bx) // 2
        return Cell(col, ay // 2 - 1), Cell(col, ay // 2)
    row = min(ay, by) // 2
    return Cell(ax // 2 - 1, row), Cell(ax // 2, row)


class Position(enum.Enum):
    INSIDE = "inside"
    ON = "on"
    OUTSIDE = "outside"


def _signed_area2(vs: Sequence[CornerPoint]) -> int:
    n = len(vs)
    return sum(vs[i][0] * vs[(i + 1) % n][1] - vs[(i + 1) % n][0] * vs[i][1] for i in range(n))


@dataclass(frozen=True, eq=False)
class Cycle:
    """Simple closed walk on a unit grid (step 2 in doubled coordinates).

    Vertices are stored counter-clockwise starting at the lowest, then
    leftmost vertex, so equal cycles have equal vertex tuples. Equality and
    hashing are by edge set.
    """

    vertices: tuple[CornerPoint, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False)

    def __post_init__(self):
        vs = tuple(tuple(v) for v in self.vertices)
        if len(vs) < 4:
            raise TopologyError("a cycle needs at least four edges")
        if len(set(vs)) != len(vs):
            raise TopologyError("cycle repeats a vertex")
        parity = (vs[0][0] % 2, vs[0][1] % 2)
        if parity[0] != parity[1] or any((x % 2, y % 2) != parity for x, y in vs):
            raise TopologyError("cycle vertices must all be even-even or all odd-odd")
        for i in range(len(vs)):
            grid_edge(vs[i], vs[(i + 1) % len(vs)])
        if _signed_area2(vs) < 0:
            vs = vs[::-1]
        start = min(range(len(vs)), key=lambda i: (vs[i][1], vs[i][0]))
        object.__setattr__(self, "vertices", vs[start:] + vs[:start])

    def __eq__(self, other):
        if not isinstance(other, Cycle):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __len__(self):
        return len(self.vertices)

    @property
    def parity(self) -> int:
        """0 for corner-lattice cycles, 1 for dual (centre-lattice) cycles."""
        return self.vertices[0][0] % 2

    @property
    def edges(self) -> tuple[GridEdge, ...]:
        vs = self.vertices
        return tuple(grid_edge(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    @property
    def directed_edges(self) -> tuple[tuple[CornerPoint, CornerPoint], ...]:
        """Counter-clockwise directed edges (interior on the left)."""
        vs = self.vertices
        return tuple((vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs)))

    @property
    def edge_set(self) -> frozenset[GridEdge]:
        if "edge_set" not in self._cache:
            self._cache["edge_set"] = frozenset(self.edges)
        return self._cache["edge_set"]

    @property
    def vertex_set(self) -> frozenset[CornerPoint]:
        if "vertex_set" not in self._cache:
            self._cache["vertex_set"] = frozenset(self.vertices)
        return self._cache["vertex_set"]

    @property
    def area2(self) -> int:
        """Twice the enclosed area in doubled units (always positive)."""
        return _signed_area2(self.vertices)

    def _crossings(self) -> dict[int, list[int]]:
        # lower y of each vertical edge -> sorted x positions
        if "crossings" not in self._cache:
            table = defaultdict(list)
            for (ax, ay), (bx, by) in self.edges:
                if ax == bx:
                    table[min(ay, by)].append(ax)
            self._cache["crossings"] = {k: sorted(v) for k, v in table.items()}
        return self._cache["crossings"]

    def _midpoints(self) -> frozenset[CornerPoint]:
        if "midpoints" not in self._cache:
            self._cache["midpoints"] = frozenset(edge_midpoint(e) for e in self.edges)
        return self._cache["midpoints"]

    def classify(self, p: CornerPoint) -> Position:
        p = tuple(p)
        if p in self.vertex_set or p in self._midpoints():
            return Position.ON
        px, py = p
        # Ray along +x at height py + 1/2: it meets the vertical edges whose
        # lower end is the lattice line at or just below py.
        low = py if (py - self.parity) % 2 == 0 else py - 1
        xs = self._crossings().get(low, ())
        hits = len(xs) - bisect_right(xs, px)
        return Position.INSIDE if hits % 2 else Position.OUTSIDE

    def interior_cells(self) -> CellSet:
        """Corner-lattice cells whose centres are inside (corner cycles only)."""
        if self.parity != 0:
            raise TopologyError("interior_cells needs a corner-lattice cycle")
        if "interior" not in self._cache:
            cells = []
            for low, xs in self._crossings().items():
                row = low // 2
                for i in range(0, len(xs), 2):
                    cells.extend(Cell(col, row) for col in range(xs[i] // 2, xs[i + 1] // 2))
            self._cache["interior"] = CellSet(cells)
        return self._cache["interior"]

    def translated(self, dx: int, dy: int) -> "Cycle":
        return Cycle(tuple((x + dx, y + dy) for x, y in self.vertices))


def cycle_from_edges(edges: Iterable[GridEdge]) -> Cycle:
    """Assemble a cycle from an unordered edge set; every vertex must have degree 2."""
    adj = defaultdict(list)
    edges = list(edges)
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    if not adj or any(len(v) != 2 for v in adj.values()):
        raise TopologyError("edge set is not a union of vertex-disjoint cycles")
    start = min(adj)
    order = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(order) != len(edges):
        raise TopologyError("edge set is not a single cycle")
    return Cycle(tuple(order))


def point_in_cycle(cyc: Cycle, p: CornerPoint) -> Position:
    return cyc.classify(p)


def edge_in_interior(cyc: Cycle, e: GridEdge) -> bool:
    return any(cyc.classify(v) is Position.INSIDE for v in e)


def cell_in_interior(cyc: Cycle, c: Cell) -> bool:
    return cyc.classify(Cell(*c).center) is Position.INSIDE


def component_edge_graph(comp: Iterable[Cell]) -> frozenset[GridEdge]:
    cells = list(comp)
    if not cells:
        raise TopologyError("component is empty")
    return frozenset(e for c in cells for e in cell_edges(Cell(*c)))


@dataclass(frozen=True)
class OutermostBoundary:
    cycles: tuple[Cycle, ...]
    pinch_points: frozenset[CornerPoint]

    @property
    def edges(self) -> frozenset[GridEdge]:
        return frozenset(e for c in self.cycles for e in c.edges)

    @property
    def vertices(self) -> list[CornerPoint]:
        """Distinct boundary vertices, row-major."""
        return sorted({v for c in self.cycles for v in c.vertices}, key=lambda p: (p[1], p[0]))

    def single(self) -> Cycle:
        if len(self.cycles) != 1:
            raise TopologyError(f"boundary has {len(self.cycles)} cycles, expected one")
        return self.cycles[0]


def exterior_cells(comp: Iterable[Cell]) -> set[Cell]:
    """Cells of the unbounded face of the closed union of ``comp``.

    Returns the non-component cells of the bounding box grown by one cell that
    are edge-connected to its border; corner contacts between component cells
    block passage.
    """
    comp = comp if isinstance(comp, CellSet) else CellSet(comp)
    cells = set(comp.unordered())
    c0, r0, c1, r1 = comp.bbox()
    c0, r0, c1, r1 = c0 - 1, r0 - 1, c1 + 1, r1 + 1
    border = [Cell(c, r0) for c in range(c0, c1 + 1)] + [Cell(c, r1) for c in range(c0, c1 + 1)]
    border += [Cell(c0, r) for r in range(r0, r1 + 1)] + [Cell(c1, r) for r in range(r0, r1 + 1)]
    seen = set(border)
    stack = list(seen)
    while stack:
        col, row = stack.pop()
        for dc, dr in PLUS_OFFSETS:
            nb = Cell(col + dc, row + dr)
            if nb in seen or nb in cells or not (c0 <= nb[0] <= c1 and r0 <= nb[1] <= r1):
                continue
            seen.add(nb)
            stack.append(nb)
    return seen


def _left(d):
    return (-d[1], d[0])


def _right(d):
    return (d[1], -d[0])


def outermost_boundary(comp: Iterable[Cell], kind: AdjacencyKind) -> OutermostBoundary:
    """Outer-face boundary of a connected cell set, split into cycles at pinch points.

    Boundary edges are oriented with the component on the left and traced
    preferring a left turn, then straight, then right. A left turn at a
    corner where two component cells touch diagonally keeps the walk on the
    same cell, so such corners separate distinct cycles.
    """
    cells = CellSet(comp)
    if not cells:
        raise TopologyError("component is empty")
    if not is_connected(cells, kind):
        raise TopologyError(f"component is not {kind.value}-connected")
    outside = exterior_cells(cells)
    succ_out: dict[CornerPoint, list[CornerPoint]] = defaultdict(list)
    for c in cells.unordered():
        bl, br, tr, tl = c.corners()
        col, row = c
        for (a, b), nb in (
            ((bl, br), (col, row - 1)),
            ((br, tr), (col + 1, row)),
            ((tr, tl), (col, row + 1)),
            ((tl, bl), (col - 1, row)),
        ):
            if nb in outside:
                succ_out[a].append(b)

    def step(a, b):
        d = ((b[0] - a[0]) // 2, (b[1] - a[1]) // 2)
        options = succ_out[b]
        for turn in (_left(d), d, _right(d)):
            nxt = (b[0] + 2 * turn[0], b[1] + 2 * turn[1])
            if nxt in options:
                return nxt
        raise TopologyError(f"boundary walk stuck at {b}")

    pending = sorted(((a, b) for a, bs in succ_out.items() for b in bs),
                     key=lambda e: (e[0][1], e[0][0], e[1][1], e[1][0]))
    used = set()
    cycles = []
    for first in pending:
        if first in used:
            continue
        walk = [first[0]]
        edge = first
        while True:
            used.add(edge)
            nxt = (edge[1], step(*edge))
            if nxt == first:
                break
            walk.append(edge[1])
            edge = nxt
        cycles.append(Cycle(tuple(walk)))
    cycles.sort(key=lambda c: (c.vertices[0][1], c.vertices[0][0]))
    counts = defaultdict(int)
    for cyc in cycles:
        for v in cyc.vertices:
            counts[v] += 1
    pinches = frozenset(v for v, k in counts.items() if k > 1)
    if kind is AdjacencyKind.PLUS and len(cycles) != 1:
        raise TopologyError("plus-connected component produced several boundary cycles")
    return OutermostBoundary(tuple(cycles), pinches)


def merge_cycle_square(cyc: Cycle, c: Cell) -> Cycle:
    """Absorb an exterior cell that shares an edge with ``cyc``.

    The result is the outer boundary of the region enclosed by ``cyc`` plus
    the closed cell, so its edges come from ``cyc`` and ``c`` only, and any
    pocket sealed off by the new cell ends up inside.
    """
    c = Cell(*c)
    if cyc.parity != 0:
        raise TopologyError("merge_cycle_square needs a corner-lattice cycle")
    if cyc.classify(c.center) is not Position.OUTSIDE:
        raise TopologyError(f"cell {tuple(c)} is already inside the cycle")
    shared_vertices = cyc.vertex_set.intersection(c.corners())
    if not shared_vertices:
        raise TopologyError(f"cell {tuple(c)} does not touch the cycle")
    if not cyc.edge_set.intersection(cell_edges(c)):
        raise TopologyError(f"cell {tuple(c)} meets the cycle only at corners")
    # Common case: the cell meets the cycle along one run of edges, so the
    # merged boundary is the symmetric difference of the two edge sets.
    merged = cyc.edge_set.symmetric_difference(cell_edges(c))
    degree = defaultdict(int)
    for a, b in merged:
        degree[a] += 1
        degree[b] += 1
    if all(k == 2 for k in degree.values()):
        try:
            return cycle_from_edges(merged)
        except TopologyError:
            pass  # two cycles: the cell closes a pocket
    return outermost_boundary(cyc.interior_cells().union([c]), AdjacencyKind.PLUS).single()


def cycle_of_cells(cells: Iterable[Cell]) -> Cycle:
    """Boundary cycle of a plus-connected cell set."""
    return outermost_boundary(row_major(cells), AdjacencyKind.PLUS).single()
