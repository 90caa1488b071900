"""Vacant plus-connected envelope of a finite star-connected occupied cluster.

Pipeline for a cluster ``comp``:

1. ``outermost_boundary(comp, STAR)`` -- cycles on the corner lattice.
2. ``boundary_vertex_dual_cover`` -- one dual square centred on every
   boundary vertex.
3. ``dual_outer_cycle`` -- the outer boundary of that plus-connected cover,
   which runs through cell centres.
4. ``maximize_skeleton`` -- replace pockets by exterior chords until none
   remain.

The cells centred on the final dual cycle form the envelope ``g_out``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import (
    AdjacencyKind,
    Cell,
    CellSet,
    Configuration,
    CellState,
    adjacent,
    cell_at_center,
    connected_component,
    neighbors,
)
from .topology import (
    Cycle,
    OutermostBoundary,
    Position,
    TopologyError,
    edge_in_interior,
    edge_midpoint,
    grid_edge,
    outermost_boundary,
)


class EnvelopeError(ValueError):
    pass


class MarginError(EnvelopeError):
    pass


@dataclass(frozen=True)
class SCycle:
    """Cyclic sequence of distinct cells, consecutive ones ``kind``-adjacent."""

    cells: tuple[Cell, ...]
    kind: AdjacencyKind

    def __post_init__(self):
        cells = tuple(Cell(*c) for c in self.cells)
        object.__setattr__(self, "cells", cells)
        least = 4 if self.kind is AdjacencyKind.PLUS else 3
        if len(cells) < least:
            raise EnvelopeError(f"{self.kind.value} S-cycle needs at least {least} cells")
        if len(set(cells)) != len(cells):
            raise EnvelopeError("S-cycle repeats a cell")
        for i, c in enumerate(cells):
            nxt = cells[(i + 1) % len(cells)]
            if not adjacent(c, nxt, self.kind):
                raise EnvelopeError(f"cells {tuple(c)} and {tuple(nxt)} are not {self.kind.value}-adjacent")

    def __len__(self):
        return len(self.cells)

    def cell_set(self) -> CellSet:
        return CellSet(self.cells)


@dataclass(frozen=True)
class DualSkeleton:
    skeleton: Cycle

    @property
    def cells(self) -> tuple[Cell, ...]:
        return tuple(cell_at_center(v) for v in self.skeleton.vertices)


@dataclass
class PropertyReport:
    checks: dict[str, bool] = field(default_factory=dict)
    failures: dict[str, list[str]] = field(default_factory=dict)

    def record(self, name: str, problems: list[str]) -> None:
        self.checks[name] = not problems
        if problems:
            self.failures[name] = problems

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "failures": dict(self.failures)}


@dataclass(frozen=True)
class EnvelopeResult:
    g_out: SCycle
    skeleton: DualSkeleton
    outer_boundary: Cycle
    lambda0: CellSet
    report: PropertyReport = field(compare=False)


def skeleton_of_scycle(s: SCycle) -> DualSkeleton:
    if s.kind is not AdjacencyKind.PLUS:
        raise EnvelopeError("only plus-connected S-cycles have a dual skeleton")
    try:
        cyc = Cycle(tuple(c.center for c in s.cells))
    except TopologyError as exc:
        raise EnvelopeError(f"centre walk is not a cycle: {exc}") from exc
    return DualSkeleton(cyc)


def scycle_of_skeleton(d: DualSkeleton) -> SCycle:
    return SCycle(d.cells, AdjacencyKind.PLUS)


def lambda0(cfg: Configuration, comp: CellSet) -> CellSet:
    """Vacant cells sharing at least a corner with a cell of ``comp``."""
    out = set()
    for c in comp:
        for nb in neighbors(c, AdjacencyKind.STAR):
            if not cfg.is_occupied(nb):
                out.add(nb)
    return CellSet(out)


def boundary_vertex_dual_cover(b: OutermostBoundary) -> CellSet:
    """Dual squares centred on the boundary vertices.

    A dual square centred on the corner ``(2c, 2r)`` is stored as cell
    ``(c, r)``; shifting that cell's corners by ``(-1, -1)`` gives the dual
    square's corners, which are cell centres.
    """
    verts = b.vertices
    if not verts:
        raise EnvelopeError("empty boundary")
    return CellSet(Cell(x // 2, y // 2) for x, y in verts)


def dual_outer_cycle(cover: CellSet) -> DualSkeleton:
    try:
        boundary = outermost_boundary(cover, AdjacencyKind.PLUS)
    except TopologyError as exc:
        raise EnvelopeError(f"dual cover is not plus-connected: {exc}") from exc
    return DualSkeleton(boundary.single().translated(-1, -1))


def exterior_chords(cyc: Cycle) -> list[tuple]:
    """Lattice edges joining two cycle vertices and lying outside the cycle."""
    found = []
    verts = cyc.vertex_set
    for v in sorted(verts, key=lambda p: (p[1], p[0])):
        for step in ((2, 0), (0, 2)):
            w = (v[0] + step[0], v[1] + step[1])
            if w not in verts:
                continue
            e = grid_edge(v, w)
            if e in cyc.edge_set:
                continue
            if cyc.classify(edge_midpoint(e)) is Position.OUTSIDE:
                found.append(e)
    return found


def add_chord(cyc: Cycle, chord) -> Cycle:
    """Close the arc that, together with ``chord``, encloses the old cycle."""
    vs = cyc.vertices
    i, j = sorted((vs.index(chord[0]), vs.index(chord[1])))
    first = Cycle(vs[i:j + 1])
    second = Cycle(vs[j:] + vs[:i + 1])
    return first if first.area2 > second.area2 else second


def maximize_skeleton(d: DualSkeleton) -> DualSkeleton:
    cyc = d.skeleton
    while True:
        chords = exterior_chords(cyc)
        if not chords:
            return DualSkeleton(cyc)
        cyc = add_chord(cyc, chords[0])


def _check_component(cfg: Configuration, comp: CellSet) -> None:
    if not comp:
        raise EnvelopeError("component is empty")
    for c in comp:
        if not cfg.is_occupied(c):
            raise EnvelopeError(f"cell {tuple(c)} of the component is not occupied")
    first = next(iter(comp))
    if connected_component(cfg, first, AdjacencyKind.STAR, CellState.OCCUPIED) != comp:
        raise EnvelopeError("cells do not form a whole star-connected occupied cluster")


def check_margin(cfg: Configuration, comp: CellSet, margin: int = 2) -> None:
    c0, r0, c1, r1 = comp.bbox()
    if c0 - margin < 0 or r0 - margin < 0 or c1 + margin >= cfg.width or r1 + margin >= cfg.height:
        raise MarginError(
            f"component too close to window boundary: need {margin} free cells around "
            f"bounding box {(c0, r0, c1, r1)} in a {cfg.width}x{cfg.height} window"
        )


def surrounding_vacant_scycle(cfg: Configuration, comp) -> EnvelopeResult:
    comp = CellSet(comp)
    _check_component(cfg, comp)
    check_margin(cfg, comp)
    boundary = outermost_boundary(comp, AdjacencyKind.STAR)
    skeleton = maximize_skeleton(dual_outer_cycle(boundary_vertex_dual_cover(boundary)))
    g_out = scycle_of_skeleton(skeleton)
    outer = outermost_boundary(g_out.cells, AdjacencyKind.PLUS).single()
    partial = EnvelopeResult(g_out, skeleton, outer, lambda0(cfg, comp), PropertyReport())
    report = verify_envelope(cfg, comp, partial)
    return EnvelopeResult(g_out, skeleton, outer, partial.lambda0, report)


def verify_envelope(cfg: Configuration, comp, res: EnvelopeResult) -> PropertyReport:
    """Check the four envelope properties; failures name the offending cell or edge."""
    comp = CellSet(comp)
    report = PropertyReport()
    lam0 = lambda0(cfg, comp)
    cells = res.g_out.cells
    skel = res.skeleton.skeleton

    report.record("i_vacant_in_lambda0", [
        f"cell {tuple(c)} is {'occupied' if cfg.is_occupied(c) else 'not in lambda0'}"
        for c in cells if cfg.is_occupied(c) or c not in lam0
    ])

    problems = []
    if tuple(cell_at_center(v) for v in skel.vertices) != cells:
        problems.append("skeleton vertices are not the g_out cell centres in order")
    try:
        boundary = outermost_boundary(cells, AdjacencyKind.PLUS)
        outer = boundary.single()
    except TopologyError as exc:
        problems.append(f"outer boundary of g_out: {exc}")
    else:
        if outer != res.outer_boundary:
            problems.append("outer boundary differs from the recorded one")
        problems += [f"cell {tuple(c)} not inside outer boundary"
                     for c in cells if outer.classify(c.center) is not Position.INSIDE]
        problems += [f"skeleton edge {e} not inside outer boundary"
                     for e in skel.edges if not edge_in_interior(outer, e)]
    report.record("ii_single_outer_boundary", problems)

    members = set(cells)
    report.record("iii_encloses_component", [
        f"component cell {tuple(c)} not inside skeleton"
        for c in comp if skel.classify(c.center) is not Position.INSIDE
    ] + [
        f"lambda0 cell {tuple(c)} neither on nor inside skeleton"
        for c in lam0 if c not in members and skel.classify(c.center) is not Position.INSIDE
    ])

    report.record("iv_no_exterior_chord", [f"exterior chord {e}" for e in exterior_chords(skel)])
    return report
