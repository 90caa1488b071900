"""Cell grid model: states, adjacency and connected components.

Geometry lives on a doubled integer lattice. Cell ``(col, row)`` covers the
corner rectangle ``[2col, 2col+2] x [2row, 2row+2]`` and has its centre at
``(2col+1, 2row+1)``, so cell corners are even-even points and centres are
odd-odd points. Everything outside a :class:`Configuration` window is vacant.
"""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

CornerPoint = tuple[int, int]


class ParseError(ValueError):
    """Raised for malformed grid text."""


class Cell(NamedTuple):
    col: int
    row: int

    @property
    def center(self) -> CornerPoint:
        return (2 * self.col + 1, 2 * self.row + 1)

    def corners(self) -> tuple[CornerPoint, CornerPoint, CornerPoint, CornerPoint]:
        """Corners in counter-clockwise order starting at the lower left."""
        x, y = 2 * self.col, 2 * self.row
        return ((x, y), (x + 2, y), (x + 2, y + 2), (x, y + 2))

    def shifted(self, dc: int, dr: int) -> "Cell":
        return Cell(self.col + dc, self.row + dr)


def cell_at_center(p: CornerPoint) -> Cell:
    x, y = p
    if x % 2 != 1 or y % 2 != 1:
        raise ValueError(f"{p} is not a cell centre (odd-odd) point")
    return Cell((x - 1) // 2, (y - 1) // 2)


class CellState(enum.Enum):
    OCCUPIED = "occupied"
    VACANT = "vacant"

    def flipped(self) -> "CellState":
        return CellState.VACANT if self is CellState.OCCUPIED else CellState.OCCUPIED


class AdjacencyKind(enum.Enum):
    STAR = "star"
    PLUS = "plus"

    def other(self) -> "AdjacencyKind":
        return AdjacencyKind.PLUS if self is AdjacencyKind.STAR else AdjacencyKind.STAR


# E, N, W, S then NE, NW, SW, SE. This order is the tie-break everywhere.
PLUS_OFFSETS = ((1, 0), (0, 1), (-1, 0), (0, -1))
STAR_OFFSETS = PLUS_OFFSETS + ((1, 1), (-1, 1), (-1, -1), (1, -1))


def offsets(kind: AdjacencyKind) -> tuple[tuple[int, int], ...]:
    return PLUS_OFFSETS if kind is AdjacencyKind.PLUS else STAR_OFFSETS


def neighbors(c: Cell, kind: AdjacencyKind) -> list[Cell]:
    col, row = c
    return [Cell(col + dc, row + dr) for dc, dr in offsets(kind)]


def adjacent(a: Cell, b: Cell, kind: AdjacencyKind) -> bool:
    dc, dr = abs(a[0] - b[0]), abs(a[1] - b[1])
    if kind is AdjacencyKind.PLUS:
        return dc + dr == 1
    return max(dc, dr) == 1


def row_major(cells: Iterable[Cell]) -> list[Cell]:
    return sorted((Cell(*c) for c in cells), key=lambda c: (c[1], c[0]))


class CellSet(frozenset):
    """Immutable, duplicate-free set of cells iterated in row-major order."""

    def __new__(cls, cells: Iterable[Cell] = ()):
        return super().__new__(cls, (Cell(*c) for c in cells))

    def __iter__(self) -> Iterator[Cell]:
        return iter(row_major(super().__iter__()))

    def __repr__(self) -> str:
        return f"CellSet({list(self)!r})"

    def unordered(self) -> Iterator[Cell]:
        """Iterate without sorting, for callers that do not care about order."""
        return super().__iter__()

    def bbox(self) -> tuple[int, int, int, int]:
        """``(col_min, row_min, col_max, row_max)``; inclusive."""
        if not self:
            raise ValueError("empty cell set has no bounding box")
        cols = [c[0] for c in super().__iter__()]
        rows = [c[1] for c in super().__iter__()]
        return min(cols), min(rows), max(cols), max(rows)

    def shifted(self, dc: int, dr: int) -> "CellSet":
        return CellSet(Cell(c + dc, r + dr) for c, r in super().__iter__())

    def union(self, *others: Iterable[Cell]) -> "CellSet":
        return CellSet(frozenset.union(self, *(CellSet(o) for o in others)))


@dataclass(frozen=True)
class Configuration:
    """A ``width x height`` window of cells; bit ``row*width + col`` set means occupied."""

    width: int
    height: int
    bits: int = 0
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError("configuration dimensions must be positive")
        if self.bits < 0 or self.bits >> (self.width * self.height):
            raise ValueError("occupancy bits exceed the window")

    @classmethod
    def from_cells(cls, width: int, height: int, occupied: Iterable[Cell]) -> "Configuration":
        bits = 0
        for col, row in occupied:
            if not (0 <= col < width and 0 <= row < height):
                raise ValueError(f"cell {(col, row)} outside {width}x{height} window")
            bits |= 1 << (row * width + col)
        return cls(width, height, bits)

    @classmethod
    def vacant(cls, width: int, height: int) -> "Configuration":
        return cls(width, height, 0)

    @classmethod
    def full(cls, width: int, height: int) -> "Configuration":
        return cls(width, height, (1 << (width * height)) - 1)

    def in_bounds(self, c: Cell) -> bool:
        return 0 <= c[0] < self.width and 0 <= c[1] < self.height

    def is_occupied(self, c: Cell) -> bool:
        col, row = c
        if not (0 <= col < self.width and 0 <= row < self.height):
            return False
        return bool(self.bits >> (row * self.width + col) & 1)

    def state(self, c: Cell) -> CellState:
        return CellState.OCCUPIED if self.is_occupied(c) else CellState.VACANT

    def cells(self) -> Iterator[Cell]:
        for row in range(self.height):
            for col in range(self.width):
                yield Cell(col, row)

    def occupied_cells(self) -> CellSet:
        return CellSet(c for c in self.cells() if self.is_occupied(c))

    def rows(self) -> list[list[bool]]:
        """Occupancy as ``rows[row][col]``."""
        w = self.width
        return [[bool(self.bits >> (r * w + c) & 1) for c in range(w)] for r in range(self.height)]

    def with_state(self, c: Cell, state: CellState) -> "Configuration":
        if not self.in_bounds(c):
            raise ValueError(f"cell {tuple(c)} outside window")
        bit = 1 << (c[1] * self.width + c[0])
        bits = self.bits | bit if state is CellState.OCCUPIED else self.bits & ~bit
        return Configuration(self.width, self.height, bits)

    def rotated(self) -> "Configuration":
        """Rotate 90 degrees counter-clockwise: cell ``(c, r)`` moves to ``(H-1-r, c)``."""
        return Configuration.from_cells(
            self.height, self.width,
            (rotate_cell(c, self.height) for c in self.occupied_cells()),
        )

    def embedded(self, width: int, height: int, dc: int, dr: int) -> "Configuration":
        """Copy into a larger window with the occupied cells shifted by ``(dc, dr)``."""
        return Configuration.from_cells(width, height, self.occupied_cells().shifted(dc, dr))


def rotate_cell(c: Cell, height: int) -> Cell:
    return Cell(height - 1 - c[1], c[0])


def parse_configuration(text: str) -> Configuration:
    """Parse ``#``/``.`` grid text; the last line is row 0."""
    lines = text.splitlines()
    while lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ParseError("line 1: empty grid")
    width = len(lines[0])
    if width == 0:
        raise ParseError("line 1: empty line")
    occupied = []
    height = len(lines)
    for lineno, line in enumerate(lines, start=1):
        if len(line) != width:
            raise ParseError(f"line {lineno}: expected {width} characters, got {len(line)}")
        row = height - lineno
        for col, ch in enumerate(line):
            if ch == "#":
                occupied.append(Cell(col, row))
            elif ch != ".":
                raise ParseError(f"line {lineno}: illegal character {ch!r} at column {col + 1}")
    return Configuration.from_cells(width, height, occupied)


def format_configuration(cfg: Configuration) -> str:
    rows = cfg.rows()
    return "".join(
        "".join("#" if x else "." for x in rows[r]) + "\n" for r in reversed(range(cfg.height))
    )


def complement(cfg: Configuration) -> Configuration:
    mask = (1 << (cfg.width * cfg.height)) - 1
    return Configuration(cfg.width, cfg.height, ~cfg.bits & mask)


def connected_component(
    cfg: Configuration,
    seed: Cell,
    kind: AdjacencyKind,
    state: CellState,
    bounds: tuple[int, int, int, int] | None = None,
) -> CellSet:
    """Maximal ``state`` cluster containing ``seed`` under ``kind`` adjacency.

    Vacant clusters are unbounded in principle, so traversal is clipped to
    ``bounds`` (inclusive ``col_min, row_min, col_max, row_max``; defaults to
    the window) grown by one cell.
    """
    seed = Cell(*seed)
    if cfg.state(seed) is not state:
        raise ValueError(f"seed {tuple(seed)} is {cfg.state(seed).value}, expected {state.value}")
    if bounds is None:
        bounds = (0, 0, cfg.width - 1, cfg.height - 1)
    c0, r0, c1, r1 = bounds[0] - 1, bounds[1] - 1, bounds[2] + 1, bounds[3] + 1
    want = state is CellState.OCCUPIED
    seen = {seed}
    queue = deque([seed])
    steps = offsets(kind)
    while queue:
        col, row = queue.popleft()
        for dc, dr in steps:
            nb = Cell(col + dc, row + dr)
            if nb in seen or not (c0 <= nb[0] <= c1 and r0 <= nb[1] <= r1):
                continue
            if cfg.is_occupied(nb) == want:
                seen.add(nb)
                queue.append(nb)
    return CellSet(seen)


def is_connected(cells: Iterable[Cell], kind: AdjacencyKind) -> bool:
    pool = set(cells.unordered()) if isinstance(cells, CellSet) else set(Cell(*c) for c in cells)
    if not pool:
        return False
    start = next(iter(pool))
    seen = {start}
    stack = [start]
    steps = offsets(kind)
    while stack:
        col, row = stack.pop()
        for dc, dr in steps:
            nb = Cell(col + dc, row + dr)
            if nb in pool and nb not in seen:
                seen.add(nb)
                stack.append(nb)
    return len(seen) == len(pool)
