"""Crossing duality and vacant envelopes for site percolation on the square grid."""

from .crossings import (
    ALL_SPECS,
    CrossingSpec,
    CrossingWitness,
    Orientation,
    Rect,
    construct_vacant_plus_td,
    construct_vacant_star_td,
    crossing_exists,
    duality_report,
    find_crossing,
    validate_witness,
)
from .dualization import surrounding_vacant_scycle, verify_envelope
from .lattice import (
    AdjacencyKind,
    Cell,
    CellSet,
    CellState,
    Configuration,
    connected_component,
    format_configuration,
    parse_configuration,
)
from .topology import Cycle, outermost_boundary

__all__ = [
    "ALL_SPECS", "AdjacencyKind", "Cell", "CellSet", "CellState", "Configuration",
    "CrossingSpec", "CrossingWitness", "Cycle", "Orientation", "Rect",
    "connected_component", "construct_vacant_plus_td", "construct_vacant_star_td",
    "crossing_exists", "duality_report", "find_crossing", "format_configuration",
    "outermost_boundary", "parse_configuration", "surrounding_vacant_scycle",
    "validate_witness", "verify_envelope",
]
