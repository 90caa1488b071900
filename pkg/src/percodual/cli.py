"""``perco-dual`` command line.

Exit codes: 0 success, 1 usage or input error, 2 an internal property check
failed, 3 the requested crossing does not exist.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import oracle
from .crossings import (
    TD_PLUS_VAC,
    TD_STAR_VAC,
    CrossingSpec,
    Orientation,
    PreconditionError,
    Rect,
    construct_vacant_plus_td,
    construct_vacant_star_td,
    duality_report,
    find_crossing,
)
from .dualization import EnvelopeError, check_margin, surrounding_vacant_scycle
from .lattice import (
    AdjacencyKind,
    Cell,
    CellState,
    Configuration,
    ParseError,
    connected_component,
    parse_configuration,
)
from .montecarlo import run_monte_carlo
from .render import LAYERS, RenderSpec, Scene, render_svg

EXIT_OK, EXIT_INPUT, EXIT_VIOLATION, EXIT_ABSENT = 0, 1, 2, 3


def emit(obj) -> None:
    click.echo(json.dumps(obj, indent=2))


def cells_json(cells) -> list:
    return [[c[0], c[1]] for c in cells]


def load_grid(path: str) -> Configuration:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise click.ClickException(f"cannot read {path}: {exc.strerror}")
    try:
        return parse_configuration(text)
    except ParseError as exc:
        raise click.ClickException(f"{path}: {exc}")


def parse_rect(value: str | None, cfg: Configuration | None = None) -> Rect:
    if value is None:
        if cfg is None:
            raise click.ClickException("--rect MxN is required")
        return Rect(cfg.width, cfg.height)
    try:
        m, n = (int(v) for v in value.lower().split("x"))
    except ValueError:
        raise click.ClickException(f"--rect expects MxN, got {value!r}")
    if m < 1 or n < 1:
        raise click.ClickException("--rect sides must be positive")
    if cfg is not None and (m > cfg.width or n > cfg.height):
        raise click.ClickException(f"rectangle {m}x{n} does not fit the {cfg.width}x{cfg.height} grid")
    return Rect(m, n)


def parse_cell(value: str) -> Cell:
    try:
        col, row = (int(v) for v in value.split(","))
    except ValueError:
        raise click.ClickException(f"--cell expects COL,ROW, got {value!r}")
    return Cell(col, row)


def spec_from_flags(lr: bool, plus: bool, occupied: bool) -> CrossingSpec:
    return CrossingSpec(
        Orientation.LEFT_RIGHT if lr else Orientation.TOP_DOWN,
        AdjacencyKind.PLUS if plus else AdjacencyKind.STAR,
        CellState.OCCUPIED if occupied else CellState.VACANT,
    )


def envelope_json(cfg: Configuration, seed: Cell, comp, res) -> dict:
    return {
        "coordinate_system": "doubled",
        "seed": list(seed),
        "component": cells_json(comp),
        "g_out": cells_json(res.g_out.cells),
        "skeleton": cells_json(res.skeleton.skeleton.vertices),
        "outer_boundary": cells_json(res.outer_boundary.vertices),
        "lambda0": cells_json(res.lambda0),
        "report": res.report.to_json(),
    }


def compute_envelope(cfg: Configuration, seed: Cell):
    if not cfg.in_bounds(seed):
        raise click.ClickException(f"seed cell {tuple(seed)} is outside the grid")
    if not cfg.is_occupied(seed):
        raise click.ClickException(f"seed cell {tuple(seed)} is vacant; the envelope needs an occupied seed")
    comp = connected_component(cfg, seed, AdjacencyKind.STAR, CellState.OCCUPIED)
    try:
        return comp, surrounding_vacant_scycle(cfg, comp)
    except EnvelopeError as exc:
        raise click.ClickException(str(exc))


def write_svg(path: str, svg: str) -> None:
    try:
        Path(path).write_text(svg)
    except OSError as exc:
        raise click.ClickException(f"cannot write {path}: {exc.strerror}")


grid_option = click.option("--grid", "grid", required=True, metavar="FILE",
                           help="Grid text: '#' occupied, '.' vacant, last line is row 0.")
rect_option = click.option("--rect", "rect", metavar="MxN", help="Rectangle size; defaults to the whole grid.")


def spec_options(f):
    f = click.option("--occupied/--vacant", default=True, help="State of the crossing cells.")(f)
    f = click.option("--plus/--star", default=True, help="Adjacency of consecutive cells.")(f)
    f = click.option("--lr/--td", default=True, help="Left-right or top-down.")(f)
    return f


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Crossing duality and vacant envelopes for site percolation on the square grid."""


@cli.command()
@grid_option
@rect_option
def check(grid, rect):
    """Report all eight crossing events and both exclusivity verdicts."""
    cfg = load_grid(grid)
    report = duality_report(cfg, parse_rect(rect, cfg))
    emit(report.to_json())
    return EXIT_OK if report.ok else EXIT_VIOLATION


@cli.command()
@grid_option
@rect_option
@spec_options
def witness(grid, rect, lr, plus, occupied):
    """Print a crossing path, or null (exit 3) when none exists.

    Vacant top-down crossings are built by the duality constructions when
    the blocking occupied left-right crossing is absent.
    """
    cfg = load_grid(grid)
    r = parse_rect(rect, cfg)
    spec = spec_from_flags(lr, plus, occupied)
    w = None
    try:
        if spec == TD_PLUS_VAC:
            w = construct_vacant_plus_td(cfg, r)
        elif spec == TD_STAR_VAC:
            w = construct_vacant_star_td(cfg, r)
        else:
            w = find_crossing(cfg, r, spec)
    except PreconditionError:
        w = None
    out = {"spec": spec.key, "rect": list(r), "cells": None if w is None else cells_json(w.cells)}
    if w is not None:
        out["method"] = w.provenance.get("method", "bfs")
    emit(out)
    return EXIT_OK if w is not None else EXIT_ABSENT


@cli.command()
@grid_option
@click.option("--cell", "cell", required=True, metavar="COL,ROW", help="An occupied cell of the cluster.")
@click.option("--svg", "svg", metavar="PATH", help="Also draw the envelope to this SVG file.")
def envelope(grid, cell, svg):
    """Outermost vacant plus S-cycle around the star cluster of --cell."""
    cfg = load_grid(grid)
    seed = parse_cell(cell)
    comp, res = compute_envelope(cfg, seed)
    emit(envelope_json(cfg, seed, comp, res))
    if svg:
        write_svg(svg, render_svg(Scene(cfg, envelopes=[res])))
    return EXIT_OK if res.report.ok else EXIT_VIOLATION


@cli.command("enumerate")
@click.option("--rect", "rect", required=True, metavar="MxN")
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def enumerate_cmd(rect, workers):
    """Count each crossing event over all 2^(m*n) configurations.

    Capped at 20 cells; the PERCO_ENUM_CAP environment variable overrides
    the cap.
    """
    r = parse_rect(rect)
    try:
        table = oracle.event_table(r.m, r.n, workers)
    except oracle.CapExceeded as exc:
        raise click.ClickException(str(exc))
    violations = oracle.violations_in(table)
    counts = {s: int(v.sum()) for s, v in table.items()}
    pairs, seen = [], set()
    for s in counts:
        if s in seen:
            continue
        d = s.dual()
        seen.update((s, d))
        pairs.append({"events": [s.key, d.key], "sum": counts[s] + counts[d],
                      "violations": int((table[s] == table[d]).sum())})
    emit({
        "rect": list(r),
        "configurations": 1 << (r.m * r.n),
        "counts": {s.key: v for s, v in counts.items()},
        "dual_pairs": pairs,
        "violations": len(violations),
    })
    return EXIT_OK if violations.ok else EXIT_VIOLATION


@cli.command()
@click.option("--rect", "rect", required=True, metavar="MxN")
@click.option("--p", "p", type=click.FloatRange(0.0, 1.0), required=True, help="Occupation probability.")
@click.option("--trials", type=click.IntRange(min=1), default=10000, show_default=True)
@click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=0, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True)
def mc(rect, p, trials, seed, workers):
    """Monte Carlo estimates of all eight crossing probabilities."""
    r = parse_rect(rect)
    result = run_monte_carlo(r.m, r.n, p, trials, seed, workers)
    out = result.to_json()
    emit(out)
    return EXIT_OK if all(pair["identity_exact"] for pair in out["dual_pairs"]) else EXIT_VIOLATION


@cli.command()
@grid_option
@rect_option
@spec_options
@click.option("--layers", default=",".join(LAYERS), show_default=True,
              help="Comma-separated subset of: " + ", ".join(LAYERS) + ".")
@click.option("--cell", "cell", metavar="COL,ROW",
              help="Draw only this cluster's envelope (default: every cluster with room for one).")
@click.option("--cell-px", type=click.IntRange(min=1), default=24, show_default=True)
@click.option("--svg", "svg", required=True, metavar="PATH", help="Output SVG file.")
def render(grid, rect, lr, plus, occupied, layers, cell, cell_px, svg):
    """Draw the grid with envelopes, skeletons and a crossing path."""
    cfg = load_grid(grid)
    r = parse_rect(rect, cfg)
    chosen = frozenset(x.strip() for x in layers.split(",") if x.strip())
    try:
        spec = RenderSpec(cell_px=cell_px, layers=chosen)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    envelopes = []
    if chosen & {"boundary", "skeleton"}:
        if cell is not None:
            envelopes.append(compute_envelope(cfg, parse_cell(cell))[1])
        else:
            envelopes = _all_envelopes(cfg)
    path = ()
    if "witness" in chosen:
        found = find_crossing(cfg, r, spec_from_flags(lr, plus, occupied))
        path = found.cells if found else ()
    write_svg(svg, render_svg(Scene(cfg, r, envelopes, path), spec))
    return EXIT_OK


def _all_envelopes(cfg: Configuration) -> list:
    done, out = set(), []
    for c in cfg.occupied_cells():
        if c in done:
            continue
        comp = connected_component(cfg, c, AdjacencyKind.STAR, CellState.OCCUPIED)
        done.update(comp)
        try:
            check_margin(cfg, comp)
        except EnvelopeError:
            continue
        out.append(surrounding_vacant_scycle(cfg, comp))
    return out


def main(argv=None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="perco-dual", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except click.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_INPUT
    return rv if isinstance(rv, int) else EXIT_OK


def run() -> None:
    sys.exit(main())
