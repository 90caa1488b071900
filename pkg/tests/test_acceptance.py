"""Acceptance gate: one test per criterion, summarised at the end of the run."""

import json
import math
import os
import random
import subprocess
import sys
import time

import pytest

from percodual.cli import main
from percodual.crossings import (
    ALL_SPECS,
    LR_PLUS_OCC,
    LR_STAR_OCC,
    TD_STAR_VAC,
    CrossingSpec,
    PreconditionError,
    Rect,
    construct_vacant_plus_td,
    construct_vacant_star_td,
    crossing_exists,
    find_crossing,
    rotate_spec,
    validate_witness,
)
from percodual.dualization import MarginError, lambda0, surrounding_vacant_scycle
from percodual.lattice import AdjacencyKind, CellState, Configuration, complement, connected_component
from percodual.oracle import (
    config_array,
    crossing_count,
    dominated_by,
    enumerate_plus_scycles,
    event_table,
    exhaustive_exclusivity,
    naive_crossing_batch,
    naive_crossing_exists,
    random_config,
    star_clusters_in_box,
    surrounds,
)
from percodual.topology import Cycle

STAR = AdjacencyKind.STAR


def clusters_with_margin(cfg):
    done = set()
    for c in cfg.occupied_cells():
        if c in done:
            continue
        comp = connected_component(cfg, c, STAR, CellState.OCCUPIED)
        done.update(comp)
        try:
            yield comp, surrounding_vacant_scycle(cfg, comp)
        except MarginError:
            continue


@pytest.mark.criterion(1, "exhaustive exclusivity for m, n in 1..4")
def test_exhaustive_exclusivity():
    start = time.perf_counter()
    violations = {(m, n): exhaustive_exclusivity(m, n) for m in range(1, 5) for n in range(1, 5)}
    elapsed = time.perf_counter() - start
    bad = {k: v[:3] for k, v in violations.items() if v}
    print(f"exclusivity: 16 rectangles, {sum(len(v) for v in violations.values())} violations, {elapsed:.1f}s")
    assert not bad
    assert elapsed < 60


@pytest.mark.criterion(2, "detector agrees with the naive oracle")
def test_detector_oracle_agreement():
    mismatches = []
    checked = 0
    for m in range(1, 13):
        for n in range(1, 12 // m + 1):
            r = Rect(m, n)
            for bits in range(1 << (m * n)):
                cfg = Configuration(m, n, bits)
                for spec in ALL_SPECS:
                    if (find_crossing(cfg, r, spec) is not None) != naive_crossing_exists(cfg, r, spec):
                        mismatches.append((m, n, bits, spec.key))
                checked += 1
    rng = random.Random(20240601)
    r = Rect(10, 10)
    for p in (0.3, 0.5, 0.7):
        for _ in range(10):
            cfgs = [random_config(10, 10, p, rng.getrandbits(64)) for _ in range(10_000)]
            arr = config_array(cfgs, 10, 10)
            for spec in ALL_SPECS:
                want = naive_crossing_batch(arr, spec)
                for cfg, w in zip(cfgs, want):
                    if (find_crossing(cfg, r, spec) is not None) != bool(w):
                        mismatches.append((10, 10, cfg.bits, spec.key))
            checked += len(cfgs)
    print(f"agreement: {checked} configurations x 8 events, {len(mismatches)} mismatches")
    assert not mismatches[:5]


@pytest.mark.criterion(3, "constructive vacant top-down witnesses")
def test_constructive_witnesses():
    failures, built = [], 0

    def attempt(cfg, r):
        nonlocal built
        for fn, blocker in ((construct_vacant_plus_td, LR_STAR_OCC), (construct_vacant_star_td, LR_PLUS_OCC)):
            if crossing_exists(cfg, r, blocker):
                continue
            try:
                w = fn(cfg, r)
            except (PreconditionError, RuntimeError, ValueError) as exc:
                failures.append((cfg.bits, fn.__name__, str(exc)))
                continue
            if validate_witness(r, w, cfg):
                built += 1
            else:
                failures.append((cfg.bits, fn.__name__, "invalid witness"))

    for bits in range(512):
        attempt(Configuration(3, 3, bits), Rect(3, 3))
    rng = random.Random(77)
    for i in range(10_000):
        attempt(random_config(8, 8, (0.4, 0.5, 0.6)[i % 3], rng.getrandbits(64)), Rect(8, 8))
    print(f"constructions: {built} witnesses built and validated, {len(failures)} failures")
    assert not failures[:5]


@pytest.mark.criterion(4, "envelope golden, random clusters and brute-force dominance")
def test_envelope(golden):
    start = time.perf_counter()
    pinned = json.loads((golden / "single_cell.envelope.json").read_text())
    cfg = Configuration.from_cells(5, 5, [(2, 2)])
    res = surrounding_vacant_scycle(cfg, [(2, 2)])
    assert [list(c) for c in res.g_out.cells] == pinned["g_out"]
    assert [list(v) for v in res.skeleton.skeleton.vertices] == pinned["skeleton"]
    assert (len(res.g_out), len(res.skeleton.skeleton.vertices), len(res.outer_boundary.edges)) == (8, 8, 12)

    failures, seen, seed = [], 0, 0
    while seen < 200:
        cfg = random_config(16, 16, 0.35, seed)
        seed += 1
        for comp, res in clusters_with_margin(cfg):
            if seen == 200:
                break
            seen += 1
            if not res.report.ok:
                failures.append((cfg.bits, res.report.failures))

    rivals = 0
    clusters = star_clusters_in_box(4)
    for comp in clusters:
        comp = comp.shifted(2, 2)
        cfg = Configuration.from_cells(8, 8, comp)
        res = surrounding_vacant_scycle(cfg, comp)
        if not res.report.ok:
            failures.append((cfg.bits, res.report.failures))
        outer = res.skeleton.skeleton
        for cells in enumerate_plus_scycles(lambda0(cfg, comp)):
            if not surrounds(cfg, comp, cells):
                continue
            rivals += 1
            if not dominated_by(Cycle(tuple(c.center for c in cells)), outer):
                failures.append((cfg.bits, f"S-cycle {cells} escapes the envelope"))
    elapsed = time.perf_counter() - start
    print(f"envelope: 200 random clusters, {len(clusters)} boxed clusters, "
          f"{rivals} surrounding S-cycles, {len(failures)} failures, {elapsed:.1f}s")
    assert not failures[:5]
    assert elapsed < 300


@pytest.mark.criterion(5, "counting fixtures and dual pair sums for mn <= 16")
def test_counting():
    assert crossing_count(2, 2, LR_PLUS_OCC) == 7
    assert crossing_count(2, 2, TD_STAR_VAC) == 9
    bad, rects = [], 0
    for m in range(1, 17):
        for n in range(1, 16 // m + 1):
            table = event_table(m, n)
            rects += 1
            for spec in ALL_SPECS:
                total = int(table[spec].sum()) + int(table[spec.dual()].sum())
                if total != 1 << (m * n):
                    bad.append((m, n, spec.key, total))
    print(f"counting: {rects} rectangles, {len(bad)} pair sums off")
    assert not bad


@pytest.mark.criterion(6, "complement, rotation and translation symmetry")
def test_symmetry():
    rng = random.Random(4242)
    bad = []
    detectors = (
        lambda c, r, s: find_crossing(c, r, s) is not None,
        crossing_exists,
        naive_crossing_exists,
    )
    for _ in range(10_000):
        m, n = rng.randint(1, 8), rng.randint(1, 8)
        cfg = random_config(m, n, rng.random(), rng.getrandbits(64))
        r, rr = Rect(m, n), Rect(n, m)
        inv, rot = complement(cfg), cfg.rotated()
        for spec in ALL_SPECS:
            flipped = CrossingSpec(spec.orientation, spec.kind, spec.state.flipped())
            for detect in detectors:
                here = detect(cfg, r, spec)
                if detect(inv, r, flipped) != here or detect(rot, rr, rotate_spec(spec)) != here:
                    bad.append((m, n, cfg.bits, spec.key))

    moved = 0
    seed = 0
    while moved < 100:
        cfg = random_config(12, 12, 0.35, 10_000 + seed)
        seed += 1
        for comp, res in clusters_with_margin(cfg):
            if moved == 100:
                break
            dc, dr = rng.randint(1, 6), rng.randint(1, 6)
            big = cfg.embedded(12 + dc, 12 + dr, dc, dr)
            other = surrounding_vacant_scycle(big, comp.shifted(dc, dr))
            same = (
                other.g_out.cells == tuple(c.shifted(dc, dr) for c in res.g_out.cells)
                and other.skeleton.skeleton == res.skeleton.skeleton.translated(2 * dc, 2 * dr)
                and other.outer_boundary == res.outer_boundary.translated(2 * dc, 2 * dr)
                and other.report.checks == res.report.checks
            )
            if not same:
                bad.append(("translate", cfg.bits, dc, dr))
            moved += 1
    print(f"symmetry: 10000 configurations, 100 translated envelopes, {len(bad)} failures")
    assert not bad[:5]


def _mc(capsys, *args):
    assert main(["mc", *args]) == 0
    return json.loads(capsys.readouterr().out)


@pytest.mark.criterion(7, "Monte Carlo identity and statistical check")
def test_monte_carlo(capsys):
    for rect, p, trials, seed in (("3x5", "0.2", "2000", "1"), ("6x4", "0.59", "3000", "2"), ("1x1", "0.5", "10", "3")):
        data = _mc(capsys, "--rect", rect, "--p", p, "--trials", trials, "--seed", seed)
        assert all(pair["estimate_sum"] == 1.0 and pair["identity_exact"] for pair in data["dual_pairs"])
    start = time.perf_counter()
    trials = 100_000
    data = _mc(capsys, "--rect", "8x8", "--p", "0.5", "--trials", str(trials), "--seed", "2024")
    elapsed = time.perf_counter() - start
    pair = data["lr_plus_plus_lr_star_occupied"]
    band = 4 / math.sqrt(trials)
    print(f"monte carlo: identity exact, LR+(O)+LR*(O) = {pair:.5f} (band +/- {band:.5f}), {elapsed:.1f}s")
    assert all(p["estimate_sum"] == 1.0 for p in data["dual_pairs"])
    assert abs(pair - 1) <= band
    assert elapsed < 120


def _cli(args, hashseed):
    env = dict(os.environ, PYTHONHASHSEED=str(hashseed))
    done = subprocess.run([sys.executable, "-m", "percodual", *args], capture_output=True, env=env)
    return done.returncode, done.stdout


@pytest.mark.criterion(8, "byte-identical CLI output across runs and worker counts")
def test_determinism(golden, tmp_path):
    grid = tmp_path / "g.txt"
    cfg = random_config(9, 7, 0.45, 31)
    grid.write_text("".join("".join("#" if x else "." for x in row) + "\n" for row in reversed(cfg.rows())))
    pair_grid = str(golden / "diagonal_pair.grid")
    commands = [
        ["check", "--grid", str(grid)],
        ["check", "--grid", str(grid), "--rect", "5x4"],
        ["envelope", "--grid", pair_grid, "--cell", "3,3", "--svg", "{out}"],
        ["render", "--grid", str(grid), "--svg", "{out}"],
        ["render", "--grid", pair_grid, "--td", "--star", "--vacant", "--svg", "{out}"],
    ]
    for flags in (["--lr"], ["--td"]):
        for kind in ("--plus", "--star"):
            for state in ("--occupied", "--vacant"):
                commands.append(["witness", "--grid", str(grid), *flags, kind, state])
    for workers in ("1", "4"):
        commands.append(["enumerate", "--rect", "4x4", "--workers", workers])
        commands.append(["mc", "--rect", "6x6", "--p", "0.5", "--trials", "20000", "--seed", "5",
                         "--workers", workers])

    outputs = {}
    differing = []
    for i, cmd in enumerate(commands):
        runs = []
        for hashseed in (0, 1):
            out = tmp_path / f"out{i}_{hashseed}.svg"
            code, stdout = _cli([a.replace("{out}", str(out)) for a in cmd], hashseed)
            runs.append((code, stdout, out.read_bytes() if out.exists() else b""))
        if runs[0] != runs[1]:
            differing.append(cmd)
        outputs[tuple(a for a in cmd if a not in ("1", "4"))] = outputs.get(
            tuple(a for a in cmd if a not in ("1", "4")), []) + [runs[0]]
    for key, runs in outputs.items():
        if len(set(runs)) != 1:
            differing.append(list(key) + ["(workers)"])
    assert all(runs[0][0] in (0, 3) for runs in outputs.values())
    print(f"determinism: {len(commands)} invocations, {len(differing)} differing")
    assert not differing
