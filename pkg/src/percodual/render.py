"""Deterministic SVG drawings of configurations, envelopes and crossings."""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import Configuration

LAYERS = ("cells", "boundary", "skeleton", "witness")

PALETTE = {
    "occupied": "#555555",
    "vacant": "#ffffff",
    "grid": "#bbbbbb",
    "rect": "#000000",
    "envelope": "#1f4fbf",
    "boundary": "#000000",
    "skeleton": "#1f4fbf",
    "witness": "#c03020",
}


@dataclass(frozen=True)
class RenderSpec:
    cell_px: int = 24
    layers: frozenset = frozenset(LAYERS)
    palette: dict = field(default_factory=lambda: dict(PALETTE), hash=False)

    def __post_init__(self):
        if self.cell_px <= 0:
            raise ValueError("cell size must be positive")
        unknown = set(self.layers) - set(LAYERS)
        if unknown:
            raise ValueError(f"unknown layers: {', '.join(sorted(unknown))}")


@dataclass
class Scene:
    """What to draw on top of the configuration."""

    cfg: Configuration
    rect: tuple[int, int] | None = None
    envelopes: list = field(default_factory=list)  # EnvelopeResult
    witness: tuple = ()


def render_svg(scene: Scene, spec: RenderSpec = RenderSpec()) -> str:
    cfg = scene.cfg
    px = spec.cell_px
    pad = 2 * px  # envelopes may reach one cell past the window
    width = cfg.width * px + 2 * pad
    height = cfg.height * px + 2 * pad
    pal = spec.palette

    def sx(x2: int) -> str:
        # x2 is a doubled coordinate
        return _num(pad + x2 * px / 2)

    def sy(y2: int) -> str:
        return _num(pad + (2 * cfg.height - y2) * px / 2)

    def cell_rect(c, **attrs) -> str:
        x, y = sx(2 * c[0]), sy(2 * c[1] + 2)
        extra = "".join(f' {k.replace("_", "-")}="{v}"' for k, v in attrs.items())
        return f'<rect x="{x}" y="{y}" width="{px}" height="{px}"{extra}/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "<defs>",
        f'<pattern id="hatch" patternUnits="userSpaceOnUse" width="6" height="6" '
        f'patternTransform="rotate(45)"><line x1="0" y1="0" x2="0" y2="6" '
        f'stroke="{pal["witness"]}" stroke-width="2"/></pattern>',
        "</defs>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="{pal["vacant"]}"/>',
        '<g class="cells">',
    ]
    show = spec.layers
    for c in cfg.cells():
        occupied = cfg.is_occupied(c) and "cells" in show
        out.append(cell_rect(c, fill=pal["occupied"] if occupied else pal["vacant"],
                             stroke=pal["grid"], stroke_width=1))
    out.append("</g>")
    if scene.rect is not None:
        m, n = scene.rect
        out.append(f'<rect class="rect" x="{sx(0)}" y="{sy(2 * n)}" width="{m * px}" '
                   f'height="{n * px}" fill="none" stroke="{pal["rect"]}" stroke-width="2"/>')

    if "boundary" in show:
        for env in scene.envelopes:
            out.append('<g class="envelope">')
            for c in env.g_out.cells:
                out.append(cell_rect(c, fill="none", stroke=pal["envelope"], stroke_width=2,
                                     stroke_dasharray="2 3"))
            out.append("</g>")
            pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in env.outer_boundary.vertices)
            out.append(f'<polygon class="outer-boundary" points="{pts}" fill="none" '
                       f'stroke="{pal["boundary"]}" stroke-width="1.5"/>')
    if "skeleton" in show:
        for env in scene.envelopes:
            vs = env.skeleton.skeleton.vertices
            pts = " ".join(f"{sx(x)},{sy(y)}" for x, y in vs + vs[:1])
            out.append(f'<polyline class="skeleton" points="{pts}" fill="none" '
                       f'stroke="{pal["skeleton"]}" stroke-width="2" stroke-dasharray="6 4"/>')
    if "witness" in show and scene.witness:
        out.append('<g class="witness">')
        for c in scene.witness:
            out.append(cell_rect(c, fill="url(#hatch)", stroke=pal["witness"], stroke_width=1))
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _num(v: float) -> str:
    return str(int(v)) if v == int(v) else f"{v:.1f}"
