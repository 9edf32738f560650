"""Plain-text SVG output for networks and indicator scatters."""
from __future__ import annotations

import math
from pathlib import Path
from xml.sax.saxutils import escape

from .experiment import front, read_records
from .generators import Scenario, density_mixture
from .graph import SpatialNetwork

SIZE = 600
PAD = 20
STROKE_PER_DIAMETER = 12.0
MIN_STROKE = 0.3
COLORS = {"complete": "#d62728", "tree": "#1f77b4", "slime": "#2ca02c"}


def _n(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def _header(width: int, height: int) -> list[str]:
    return [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
    ]


def _write(lines: list[str], out_path: str | Path) -> None:
    lines.append("</svg>")
    Path(out_path).write_text("\n".join(lines) + "\n")


def network_svg(
    net: SpatialNetwork,
    scenario: Scenario | None = None,
    show_density: bool = False,
) -> str:
    span = SIZE - 2 * PAD

    def px(x: float, y: float) -> tuple[str, str]:
        return _n(PAD + x * span), _n(PAD + (1.0 - y) * span)

    lines = _header(SIZE, SIZE)
    if show_density:
        if scenario is None:
            raise ValueError("the density layer needs a scenario")
        raster = density_mixture(scenario)
        res = raster.shape[0]
        top = float(raster.max()) or 1.0
        cell = span / res
        lines.append('<g id="density">')
        for i in range(res):
            for j in range(res):
                shade = 255 - int(round(180 * float(raster[i, j]) / top))
                lines.append(
                    f'<rect x="{_n(PAD + j * cell)}" y="{_n(PAD + (res - 1 - i) * cell)}" '
                    f'width="{_n(cell)}" height="{_n(cell)}" '
                    f'fill="rgb({shade},{shade},{shade})"/>'
                )
        lines.append("</g>")
    lines.append('<g id="edges" stroke="#1f4e9c" stroke-linecap="round">')
    for e in sorted(net.edges, key=lambda e: e.key):
        a, b = net.nodes[e.src], net.nodes[e.dst]
        (x1, y1), (x2, y2) = px(a.x, a.y), px(b.x, b.y)
        width = max(STROKE_PER_DIAMETER * e.diameter, MIN_STROKE)
        lines.append(
            f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke-width="{_n(width)}"/>'
        )
    lines.append("</g>")
    lines.append('<g id="centers" fill="#d62728">')
    for nid in net.center_ids():
        n = net.nodes[nid]
        cx, cy = px(n.x, n.y)
        lines.append(f'<circle cx="{cx}" cy="{cy}" r="5"/>')
    lines.append("</g>")
    return "\n".join(lines)


def render_svg(
    net: SpatialNetwork,
    out_path: str | Path,
    scenario: Scenario | None = None,
    show_density: bool = False,
) -> None:
    """Edges with width proportional to diameter, centers as red dots."""
    _write(network_svg(net, scenario, show_density).split("\n"), out_path)


def _ticks(lo: float, hi: float, count: int = 5) -> list[float]:
    if hi <= lo:
        return [lo]
    raw = (hi - lo) / count
    step = 10 ** math.floor(math.log10(raw))
    for mult in (1, 2, 5, 10):
        if raw <= mult * step:
            step *= mult
            break
    start = math.ceil(lo / step) * step
    out = []
    v = start
    while v <= hi + 1e-12:
        out.append(round(v, 10))
        v += step
    return out


def render_pareto_svg(csv_path: str | Path, out_path: str | Path, show_front: bool = False) -> int:
    """Scatter of (length_rel, perf_rel) from an experiment CSV, coloured by generator.

    Slime runs are sized by gamma; invalid runs are skipped. With
    ``show_front`` the non-dominated points get a black ring. Returns the
    number of plotted points.
    """
    records = read_records(csv_path)
    pts = [r for r in records if r.valid]
    front_records = front(records) if show_front else []
    width, height = 720, 540
    left, right, top, bottom = 70, 20, 20, 60
    xs = [r.length_rel for r in pts] or [0.0, 1.0]
    ys = [r.perf_rel for r in pts] or [1.0, 2.0]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 - x0 < 1e-9:
        x0, x1 = x0 - 0.5, x1 + 0.5
    if y1 - y0 < 1e-9:
        y0, y1 = y0 - 0.05, y1 + 0.05
    padx, pady = 0.05 * (x1 - x0), 0.05 * (y1 - y0)
    x0, x1, y0, y1 = x0 - padx, x1 + padx, y0 - pady, y1 + pady

    def px(x: float, y: float) -> tuple[str, str]:
        u = left + (x - x0) / (x1 - x0) * (width - left - right)
        v = top + (1 - (y - y0) / (y1 - y0)) * (height - top - bottom)
        return _n(u), _n(v)

    lines = _header(width, height)
    ox, oy = px(x0, y0)
    ex, _ = px(x1, y0)
    _, ey = px(x0, y1)
    lines.append('<g id="axes" stroke="black" stroke-width="1">')
    lines.append(f'<line x1="{ox}" y1="{oy}" x2="{ex}" y2="{oy}"/>')
    lines.append(f'<line x1="{ox}" y1="{oy}" x2="{ox}" y2="{ey}"/>')
    lines.append("</g>")
    lines.append('<g id="labels" font-family="sans-serif" font-size="12">')
    for t in _ticks(x0, x1):
        tx, _ = px(t, y0)
        lines.append(f'<text x="{tx}" y="{_n(float(oy) + 16)}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        _, ty = px(x0, t)
        lines.append(f'<text x="{_n(float(ox) - 6)}" y="{ty}" text-anchor="end">{t:g}</text>')
    lines.append(
        f'<text x="{_n((left + width - right) / 2)}" y="{height - 15}" '
        f'text-anchor="middle">relative network length</text>'
    )
    lines.append(
        f'<text x="18" y="{_n((top + height - bottom) / 2)}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_n((top + height - bottom) / 2)})">relative performance</text>'
    )
    for k, (name, color) in enumerate(sorted(COLORS.items())):
        lines.append(
            f'<text x="{width - right - 90}" y="{top + 14 * (k + 1)}" fill="{color}">'
            f"{escape(name)}</text>"
        )
    lines.append("</g>")
    lines.append('<g id="points" fill-opacity="0.6">')
    for r in pts:
        cx, cy = px(r.length_rel, r.perf_rel)
        radius = 1.5 + 2.0 * r.gamma if r.generator == "slime" else 3.0
        lines.append(
            f'<circle class="{r.generator}" cx="{cx}" cy="{cy}" r="{_n(radius)}" '
            f'fill="{COLORS.get(r.generator, "gray")}"/>'
        )
    lines.append("</g>")
    if front_records:
        lines.append('<g id="front" fill="none" stroke="black" stroke-width="1.2">')
        for r in front_records:
            cx, cy = px(r.length_rel, r.perf_rel)
            lines.append(f'<circle class="front" cx="{cx}" cy="{cy}" r="8"/>')
        lines.append("</g>")
    _write(lines, out_path)
    return len(pts)
