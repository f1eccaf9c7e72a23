"""SVG infection-curve panels: normalized histogram bars with fitted Gamma overlays."""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .centrality import Measure
from .distfit import curve_points
from .epidemic import normalize
from .experiment import CellResult, ExperimentResult
from .io import OutputError, curve_grid, written_gamma, r6

COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf")

WIDTH, HEIGHT = 720, 480
LEFT, RIGHT, TOP, BOTTOM = 70, 170, 40, 60


def _n(x: float) -> str:
    return f"{x:.2f}"


def render_panel(cells: list[CellResult], title: str) -> str:
    if not cells:
        raise ValueError("a panel needs at least one cell")
    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM
    max_d = max(max(c.histogram.max_distance, 1) for c in cells)
    series = []
    y_max = 0.0
    for c in cells:
        bars = normalize(c.histogram) if c.histogram.total else {}
        curve = curve_points(written_gamma(c.gamma), curve_grid(max_d)) if c.gamma is not None else []
        y_max = max([y_max, *bars.values(), *(y for _, y in curve)])
        series.append((c, bars, curve))
    y_max = y_max * 1.1 or 1.0
    x_max = max_d + 1

    def sx(x: float) -> float:
        return LEFT + plot_w * x / x_max

    def sy(y: float) -> float:
        return TOP + plot_h * (1.0 - y / y_max)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{WIDTH}" '
        f'height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="22" text-anchor="middle" font-size="16" '
        f'font-family="sans-serif">{escape(title)}</text>',
        f'<line x1="{LEFT}" y1="{TOP + plot_h}" x2="{LEFT + plot_w}" y2="{TOP + plot_h}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{TOP + plot_h}" stroke="black"/>',
    ]
    tick_every = max(1, x_max // 10)
    for d in range(0, x_max + 1, tick_every):
        x = sx(d)
        out.append(f'<line x1="{_n(x)}" y1="{TOP + plot_h}" x2="{_n(x)}" y2="{TOP + plot_h + 5}" stroke="black"/>')
        out.append(
            f'<text x="{_n(x)}" y="{TOP + plot_h + 18}" text-anchor="middle" font-size="11" '
            f'font-family="sans-serif">{d}</text>'
        )
    for i in range(6):
        y = y_max * i / 5
        out.append(
            f'<text x="{LEFT - 6}" y="{_n(sy(y) + 4)}" text-anchor="end" font-size="11" '
            f'font-family="sans-serif">{y:.3g}</text>'
        )
    out.append(
        f'<text x="{LEFT + plot_w / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle" font-size="13" '
        'font-family="sans-serif">iteration/distance</text>'
    )
    out.append(
        f'<text x="18" y="{TOP + plot_h / 2:.2f}" text-anchor="middle" font-size="13" '
        f'font-family="sans-serif" transform="rotate(-90 18 {TOP + plot_h / 2:.2f})">fitted PDF value</text>'
    )

    group_w = plot_w / x_max * 0.8
    bar_w = group_w / len(series)
    for si, (cell, bars, curve) in enumerate(series):
        color = COLORS[si % len(COLORS)]
        out.append(f'<g class="bars" fill="{color}" fill-opacity="0.35">')
        for d, mass in bars.items():
            x0 = sx(d) - group_w / 2 + si * bar_w
            out.append(
                f'<rect x="{_n(x0)}" y="{_n(sy(mass))}" width="{_n(bar_w)}" '
                f'height="{_n(sy(0) - sy(mass))}"/>'
            )
        out.append("</g>")
        if curve:
            pts = " ".join(f"{_n(sx(x))},{_n(sy(y))}" for x, y in curve if x <= x_max)
            out.append(f'<polyline class="curve" fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
        ly = TOP + 10 + si * 18
        lx = LEFT + plot_w + 15
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 20}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(
            f'<text x="{lx + 26}" y="{ly + 4}" font-size="11" font-family="sans-serif">'
            f"{escape(f'β={r6(cell.beta):g}, C={r6(cell.C_mean):.3f}')}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_plot(result: ExperimentResult, path: str | Path) -> list[Path]:
    """Write one SVG per measure; ``path`` is a directory or a file stem.

    Files are named ``<stem>_<measure>.svg``.
    """
    if not result.cells:
        raise ValueError("nothing to plot: result has no cells")
    path = Path(path)
    if path.suffix == ".svg":
        directory, stem = path.parent, path.stem
    else:
        directory, stem = path, "curves"
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create {directory}: {exc}") from exc
    written = []
    for measure in result.config.measures:
        cells = [c for c in result.cells if c.measure is measure]
        if not cells:
            continue
        label = "no isolation" if measure is Measure.NONE else f"isolation by {measure.value}"
        target = directory / f"{stem}_{measure.value}.svg"
        try:
            target.write_text(render_panel(cells, label), encoding="utf-8")
        except OSError as exc:
            raise OutputError(f"cannot write {target}: {exc}") from exc
        written.append(target)
    return written
