"""Static SVG rendering for persistence diagrams and point clouds.

Everything is emitted as hand-written SVG primitives so the output is
byte-deterministic: no timestamps, no generator metadata, fixed float
formatting. Connected-component pairs are drawn as black circles and
loop pairs as red triangles; essential classes use hollow markers
pinned to the top of the plotting window.
"""

from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .persistence import PersistenceDiagram

_STYLES = {
    0: ("#000000", "circle"),
    1: ("#cc0000", "triangle"),
    2: ("#0044cc", "square"),
}


def _fx(x: float) -> str:
    """Fixed two-decimal pixel coordinate, canonical zero."""
    out = f"{x:.2f}"
    return "0.00" if out == "-0.00" else out


def _tick_label(x: float) -> str:
    out = f"{x:.2f}".rstrip("0").rstrip(".")
    return out if out else "0"


def _marker(dim: int, px: float, py: float, hollow: bool) -> str:
    color, shape = _STYLES.get(dim, _STYLES[2])
    fill = "none" if hollow else color
    stroke = f' stroke="{color}" stroke-width="1.5"' if hollow else ""
    if shape == "circle":
        return f'<circle cx="{_fx(px)}" cy="{_fx(py)}" r="4" fill="{fill}"{stroke}/>'
    if shape == "triangle":
        pts = " ".join(
            f"{_fx(px + 5 * math.cos(a))},{_fx(py - 5 * math.sin(a))}"
            for a in (math.pi / 2, math.pi / 2 + 2 * math.pi / 3, math.pi / 2 + 4 * math.pi / 3)
        )
        return f'<polygon points="{pts}" fill="{fill}"{stroke}/>'
    return (
        f'<rect x="{_fx(px - 4)}" y="{_fx(py - 4)}" width="8" height="8" '
        f'fill="{fill}"{stroke}/>'
    )


def diagram_svg(
    diagram: PersistenceDiagram,
    band_c: Optional[float] = None,
    title: str = "",
    size: int = 440,
) -> str:
    """Render a diagram as an SVG document string.

    Args:
        diagram: The diagram to draw. Essential pairs are drawn hollow at
            the top of the window regardless of their stored death value.
        band_c: Optional band half-width c. When given, the strip
            |death - birth| <= 2c is shaded around the diagonal, which is
            the Euclidean-width-sqrt(2)c band that separates signal from
            noise at level c.
        title: Optional plot title.
        size: Pixel size of the square plotting area.

    Returns:
        A complete SVG document as a string.
    """
    margin = 50
    vals = [0.0]
    for p in diagram.pairs:
        vals.append(p.birth)
        if math.isfinite(p.death):
            vals.append(p.death)
    lo = min(vals)
    hi = max(vals)
    if band_c is not None and math.isfinite(band_c):
        hi = max(hi, 2.0 * band_c)
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.08 * (hi - lo)
    lo -= pad
    hi += pad
    scale = size / (hi - lo)

    def px(v: float) -> float:
        return margin + (v - lo) * scale

    def py(v: float) -> float:
        return margin + size - (v - lo) * scale

    w = size + 2 * margin
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" '
        f'viewBox="0 0 {w} {w}">',
        f'<rect x="0" y="0" width="{w}" height="{w}" fill="#ffffff"/>',
        "<defs>",
        f'<clipPath id="plot"><rect x="{margin}" y="{margin}" '
        f'width="{size}" height="{size}"/></clipPath>',
        "</defs>",
        '<g clip-path="url(#plot)">',
    ]
    if band_c is not None and math.isfinite(band_c) and band_c > 0:
        # Stroke width 2 * sqrt(2) * c spans the strip |death - birth| <= 2c.
        width_px = 2.0 * math.sqrt(2.0) * band_c * scale
        out.append(
            f'<line x1="{_fx(px(lo))}" y1="{_fx(py(lo))}" '
            f'x2="{_fx(px(hi))}" y2="{_fx(py(hi))}" '
            f'stroke="#f4c7c3" stroke-width="{_fx(width_px)}"/>'
        )
    out.append(
        f'<line x1="{_fx(px(lo))}" y1="{_fx(py(lo))}" '
        f'x2="{_fx(px(hi))}" y2="{_fx(py(hi))}" '
        f'stroke="#888888" stroke-width="1"/>'
    )
    top = lo + (hi - lo) * 0.985
    for p in diagram.pairs:
        death = p.death
        hollow = p.essential
        if not math.isfinite(death):
            death = top
        out.append(_marker(p.dim, px(p.birth), py(death), hollow))
    out.append("</g>")
    out.append(
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" '
        'fill="none" stroke="#000000" stroke-width="1"/>'
    )
    for frac in (0.0, 0.5, 1.0):
        v = lo + frac * (hi - lo)
        label = _tick_label(v)
        out.append(
            f'<text x="{_fx(px(v))}" y="{_fx(margin + size + 18)}" font-size="11" '
            f'font-family="sans-serif" text-anchor="middle">{label}</text>'
        )
        out.append(
            f'<text x="{_fx(margin - 8)}" y="{_fx(py(v) + 4)}" font-size="11" '
            f'font-family="sans-serif" text-anchor="end">{label}</text>'
        )
    out.append(
        f'<text x="{_fx(margin + size / 2)}" y="{_fx(margin + size + 36)}" '
        'font-size="12" font-family="sans-serif" text-anchor="middle">birth</text>'
    )
    out.append(
        f'<text x="14" y="{_fx(margin + size / 2)}" font-size="12" '
        f'font-family="sans-serif" text-anchor="middle" '
        f'transform="rotate(-90 14 {_fx(margin + size / 2)})">death</text>'
    )
    if title:
        out.append(
            f'<text x="{_fx(margin + size / 2)}" y="30" font-size="14" '
            f'font-family="sans-serif" text-anchor="middle">{title}</text>'
        )
    lx = margin + size - 120
    out.append(_marker(0, lx, margin + 16, False))
    out.append(
        f'<text x="{_fx(lx + 10)}" y="{_fx(margin + 20)}" font-size="11" '
        'font-family="sans-serif">H0 pairs</text>'
    )
    out.append(_marker(1, lx, margin + 34, False))
    out.append(
        f'<text x="{_fx(lx + 10)}" y="{_fx(margin + 38)}" font-size="11" '
        'font-family="sans-serif">H1 pairs</text>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def cloud_svg(points: np.ndarray, title: str = "", size: int = 440) -> str:
    """Render a 2-D point cloud (or 1-D values on a line) as an SVG scatter."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError(f"expected a 2-D array of points, got shape {pts.shape}")
    if pts.shape[1] == 1:
        pts = np.column_stack([pts[:, 0], np.zeros(len(pts))])
    if pts.shape[1] != 2:
        raise ValueError(f"can only plot 1-D or 2-D points, got {pts.shape[1]} coordinates")
    margin = 30
    lo = float(pts.min()) if len(pts) else 0.0
    hi = float(pts.max()) if len(pts) else 1.0
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.05 * (hi - lo)
    lo -= pad
    hi += pad
    scale = size / (hi - lo)
    w = size + 2 * margin
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{w}" '
        f'viewBox="0 0 {w} {w}">',
        f'<rect x="0" y="0" width="{w}" height="{w}" fill="#ffffff"/>',
        f'<rect x="{margin}" y="{margin}" width="{size}" height="{size}" '
        'fill="none" stroke="#bbbbbb" stroke-width="1"/>',
    ]
    for x, y in pts:
        cx = margin + (float(x) - lo) * scale
        cy = margin + size - (float(y) - lo) * scale
        out.append(f'<circle cx="{_fx(cx)}" cy="{_fx(cy)}" r="2" fill="#333333"/>')
    if title:
        out.append(
            f'<text x="{_fx(margin + size / 2)}" y="20" font-size="13" '
            f'font-family="sans-serif" text-anchor="middle">{title}</text>'
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
