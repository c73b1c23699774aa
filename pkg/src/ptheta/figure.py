"""Deterministic SVG scatter of a spectral catalog.

Hand-rolled SVG (no plotting dependency) so identical catalogs produce
byte-identical figures: the unit circle, the circle of radius 0.309 (the
modulus of the smallest confirmed spectral value), an origin marker, and one
dot per catalog entry.
"""

from __future__ import annotations

_SIZE = 660
_VIEW_HALF = 1.32  # data units mapped to the half-width of the canvas


def _px(v: float) -> str:
    return f"{v * _SIZE / (2 * _VIEW_HALF) + _SIZE / 2:.2f}"


def _r_px(r: float) -> str:
    return f"{r * _SIZE / (2 * _VIEW_HALF):.2f}"


def render_catalog_svg(entries) -> str:
    """SVG text for catalog entries (dicts with a 'q': [re, im] field)."""
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SIZE}" height="{_SIZE}" '
        f'viewBox="0 0 {_SIZE} {_SIZE}">',
        f'<rect width="{_SIZE}" height="{_SIZE}" fill="white"/>',
        f'<circle id="unit-circle" cx="{_px(0)}" cy="{_px(0)}" r="{_r_px(1.0)}" '
        'fill="none" stroke="black" stroke-width="1"/>',
        f'<circle id="inner-circle" cx="{_px(0)}" cy="{_px(0)}" r="{_r_px(0.309)}" '
        'fill="none" stroke="gray" stroke-width="1" stroke-dasharray="4 3"/>',
        f'<g id="origin-marker"><line x1="{_px(-0.02)}" y1="{_px(0)}" '
        f'x2="{_px(0.02)}" y2="{_px(0)}" stroke="black" stroke-width="1"/>'
        f'<line x1="{_px(0)}" y1="{_px(-0.02)}" x2="{_px(0)}" y2="{_px(0.02)}" '
        'stroke="black" stroke-width="1"/></g>',
        '<g id="spectral-points">',
    ]
    for entry in entries:
        re, im = entry["q"]
        # SVG y grows downward; flip so conjugate symmetry reads correctly
        parts.append(
            f'<circle cx="{_px(re)}" cy="{_px(-im)}" r="2.20" fill="crimson"/>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
