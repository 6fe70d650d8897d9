"""Minimal write-only SVG figures: polygons and polylines in the plane."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

Pt = tuple[float, float]


@dataclass
class Figure:
    size: int = 480
    margin: int = 20
    items: list[tuple[str, list[Pt], dict]] = field(default_factory=list)
    labels: list[tuple[Pt, str]] = field(default_factory=list)

    def polygon(self, pts: Sequence[Sequence], stroke="#1f4e79", fill="#dbe8f5", width=1.5):
        self.items.append(("polygon", [(float(x), float(y)) for x, y in pts],
                           {"stroke": stroke, "fill": fill, "stroke-width": width}))
        return self

    def polyline(self, pts: Sequence[Sequence], stroke="#b03a2e", width=1.5, dashed=False):
        style = {"stroke": stroke, "fill": "none", "stroke-width": width}
        if dashed:
            style["stroke-dasharray"] = "4 3"
        self.items.append(("polyline", [(float(x), float(y)) for x, y in pts], style))
        return self

    def label(self, at: Sequence, text: str):
        self.labels.append(((float(at[0]), float(at[1])), text))
        return self

    def _transform(self):
        pts = [p for _, ps, _ in self.items for p in ps] + [p for p, _ in self.labels] or [(0.0, 0.0)]
        xs, ys = [p[0] for p in pts], [p[1] for p in pts]
        span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
        scale = (self.size - 2 * self.margin) / span
        x0, y1 = min(xs), max(ys)
        return lambda p: (self.margin + (p[0] - x0) * scale, self.margin + (y1 - p[1]) * scale)

    def render(self) -> str:
        tf = self._transform()
        out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.size}" height="{self.size}" '
               f'viewBox="0 0 {self.size} {self.size}">',
               f'<rect width="{self.size}" height="{self.size}" fill="white"/>']
        for kind, pts, style in self.items:
            coords = " ".join(f"{x:.3f},{y:.3f}" for x, y in map(tf, pts))
            attrs = " ".join(f'{k}="{v}"' for k, v in style.items())
            out.append(f'<{kind} points="{coords}" {attrs}/>')
        for p, text in self.labels:
            x, y = tf(p)
            out.append(f'<text x="{x:.3f}" y="{y:.3f}" font-size="11" font-family="sans-serif">{escape(text)}</text>')
        out.append("</svg>")
        return "\n".join(out) + "\n"

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.write_text(self.render())
        return path
