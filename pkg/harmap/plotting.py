"""
Images of concentric circles and radial segments

A PlotSpec names a function expression and the sampling; sample_curves
evaluates f along every curve, and the renderers turn the samples into CSV
rows or SVG polylines. Output is deterministic for a fixed spec.
"""

import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Literal

import numpy as np
import svgwrite
from pydantic import BaseModel, Field, field_validator

from .errors import HarmonicMapError
from .harmonic_map import HarmonicMap, evaluate_f

logger = logging.getLogger(__name__)

CSV_HEADER = ["curve_id", "kind", "param", "t", "u", "v"]
SVG_SIZE = 800
SVG_MARGIN = 0.05


class PlotSpec(BaseModel):
    function: str
    radii: List[float] = Field(default_factory=lambda: [0.5, 0.9], min_length=1)
    n_rays: int = Field(default=12, ge=0)
    n_circles: int = Field(default=8, ge=0)
    samples_per_curve: int = Field(default=256, ge=64)
    output_format: Literal["svg", "csv"] = "svg"

    @field_validator("radii")
    @classmethod
    def _inside_disk(cls, radii):
        for r in radii:
            if not 0.0 < r < 1.0:
                raise ValueError(f"radii must lie in (0, 1), got {r}")
        return radii


@dataclass(frozen=True)
class Curve:
    curve_id: int
    kind: str  # circle | ray
    param: float  # radius for circles, angle for rays
    t: np.ndarray
    w: np.ndarray


def _fmt(x: float) -> str:
    return format(float(x), ".12g")


def circle_radii(spec: PlotSpec) -> List[float]:
    """Requested radii followed by n_circles radii equally spaced up to max(radii).

    A spaced radius within 1e-12 of one already listed is dropped, so every
    circle is drawn once.
    """
    r_top = max(spec.radii)
    radii: List[float] = []
    for r in list(spec.radii) + [r_top * j / spec.n_circles for j in range(1, spec.n_circles + 1)]:
        if all(abs(r - s) > 1e-12 for s in radii):
            radii.append(float(r))
    return radii


def sample_curves(f: HarmonicMap, spec: PlotSpec) -> List[Curve]:
    curves = []
    n = spec.samples_per_curve
    theta = np.linspace(0.0, 2 * np.pi, n)
    for r in circle_radii(spec):
        w = evaluate_f(f, r * np.exp(1j * theta))
        curves.append(Curve(len(curves), "circle", r, theta, w))

    r_top = max(spec.radii)
    radial = np.linspace(0.0, r_top, n)
    for k in range(spec.n_rays):
        angle = 2 * np.pi * k / spec.n_rays
        w = evaluate_f(f, radial * np.exp(1j * angle))
        curves.append(Curve(len(curves), "ray", angle, radial, w))
    logger.debug({"event": "sample_curves", "map": f.label, "curves": len(curves), "samples": n})
    return curves


def render_csv(curves: List[Curve]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for c in curves:
        for t, w in zip(c.t, c.w):
            writer.writerow([c.curve_id, c.kind, _fmt(c.param), _fmt(t), _fmt(w.real), _fmt(w.imag)])
    return buf.getvalue()


def render_svg(curves: List[Curve], title: str = "") -> str:
    """One polyline per curve; y is flipped so the image reads in the usual orientation."""
    pts = np.concatenate([c.w for c in curves])
    u_min, u_max = float(pts.real.min()), float(pts.real.max())
    v_min, v_max = float(-pts.imag.max()), float(-pts.imag.min())
    span = max(u_max - u_min, v_max - v_min, 1e-12)
    pad = SVG_MARGIN * span

    dwg = svgwrite.Drawing(size=(f"{SVG_SIZE}px", f"{SVG_SIZE}px"), debug=False)
    dwg.viewbox(_fmt(u_min - pad), _fmt(v_min - pad), _fmt(u_max - u_min + 2 * pad), _fmt(v_max - v_min + 2 * pad))
    if title:
        dwg.set_desc(title=title)
    stroke = _fmt(span / 500)
    for c in curves:
        colour = "steelblue" if c.kind == "circle" else "firebrick"
        points = [(_fmt(w.real), _fmt(-w.imag)) for w in c.w]
        dwg.add(dwg.polyline(points=points, fill="none", stroke=colour, stroke_width=stroke, id=f"{c.kind}-{c.curve_id}"))
    return dwg.tostring()


def plot_command(f: HarmonicMap, spec: PlotSpec, out: Path) -> Path:
    """Sample f and write the curves to ``out`` in spec.output_format."""
    curves = sample_curves(f, spec)
    text = render_csv(curves) if spec.output_format == "csv" else render_svg(curves, title=spec.function)
    out = Path(out)
    try:
        out.write_text(text, encoding="utf-8")
    except OSError as e:
        raise HarmonicMapError(f"cannot write plot to {out}: {e}") from e
    logger.info({"event": "plot", "map": f.label, "format": spec.output_format, "curves": len(curves), "path": str(out)})
    return out
