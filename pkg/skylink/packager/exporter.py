import os
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import pandas as pd
from jinja2 import Template
from slugify import slugify

from skylink.contact.fronts import FrontDiagram
from skylink.contact.legendrian import TWO_PI

CSV_VERSION = "v1"
FLOAT_FORMAT = "%.10g"

WIDTH = 720.0
HEIGHT = 360.0
PAD = 20.0

SVG_TEMPLATE = Template(
    """<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {{ width }} {{ height }}" width="{{ width }}px" height="{{ height }}px">
<title>{{ title }}</title>
<style>
  .frame { stroke: #bbbbbb; fill: none; stroke-width: 1 }
  .component-0 { stroke: #1f4e9a; fill: none; stroke-width: 1.5 }
  .component-1 { stroke: #b0361c; fill: none; stroke-width: 1.5 }
  .crossing { stroke: #000000; fill: none; stroke-width: 1 }
  .cusp { fill: #000000 }
</style>
<rect class="frame" x="{{ pad }}" y="{{ pad }}" width="{{ width - 2 * pad }}" height="{{ height - 2 * pad }}"/>
{% for component, d in paths -%}
<path class="component-{{ component }}" d="{{ d }}"/>
{% endfor -%}
{% for x, y in crossings -%}
<circle class="crossing" cx="{{ '%.3f' % x }}" cy="{{ '%.3f' % y }}" r="5"/>
{% endfor -%}
{% for x, y in cusps -%}
<circle class="cusp" cx="{{ '%.3f' % x }}" cy="{{ '%.3f' % y }}" r="2"/>
{% endfor -%}
</svg>
"""
)


class _Frame:
    """φ ∈ [0, 2π) to the horizontal axis, u to the vertical axis (up is larger u)."""

    def __init__(self, diagram: FrontDiagram) -> None:
        u = np.concatenate([c.u for c in diagram.curves])
        self.lo, self.hi = float(u.min()), float(u.max())
        if self.hi - self.lo < 1e-12:
            self.lo, self.hi = self.lo - 1.0, self.hi + 1.0

    def x(self, phi):
        return PAD + np.mod(phi, TWO_PI) / TWO_PI * (WIDTH - 2 * PAD)

    def y(self, u):
        return HEIGHT - PAD - (np.asarray(u) - self.lo) / (self.hi - self.lo) * (HEIGHT - 2 * PAD)


def _front_paths(diagram: FrontDiagram, frame: _Frame) -> List[Tuple[int, str]]:
    out = []
    for idx, curve in enumerate(diagram.curves):
        phi, _, u = curve.closed()
        x, y = frame.x(phi), frame.y(u)
        # split where the front leaves through φ = 2π and re-enters at 0
        breaks = np.flatnonzero(np.abs(np.diff(np.mod(phi, TWO_PI))) > np.pi) + 1
        for run in np.split(np.arange(phi.size), breaks):
            if run.size < 2:
                continue
            d = "M " + " L ".join(f"{x[k]:.3f} {y[k]:.3f}" for k in run)
            out.append((idx, d))
    return out


def emit_front_svg(diagram: FrontDiagram, path: str, title: str = "front") -> str:
    frame = _Frame(diagram)
    crossings = [(float(frame.x(c.phi)), float(frame.y(c.u))) for c in diagram.crossings]
    cusps = [(float(frame.x(c.phi)), float(frame.y(c.u))) for c in diagram.cusps]
    svg = SVG_TEMPLATE.render(
        width=WIDTH,
        height=HEIGHT,
        pad=PAD,
        title=title,
        paths=_front_paths(diagram, frame),
        crossings=crossings,
        cusps=cusps,
    )
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(svg)
    return path


def export_fronts(diagrams: Sequence[Tuple[str, FrontDiagram]], out_dir: str) -> List[str]:
    written = []
    for name, diagram in diagrams:
        target = os.path.join(out_dir, "fronts", f"{slugify(name)}.svg")
        written.append(emit_front_svg(diagram, target, title=name))
    return written


def write_results_csv(rows: List[Dict[str, Any]], path: str, header: Dict[str, Any]) -> str:
    """Rows in the order given, one versioned comment line first."""
    fields = " ".join(f"{k}={v}" for k, v in header.items())
    frame = pd.DataFrame(rows)
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        f.write(f"# skylink results {CSV_VERSION} {fields}\n")
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def read_results_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path, comment="#")


def write_summary(path: str, report: Dict[str, Any]) -> str:
    summary = report["summary"]
    lines = [
        f"scenario: {report['scenario']}",
        f"experiment: {report['experiment']}",
        f"seed: {report['seed']}",
        f"fan: {report['fan']}",
        f"rows: {report['rows']}",
        f"excluded: {report['excluded']}",
    ]
    for name, (passed, total) in sorted(report["checks"].items()):
        lines.append(f"check {name}: {passed}/{total}")
    lines.append(f"failures: {summary['failures']}")
    lines.append(f"status: {summary['overall_status']}")
    lines.extend(f"recommendation: {r}" for r in summary["recommendations"])
    with open(path, "w", encoding="utf-8") as f:
        f.write("\n".join(lines) + "\n")
    return path
