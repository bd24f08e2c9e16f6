"""Charts of bigraded dimension tables: homological degree against Adams degree u - s.

Only dimensions are drawn.  Multiplication lines are not computed and so
never rendered; the JSON document says so in its metadata.
"""

from __future__ import annotations

import json
from xml.sax.saxutils import escape

from .homology import DimTable

__all__ = ["ChartError", "chart_points", "emit_chart", "chart_from_json"]

SCHEMA = "hochschild-chart/1"


class ChartError(ValueError):
    pass


def chart_points(t: DimTable) -> list[dict]:
    """Nonzero (s, adams, dim) triples, sorted, summed over all other gradings."""
    if "u" not in t.names:
        raise ChartError("chart needs a bigraded table with a u coordinate")
    deg = t.names[0]
    pts: dict[tuple[int, int], int] = {}
    for k, v in t.project((deg, "u")).entries.items():
        if v:
            key = (k[0], k[1] - k[0])
            pts[key] = pts.get(key, 0) + v
    return [{"s": s, "adams": a, "dim": d} for (s, a), d in sorted(pts.items())]


def _meta(t: DimTable) -> dict:
    meta = {"schema": SCHEMA, "degree": t.names[0], "lines": "not rendered"}
    for k, v in sorted(t.meta.items()):
        if isinstance(v, (int, str, bool)) or v is None:
            meta[k] = v
        elif isinstance(v, (set, frozenset, list, tuple)):
            meta[k] = sorted(v) if all(isinstance(x, int) for x in v) else [str(x) for x in v]
    return meta


def _ascii(points: list[dict], degree: str) -> str:
    if not points:
        return ""
    s_max = max(p["s"] for p in points)
    a_max = max(p["adams"] for p in points)
    grid = {(p["s"], p["adams"]): p["dim"] for p in points}
    width = max(2, len(str(a_max)) + 1)
    lines = []
    for s in range(s_max, -1, -1):
        cells = []
        for a in range(a_max + 1):
            d = grid.get((s, a), 0)
            cells.append(("." if d == 0 else str(d)).rjust(width))
        lines.append(f"{degree}={s:<3}|" + "".join(cells))
    lines.append("      +" + "-" * (width * (a_max + 1)))
    lines.append("       " + "".join(str(a).rjust(width) for a in range(a_max + 1)) + "   (u - " + degree + ")")
    return "\n".join(lines) + "\n"


def _svg(points: list[dict], degree: str) -> str:
    step, pad = 40, 40
    if not points:
        return '<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0"></svg>\n'
    s_max = max(p["s"] for p in points)
    a_max = max(p["adams"] for p in points)
    w = pad * 2 + step * a_max
    h = pad * 2 + step * s_max
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">']
    out.append(f'<line x1="{pad}" y1="{h - pad}" x2="{w - pad}" y2="{h - pad}" stroke="#999"/>')
    out.append(f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{h - pad}" stroke="#999"/>')
    for a in range(a_max + 1):
        out.append(f'<text x="{pad + step * a}" y="{h - pad / 3:.0f}" font-size="10" text-anchor="middle">{a}</text>')
    for s in range(s_max + 1):
        out.append(f'<text x="{pad / 3:.0f}" y="{h - pad - step * s + 3}" font-size="10">{s}</text>')
    for p in points:
        x = pad + step * p["adams"]
        y = h - pad - step * p["s"]
        title = escape(f"{degree}={p['s']}, adams={p['adams']}, dim={p['dim']}")
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="black"><title>{title}</title></circle>')
        if p["dim"] > 1:
            out.append(f'<text class="count" x="{x + 6}" y="{y - 6}" font-size="10">{p["dim"]}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_chart(t: DimTable, format: str = "json") -> str:
    """Render a bigraded table as ascii, json or svg."""
    if format not in ("ascii", "json", "svg"):
        raise ChartError(f"unknown chart format {format!r}")
    if "u" not in t.names:
        raise ChartError("charts need a bigraded table (with a u coordinate)")
    points = chart_points(t)
    if format == "json":
        return json.dumps({"meta": _meta(t), "points": points}, sort_keys=True, indent=1)
    if format == "ascii":
        return _ascii(points, t.names[0])
    return _svg(points, t.names[0])


def chart_from_json(text: str) -> DimTable:
    """Invert the JSON chart into a table keyed (degree, u)."""
    doc = json.loads(text)
    deg = doc.get("meta", {}).get("degree", "s")
    entries = {(p["s"], p["adams"] + p["s"]): p["dim"] for p in doc["points"]}
    return DimTable((deg, "u"), entries)
