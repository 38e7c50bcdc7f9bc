"""Deterministic SVG and ASCII rendering of tilings and systems.

Only the d = 3 objects draw as pictures; anything else raises
UnsupportedDimension.  Output is byte-for-byte reproducible for a fixed
input and RenderSpec: coordinates are formatted with a fixed precision
and palettes are explicit.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from . import lozenge
from .errors import BadBounds, UnsupportedDimension
from .lozenge import LozengeTiling
from .systems import SystemOfPermutations, triangle_words

SQRT3_2 = 0.8660254037844386


@dataclass
class RenderSpec:
    format: str = "svg"
    scale: int = 48
    palette: Dict[int, str] = field(default_factory=dict)
    show_dual: bool = False

    def __post_init__(self):
        if self.format not in ("svg", "ascii"):
            raise BadBounds(f"unknown render format {self.format!r}")
        if self.scale <= 0:
            raise BadBounds("scale must be positive")

    def color(self, i: int) -> str:
        if i in self.palette:
            return self.palette[i]
        return _default_color(i)


def _default_color(i: int) -> str:
    # evenly spaced hues, fixed saturation/value
    hue = ((i - 1) * 0.618033988749895) % 1.0
    r, g, b = _hsv_to_rgb(hue, 0.55, 0.92)
    return f"#{r:02x}{g:02x}{b:02x}"


def _hsv_to_rgb(h: float, s: float, v: float) -> Tuple[int, int, int]:
    k = int(h * 6) % 6
    f = h * 6 - int(h * 6)
    p, q, t = v * (1 - s), v * (1 - f * s), v * (1 - (1 - f) * s)
    r, g, b = [
        (v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q)
    ][k]
    return int(round(r * 255)), int(round(g * 255)), int(round(b * 255))


def _xy(z: Tuple[int, int, int], n: int, scale: int) -> Tuple[float, float]:
    """Vertex coordinates: B lower left, C lower right, A on top."""
    x = scale * (z[0] * 0.5 + z[2])
    y = scale * SQRT3_2 * (n - z[0])
    return x, y


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _polygon(points: Sequence[Tuple[float, float]], fill: str, stroke: str) -> str:
    coords = " ".join(f"{_fmt(x)},{_fmt(y)}" for x, y in points)
    return (
        f'<polygon points="{coords}" fill="{fill}" stroke="{stroke}" '
        f'stroke-width="1" stroke-linejoin="round"/>'
    )


def _segment(a, b, color: str, width: float) -> str:
    return (
        f'<line x1="{_fmt(a[0])}" y1="{_fmt(a[1])}" x2="{_fmt(b[0])}" '
        f'y2="{_fmt(b[1])}" stroke="{color}" stroke-width="{_fmt(width)}" '
        f'stroke-linecap="round"/>'
    )


def _text(xy, content: str, size: float, color: str = "#333333") -> str:
    return (
        f'<text x="{_fmt(xy[0])}" y="{_fmt(xy[1])}" font-size="{_fmt(size)}" '
        f'font-family="Helvetica, sans-serif" fill="{color}" '
        f'text-anchor="middle" dominant-baseline="middle">{content}</text>'
    )


def _svg_document(body: List[str], width: float, height: float) -> str:
    head = (
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">'
    )
    return "\n".join([head] + body + ["</svg>"]) + "\n"


# ---------------------------------------------------------------------------
# Tilings
# ---------------------------------------------------------------------------

def _rhombus_corners(x, a: int) -> list:
    """The four vertices of the rhombus U(x) + D(x - e_a), in drawing order."""
    e = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
    others = [b for b in (1, 2, 3) if b != a]
    v_far_up = tuple(x[k] + e[a][k] for k in range(3))
    shared = [tuple(x[k] + e[b][k] for k in range(3)) for b in others]
    y = tuple(x[k] - e[a][k] for k in range(3))
    v_far_down = tuple(y[k] + e[others[0]][k] + e[others[1]][k] for k in range(3))
    return [v_far_up, shared[0], v_far_down, shared[1]]


def _edge_summand_type(p, q) -> frozenset:
    """The two letters whose edge is parallel to the segment p-q."""
    delta = tuple(a - b for a, b in zip(p, q))
    return frozenset(k + 1 for k, v in enumerate(delta) if v != 0)


def render_tiling_svg(tiling: LozengeTiling, spec: RenderSpec) -> str:
    n = tiling.n
    s = spec.scale
    pad = s * 0.6
    body = [f'<g transform="translate({_fmt(pad)},{_fmt(pad)})">']
    # rhombi first, then colored triangles on top
    crossings: Dict[tuple, list] = {}
    for c in range(1, n + 1):
        data = lozenge._trace_color(tiling, c)
        for anchor, (kind, payload) in data.crossed_tiles.items():
            if kind == "r":
                crossings.setdefault(anchor, []).append((c, frozenset(payload)))
    for anchor, a in tiling.rhombi:
        corners = _rhombus_corners(anchor, a)
        pts = [_xy(v, n, s) for v in corners]
        body.append(_polygon(pts, "#ffffff", "#4d4d4d"))
        for color, summand in sorted(crossings.get(anchor, [])):
            mids = []
            for k in range(4):
                p, q = corners[k], corners[(k + 1) % 4]
                if _edge_summand_type(p, q) == summand:
                    mids.append(
                        tuple(
                            (u + v) / 2 for u, v in zip(_xy(p, n, s), _xy(q, n, s))
                        )
                    )
            if len(mids) == 2:
                body.append(_segment(mids[0], mids[1], spec.color(color), s * 0.09))
    e = {1: (1, 0, 0), 2: (0, 1, 0), 3: (0, 0, 1)}
    for color, x in enumerate(tiling.triangles, 1):
        verts = [tuple(x[k] + e[b][k] for k in range(3)) for b in (1, 2, 3)]
        pts = [_xy(v, n, s) for v in verts]
        body.append(_polygon(pts, spec.color(color), "#4d4d4d"))
        cx = sum(p[0] for p in pts) / 3
        cy = sum(p[1] for p in pts) / 3 + s * 0.1
        body.append(_text((cx, cy), str(color), s * 0.3, "#1a1a1a"))
    if spec.show_dual:
        body.extend(_edge_labels(lozenge.extract_system(tiling), n, s))
    body.append("</g>")
    side = n * s
    return _svg_document(body, side + 2 * pad, side * SQRT3_2 + 2 * pad)


def _edge_labels(system: SystemOfPermutations, n: int, s: int) -> List[str]:
    """Permutation digits along the three edges, outside the triangle."""
    out = []
    sigma12 = system.sigma(1, 2)
    sigma23 = system.sigma(2, 3)
    sigma31 = system.sigma(3, 1)
    for k in range(n):
        # edge A -> B: from (n,0,0) toward (0,n,0)
        z = (n - k - 0.5, k + 0.5, 0.0)
        xy = _offset_xy(z, n, s, (-0.45, -0.1))
        out.append(_text(xy, str(sigma12[k]), s * 0.28, "#555555"))
        # edge B -> C: from (0,n,0) toward (0,0,n)
        z = (0.0, n - k - 0.5, k + 0.5)
        xy = _offset_xy(z, n, s, (0.0, 0.42))
        out.append(_text(xy, str(sigma23[k]), s * 0.28, "#555555"))
        # edge C -> A: from (0,0,n) toward (n,0,0)
        z = (k + 0.5, 0.0, n - k - 0.5)
        xy = _offset_xy(z, n, s, (0.45, -0.1))
        out.append(_text(xy, str(sigma31[k]), s * 0.28, "#555555"))
    return out


def _offset_xy(z, n: int, s: int, shift: Tuple[float, float]):
    x = s * (z[0] * 0.5 + z[2]) + s * shift[0]
    y = s * SQRT3_2 * (n - z[0]) + s * shift[1]
    return (x, y)


def render_tiling_ascii(tiling: LozengeTiling) -> str:
    """Rows of '/  \\' cells; triangle tiles show their color number.

    A missing '/' or '\\' marks an edge interior to a leaning rhombus, a
    blank cell interior marks a vertical rhombus.
    """
    n = tiling.n
    lines = []
    for strip in range(n - 1, -1, -1):
        row = n - strip  # up triangles in this strip
        chars = [" "] * (2 * strip)
        for x3 in range(row):
            x = (strip, n - 1 - strip - x3, x3)
            kind = tiling.cover[x]
            left = " " if kind == ("r", 3) else "/"
            right = " " if kind == ("r", 2) else "\\"
            if kind[0] == "t":
                mid = f"{kind[1]:2d}"
            elif kind == ("r", 1):
                mid = "  "
            else:
                mid = "__"
            chars.extend([left, *mid, right])
        lines.append("".join(chars).rstrip())
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Systems
# ---------------------------------------------------------------------------

def render_system_svg(system: SystemOfPermutations, spec: RenderSpec) -> str:
    if system.d != 3:
        raise UnsupportedDimension(
            f"svg rendering draws d = 3 only, got d = {system.d}"
        )
    n, s = system.n, spec.scale
    pad = s * 0.8
    corners = [(n, 0, 0), (0, n, 0), (0, 0, n)]
    pts = [_xy(z, n, s) for z in corners]
    body = [f'<g transform="translate({_fmt(pad)},{_fmt(pad)})">']
    body.append(_polygon(pts, "#fcfcfc", "#333333"))
    for k in range(1, n):
        for za, zb in (
            ((n - k, k, 0), (n - k, 0, k)),
            ((0, n - k, k), (k, n - k, 0)),
            ((k, 0, n - k), (0, k, n - k)),
        ):
            body.append(
                _segment(_xy(za, n, s), _xy(zb, n, s), "#dddddd", s * 0.02)
            )
    body.extend(_edge_labels(system, n, s))
    u, v, w = triangle_words(system)
    body.append(
        _text((n * s / 2, n * s * SQRT3_2 + s * 0.62),
              "u=" + "".join(map(str, u)) + "  v=" + "".join(map(str, v))
              + "  w=" + "".join(map(str, w)), s * 0.26)
    )
    body.append("</g>")
    return _svg_document(body, n * s + 2 * pad, n * s * SQRT3_2 + 2 * pad)


def render_system_ascii(system: SystemOfPermutations) -> str:
    lines = [f"system on {system.n} colors, {system.d} letters"]
    for (a, b), word in sorted(system.perms.items()):
        lines.append(f"  sigma_{a}{b} = {''.join(map(str, word))}")
    if system.d == 3:
        u, v, w = triangle_words(system)
        lines.append(
            "  (u, v, w) = ("
            + ", ".join("".join(map(str, word)) for word in (u, v, w))
            + ")"
        )
    return "\n".join(lines) + "\n"


def render(obj, spec: RenderSpec) -> str:
    if isinstance(obj, LozengeTiling):
        if spec.format == "svg":
            return render_tiling_svg(obj, spec)
        return render_tiling_ascii(obj)
    if isinstance(obj, SystemOfPermutations):
        if spec.format == "svg":
            return render_system_svg(obj, spec)
        return render_system_ascii(obj)
    raise UnsupportedDimension("only tilings and d=3 systems render")
