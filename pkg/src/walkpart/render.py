"""SVG views of the figure: construction, partitions, structure graph."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

from .figure import Figure
from .geometry import Point2
from .partitions import format_name, partition_blocks

PX = 20  # pixels per grid unit
MARGIN = 40
FIGURES = ("construction", "partitions", "graph")
RING_FILLS = ("#f2e6c9", "#d9e8f5", "#e3f0da", "#f5dde0")


class _Canvas:
    def __init__(self, points: list[Point2]):
        self.min_x = min(p.x for p in points)
        self.max_y = max(p.y for p in points)
        self.width = float((max(p.x for p in points) - self.min_x) * PX) + 2 * MARGIN
        self.height = float((self.max_y - min(p.y for p in points)) * PX) + 2 * MARGIN
        self.items: list[str] = []

    def xy(self, p: Point2) -> tuple[str, str]:
        return (f"{float((p.x - self.min_x) * PX) + MARGIN:.2f}",
                f"{float((self.max_y - p.y) * PX) + MARGIN:.2f}")

    def add(self, item: str) -> None:
        self.items.append(item)

    def svg(self, title: str, defs: str = "") -> str:
        head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{self.width:.0f}" '
                f'height="{self.height:.0f}" viewBox="0 0 {self.width:.0f} {self.height:.0f}">\n'
                f"<title>{escape(title)}</title>\n")
        if defs:
            head += f"<defs>{defs}</defs>\n"
        return head + "\n".join(self.items) + "\n</svg>\n"

    def label(self, p: Point2, text: str, dx: int = 6, dy: int = -6, cls: str = "label") -> None:
        x, y = self.xy(p)
        self.add(f'<text class="{cls}" x="{float(x) + dx:.2f}" y="{float(y) + dy:.2f}" '
                 f'font-family="sans-serif" font-size="12">{escape(text)}</text>')

    def line(self, a: Point2, b: Point2, cls: str, extra: str = "") -> None:
        (x1, y1), (x2, y2) = self.xy(a), self.xy(b)
        self.add(f'<line class="{cls}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                 f'stroke="#333" stroke-width="1.5"{extra}/>')

    def polygon(self, points: list[Point2], cls: str, fill: str = "none") -> None:
        pts = " ".join(",".join(self.xy(p)) for p in points)
        self.add(f'<polygon class="{cls}" points="{pts}" fill="{fill}" stroke="#333" '
                 f'stroke-width="1.5"/>')


def render_construction(fig: Figure) -> str:
    c = _Canvas(list(fig.labels.values()))
    for no, string in enumerate(fig.construction.strings, 1):
        c.polygon([s.a for s in string], f"string string-{no}")
    for ray in fig.construction.rays:
        c.line(ray.a, ray.b, "ray", ' stroke-dasharray="6 3"')
    for circle in fig.construction.circles:
        x, y = c.xy(circle.center)
        r = float(circle.diameter / 2 * PX)
        c.add(f'<circle class="scribe" cx="{x}" cy="{y}" r="{r:.2f}" fill="none" stroke="#a33" '
              f'data-diameter="{circle.diameter}" data-theta="{circle.fill}"/>')
    for label, p in fig.labels.items():
        c.label(p, label)
    return c.svg("Walker constructor drawn by agents")


def render_partitions(fig: Figure, theta: Fraction = Fraction(1)) -> str:
    c = _Canvas(list(fig.labels.values()))
    for p in fig.partitions:
        pts = fig.arrangement.face_points(p.face)
        c.polygon(pts, "partition", RING_FILLS[p.ring % len(RING_FILLS)])
    for p in fig.partitions:
        total = partition_blocks(p, theta).total
        c.label(p.centroid, format_name(p.name), dx=-14, dy=0, cls="partition-name")
        c.label(p.centroid, str(total), dx=-6, dy=13, cls="partition-total")
    return c.svg("Data partitions following walker algorithm")


def render_graph(fig: Figure) -> str:
    g = fig.graph()
    c = _Canvas(list(fig.labels.values()))
    for u, v, directed in g.edges():
        extra = ' marker-end="url(#arrow)"' if directed else ""
        c.line(fig.labels[u], fig.labels[v], "edge directed" if directed else "edge", extra)
    for label in g.labels:
        x, y = (float(s) for s in c.xy(fig.labels[label]))
        if g.kinds[label] == "diamond":
            pts = f"{x:.2f},{y - 9:.2f} {x + 9:.2f},{y:.2f} {x:.2f},{y + 9:.2f} {x - 9:.2f},{y:.2f}"
            c.add(f'<polygon class="node diamond" data-label="{label}" points="{pts}" '
                  f'fill="#fff" stroke="#333"/>')
        else:
            c.add(f'<circle class="node circle" data-label="{label}" cx="{x:.2f}" cy="{y:.2f}" '
                  f'r="8" fill="#fff" stroke="#333"/>')
        c.label(fig.labels[label], label, dx=-3, dy=4, cls="node-label")
    arrow = ('<marker id="arrow" viewBox="0 0 10 10" refX="18" refY="5" markerWidth="6" '
             'markerHeight="6" orient="auto"><path d="M0,0 L10,5 L0,10 z"/></marker>')
    return c.svg("The adjacency list by cyclic graph", arrow)


def render(fig: Figure, figure: str, theta: Fraction = Fraction(1)) -> str:
    if figure == "construction":
        return render_construction(fig)
    if figure == "partitions":
        return render_partitions(fig, theta)
    if figure == "graph":
        return render_graph(fig)
    raise ValueError(f"unknown figure {figure!r}")
