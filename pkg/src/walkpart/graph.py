"""Labeled mixed graph of the figure with list and matrix adjacency."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional

from .construction import LABELS as CANONICAL_ORDER
from .errors import GraphError
from .geometry import Arrangement, Point2

DIAMOND = frozenset("0abcm")
INTO_VENTER = frozenset("012")
OUT_OF_VENTER = frozenset("abc")
VENTER = "m"


def _rank(label: str) -> tuple:
    try:
        return (0, CANONICAL_ORDER.index(label))
    except ValueError:
        return (1, label)


@dataclass
class TraversalReport:
    order: list
    parent: dict
    node_inspections: int = 0
    edge_inspections: int = 0


class LabeledGraph:
    """Adjacency list and boolean matrix kept in lock-step.

    ``adjacency_list[u]`` holds the neighbours reachable from ``u``: both ends
    of an undirected edge, only the head of a directed one.  ``matrix[i][j]``
    mirrors that exactly.
    """

    def __init__(self, labels: Iterable[str], kinds: dict[str, str] | None = None):
        self.labels = sorted(labels, key=_rank)
        if len(set(self.labels)) != len(self.labels):
            raise GraphError("duplicate node labels")
        self.index = {label: i for i, label in enumerate(self.labels)}
        self.kinds = kinds or {label: ("diamond" if label in DIAMOND else "circle")
                               for label in self.labels}
        n = len(self.labels)
        self.matrix = [[False] * n for _ in range(n)]
        self.adjacency_list: dict[str, list[str]] = {label: [] for label in self.labels}
        self._undirected: dict[str, list[str]] = {label: [] for label in self.labels}
        self.directed: set[tuple[str, str]] = set()
        self.m = 0

    @property
    def n(self) -> int:
        return len(self.labels)

    def _check(self, *labels: str) -> None:
        for label in labels:
            if label not in self.index:
                raise GraphError(f"unknown label {label!r}")

    def _insert(self, bucket: list[str], label: str) -> None:
        # ordered insert by canonical rank; touches only this endpoint's list
        key = _rank(label)
        k = len(bucket)
        while k > 0 and _rank(bucket[k - 1]) > key:
            k -= 1
        bucket.insert(k, label)

    def add_edge(self, u: str, v: str, directed: bool = False) -> LabeledGraph:
        self._check(u, v)
        if u == v:
            raise GraphError("self-loops are not allowed")
        i, j = self.index[u], self.index[v]
        if self.matrix[i][j] or self.matrix[j][i]:
            raise GraphError("edge exists")
        self.matrix[i][j] = True
        self._insert(self.adjacency_list[u], v)
        if directed:
            self.directed.add((u, v))
        else:
            self.matrix[j][i] = True
            self._insert(self.adjacency_list[v], u)
        self._insert(self._undirected[u], v)
        self._insert(self._undirected[v], u)
        self.m += 1
        return self

    def has_edge(self, u: str, v: str) -> bool:
        self._check(u, v)
        return self.matrix[self.index[u]][self.index[v]]

    def out_neighbors(self, u: str) -> set[str]:
        self._check(u)
        return {v for v in self.adjacency_list[u] if (u, v) in self.directed}

    def in_neighbors(self, u: str) -> set[str]:
        self._check(u)
        return {v for v, w in self.directed if w == u}

    def neighbors(self, u: str) -> list[str]:
        """Neighbours ignoring direction, in canonical order."""
        self._check(u)
        return list(self._undirected[u])

    def degree(self, u: str) -> int:
        return len(self.neighbors(u))

    def edges(self) -> list[tuple[str, str, bool]]:
        out = []
        for u in self.labels:
            for v in self._undirected[u]:
                if (u, v) in self.directed:
                    out.append((u, v, True))
                elif (v, u) not in self.directed and self.index[u] < self.index[v]:
                    out.append((u, v, False))
        return out

    def export(self) -> str:
        lines = []
        for u in self.labels:
            items = [(">" if (u, v) in self.directed else "") + v for v in self.adjacency_list[u]]
            lines.append(f"{u}: {','.join(items)}".rstrip())
        return "\n".join(lines) + "\n"


def from_construction(arr: Arrangement, labels: dict[str, Point2]) -> LabeledGraph:
    """One node per labeled vertex; edges through the venter carry direction."""
    by_index = {}
    for label, p in labels.items():
        by_index[arr.index_of(p)] = label
    for i in range(len(arr.vertices)):
        if i not in by_index:
            raise GraphError(f"unlabeled vertex {arr.vertices[i]}")
    g = LabeledGraph(labels)
    for i, j in arr.edges:
        u, v = by_index[i], by_index[j]
        if v == VENTER:
            u, v = v, u
        if u == VENTER and v in INTO_VENTER:
            g.add_edge(v, u, directed=True)
        elif u == VENTER and v in OUT_OF_VENTER:
            g.add_edge(u, v, directed=True)
        else:
            g.add_edge(u, v)
    return g


def traverse(g: LabeledGraph, start: str, mode: str = "bfs") -> TraversalReport:
    """Breadth- or depth-first search over the undirected view of ``g``."""
    g._check(start)
    if mode in ("bfs", "breadth-first"):
        report = TraversalReport([start], {start: None})
        queue = deque([start])
        while queue:
            u = queue.popleft()
            report.node_inspections += 1
            for v in g._undirected[u]:
                report.edge_inspections += 1
                if v not in report.parent:
                    report.parent[v] = u
                    report.order.append(v)
                    queue.append(v)
        return report
    if mode in ("dfs", "depth-first"):
        report = TraversalReport([], {start: None})
        seen = set()
        stack = [(start, iter(g._undirected[start]))]
        seen.add(start)
        report.order.append(start)
        report.node_inspections += 1
        while stack:
            u, it = stack[-1]
            for v in it:
                report.edge_inspections += 1
                if v not in seen:
                    seen.add(v)
                    report.parent[v] = u
                    report.order.append(v)
                    report.node_inspections += 1
                    stack.append((v, iter(g._undirected[v])))
                    break
            else:
                stack.pop()
        return report
    raise GraphError(f"unknown traversal mode {mode!r}")


def is_path(g: LabeledGraph, seq: list[str]) -> bool:
    return all(v in g._undirected[u] for u, v in zip(seq, seq[1:]))


def hamiltonian_path(g: LabeledGraph) -> Optional[list[str]]:
    """Backtracking search for a path through every node (direction ignored)."""
    n = g.n
    if n == 0:
        return None

    def extend(path: list[str], seen: set[str]) -> bool:
        if len(path) == n:
            return True
        for v in g._undirected[path[-1]]:
            if v not in seen:
                path.append(v)
                seen.add(v)
                if extend(path, seen):
                    return True
                path.pop()
                seen.discard(v)
        return False

    for start in g.labels:
        path = [start]
        if extend(path, {start}):
            if len(set(path)) != n or not is_path(g, path):
                raise GraphError("hamiltonian witness failed re-validation")
            return path
    return None


def dominates(g: LabeledGraph, subset: Iterable[str]) -> bool:
    covered = set()
    for u in subset:
        covered.add(u)
        covered.update(g._undirected[u])
    return covered == set(g.labels)


def min_dominating_set(g: LabeledGraph) -> list[str]:
    """Smallest dominating set; the first one found in canonical order wins."""
    if g.n > 20:
        raise GraphError("brute-force domination is limited to 20 nodes")
    for size in range(g.n + 1):
        for subset in combinations(g.labels, size):
            if dominates(g, subset):
                return list(subset)
    raise GraphError("no dominating set")  # unreachable: all nodes dominate


def shortest_path(g: LabeledGraph, u: str, v: str) -> list[str]:
    report = traverse(g, u, "bfs")
    if v not in report.parent:
        raise GraphError("disconnected")
    path = [v]
    while report.parent[path[-1]] is not None:
        path.append(report.parent[path[-1]])
    return path[::-1]


def hop_distances(g: LabeledGraph, u: str) -> dict[str, int]:
    report = traverse(g, u, "bfs")
    dist = {u: 0}
    for v in report.order[1:]:
        dist[v] = dist[report.parent[v]] + 1
    return dist


@dataclass
class Diagnostics:
    computed_n: int
    computed_m: int
    claimed_n: int = 10
    claimed_m: int = 21
    notes: list = field(default_factory=list)

    def lines(self) -> list[str]:
        return [
            f"nodes computed={self.computed_n} claimed={self.claimed_n}",
            f"edges computed={self.computed_m} claimed={self.claimed_m}",
        ] + self.notes


def diagnostics(g: LabeledGraph) -> Diagnostics:
    d = Diagnostics(g.n, g.m)
    if (g.n, g.m) != (d.claimed_n, d.claimed_m):
        without_anchor = (g.n - 1, g.m - 1) if g.degree("0") == 2 else None
        if without_anchor == (d.claimed_n, d.claimed_m):
            d.notes.append("claimed counts match the figure with the anchor 0 merged into its edge")
    return d


def completeness_check(g: LabeledGraph) -> tuple[bool, int]:
    """Every vertex explored and every incident edge visited; counts pair inspections."""
    inspections = 0
    explored = set()
    for u in g.labels:
        for v in g.labels:
            inspections += 1
            if g.matrix[g.index[u]][g.index[v]] or g.matrix[g.index[v]][g.index[u]]:
                explored.add(u)
                explored.add(v)
    return explored == set(g.labels), inspections
