"""Traversal accounting for agent traces and drawing-route planning."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .construction import Trace, TraceEntry
from .errors import GeometryError, TraceError
from .geometry import Arrangement, Point2, Segment

COUNTED = ("walk", "string", "cast")


def _path_vertices(arr: Arrangement, start: Point2, end: Point2) -> list[int]:
    """Arrangement vertices along the straight move start -> end, in order."""
    try:
        i, j = arr.index_of(start), arr.index_of(end)
    except GeometryError:
        raise TraceError(f"off-structure move {start} -> {end}") from None
    seg = Segment(start, end)
    on = sorted((k for k, p in enumerate(arr.vertices) if seg.contains(p)),
                key=lambda k: (arr.vertices[k] - start).norm_sq())
    assert on[0] == i and on[-1] == j
    for u, v in zip(on, on[1:]):
        if not arr.has_edge(u, v):
            raise TraceError(f"off-structure move {start} -> {end}")
    return on


def count_traversals(trace: Trace, arr: Arrangement) -> tuple[dict, dict]:
    """Per-edge traversal counts and per-vertex visit counts for a trace.

    Moves of kind ``grid`` are positioning on the bare grid and add vertex
    visits only; every other move must follow arrangement edges.
    """
    edges = {e: 0 for e in arr.edges}
    visits = {i: 0 for i in range(len(arr.vertices))}
    for entry in trace.entries:
        kind = entry.kind
        if kind in COUNTED and entry.start != entry.end:
            path = _path_vertices(arr, entry.start, entry.end)
            for u, v in zip(path, path[1:]):
                edges[(min(u, v), max(u, v))] += 1
            for k in path[1:]:
                visits[k] += 1
        elif kind == "grid":
            if arr.has_vertex(entry.end):
                visits[arr.index_of(entry.end)] += 1
        else:
            if arr.has_vertex(entry.start):
                visits[arr.index_of(entry.start)] += 1
    return edges, visits


@dataclass
class Verdict:
    accepted: bool
    edge_counts: dict
    uncovered: list = field(default_factory=list)
    overused: list = field(default_factory=list)
    unvisited: list = field(default_factory=list)

    def describe(self, names: dict | None = None) -> str:
        name = (lambda i: names[i]) if names else str
        if self.accepted:
            return "accepted"
        parts = []
        if self.uncovered:
            parts.append("uncovered " + " ".join(f"{name(u)}-{name(v)}" for u, v in self.uncovered))
        if self.overused:
            parts.append("overused " + " ".join(f"{name(u)}-{name(v)}x{self.edge_counts[(u, v)]}"
                                                for u, v in self.overused))
        if self.unvisited:
            parts.append("unvisited " + " ".join(name(i) for i in self.unvisited))
        return "rejected: " + "; ".join(parts)


def verify_trace(trace: Trace, arr: Arrangement) -> Verdict:
    """Accept a trace iff every edge is traversed once or twice and every vertex visited."""
    edges, visits = count_traversals(trace, arr)
    uncovered = [e for e, n in edges.items() if n == 0]
    overused = [e for e, n in edges.items() if n > 2]
    unvisited = [i for i, n in visits.items() if n == 0]
    return Verdict(not (uncovered or overused or unvisited), edges, uncovered, overused, unvisited)


def _euler(n_vertices: int, edge_list: list[tuple[int, int]], start: int) -> list[int]:
    """Hierholzer over a multigraph given as an edge list; returns the vertex sequence."""
    adj: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n_vertices)}
    for eid, (u, v) in enumerate(edge_list):
        adj[u].append((v, eid))
        adj[v].append((u, eid))
    for nbrs in adj.values():
        nbrs.sort(reverse=True)  # pop() then yields the smallest neighbour first
    used = [False] * len(edge_list)
    stack, walk = [start], []
    while stack:
        u = stack[-1]
        while adj[u] and used[adj[u][-1][1]]:
            adj[u].pop()
        if adj[u]:
            v, eid = adj[u].pop()
            used[eid] = True
            stack.append(v)
        else:
            walk.append(stack.pop())
    if not all(used):
        raise TraceError("graph is not connected")
    return walk[::-1]


def _bfs_path(arr: Arrangement, u: int, v: int) -> list[int]:
    parent = {u: None}
    queue = deque([u])
    while queue:
        x = queue.popleft()
        if x == v:
            break
        for y in arr.neighbors(x):
            if y not in parent:
                parent[y] = x
                queue.append(y)
    path = [v]
    while parent[path[-1]] is not None:
        path.append(parent[path[-1]])
    return path[::-1]


def _matchings(items: list[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        for tail in _matchings(rest[:k] + rest[k + 1:]):
            yield [(first, partner)] + tail


def _single_walk(arr: Arrangement, odd: list[int]) -> tuple[int, ...]:
    edges = list(arr.edges)
    if not odd:
        return tuple(_euler(len(arr.vertices), edges, 0))

    path_edges = {}
    for u, v in combinations(odd, 2):
        p = _bfs_path(arr, u, v)
        path_edges[(u, v)] = {(min(a, b), max(a, b)) for a, b in zip(p, p[1:])}

    best = None
    # open walks: leave one odd pair as the endpoints; closed: pair everything
    options = [(pair, [x for x in odd if x not in pair]) for pair in combinations(odd, 2)]
    options.append((None, odd))
    for ends, rest in options:
        for matching in _matchings(rest):
            doubled: set = set()
            for pair in matching:
                doubled ^= path_edges[pair]
            cost = len(edges) + len(doubled)
            if best is None or cost < best[0]:
                best = (cost, ends, sorted(doubled))
    _, ends, doubled = best
    start = ends[0] if ends else 0
    return tuple(_euler(len(arr.vertices), edges + doubled, start))


def plan_routes(arr: Arrangement, k: int) -> list[tuple[int, ...]]:
    """Routes for ``k`` agents that together draw every edge.

    With ``k == 1`` the single agent may retrace edges (at most twice each)
    and the total walk length is minimised.  With ``k >= 2`` the routes are
    edge-disjoint trails covering each edge exactly once.
    """
    if k < 1:
        raise TraceError("need at least one agent")
    if arr.components() != 1:
        raise TraceError("arrangement is not connected")
    odd = [i for i in range(len(arr.vertices)) if arr.degree(i) % 2]
    if k == 1:
        return [_single_walk(arr, odd)]

    pairs = len(odd) // 2
    if pairs > k:
        raise TraceError("insufficient agents for single-pass drawing")
    edges = list(arr.edges)
    n = len(arr.vertices)
    if pairs == 0:
        trails = [tuple(_euler(n, edges, 0))]
    else:
        hub = n  # virtual vertex joined to every odd vertex
        circuit = _euler(n + 1, edges + [(hub, v) for v in odd], hub)
        trails, current = [], []
        for v in circuit[1:]:
            if v == hub:
                trails.append(tuple(current))
                current = []
            else:
                current.append(v)
    while len(trails) < k:
        longest = max(range(len(trails)), key=lambda i: (len(trails[i]), -i))
        trail = trails[longest]
        if len(trail) < 3:
            raise TraceError("fewer edges than agents")
        cut = len(trail) // 2
        trails[longest:longest + 1] = [trail[:cut + 1], trail[cut:]]
    return trails


def routes_to_trace(routes: list[tuple[int, ...]], arr: Arrangement) -> Trace:
    """One agent per route, walking it edge by edge."""
    trace = Trace()
    for agent, route in enumerate(routes, 1):
        for u, v in zip(route, route[1:]):
            trace.append(TraceEntry(agent, "walk", arr.vertices[u], arr.vertices[v]))
    return trace
