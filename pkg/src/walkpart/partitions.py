"""Partitions (bounded faces), their block layouts and block addresses."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Iterable, Optional

from .construction import LABEL_RANK
from .errors import AddressError, PartitionError
from .geometry import (
    Arrangement, Point2, Rational, angle_key, as_q, cross, face_centroid, floor_sqrt, fmt_q,
)

Name = tuple[str, str, str]

# names the partition section uses, bound to the faces they denote here
ALIASES: dict[Name, Name] = {("5", "0", "c"): ("5", "t", "c"), ("4", "0", "b"): ("4", "t", "b")}
_ALIAS_OF = {v: k for k, v in ALIASES.items()}


def _select_key(label: str) -> tuple:
    if label in "12345":
        return (0, -int(label))
    if label == "0":
        return (1, 0)
    if label == "m":
        return (3, 0)
    if label == "t":
        return (4, 0)
    return (2, label)


def _display_key(label: str) -> tuple:
    if label.isdigit():
        return (0, -int(label))
    if label == "t":
        return (1, "")
    if label == "m":
        return (3, "")
    return (2, label)


def name_key(name: Iterable[str]) -> tuple:
    return tuple(LABEL_RANK.get(label, len(LABEL_RANK)) for label in name)


def format_name(name: Iterable[str]) -> str:
    return ",".join(name)


def parse_name(text: str) -> Name:
    parts = tuple(p.strip() for p in text.strip().strip("{}").split(","))
    if len(parts) != 3 or not all(parts):
        raise AddressError(f"bad partition name {text!r}")
    return parts  # type: ignore[return-value]


@dataclass(frozen=True)
class Resolution:
    theta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "theta", as_q(self.theta))
        if self.theta <= 0:
            raise PartitionError("theta must be positive")

    def halved(self) -> Resolution:
        return Resolution(self.theta / 2)


def _theta(theta) -> Fraction:
    return theta.theta if isinstance(theta, Resolution) else Resolution(theta).theta


@dataclass(frozen=True)
class BlockLayout:
    rows: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.rows)

    def locate(self, x: int) -> tuple[int, int]:
        if not 0 <= x < self.total:
            raise AddressError("invalid block index")
        for row, count in enumerate(self.rows):
            if x < count:
                return row, x
            x -= count
        raise AssertionError("unreachable")


@lru_cache(maxsize=1024)  # layouts are pure; reads resolve the same few repeatedly
def block_layout_sq(length_sq: Rational, theta) -> BlockLayout:
    """Layout for a base edge whose squared length is ``length_sq``."""
    length_sq, theta = as_q(length_sq), _theta(theta)
    if length_sq <= 0:
        raise PartitionError("base edge length must be positive")
    first = floor_sqrt(length_sq / (theta * theta)) + 1
    half = (first - 1) // 2
    return BlockLayout((first,) + tuple(2 * j for j in range(half, 0, -1)))


def block_layout(length: Rational, theta) -> BlockLayout:
    """Rows of blocks from a base edge of the given (rational) length inward.

    The first row holds floor(length / theta) + 1 blocks; the rows after it
    hold descending even counts down to 2.
    """
    length = as_q(length)
    if length <= 0:
        raise PartitionError("base edge length must be positive")
    return block_layout_sq(length * length, theta)


@dataclass(frozen=True)
class Partition:
    name: Name
    face: tuple[int, ...]
    boundary: tuple[str, ...]
    base_edge: tuple[str, str]
    base_length_sq: Fraction
    mirror: Optional[Name]
    ring: int
    centroid: Point2

    @property
    def alias(self) -> Optional[Name]:
        return _ALIAS_OF.get(self.name)


@dataclass(frozen=True)
class BlockAddress:
    name: Name
    index: int

    def __str__(self):
        return f"{format_name(self.name)}:{self.index}"

    @classmethod
    def parse(cls, text: str) -> BlockAddress:
        head, sep, tail = text.strip().strip("{}").rpartition(":")
        if not sep:
            raise AddressError(f"bad block address {text!r}")
        try:
            index = int(tail.strip())
        except ValueError:
            raise AddressError(f"bad block index in {text!r}") from None
        return cls(parse_name(head), index)


@dataclass(frozen=True)
class BlockDescriptor:
    partition: Partition
    row: int
    offset: int


def _reflect(p: Point2, a: Point2, b: Point2) -> Point2:
    d = b - a
    w = p - a
    k = (w.x * d.x + w.y * d.y) / d.norm_sq()
    foot = a + d.scale(k)
    return foot.scale(2) - p


class PartitionTable:
    """All partitions of a labeled arrangement, addressable by name or alias."""

    def __init__(self, partitions: list[Partition], venter: Point2, axis: tuple[Point2, Point2]):
        self.partitions = sorted(partitions, key=lambda p: name_key(p.name))
        self.by_name = {p.name: p for p in self.partitions}
        self.venter = venter
        self.axis = axis

    def __len__(self):
        return len(self.partitions)

    def __iter__(self):
        return iter(self.partitions)

    def canonical(self, name: Iterable[str]) -> Name:
        name = tuple(sorted(name, key=_display_key))  # labels may come in any order
        name = ALIASES.get(name, name)
        if name not in self.by_name:
            raise AddressError(f"unknown partition {format_name(name)}")
        return name

    def get(self, name: Iterable[str]) -> Partition:
        return self.by_name[self.canonical(name)]

    def layout(self, name: Iterable[str], theta) -> BlockLayout:
        return partition_blocks(self.get(name), theta)

    def mirror_of(self, name: Iterable[str]) -> Optional[Partition]:
        m = self.get(name).mirror
        return self.by_name[m] if m else None

    def schedule(self) -> list[Name]:
        """Flowware fill order.

        Outer ring first, then inward.  Within a ring, left-side partitions are
        swept counterclockwise around the venter starting from the axis
        direction, each immediately followed by its mirror partner; partitions
        without a distinct partner come last.
        """
        low, high = self.axis
        up = high - low

        def sweep(p: Partition) -> tuple:
            w = p.centroid - self.venter
            return (p.ring, angle_key(w.x * up.x + w.y * up.y, up.x * w.y - up.y * w.x))

        left = [p for p in self.partitions
                if cross(low, high, p.centroid) > 0 and p.mirror and p.mirror != p.name]
        order: list[Name] = []
        for p in sorted(left, key=sweep):
            order += [p.name, p.mirror]
        rest = [p for p in self.partitions if p.name not in order]
        order += [p.name for p in sorted(rest, key=sweep)]
        return order

    def export(self, theta) -> str:
        theta = _theta(theta)
        lines = []
        for p in self.partitions:
            layout = partition_blocks(p, theta)
            alias = format_name(p.alias) if p.alias else "-"
            lines.append(f"{format_name(p.name)}\t{alias}\ttheta={fmt_q(theta)}\t"
                         f"rows={','.join(map(str, layout.rows))}\ttotal={layout.total}")
        return "\n".join(lines) + "\n"


def _face_rings(arr: Arrangement) -> dict[int, int]:
    edge_faces: dict[tuple[int, int], list[int]] = {}
    for f, face in enumerate(arr.faces):
        for k in range(len(face)):
            i, j = face[k], face[(k + 1) % len(face)]
            edge_faces.setdefault((min(i, j), max(i, j)), []).append(f)
    outer = arr.outer_edges()
    ring = {}
    queue = deque()
    for f, face in enumerate(arr.faces):
        edges = {(min(face[k], face[(k + 1) % len(face)]), max(face[k], face[(k + 1) % len(face)]))
                 for k in range(len(face))}
        if edges & outer:
            ring[f] = 0
            queue.append(f)
    while queue:
        f = queue.popleft()
        face = arr.faces[f]
        for k in range(len(face)):
            i, j = face[k], face[(k + 1) % len(face)]
            for g in edge_faces[(min(i, j), max(i, j))]:
                if g not in ring:
                    ring[g] = ring[f] + 1
                    queue.append(g)
    return ring


def enumerate_partitions(arr: Arrangement, labels: dict[str, Point2]) -> PartitionTable:
    """One partition per bounded face, named by three of its boundary labels."""
    label_of = {arr.index_of(p): label for label, p in labels.items()}
    outer = arr.outer_edges()
    rings = _face_rings(arr)
    low, high = labels["3"], labels["0"]

    face_by_set = {frozenset(face): f for f, face in enumerate(arr.faces)}
    drafts = []
    for f, face in enumerate(arr.faces):
        boundary = tuple(label_of[i] for i in face if i in label_of)
        if len(boundary) < 3:
            raise PartitionError("unnameable face")
        chosen = sorted(boundary, key=_select_key)[:3]
        name = tuple(sorted(chosen, key=_display_key))

        sides = []
        for k in range(len(face)):
            i, j = face[k], face[(k + 1) % len(face)]
            pair = tuple(sorted((label_of.get(i, str(i)), label_of.get(j, str(j))),
                                key=lambda s: LABEL_RANK.get(s, 99)))
            on_outer = (min(i, j), max(i, j)) in outer
            sides.append((-arr.edge_length_sq(i, j), not on_outer, name_key(pair), pair,
                          arr.edge_length_sq(i, j)))
        base = min(sides)

        reflected = set()
        for i in face:
            q = _reflect(arr.vertices[i], low, high)
            if not arr.has_vertex(q):
                reflected = None
                break
            reflected.add(arr.index_of(q))
        mirror_face = face_by_set.get(frozenset(reflected)) if reflected is not None else None
        drafts.append((f, name, boundary, base[3], base[4], mirror_face,
                       face_centroid(arr.face_points(face))))

    names = {f: name for f, name, *_ in drafts}
    if len(set(names.values())) != len(names):
        raise PartitionError("two faces share a partition name")
    partitions = [
        Partition(name=name, face=arr.faces[f], boundary=boundary, base_edge=base_edge,
                  base_length_sq=length_sq,
                  mirror=names[mf] if mf is not None else None,
                  ring=rings.get(f, 0), centroid=centroid)
        for f, name, boundary, base_edge, length_sq, mf, centroid in drafts
    ]
    return PartitionTable(partitions, labels["m"], (low, high))


def partition_blocks(p: Partition, theta) -> BlockLayout:
    return block_layout_sq(p.base_length_sq, theta)


def resolve_address(table: PartitionTable, addr: BlockAddress, theta) -> BlockDescriptor:
    """Map ``{(i, j, k) : x}`` to a row and offset, counting rows from the base edge."""
    p = table.get(addr.name)
    row, offset = partition_blocks(p, theta).locate(addr.index)
    return BlockDescriptor(p, row, offset)


def refine(table: PartitionTable, name: Iterable[str], theta,
           occupied: Iterable[int] = ()) -> tuple[BlockLayout, dict[int, int]]:
    """Halve theta for one partition; occupied blocks keep their rank."""
    theta = _theta(theta)
    p = table.get(name)
    old = partition_blocks(p, theta)
    new = partition_blocks(p, theta / 2)
    remap = {}
    for k in sorted(occupied):
        if not 0 <= k < old.total:
            raise AddressError("invalid block index")
        # the new total is larger, so index k keeps its slot and its rank
        remap[k] = k
    assert new.total > old.total
    return new, remap
