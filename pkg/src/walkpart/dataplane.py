"""Block store: flowware ingest, reads, searches, access cost and persistence.

Records fill blocks in the flowware schedule of the partition table.  The
store log is append-only binary::

    b"WCDS" + version byte
    repeated: u32le payload length | u16le address length | address "i,j,k:x" | payload

The manifest (configware) is sorted ``key=value`` text.
"""

from __future__ import annotations

import struct
import threading
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Optional

from .errors import AddressError, CapacityError, GraphError, StoreError, StoreFormatError
from .figure import Figure, default_figure
from .geometry import Rational, as_q, fmt_q
from .graph import hop_distances, shortest_path
from .partitions import (
    BlockAddress, Name, format_name, name_key, parse_name, partition_blocks, resolve_address,
)

MAGIC = b"WCDS"
VERSION = 1
FORMAT_VERSION = 1
BASE_PAYLOAD = 64  # bytes per block at theta = 1


@dataclass(frozen=True)
class Record:
    payload: bytes
    seq: int


@dataclass(frozen=True)
class AccessPoint:
    v_x: str = "m"


def _edge_key(u: str, v: str) -> tuple[str, str]:
    return tuple(sorted((u, v), key=name_key))  # type: ignore[return-value]


class BlockStore:
    def __init__(self, figure: Figure, theta: Rational = 1, access: AccessPoint | str = "m"):
        self.figure = figure
        self.theta = as_q(theta)
        if self.theta <= 0:
            raise StoreError("theta must be positive")
        v_x = access.v_x if isinstance(access, AccessPoint) else access
        self.graph = figure.graph()
        if v_x not in self.graph.index:
            raise StoreError(f"access vertex {v_x!r} is not a node of the structure graph")
        self.access = AccessPoint(v_x)
        self.schedule: list[Name] = figure.partitions.schedule()
        self.occupancy: dict[BlockAddress, Record] = {}
        self.filled: dict[Name, int] = {name: 0 for name in self.schedule}
        self.vertex_counters: Counter = Counter({label: 0 for label in self.graph.labels})
        self.edge_counters: Counter = Counter({_edge_key(u, v): 0
                                               for u, v, _ in self.graph.edges()})
        # traversal counts left by the agents while drawing; data counters are separate
        names = figure.names
        self.agent_counters = {_edge_key(names[i], names[j]): n
                               for (i, j), n in figure.trace.edge_counts.items()}
        self._routes: dict[str, list[str]] = {}
        self._totals: tuple = (None, {})
        self._lock = threading.Lock()

    # sizing -----------------------------------------------------------------

    def total(self, name: Name) -> int:
        if self._totals[0] != self.theta:
            self._totals = (self.theta, {
                n: partition_blocks(self.figure.partitions.get(n), self.theta).total
                for n in self.schedule})
        return self._totals[1][name]

    @property
    def capacity(self) -> int:
        return sum(self.total(name) for name in self.schedule)

    @property
    def occupied(self) -> int:
        return len(self.occupancy)

    @property
    def payload_limit(self) -> Fraction:
        return BASE_PAYLOAD * self.theta

    def cursor(self) -> Optional[BlockAddress]:
        """Next free block in flowware order, or None when full."""
        for name in self.schedule:
            if self.filled[name] < self.total(name):
                return BlockAddress(name, self.filled[name])
        return None

    # writes -----------------------------------------------------------------

    def _route(self, name: Name) -> list[str]:
        anchor = name[0]
        if anchor not in self._routes:
            self._routes[anchor] = shortest_path(self.graph, self.access.v_x, anchor)
        return self._routes[anchor]

    def _place(self, addr: BlockAddress, payload: bytes) -> None:
        record = Record(bytes(payload), len(self.occupancy))
        self.occupancy[addr] = record
        self.filled[addr.name] += 1
        path = self._route(addr.name)
        for label in path:
            self.vertex_counters[label] += 1
        for u, v in zip(path, path[1:]):
            self.edge_counters[_edge_key(u, v)] += 1

    def ingest(self, payload: bytes) -> BlockAddress:
        payload = bytes(payload)
        with self._lock:
            if len(payload) > self.payload_limit:
                raise CapacityError(f"payload of {len(payload)} bytes exceeds the block size "
                                    f"{fmt_q(self.payload_limit)} at theta={fmt_q(self.theta)}")
            addr = self.cursor()
            if addr is None:
                raise CapacityError("capacity exhausted; refine θ")
            self._place(addr, payload)
            return addr

    def refine(self) -> Fraction:
        """Halve theta everywhere; stored records keep their addresses."""
        with self._lock:
            new = self.theta / 2
            if any(len(r.payload) > BASE_PAYLOAD * new for r in self.occupancy.values()):
                raise CapacityError("stored records exceed the refined block size")
            self.theta = new
            return new

    # reads ------------------------------------------------------------------

    def canonical(self, addr: BlockAddress) -> BlockAddress:
        canon = BlockAddress(self.figure.partitions.canonical(addr.name), addr.index)
        resolve_address(self.figure.partitions, canon, self.theta)
        return canon

    def read(self, addr: BlockAddress) -> Record:
        addr = self.canonical(addr)
        try:
            return self.occupancy[addr]
        except KeyError:
            raise StoreError("unoccupied") from None

    def search(self, pattern: bytes) -> list[BlockAddress]:
        hits = [(r.seq, a) for a, r in self.occupancy.items() if bytes(pattern) in r.payload]
        return [a for _, a in sorted(hits)]

    def access_cost(self, addr: BlockAddress) -> int:
        addr = self.canonical(addr)
        dist = hop_distances(self.graph, self.access.v_x)
        reachable = [dist[label] for label in addr.name if label in dist]
        if not reachable:
            raise GraphError("disconnected")
        return min(reachable)

    def records(self) -> list[tuple[BlockAddress, Record]]:
        return sorted(self.occupancy.items(), key=lambda item: item[1].seq)


def open_store(figure: Figure | None = None, theta: Rational = 1,
               access: AccessPoint | str = "m") -> BlockStore:
    return BlockStore(figure or default_figure(), theta, access)


# store log --------------------------------------------------------------------

def encode_entry(addr: BlockAddress, payload: bytes) -> bytes:
    text = str(addr).encode("utf-8")
    return struct.pack("<IH", len(payload), len(text)) + text + bytes(payload)


def export_log(store: BlockStore) -> bytes:
    return MAGIC + bytes([VERSION]) + b"".join(encode_entry(a, r.payload)
                                                for a, r in store.records())


def parse_log(data: bytes) -> list[tuple[BlockAddress, bytes]]:
    if len(data) < 5:
        raise StoreFormatError("truncated header", len(data))
    if data[:4] != MAGIC:
        raise StoreFormatError("bad magic", 0)
    if data[4] != VERSION:
        raise StoreFormatError(f"unsupported log version {data[4]}", 4)
    entries = []
    pos = 5
    while pos < len(data):
        start = pos
        if pos + 6 > len(data):
            raise StoreFormatError("truncated entry header", start)
        size, alen = struct.unpack_from("<IH", data, pos)
        pos += 6
        if pos + alen + size > len(data):
            raise StoreFormatError("truncated entry", start)
        try:
            addr = BlockAddress.parse(data[pos:pos + alen].decode("utf-8"))
        except (UnicodeDecodeError, AddressError):
            raise StoreFormatError("bad address", pos) from None
        pos += alen
        entries.append((addr, data[pos:pos + size]))
        pos += size
    return entries


def replay_log(store: BlockStore, data: bytes) -> BlockStore:
    """Apply a log to an empty store, placing each record at its logged address."""
    if store.occupancy:
        raise StoreError("replay needs an empty store")
    for addr, payload in parse_log(data):
        try:
            canon = store.canonical(addr)
        except AddressError as exc:
            raise StoreError(f"log address {addr} invalid at theta={fmt_q(store.theta)}: {exc}")
        if canon in store.occupancy:
            raise StoreError(f"log writes {canon} twice")
        if canon.index != store.filled[canon.name]:
            raise StoreError(f"log address {canon} breaks the fill order")
        store._place(canon, payload)
    return store


# manifest ---------------------------------------------------------------------

def export_manifest(store: BlockStore) -> str:
    fields = {
        "access_vertex": store.access.v_x,
        "capacity": str(store.capacity),
        "format_version": str(FORMAT_VERSION),
        "occupied": str(store.occupied),
        "theta": fmt_q(store.theta),
    }
    for name in store.schedule:
        layout = partition_blocks(store.figure.partitions.get(name), store.theta)
        fields[f"partition.{format_name(name)}"] = (
            f"{','.join(map(str, layout.rows))};{layout.total};{store.filled[name]}")
    for label, n in store.vertex_counters.items():
        fields[f"counter.vertex.{label}"] = str(n)
    for (u, v), n in store.edge_counters.items():
        fields[f"counter.edge.{u}-{v}"] = str(n)
    return "".join(f"{k}={fields[k]}\n" for k in sorted(fields))


def _parse_manifest(data: bytes | str) -> dict[str, str]:
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    fields = {}
    offset = 0
    for line in text.splitlines(keepends=True):
        body = line.rstrip("\n")
        if body:
            key, sep, value = body.partition("=")
            if not sep or key in fields:
                raise StoreFormatError(f"bad manifest line {body!r}", offset)
            fields[key] = value
        offset += len(line.encode("utf-8"))
    return fields


def import_manifest(data: bytes | str, figure: Figure | None = None) -> BlockStore:
    """Empty store configured as the manifest describes."""
    fields = _parse_manifest(data)
    for key in ("format_version", "theta", "access_vertex"):
        if key not in fields:
            raise StoreFormatError(f"manifest lacks {key}", len(data))
    if fields["format_version"] != str(FORMAT_VERSION):
        raise StoreFormatError(f"unsupported manifest version {fields['format_version']}", 0)
    try:
        theta = Fraction(fields["theta"])
    except ValueError:
        raise StoreError(f"bad theta {fields['theta']!r}") from None
    store = open_store(figure, theta, fields["access_vertex"])
    expected = {name: "" for name in store.schedule}
    for key, value in fields.items():
        if key.startswith("partition."):
            name = parse_name(key[len("partition."):])
            if name not in expected:
                raise StoreError(f"manifest partition {format_name(name)} unknown")
            rows, total, _ = value.split(";")
            layout = partition_blocks(store.figure.partitions.get(name), theta)
            if rows != ",".join(map(str, layout.rows)) or int(total) != layout.total:
                raise StoreError(f"manifest layout of {format_name(name)} disagrees")
    return store


def load_store(manifest: bytes | str, log: bytes, figure: Figure | None = None) -> BlockStore:
    store = replay_log(import_manifest(manifest, figure), log)
    if export_manifest(store) != (manifest.decode("utf-8") if isinstance(manifest, bytes)
                                  else manifest):
        raise StoreError("manifest does not match the replayed log")
    return store


def manifest_path(log_path: Path) -> Path:
    return log_path.with_name(log_path.name + ".manifest")


def save_store(store: BlockStore, log_path: Path) -> None:
    log_path = Path(log_path)
    log_path.write_bytes(export_log(store))
    manifest_path(log_path).write_text(export_manifest(store), encoding="utf-8")


def open_saved(log_path: Path, figure: Figure | None = None) -> BlockStore:
    log_path = Path(log_path)
    return load_store(manifest_path(log_path).read_text(encoding="utf-8"),
                      log_path.read_bytes(), figure)


def append_entry(log_path: Path, addr: BlockAddress, payload: bytes) -> None:
    with open(log_path, "ab") as fh:
        fh.write(encode_entry(addr, payload))

