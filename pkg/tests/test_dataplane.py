import random
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import bfs_layers, labeled_edges
from walkpart.dataplane import (
    MAGIC, VERSION, encode_entry, export_log, export_manifest, import_manifest, load_store,
    open_saved, open_store, parse_log, replay_log, save_store,
)
from walkpart.errors import AddressError, CapacityError, StoreError, StoreFormatError
from walkpart.partitions import BlockAddress


def A(text):
    return BlockAddress.parse(text)


@pytest.fixture
def store(fig):
    return open_store(fig)


def test_capacity(store):
    assert store.capacity == 350 and store.occupied == 0
    assert store.cursor() == A("4,t,b:0")


def test_forty_second_ingest_moves_on(store):
    addrs = [store.ingest(b"x") for _ in range(42)]
    assert addrs[0] == A("4,t,b:0") and addrs[40] == A("4,t,b:40")
    assert addrs[41] == A("5,t,c:0")


def test_read_after_write(store):
    addr = store.ingest(b"hello")
    assert store.read(addr).payload == b"hello"
    assert store.read(A("{4,0,b : 0}")).payload == b"hello"


def test_read_unoccupied(store):
    with pytest.raises(StoreError, match="unoccupied"):
        store.read(A("5,t,c:3"))


def test_read_invalid(store):
    with pytest.raises(AddressError):
        store.read(A("5,t,c:41"))


def test_search_in_ingest_order(store):
    a = store.ingest(b"abc")
    store.ingest(b"zzz")
    c = store.ingest(b"xabcx")
    assert store.search(b"abc") == [a, c]
    assert store.search(b"nope") == []


def test_payload_limit(store):
    store.ingest(b"x" * 64)
    with pytest.raises(CapacityError):
        store.ingest(b"x" * 65)


def test_full_then_refine(store):
    for _ in range(350):
        store.ingest(b"")
    with pytest.raises(CapacityError, match="capacity exhausted; refine"):
        store.ingest(b"more")
    store.refine()
    assert store.capacity > 350
    addr = store.ingest(b"more")
    assert store.read(addr).payload == b"more"


def test_refine_refuses_large_records(store):
    store.ingest(b"x" * 40)
    with pytest.raises(CapacityError):
        store.refine()
    assert store.theta == 1


def test_access_cost(fig):
    assert open_store(fig, access="3").access_cost(A("5,t,c:0")) == 2
    assert open_store(fig).access_cost(A("5,t,c:0")) == 1


def test_bad_access_vertex(fig):
    with pytest.raises(StoreError):
        open_store(fig, access="z")


def test_counters_follow_bfs(store):
    dist = bfs_layers(labeled_edges(), "m")
    for _ in range(50):
        store.ingest(b"p")
    # each ingest walks a shortest path: hops counted equal the anchor's distance
    hops = sum(dist[a.name[0]] for a, _ in store.records())
    assert sum(store.edge_counters.values()) == hops
    assert sum(store.vertex_counters.values()) == hops + store.occupied


def test_agent_counters_kept_apart(store):
    before = dict(store.agent_counters)
    store.ingest(b"p")
    assert store.agent_counters == before
    assert set(before.values()) <= {1, 2}


def test_concurrent_ingest_unique(store):
    out = []

    def worker():
        for _ in range(25):
            out.append(store.ingest(b"t"))

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert len(set(out)) == 100 == store.occupied


def test_save_load_roundtrip(fig, store, tmp_path):
    rng = random.Random(7)
    for _ in range(60):
        store.ingest(bytes(rng.randrange(256) for _ in range(rng.randrange(65))))
    path = tmp_path / "store.log"
    save_store(store, path)
    again = open_saved(path, fig)
    assert export_log(again) == path.read_bytes()
    assert export_manifest(again) == export_manifest(store)
    for addr, record in store.records():
        assert again.read(addr).payload == record.payload


def test_log_header_and_entry(store):
    addr = store.ingest(b"hi")
    data = export_log(store)
    assert data[:5] == MAGIC + bytes([VERSION])
    assert data[5:] == encode_entry(addr, b"hi")
    assert parse_log(data) == [(addr, b"hi")]


@pytest.mark.parametrize("data, offset", [
    (b"WCD", 3),
    (b"XXXX\x01", 0),
    (b"WCDS\x02", 4),
    (b"WCDS\x01\x05\x00", 5),
])
def test_log_format_errors(data, offset):
    with pytest.raises(StoreFormatError) as info:
        parse_log(data)
    assert info.value.offset == offset
    assert f"at byte offset {offset}" in str(info.value)


def test_truncated_payload(store):
    store.ingest(b"hello")
    data = export_log(store)
    with pytest.raises(StoreFormatError, match="truncated entry at byte offset 5"):
        parse_log(data[:-1])


def test_replay_rejects_gaps(fig):
    bad = MAGIC + bytes([VERSION]) + encode_entry(A("4,t,b:3"), b"x")
    with pytest.raises(StoreError, match="fill order"):
        replay_log(open_store(fig), bad)


def test_manifest_mismatch(fig, store):
    store.ingest(b"x")
    manifest = export_manifest(store)
    with pytest.raises(StoreError, match="does not match"):
        load_store(manifest, MAGIC + bytes([VERSION]), fig)


def test_manifest_format_errors(fig):
    with pytest.raises(StoreFormatError):
        import_manifest("theta=1\n", fig)
    with pytest.raises(StoreFormatError, match="bad manifest line"):
        import_manifest("format_version=1\nnoequals\n", fig)


def test_manifest_contents(store):
    store.ingest(b"x")
    lines = export_manifest(store).splitlines()
    assert lines == sorted(lines)
    assert "capacity=350" in lines and "occupied=1" in lines and "theta=1/1" in lines
    assert "partition.4,t,b=11,10,8,6,4,2;41;1" in lines
    assert "counter.edge.0-m=0" in lines


@settings(max_examples=25, deadline=None)
@given(st.lists(st.binary(max_size=64), max_size=120))
def test_random_ingests_roundtrip(fig, payloads):
    store = open_store(fig)
    addrs = [store.ingest(p) for p in payloads]
    assert len(set(addrs)) == len(addrs)
    again = load_store(export_manifest(store), export_log(store), fig)
    for addr, payload in zip(addrs, payloads):
        assert again.read(addr).payload == payload
