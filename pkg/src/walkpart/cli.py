"""Command line: build, render, graph and store subcommands over a state directory."""

from __future__ import annotations

import argparse
import fcntl
import sys
from contextlib import contextmanager
from fractions import Fraction
from pathlib import Path

from .construction import Config
from .dataplane import (
    MAGIC, VERSION, append_entry, export_manifest, manifest_path, open_saved, open_store,
)
from .errors import ConstructionError, WalkerError
from .figure import build_figure
from .geometry import fmt_q
from .graph import diagnostics, hamiltonian_path, min_dominating_set, shortest_path, traverse
from .partitions import BlockAddress
from .render import FIGURES, render


class UserError(Exception):
    pass


def parse_theta(text: str) -> Fraction:
    try:
        theta = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UserError(f"bad theta {text!r}; expected p/q") from None
    if theta <= 0:
        raise UserError("theta must be positive")
    return theta


def _state_theta(state: Path) -> Fraction:
    table = state / "partitions.txt"
    if not table.exists():
        raise UserError(f"no built state in {state}; run build first")
    for field in table.read_text(encoding="utf-8").split("\n", 1)[0].split("\t"):
        if field.startswith("theta="):
            return parse_theta(field[len("theta="):])
    raise UserError(f"{table} has no theta")


def _out(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_build(args) -> int:
    theta = parse_theta(args.theta)
    out = Path(args.out or args.dir)
    out.mkdir(parents=True, exist_ok=True)
    fig = build_figure(Config(theta=theta))
    (out / "trace.txt").write_text(fig.trace.export(), encoding="utf-8")
    (out / "graph.txt").write_text(fig.graph().export(), encoding="utf-8")
    (out / "partitions.txt").write_text(fig.partitions.export(theta), encoding="utf-8")
    arr = fig.arrangement
    _out(f"vertices={len(arr.vertices)} edges={len(arr.edges)} partitions={len(fig.partitions)}")
    for line in diagnostics(fig.graph()).lines():
        _out(line)
    return 0


def cmd_render(args) -> int:
    if args.figure not in FIGURES:
        raise UserError(f"unknown figure {args.figure!r}; choose from {', '.join(FIGURES)}")
    theta = _state_theta(Path(args.dir))
    svg = render(build_figure(Config(theta=theta)), args.figure, theta)
    if args.svg:
        Path(args.svg).write_text(svg, encoding="utf-8")
    else:
        sys.stdout.write(svg)
    return 0


def cmd_graph(args) -> int:
    theta = _state_theta(Path(args.dir))
    g = build_figure(Config(theta=theta)).graph()
    labels = args.labels
    need = {"bfs": 1, "dfs": 1, "ham": 0, "dom": 0, "path": 2}[args.query]
    if len(labels) != need:
        raise UserError(f"graph {args.query} takes {need} label(s)")
    for label in labels:
        if label not in g.index:
            raise UserError(f"unknown label {label!r}")
    if args.query in ("bfs", "dfs"):
        report = traverse(g, labels[0], args.query)
        _out(" ".join(report.order))
        _out(f"node_inspections={report.node_inspections} edge_inspections={report.edge_inspections}")
    elif args.query == "ham":
        path = hamiltonian_path(g)
        _out(" ".join(path) if path else "none")
    elif args.query == "dom":
        dom = min_dominating_set(g)
        _out(f"size={len(dom)} {{{','.join(dom)}}}")
    else:
        _out(" ".join(shortest_path(g, *labels)))
    return 0


@contextmanager
def _locked(path: Path, exclusive: bool):
    lock = path.with_name(path.name + ".lock")
    with open(lock, "a") as fh:
        fcntl.flock(fh, fcntl.LOCK_EX if exclusive else fcntl.LOCK_SH)
        try:
            yield
        finally:
            fcntl.flock(fh, fcntl.LOCK_UN)


def _load(log: Path, theta: Fraction):
    fig = build_figure(Config(theta=theta))
    if log.exists():
        return open_saved(log, fig)
    return open_store(fig, theta)


def _payload(text: str) -> bytes:
    return sys.stdin.buffer.read() if text == "-" else text.encode("utf-8")


def cmd_store(args) -> int:
    state = Path(args.dir)
    theta = _state_theta(state)
    log = Path(args.store) if args.store else state / "store.log"
    op, rest = args.op, args.args
    need = {"put": 1, "get": 1, "find": 1, "manifest": 0, "refine": 0}[op]
    if len(rest) != need:
        raise UserError(f"store {op} takes {need} argument(s)")

    if op in ("put", "refine"):
        with _locked(log, exclusive=True):
            store = _load(log, theta)
            if op == "put":
                addr = store.ingest(_payload(rest[0]))
                if not log.exists():
                    log.write_bytes(MAGIC + bytes([VERSION]))
                append_entry(log, addr, store.occupancy[addr].payload)
                _out(str(addr))
            else:
                if not log.exists():
                    log.write_bytes(MAGIC + bytes([VERSION]))
                _out(f"theta={fmt_q(store.refine())}")
            manifest_path(log).write_text(export_manifest(store), encoding="utf-8")
        return 0

    with _locked(log, exclusive=False):
        store = _load(log, theta)
    if op == "get":
        record = store.read(BlockAddress.parse(rest[0]))
        sys.stdout.buffer.write(record.payload + b"\n")
        sys.stdout.flush()
    elif op == "find":
        for addr in store.search(_payload(rest[0])):
            _out(str(addr))
    else:
        sys.stdout.write(export_manifest(store))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walkpart", description=__doc__)
    parser.add_argument("--dir", default=".", help="state directory (default: current)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="run the construction and write trace, graph, partitions")
    p.add_argument("--theta", default="1", help="block resolution as p/q")
    p.add_argument("--out", help="output directory (default: --dir)")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("render", help="write an SVG view of the built figure")
    p.add_argument("--figure", required=True, help="construction | partitions | graph")
    p.add_argument("--svg", help="output path (default: stdout)")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("graph", help="queries on the structure graph")
    p.add_argument("query", choices=("bfs", "dfs", "ham", "dom", "path"))
    p.add_argument("labels", nargs="*")
    p.set_defaults(func=cmd_graph)

    p = sub.add_parser("store", help="block store operations")
    p.add_argument("--store", help="store log path (default: DIR/store.log)")
    p.add_argument("op", choices=("put", "get", "find", "manifest", "refine"))
    p.add_argument("args", nargs="*")
    p.set_defaults(func=cmd_store)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        return args.func(args)
    except (UserError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (AssertionError, ConstructionError) as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 2
    except WalkerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
