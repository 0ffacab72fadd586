"""The three walker agents and the script they follow to draw the figure.

The agents share one program: a function from the collective percept history
to the next step.  Each agent only executes steps addressed to it, so the
same program drives all three.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .errors import ConstructionError
from .geometry import (
    Arrangement, Circle, Point2, Rational, Segment, as_q, build_arrangement,
    extend_double, fmt_q, midpoint, segment_intersection,
)

LABELS = ("0", "1", "2", "3", "4", "5", "a", "b", "c", "m", "t")
LABEL_RANK = {label: i for i, label in enumerate(LABELS)}

# numbering used while the agents draw (inner corners 1-3, outer endpoints 4-6)
SCRIPT_ALIASES = {"1": "t", "2": "1", "3": "2", "4": "3", "5": "5", "6": "4"}

# counted moves; "grid" walks happen on the bare coordinate grid and are not
MOVES = ("grid", "walk", "string", "cast")


@dataclass(frozen=True)
class Config:
    anchor: Point2 = Point2(0, 0)
    unit: Fraction = Fraction(1)
    theta: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "unit", as_q(self.unit))
        object.__setattr__(self, "theta", as_q(self.theta))
        if self.unit <= 0:
            raise ConstructionError("unit scale must be positive")
        if self.theta <= 0:
            raise ConstructionError("theta must be positive")


@dataclass(frozen=True)
class TraceEntry:
    agent: int
    action: str
    start: Point2
    end: Point2

    @property
    def kind(self) -> str:
        return self.action.split(":", 1)[0]

    def line(self) -> str:
        return (f"{self.agent}\t{self.action}\t"
                f"{fmt_q(self.start.x)},{fmt_q(self.start.y)}\t"
                f"{fmt_q(self.end.x)},{fmt_q(self.end.y)}")


@dataclass
class Trace:
    entries: list[TraceEntry] = field(default_factory=list)
    edge_counts: dict = field(default_factory=dict)
    vertex_visits: dict = field(default_factory=dict)

    def append(self, entry: TraceEntry) -> None:
        last = self.last_for(entry.agent)
        if last is not None and last.end != entry.start:
            raise ConstructionError(f"agent {entry.agent} teleported from {last.end} to {entry.start}")
        self.entries.append(entry)

    def last_for(self, agent: int) -> Optional[TraceEntry]:
        for e in reversed(self.entries):
            if e.agent == agent:
                return e
        return None

    def export(self) -> str:
        return "".join(e.line() + "\n" for e in self.entries)

    @classmethod
    def parse(cls, text: str) -> Trace:
        trace = cls()
        for n, line in enumerate(text.splitlines(), 1):
            if not line:
                continue
            try:
                agent, action, p, q = line.split("\t")
                trace.append(TraceEntry(int(agent), action, Point2(*p.split(",")),
                                        Point2(*q.split(","))))
            except ValueError as exc:
                raise ConstructionError(f"bad trace line {n}: {line!r}") from exc
        return trace


@dataclass(frozen=True)
class ConstructionResult:
    labeled_points: dict
    strings: tuple[tuple[Segment, ...], ...]
    rays: tuple[Segment, ...]
    circles: tuple[Circle, ...]
    saved_distances: dict  # squared lengths
    config: Config

    def segments(self) -> list[Segment]:
        return [s for string in self.strings for s in string] + list(self.rays)

    def arrangement(self) -> Arrangement:
        return build_arrangement(self.segments(), marks=self.labeled_points.values())


# The script: (actor, verb, *args).  Offsets are in grid units.
SCRIPT = (
    (1, "mark", "0"),
    (2, "remember"),
    (3, "remember"),
    (1, "grid", 0, 5), (1, "mark", "t"), (1, "remember"),
    (2, "grid", 0, -5), (2, "mark", "a"), (2, "grid", -5, 0), (2, "mark", "1"), (2, "remember"),
    (3, "grid", 0, -5), (3, "grid", 5, 0), (3, "mark", "2"), (3, "remember"),
    # first elastic string, laid by agent 1 through the other two pins
    (1, "pin", 1), (1, "string", "1"), (2, "pin", 1),
    (1, "string", "2"), (3, "pin", 1), (1, "string", "t"),
    (2, "scribe"), (3, "scribe"),
    (1, "cast", "a", "3", "d4"),
    (3, "walk_half", "t"), (3, "mark", "c"),
    (2, "walk_half", "t"), (2, "mark", "b"),
    (1, "walk", "1"), (1, "cast", "c", "5", "d5"),
    (3, "walk_crossing"), (3, "walk", "2"), (3, "cast", "b", "4", "d6"),
    (2, "walk_crossing"), (2, "mark", "m"), (2, "walk", "3"),
    # second elastic string, laid by agent 2
    (2, "pin", 2), (2, "string", "5"), (1, "pin", 2),
    (2, "string", "4"), (3, "pin", 2), (2, "string", "3"),
)


def walker_program(history: tuple) -> Optional[tuple]:
    """Next collective step given every step performed so far (None when done)."""
    return SCRIPT[len(history)] if len(history) < len(SCRIPT) else None


@dataclass
class Agent:
    id: int
    position: Point2
    program: Callable[[tuple], Optional[tuple]] = walker_program
    memory: list = field(default_factory=list)


class _Sheet:
    """Shared drawing surface: marks, strings, rays, circles."""

    def __init__(self, config: Config):
        self.config = config
        self.marks: dict[str, Point2] = {}
        self.strings: dict[int, list[Point2]] = {}
        self.rays: list[Segment] = []
        self.circles: list[Circle] = []
        self.distances: dict[str, Fraction] = {}


def _step(agent: Agent, step: tuple, sheet: _Sheet, trace: Trace) -> None:
    _, verb, *args = step
    here = agent.position
    cfg = sheet.config

    def move(kind: str, to: Point2) -> None:
        trace.append(TraceEntry(agent.id, kind, here, to))
        agent.position = to

    def stay(action: str) -> None:
        trace.append(TraceEntry(agent.id, action, here, here))

    if verb == "mark":
        label = args[0]
        if label in sheet.marks and sheet.marks[label] != here:
            raise ConstructionError(f"label {label} already marked elsewhere")
        sheet.marks[label] = here
        stay(f"mark:{label}")
    elif verb == "remember":
        agent.memory.append(("location", here))
        stay("remember")
    elif verb == "grid":
        dx, dy = args
        move("grid", here + Point2(dx, dy).scale(cfg.unit))
    elif verb == "pin":
        sheet.strings.setdefault(args[0], []).append(here)
        stay(f"pin:{args[0]}")
    elif verb == "string":
        move("string", sheet.marks[args[0]])
    elif verb == "scribe":
        sheet.circles.append(Circle(here, 2 * cfg.unit, cfg.theta))
        stay("scribe")
    elif verb == "cast":
        through, label, name = args
        end = extend_double(here, sheet.marks[through])
        sheet.rays.append(Segment(here, end))
        move("cast", end)
        sheet.marks[label] = end
        trace.append(TraceEntry(agent.id, f"mark:{label}", end, end))
        sheet.distances[name] = (end - here).norm_sq()
        agent.memory.append((name, sheet.distances[name]))
        trace.append(TraceEntry(agent.id, f"remember:{name}", end, end))
    elif verb == "walk_half":
        corner = sheet.marks[args[0]]
        move("walk", midpoint(Segment(here, corner)))
    elif verb == "walk":
        move("walk", sheet.marks[args[0]])
    elif verb == "walk_crossing":
        move("walk", _ray_crossing(sheet.rays))
    else:
        raise ConstructionError(f"unknown verb {verb!r}")


def _ray_crossing(rays: list[Segment]) -> Point2:
    hit = segment_intersection(rays[0], rays[1])
    if not isinstance(hit, Point2):
        raise ConstructionError("rays do not cross in a single point")
    for ray in rays[2:]:
        if not ray.contains(hit):
            raise ConstructionError("rays are not concurrent")
    return hit


def run_construction(config: Config | None = None) -> tuple[ConstructionResult, Trace]:
    """Execute the walker script and return the figure with its move trace."""
    config = config or Config()
    sheet = _Sheet(config)
    agents = {i: Agent(i, config.anchor) for i in (1, 2, 3)}
    trace = Trace()
    history: list[tuple] = []
    while True:
        step = agents[1].program(tuple(history))
        if step is None:
            break
        # every agent consults the same program; only the addressee acts
        for agent in agents.values():
            if agent.program(tuple(history)) is not step:
                raise ConstructionError("agents disagree on the program")
        _step(agents[step[0]], step, sheet, trace)
        history.append(step)

    strings = []
    for no in sorted(sheet.strings):
        pins = sheet.strings[no]
        strings.append(tuple(Segment(pins[i], pins[(i + 1) % 3]) for i in range(3)))
    labeled = {label: sheet.marks[label] for label in LABELS}
    result = ConstructionResult(
        labeled_points=labeled,
        strings=tuple(strings),
        rays=tuple(sheet.rays),
        circles=tuple(sheet.circles),
        saved_distances=dict(sorted(sheet.distances.items())),
        config=config,
    )
    _check(result)

    from .routes import count_traversals
    arrangement = result.arrangement()
    trace.edge_counts, trace.vertex_visits = count_traversals(trace, arrangement)
    return result, trace


def _check(result: ConstructionResult) -> None:
    pts = result.labeled_points
    if set(pts) != set(LABELS):
        raise ConstructionError("construction did not mark every label")
    if result.saved_distances["d5"] != result.saved_distances["d6"]:
        raise ConstructionError("mirror rays have different lengths")
    for ray in result.rays:
        if not ray.contains(pts["m"]):
            raise ConstructionError("venter is not on every ray")


def canonical_labels(result: ConstructionResult) -> dict[str, Point2]:
    return {label: result.labeled_points[label] for label in LABELS}


def label_key(label: str) -> int:
    try:
        return LABEL_RANK[label]
    except KeyError:
        raise ConstructionError(f"unknown label {label!r}") from None


def scaled(config: Config, s: Rational) -> Config:
    s = as_q(s)
    return Config(anchor=config.anchor.scale(s), unit=config.unit * s, theta=config.theta)
