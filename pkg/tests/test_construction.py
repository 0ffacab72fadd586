from fractions import Fraction as F

import pytest

from oracles import expected_points, sqdist
from walkpart.construction import (
    LABELS, SCRIPT, Config, Trace, TraceEntry, run_construction, scaled, walker_program,
)
from walkpart.errors import ConstructionError
from walkpart.geometry import Point2
from walkpart.routes import verify_trace


def test_labeled_points_match_oracle(fig):
    expected = expected_points()
    got = {k: (p.x, p.y) for k, p in fig.construction.labeled_points.items()}
    assert got == expected


def test_labels_are_canonical(fig):
    assert tuple(fig.construction.labeled_points) == LABELS


def test_saved_distances(fig):
    pts = expected_points()
    d = fig.construction.saved_distances
    assert d["d4"] == sqdist(pts["t"], pts["3"]) == 400
    assert d["d5"] == sqdist(pts["1"], pts["5"]) == 325
    assert d["d6"] == d["d5"]


def test_two_strings_three_rays_two_circles(fig):
    c = fig.construction
    assert len(c.strings) == 2 and all(len(s) == 3 for s in c.strings)
    assert len(c.rays) == 3
    assert len(c.circles) == 2
    assert all(circle.diameter == 2 for circle in c.circles)


def test_venter_is_on_every_ray(fig):
    m = fig.construction.labeled_points["m"]
    assert all(ray.contains(m) for ray in fig.construction.rays)


def test_trace_accepted(fig):
    verdict = verify_trace(fig.trace, fig.arrangement)
    assert verdict.accepted, verdict.describe(fig.names)
    assert set(fig.trace.edge_counts.values()) <= {1, 2}
    assert set(fig.trace.edge_counts) == set(fig.arrangement.edges)


def test_trace_roundtrip(fig):
    text = fig.trace.export()
    again = Trace.parse(text)
    assert again.export() == text
    assert verify_trace(again, fig.arrangement).accepted


def test_trace_uses_three_agents(fig):
    assert {e.agent for e in fig.trace.entries} == {1, 2, 3}


def test_teleport_rejected():
    trace = Trace()
    trace.append(TraceEntry(1, "walk", Point2(0, 0), Point2(0, 1)))
    with pytest.raises(ConstructionError, match="teleported"):
        trace.append(TraceEntry(1, "walk", Point2(0, 2), Point2(0, 3)))


def test_bad_trace_line():
    with pytest.raises(ConstructionError, match="bad trace line 1"):
        Trace.parse("1\twalk\t0,0\n")


def test_program_is_shared_and_finite():
    history = []
    while (step := walker_program(tuple(history))) is not None:
        history.append(step)
    assert len(history) == len(SCRIPT)


@pytest.mark.parametrize("unit", [F(1, 2), F(2), F(3, 7)])
def test_scale_covariance(fig, unit):
    result, trace = run_construction(scaled(Config(), unit))
    for label, p in fig.construction.labeled_points.items():
        assert result.labeled_points[label] == p.scale(unit)
    assert trace.edge_counts == fig.trace.edge_counts


def test_translation(fig):
    shift = Point2(F(3), F(-2))
    result, _ = run_construction(Config(anchor=shift))
    for label, p in fig.construction.labeled_points.items():
        assert result.labeled_points[label] == p + shift


def test_deterministic(fig):
    result, trace = run_construction()
    assert result.labeled_points == fig.construction.labeled_points
    assert trace.export() == fig.trace.export()


@pytest.mark.parametrize("kwargs", [{"unit": 0}, {"theta": -1}, {"theta": F(0)}])
def test_config_validation(kwargs):
    with pytest.raises(ConstructionError):
        Config(**kwargs)
