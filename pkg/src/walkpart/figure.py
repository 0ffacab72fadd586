from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .construction import Config, ConstructionResult, Trace, canonical_labels, run_construction
from .geometry import Arrangement, Point2
from .graph import LabeledGraph, from_construction
from .partitions import PartitionTable, enumerate_partitions


@dataclass(frozen=True)
class Figure:
    """Everything derived from one run of the walker script."""

    construction: ConstructionResult
    trace: Trace
    arrangement: Arrangement
    labels: dict[str, Point2]
    partitions: PartitionTable

    def graph(self) -> LabeledGraph:
        # fresh copy: callers may add edges
        return from_construction(self.arrangement, self.labels)

    @property
    def names(self) -> dict[int, str]:
        return {self.arrangement.index_of(p): label for label, p in self.labels.items()}


def build_figure(config: Config | None = None) -> Figure:
    result, trace = run_construction(config)
    arrangement = result.arrangement()
    labels = canonical_labels(result)
    return Figure(result, trace, arrangement, labels, enumerate_partitions(arrangement, labels))


@lru_cache(maxsize=None)
def default_figure() -> Figure:
    return build_figure()
