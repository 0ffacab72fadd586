"""Walker-constructor figure, its partitions and a block store built on them."""

from .construction import Config, run_construction
from .figure import Figure, build_figure
from .geometry import Point2, Segment

__all__ = ["Config", "Figure", "Point2", "Segment", "build_figure", "run_construction"]
