"""Digital nets over GF(2) with small t-value and small WAFOM.

Exact t-values, the Walsh figure of merit (WAFOM), random linear scrambling
search, Sobol' construction and a Genz benchmark harness.
"""

from .estimators import LinearScrambleSearch
from .gf2 import GF2Matrix, multiply, nullspace, random_nonsingular_lower_triangular, rank, substream
from .net import (
    DigitalNet,
    NetFormatError,
    ScrambleSet,
    interlace,
    load_net,
    load_scramble,
    point,
    points,
    points_real,
    save_net,
    save_scramble,
    scramble,
    to_real,
)
from .quality import QualityReport, quality_report, t_value, wafom, wafom_dual_oracle, wafom_fast
from .search import SearchConfig, SearchResult, naive_column_search, scramble_search, write_trace
from .sobol import DirectionEntry, build_sobol, default_direction_file, load_direction_numbers

__version__ = "0.1.0"

__all__ = [
    "GF2Matrix", "multiply", "rank", "nullspace", "random_nonsingular_lower_triangular", "substream",
    "DigitalNet", "ScrambleSet", "NetFormatError", "point", "points", "points_real", "to_real",
    "scramble", "interlace", "load_net", "save_net", "load_scramble", "save_scramble",
    "DirectionEntry", "load_direction_numbers", "build_sobol", "default_direction_file",
    "QualityReport", "t_value", "wafom", "wafom_fast", "wafom_dual_oracle", "quality_report",
    "SearchConfig", "SearchResult", "scramble_search", "naive_column_search", "write_trace",
    "LinearScrambleSearch",
]
