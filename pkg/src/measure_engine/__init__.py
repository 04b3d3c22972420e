"""Exact measure theory on finite carriers and on rational interval unions of [0, 1)."""

from .errors import (
    EmptySystemError,
    MeasureEngineError,
    MeasureNotAdditiveError,
    MissingValueError,
    NoUnitError,
    NotASemiringError,
    NotMeasurableError,
    PreconditionError,
)
from .interval import INTERVAL_SPACE, Interval, IntervalUnion, parse_interval_union, rat
from .measure import MeasurableSpace, MeasureTable, check_measure, extend_measure
from .omega import GROUPS, get_group, law_suite
from .report import Check, Report, fmt
from .set_system import (
    Carrier,
    Kind,
    SetSystem,
    classify,
    common_refinement,
    complete_expansion,
    generate_ring,
    generate_ring_from_semiring,
    subtract_expansion,
)

__version__ = "0.1.0"
