"""Combinatorial round handle decompositions of S^3."""
from .model import (
    RHD, AttachCircle, Class, CurveClass, DeadComponent, Disk, HandleEvent, HopfDual,
    InsideTube, InvalidClass, InvalidDecomposition, MERIDIAN, NonPrimitiveClass,
    NotUnknots, Placement, RHDError, RHDParseError, Saddle, Sink, Source, SplitBall,
    UnknownComponent, parse_class, parse_rhd,
)
from .surgery import (
    BadNesting, ComponentInfo, CrossingCircles, LevelState, SaddleCase, Violation,
    replay, saddle_case, surger, validate,
)
from .build import build, build_cable, build_sum, build_unknot, distinguished, relabel
from .extract import (
    CableOfEachOther, ExtractionResult, HopfLink, SplitLink, classify_pair, extract,
)

__all__ = [name for name in dir() if not name.startswith("_")]
