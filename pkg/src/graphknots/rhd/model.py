"""Event model of a combinatorial round handle decomposition of S^3.

An RHD is an ordered list of events: sources (round 0-handles), saddles
(round 1-handles) and sinks (round 2-handles).  The smooth data of the
underlying Morse-Bott function is not stored; what remains is the
placement of each source circle, the curve classes along which saddles
attach, and which level component each sink caps.

Component naming during replay:

* a source's tube is named after the source;
* a saddle joining two distinct components produces a component named
  after the saddle, and both old names become aliases of it;
* a saddle splitting one component into two produces ``<saddle>.A`` and
  ``<saddle>.B``; the old name dies;
* a saddle turning one component into one component produces a component
  named after the saddle, and the old name becomes an alias.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Union


class RHDError(Exception):
    """Base class for errors raised by the rhd package."""


class UnknownComponent(RHDError):
    pass


class DeadComponent(RHDError):
    pass


class NonPrimitiveClass(RHDError):
    pass


class InvalidClass(RHDError):
    pass


class InvalidDecomposition(RHDError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NotUnknots(RHDError):
    pass


class RHDParseError(RHDError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


# ---------------------------------------------------------------------------
# curve classes


@dataclass(frozen=True)
class Disk:
    """A circle bounding a disk in its level torus.

    ``nested`` marks the inner circle when both circles of a saddle bound
    disks and one disk contains the other.
    """
    nested: bool = False

    def __str__(self) -> str:
        return "idisk" if self.nested else "disk"


@dataclass(frozen=True)
class Class:
    """Essential class: ``p`` longitudes plus ``q`` meridians, canonical sign."""
    p: int
    q: int

    def __post_init__(self) -> None:
        p, q = self.p, self.q
        if gcd(abs(p), abs(q)) != 1:
            raise NonPrimitiveClass(f"class ({p},{q}) is not primitive")
        if p < 0 or (p == 0 and q < 0):
            object.__setattr__(self, "p", -p)
            object.__setattr__(self, "q", -q)

    @property
    def is_meridian(self) -> bool:
        return self.p == 0

    @property
    def framing(self) -> int:
        return self.p * self.q

    def __str__(self) -> str:
        if self.p == 0:
            return "m"
        if self.p == 1:
            return f"l{self.q}"
        return f"({self.p},{self.q})"


CurveClass = Union[Disk, Class]

MERIDIAN = Class(0, 1)


def framing(c: CurveClass) -> int:
    """Surface framing of the circle relative to the core's Seifert framing."""
    return 0 if isinstance(c, Disk) else c.framing


# ---------------------------------------------------------------------------
# placements


@dataclass(frozen=True)
class SplitBall:
    def __str__(self) -> str:
        return "split"


@dataclass(frozen=True)
class HopfDual:
    source: str

    def __str__(self) -> str:
        return f"hopf {self.source}"


@dataclass(frozen=True)
class InsideTube:
    component: str

    def __str__(self) -> str:
        return f"tube {self.component}"


Placement = Union[SplitBall, HopfDual, InsideTube]


def placement_ref(pl: Placement | None) -> str | None:
    if isinstance(pl, HopfDual):
        return pl.source
    if isinstance(pl, InsideTube):
        return pl.component
    return None


# ---------------------------------------------------------------------------
# events


@dataclass(frozen=True)
class AttachCircle:
    component: str
    cls: CurveClass

    def __str__(self) -> str:
        return f"{self.component}:{self.cls}"


@dataclass(frozen=True)
class Source:
    id: str
    placement: Placement | None  # None only for sources introduced by extraction

    def __str__(self) -> str:
        return f"source {self.id} {self.placement}"


@dataclass(frozen=True)
class Saddle:
    id: str
    c1: AttachCircle
    c2: AttachCircle
    regions: tuple[tuple[str, str], ...] = ()

    def region_map(self) -> dict[str, str]:
        return dict(self.regions)

    def __str__(self) -> str:
        s = f"saddle {self.id} {self.c1} {self.c2}"
        if self.regions:
            s += " region " + " ".join(f"{k}={v}" for k, v in self.regions)
        return s


@dataclass(frozen=True)
class Sink:
    id: str
    target: str

    def __str__(self) -> str:
        return f"sink {self.id} {self.target}"


HandleEvent = Union[Source, Saddle, Sink]


@dataclass(frozen=True)
class RHD:
    events: tuple[HandleEvent, ...] = field(default_factory=tuple)

    def __init__(self, events: Iterable[HandleEvent] = ()):
        object.__setattr__(self, "events", tuple(events))

    @property
    def sources(self) -> list[Source]:
        return [e for e in self.events if isinstance(e, Source)]

    @property
    def saddles(self) -> list[Saddle]:
        return [e for e in self.events if isinstance(e, Saddle)]

    @property
    def sinks(self) -> list[Sink]:
        return [e for e in self.events if isinstance(e, Sink)]

    def ids(self) -> list[str]:
        return [e.id for e in self.events]

    def to_text(self) -> str:
        return "".join(str(e) + "\n" for e in self.events)

    def __str__(self) -> str:
        return self.to_text()


# ---------------------------------------------------------------------------
# text format

_ID = r"[A-Za-z_][A-Za-z0-9_.]*"
_ID_RE = re.compile(_ID + r"\Z")
_CLASS_RE = re.compile(r"(disk|idisk|m|l(-?\d+)|\((-?\d+),(-?\d+)\))\Z")
_CIRCLE_RE = re.compile(r"(" + _ID + r"):(.+)\Z")
_TAG_RE = re.compile(r"(" + _ID + r")=(A|B)\Z")


def parse_class(tok: str) -> CurveClass:
    m = _CLASS_RE.match(tok)
    if not m:
        raise ValueError(f"bad curve class {tok!r}")
    if m.group(1) == "disk":
        return Disk()
    if m.group(1) == "idisk":
        return Disk(nested=True)
    if m.group(1) == "m":
        return MERIDIAN
    if m.group(2) is not None:
        return Class(1, int(m.group(2)))
    p, q = int(m.group(3)), int(m.group(4))
    if (p, q) == (0, 0):
        raise NonPrimitiveClass("class (0,0) is not primitive")
    return Class(p, q)


def _ident(tok: str, lineno: int) -> str:
    if not _ID_RE.match(tok):
        raise RHDParseError(lineno, f"bad identifier {tok!r}")
    return tok


def parse_rhd(text: str) -> RHD:
    """Parse the line-based RHD format.  Unknown tokens are errors."""
    events: list[HandleEvent] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        toks = line.split()
        kind = toks[0]
        try:
            if kind == "source":
                if len(toks) == 3 and toks[2] == "split":
                    events.append(Source(_ident(toks[1], lineno), SplitBall()))
                elif len(toks) == 4 and toks[2] == "hopf":
                    events.append(Source(_ident(toks[1], lineno),
                                         HopfDual(_ident(toks[3], lineno))))
                elif len(toks) == 4 and toks[2] == "tube":
                    events.append(Source(_ident(toks[1], lineno),
                                         InsideTube(_ident(toks[3], lineno))))
                else:
                    raise RHDParseError(lineno, "expected 'source <id> split|hopf <id>|tube <id>'")
            elif kind == "saddle":
                if len(toks) < 4:
                    raise RHDParseError(lineno, "expected 'saddle <id> <comp>:<class> <comp>:<class>'")
                circles = []
                for tok in toks[2:4]:
                    m = _CIRCLE_RE.match(tok)
                    if not m:
                        raise RHDParseError(lineno, f"bad attaching circle {tok!r}")
                    circles.append(AttachCircle(m.group(1), parse_class(m.group(2))))
                tags: list[tuple[str, str]] = []
                rest = toks[4:]
                if rest:
                    if rest[0] != "region" or len(rest) < 2:
                        raise RHDParseError(lineno, f"unexpected token {rest[0]!r}")
                    for tok in rest[1:]:
                        m = _TAG_RE.match(tok)
                        if not m:
                            raise RHDParseError(lineno, f"bad region tag {tok!r}")
                        tags.append((m.group(1), m.group(2)))
                events.append(Saddle(_ident(toks[1], lineno), circles[0], circles[1], tuple(tags)))
            elif kind == "sink":
                if len(toks) != 3:
                    raise RHDParseError(lineno, "expected 'sink <id> <comp>'")
                events.append(Sink(_ident(toks[1], lineno), _ident(toks[2], lineno)))
            else:
                raise RHDParseError(lineno, f"unknown event {kind!r}")
        except (ValueError, NonPrimitiveClass) as exc:
            raise RHDParseError(lineno, str(exc)) from None
    return RHD(events)
