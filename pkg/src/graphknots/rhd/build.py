"""Constructing decompositions from graph-knot expressions.

The distinguished source of every RHD produced here is its first event;
its extracted knot is the expression the RHD was built for.
"""
from __future__ import annotations

from math import gcd

from ..expr import Cable as CableExpr, KnotExpr, Sum as SumExpr, Unknot, normalize
from .model import (
    MERIDIAN, RHD, AttachCircle, Class, HopfDual, InsideTube, InvalidClass,
    NonPrimitiveClass, RHDError, Saddle, Sink, Source, SplitBall, UnknownComponent,
    placement_ref,
)
from .surgery import Replayer, SaddleCase, saddle_case


def _map_name(name: str, mapping: dict[str, str]) -> str:
    if name in mapping:
        return mapping[name]
    head, dot, tail = name.partition(".")
    if dot and head in mapping:
        return mapping[head] + dot + tail
    return name


def rename_events(events, mapping: dict[str, str]) -> list:
    """Rename event ids and every reference to them (including ``<id>.A`` forms)."""
    out = []
    for e in events:
        if isinstance(e, Source):
            pl = e.placement
            if isinstance(pl, HopfDual):
                pl = HopfDual(_map_name(pl.source, mapping))
            elif isinstance(pl, InsideTube):
                pl = InsideTube(_map_name(pl.component, mapping))
            out.append(Source(_map_name(e.id, mapping), pl))
        elif isinstance(e, Saddle):
            out.append(Saddle(
                _map_name(e.id, mapping),
                AttachCircle(_map_name(e.c1.component, mapping), e.c1.cls),
                AttachCircle(_map_name(e.c2.component, mapping), e.c2.cls),
                tuple((_map_name(t, mapping), s) for t, s in e.regions)))
        else:
            out.append(Sink(_map_name(e.id, mapping), _map_name(e.target, mapping)))
    return out


def relabel(events) -> RHD:
    """Canonical ids: sources s0.., saddles h0.., sinks k0.. in list order."""
    counters = {Source: 0, Saddle: 0, Sink: 0}
    prefix = {Source: "s", Saddle: "h", Sink: "k"}
    mapping = {}
    for e in events:
        t = type(e)
        mapping[e.id] = f"{prefix[t]}{counters[t]}"
        counters[t] += 1
    return RHD(rename_events(events, mapping))


def _ordered(events) -> list:
    return ([e for e in events if isinstance(e, Source)]
            + [e for e in events if isinstance(e, Saddle)]
            + [e for e in events if isinstance(e, Sink)])


def _require_source(r: RHD, j: str) -> None:
    if j not in {s.id for s in r.sources}:
        raise UnknownComponent(f"{j} is not a source")


def build_unknot() -> RHD:
    """One source and one sink capping its tube; the two cores form a Hopf link."""
    return RHD([Source("s0", SplitBall()), Sink("k0", "s0")])


def build_cable(base: RHD, j: str, p: int, q: int) -> RHD:
    """Insert a new lowest source inside ``j``'s tube and a saddle joining them.

    The new source (the first event of the result) carries the (p,q)-cable
    of ``j``'s knot.
    """
    _require_source(base, j)
    if gcd(abs(p), abs(q)) != 1:
        raise NonPrimitiveClass(f"({p},{q}) is not primitive")
    if p < 1:
        raise InvalidClass("cable needs p >= 1; a meridian cable is the unknot")
    new, saddle = "x_new", "h_new"
    events = rename_events(base.events, {e: "b_" + e for e in base.ids()})
    j = "b_" + j
    src = [Source(new, InsideTube(j))] + [e for e in events if isinstance(e, Source)]
    glue = Saddle(saddle, AttachCircle(new, Class(1, p * q)), AttachCircle(j, Class(p, q)))
    rest = [e for e in events if not isinstance(e, Source)]
    return relabel(src + [glue] + rest)


def build_sum(a: RHD, b: RHD, sa: str, sb: str) -> RHD:
    """Connected sum of the knots carried by ``sa`` in ``a`` and ``sb`` in ``b``.

    A new split source V is split by a saddle along two meridians into two
    tori, which take over the roles of ``sa`` and ``sb``.
    """
    _require_source(a, sa)
    _require_source(b, sb)
    for r, s in ((a, sa), (b, sb)):
        if any(placement_ref(x.placement) == s for x in r.sources):
            raise UnknownComponent(f"{s} is referenced by a placement and cannot be summed away")
    v, j = "v_new", "j_new"
    ea = rename_events(a.events, {e: "a_" + e for e in a.ids()})
    eb = rename_events(b.events, {e: "b_" + e for e in b.ids()})
    sa, sb = "a_" + sa, "b_" + sb
    ea = [e for e in ea if not (isinstance(e, Source) and e.id == sa)]
    eb = [e for e in eb if not (isinstance(e, Source) and e.id == sb)]
    side_a, side_b = f"{j}.A", f"{j}.B"
    ea = rename_events(ea, {sa: side_a})
    eb = rename_events(eb, {sb: side_b})
    tags = tuple([(e.id, "A") for e in ea if isinstance(e, Source)]
                 + [(e.id, "B") for e in eb if isinstance(e, Source)])
    split = Saddle(j, AttachCircle(v, MERIDIAN), AttachCircle(v, MERIDIAN), tags)
    events = [Source(v, SplitBall())] + _ordered(ea + eb)
    n_src = sum(isinstance(e, Source) for e in events)
    events = events[:n_src] + [split] + events[n_src:]
    return relabel(_complete_tags(events))


def _complete_tags(events: list) -> list:
    """Tag components that an inner split does not mention yet.

    After a sum, the other summand's components are live while the splits
    inside one summand happen.  They all lie on one side of such a split
    sphere (the side the sum band attaches to); side A is used.
    """
    sources = [e for e in events if isinstance(e, Source)]
    rp = Replayer(sources)
    out = list(sources)
    for e in events:
        if not isinstance(e, Saddle):
            continue
        state = rp.state
        names = (state.resolve(e.c1.component), state.resolve(e.c2.component))
        case = saddle_case(e.c1.cls, e.c2.cls, names[0] == names[1])
        if isinstance(case, SaddleCase) and case.splits:
            tagged = {state.resolve(t) for t, _ in e.regions}
            extra = tuple((n, "A") for n in sorted(state.components)
                          if n not in tagged and n != names[0])
            e = Saddle(e.id, e.c1, e.c2, e.regions + extra)
        v = rp.saddle(e)
        if v is not None:
            raise RHDError(f"internal: assembled sum does not replay: {v}")
        out.append(e)
    return out + [e for e in events if isinstance(e, Sink)]


def distinguished(r: RHD) -> str:
    return r.events[0].id


def build(e: KnotExpr) -> RHD:
    """An RHD whose first source carries ``e`` (up to normalization)."""
    return _build(normalize(e))


def _build(e: KnotExpr) -> RHD:
    if isinstance(e, Unknot):
        return build_unknot()
    if isinstance(e, CableExpr):
        base = _build(e.companion)
        return build_cable(base, distinguished(base), e.p, e.q)
    assert isinstance(e, SumExpr)
    acc = _build(e.summands[0])
    for s in e.summands[1:]:
        nxt = _build(s)
        acc = build_sum(acc, nxt, distinguished(acc), distinguished(nxt))
    return acc
