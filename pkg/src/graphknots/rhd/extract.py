"""Recover graph-knot expressions from a valid decomposition.

The lowest saddle of a valid decomposition only touches source tubes, so it
can be removed: the case it encodes says how the knots of its sources and
of the saddle relate to the knots of a smaller decomposition.  Recursing
until no saddles are left ends in a single source and sink, both unknots.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..expr import Cable, GraphKit, KnotExpr, Sum, U, Unknot, kit_of, normalize, serialize
from .model import RHD, InvalidDecomposition, NotUnknots, Saddle, Sink, Source, UnknownComponent
from .surgery import SaddleCase, Violation, replay, saddle_case, split_names


@dataclass(frozen=True)
class SplitLink:
    def __str__(self) -> str:
        return "SplitLink"


@dataclass(frozen=True)
class HopfLink:
    def __str__(self) -> str:
        return "HopfLink"


@dataclass(frozen=True)
class CableOfEachOther:
    p: int
    q: int

    def __str__(self) -> str:
        return f"CableOfEachOther({self.p},{self.q})"


@dataclass
class _Reduction:
    env: dict[str, KnotExpr] = field(default_factory=dict)    # critical knot -> expression
    core: dict[str, KnotExpr] = field(default_factory=dict)   # level component -> core
    lk: dict[frozenset, int] = field(default_factory=dict)    # linking numbers

    def link(self, a: str, b: str) -> int:
        return self.lk.get(frozenset((a, b)), 0)

    def set_link(self, a: str, b: str, n: int) -> None:
        if n:
            self.lk[frozenset((a, b))] = n
        else:
            self.lk.pop(frozenset((a, b)), None)


@dataclass(frozen=True)
class ExtractionResult:
    knot_exprs: dict[str, KnotExpr]
    kit: GraphKit
    witness_r: dict[str, str]
    witness_gamma: dict[str, str]
    cores: dict[str, KnotExpr]


def _fail(detail: str) -> InvalidDecomposition:
    return InvalidDecomposition([Violation("Unsupported", None, detail)])


def _rename(events: list, mapping: dict[str, str]) -> list:
    if not mapping:
        return events
    out = []
    for e in events:
        if isinstance(e, Saddle):
            c1 = type(e.c1)(mapping.get(e.c1.component, e.c1.component), e.c1.cls)
            c2 = type(e.c2)(mapping.get(e.c2.component, e.c2.component), e.c2.cls)
            tags = tuple((mapping.get(t, t), s) for t, s in e.regions)
            out.append(Saddle(e.id, c1, c2, tags))
        elif isinstance(e, Sink):
            out.append(Sink(e.id, mapping.get(e.target, e.target)))
        else:
            out.append(e)
    return out


def _partition(events: list, split: Saddle) -> dict[str, list]:
    """Assign every event to the side of the splitting saddle it lies on."""
    side_of = {t: s for t, s in split.regions}
    a, b = split_names(split.id)
    side_of[a], side_of[b] = "A", "B"
    parts: dict[str, list] = {"A": [], "B": []}
    for e in events:
        if isinstance(e, Source):
            side = side_of.get(e.id)
        elif isinstance(e, Saddle):
            side = side_of.get(e.c1.component)
            for n in (e.id, *split_names(e.id)):
                side_of[n] = side
        else:
            side = side_of.get(e.target)
        if side is None:
            raise _fail(f"event {e.id} lies on no side of {split.id}")
        parts[side].append(e)
    return parts


def _source_ids(events: list) -> set[str]:
    return {e.id for e in events if isinstance(e, Source)}


def _without_source(events: list, name: str) -> list:
    if name not in _source_ids(events):
        raise _fail(f"{name} is not a source at its lowest saddle")
    return [e for e in events if not (isinstance(e, Source) and e.id == name)]


def _reduce(events: list) -> _Reduction:
    saddles = [e for e in events if isinstance(e, Saddle)]
    if not saddles:
        sources = [e for e in events if isinstance(e, Source)]
        sinks = [e for e in events if isinstance(e, Sink)]
        if len(sources) != 1 or len(sinks) != 1 or sinks[0].target != sources[0].id:
            raise _fail("reduction did not end in a single source and sink")
        s, k = sources[0].id, sinks[0].id
        return _Reduction({s: U, k: U}, {s: U}, {frozenset((s, k)): 1})

    sig = saddles[0]
    circles = (sig.c1, sig.c2)
    case = saddle_case(sig.c1.cls, sig.c2.cls, sig.c1.component == sig.c2.component)
    if isinstance(case, Violation):
        raise InvalidDecomposition([case])
    x = circles[case.x].component
    y = circles[1 - case.x].component
    rest = [e for e in events if e is not sig]
    handler = _HANDLERS[case.kind]
    return handler(sig, case, x, y, rest)


def _cable(sig: Saddle, case: SaddleCase, x: str, y: str, rest: list) -> _Reduction:
    r = _reduce(_rename(_without_source(rest, x), {sig.id: y}))
    knot = Cable(case.p, case.q, r.env[y])
    others = list(r.env)
    r.env[x] = r.env[sig.id] = knot
    r.core[x] = knot
    r.core[sig.id] = r.env[y]
    for z in others:
        if z != y:
            n = case.p * r.link(y, z)
            r.set_link(x, z, n)
            r.set_link(sig.id, z, n)
    r.set_link(x, y, case.q)
    r.set_link(sig.id, y, case.q)
    r.set_link(sig.id, x, case.p * case.q)
    return r


def _absorb(sig: Saddle, case: SaddleCase, x: str, y: str, rest: list) -> _Reduction:
    # y is a split (or meridian) unknot whose tube is swallowed by x's
    r = _reduce(_rename(_without_source(rest, y), {sig.id: x}))
    r.env[y] = r.env[sig.id] = U
    r.core[y] = U
    r.core[sig.id] = r.env[x]
    if case.kind == "meridian":
        r.set_link(y, x, 1)
        r.set_link(sig.id, x, 1)
    return r


def _hopf(sig: Saddle, case: SaddleCase, x: str, y: str, rest: list) -> _Reduction:
    rest = _without_source(_without_source(rest, x), y)
    if len(rest) != 1 or not isinstance(rest[0], Sink) or rest[0].target != sig.id:
        raise _fail(f"Hopf saddle {sig.id} must be capped directly by a sink")
    k = rest[0].id
    torus = Cable(case.p, case.q, U)
    r = _Reduction({x: U, y: U, sig.id: torus, k: torus}, {x: U, y: U, sig.id: torus})
    r.set_link(x, y, 1)
    for z in (sig.id, k):
        r.set_link(z, x, case.q)
        r.set_link(z, y, case.p)
    r.set_link(k, sig.id, case.p * case.q)
    return r


def _trivial(sig: Saddle, case: SaddleCase, x: str, y: str, rest: list) -> _Reduction:
    fresh = f"{sig.id}.E"
    r = _reduce([Source(fresh, None)] + _rename(_without_source(rest, x), {sig.id: fresh}))
    r.env[x] = r.env[sig.id] = U
    r.core[x] = U
    r.core[sig.id] = r.core.pop(fresh)
    return r


def _merge(a: _Reduction, b: _Reduction) -> _Reduction:
    return _Reduction({**a.env, **b.env}, {**a.core, **b.core}, {**a.lk, **b.lk})


def _nested(sig: Saddle, case: SaddleCase, x: str, y: str, rest: list) -> _Reduction:
    a_name, b_name = split_names(sig.id)
    keep = next(e for e in rest if isinstance(e, Source) and e.id == x)
    parts = _partition(_without_source(rest, x), sig)
    ra = _reduce([keep] + _rename(parts["A"], {a_name: x}))
    rb = _reduce([Source(b_name, None)] + parts["B"])
    r = _merge(ra, rb)
    r.env[sig.id] = U
    r.core[a_name] = ra.env[x]
    return r


def _sum(sig: Saddle, case: SaddleCase, x: str, y: str, rest: list) -> _Reduction:
    a_name, b_name = split_names(sig.id)
    parts = _partition(_without_source(rest, x), sig)
    ra = _reduce([Source(a_name, None)] + parts["A"])
    rb = _reduce([Source(b_name, None)] + parts["B"])
    r = _merge(ra, rb)
    r.env[x] = Sum(ra.env[a_name], rb.env[b_name])
    r.env[sig.id] = U
    r.core[x] = r.env[x]
    for side, sub in ((a_name, ra), (b_name, rb)):
        for z in sub.env:
            if z != side:
                r.set_link(x, z, sub.link(side, z))
    r.set_link(sig.id, x, 1)
    return r


def _parallel(sig: Saddle, case: SaddleCase, x: str, y: str, rest: list) -> _Reduction:
    keep = next(e for e in rest if isinstance(e, Source) and e.id == x)
    parts = _partition(_without_source(rest, x), sig)
    names = dict(zip("AB", split_names(sig.id)))
    bare = None
    for side in "AB":
        evs = parts[side]
        if len(evs) == 1 and isinstance(evs[0], Sink) and evs[0].target == names[side]:
            bare = side
            break
    if bare is None:
        raise _fail(f"parallel split {sig.id} has no side capped directly by a sink")
    other = "B" if bare == "A" else "A"
    k = parts[bare][0].id
    r = _reduce([keep] + _rename(parts[other], {names[other]: x}))
    knot = Cable(case.p, case.q, r.env[x])
    others = list(r.env)
    r.env[sig.id] = r.env[k] = knot
    r.core[names[other]] = r.env[x]
    r.core[names[bare]] = knot
    for z in others:
        if z != x:
            n = case.p * r.link(x, z)
            r.set_link(sig.id, z, n)
            r.set_link(k, z, n)
    r.set_link(sig.id, x, case.q)
    r.set_link(k, x, case.q)
    r.set_link(k, sig.id, case.p * case.q)
    return r


_HANDLERS = {
    "cable": _cable,
    "absorb": _absorb,
    "meridian": _absorb,
    "hopf": _hopf,
    "trivial": _trivial,
    "nested": _nested,
    "sum": _sum,
    "parallel": _parallel,
}


def _reduce_valid(r: RHD) -> _Reduction:
    rep = replay(r)
    if rep.violations:
        raise InvalidDecomposition(rep.violations)
    return _reduce(rep.resolved)


def _witnesses(kit: GraphKit, knot_id: str, cores: dict[str, KnotExpr]) -> tuple[dict, dict]:
    by_expr: dict[KnotExpr, list[str]] = {}
    for comp in sorted(cores):
        by_expr.setdefault(cores[comp], []).append(comp)
    witness_r: dict[str, str] = {}
    used: set[str] = set()
    for label, e in kit.elements.items():
        cands = by_expr.get(e, [])
        fresh = [c for c in cands if c not in used]
        if cands:
            witness_r[label] = (fresh or cands)[0]
            used.add(witness_r[label])
    witness_gamma: dict[str, str] = {}
    wanted = dict((label, kit.reconstruct(label)) for label in kit.gamma)
    if kit.top:
        parts = [kit.elements[t] for t in kit.top]
        wanted[knot_id] = parts[0] if len(parts) == 1 else Sum(*parts)
    used.clear()
    for label, e in wanted.items():
        cands = by_expr.get(normalize(e), [])
        fresh = [c for c in cands if c not in used]
        if cands:
            witness_gamma[label] = (fresh or cands)[0]
            used.add(witness_gamma[label])
    return witness_r, witness_gamma


def extract(r: RHD, k: str) -> ExtractionResult:
    """Graph-knot expressions of all critical knots, and the kit of ``k``."""
    ids = r.ids()
    red = _reduce_valid(r)
    if k not in ids:
        raise UnknownComponent(f"no critical knot named {k}")
    exprs = {i: normalize(red.env[i]) for i in ids}
    cores = {c: normalize(e) for c, e in red.core.items()}
    kit = kit_of(exprs[k])
    wr, wg = _witnesses(kit, k, cores)
    return ExtractionResult(exprs, kit, wr, wg, cores)


def classify_pair(r: RHD, k1: str, k2: str):
    """Link type of two critical unknots: SplitLink, HopfLink or CableOfEachOther."""
    ids = r.ids()
    red = _reduce_valid(r)
    for k in (k1, k2):
        if k not in ids:
            raise UnknownComponent(f"no critical knot named {k}")
    if k1 == k2:
        raise ValueError("classify_pair needs two distinct critical knots")
    for k in (k1, k2):
        e = normalize(red.env[k])
        if not isinstance(e, Unknot):
            raise NotUnknots(f"{k} is {serialize(e)}, not an unknot")
    n = abs(red.link(k1, k2))
    if n == 0:
        return SplitLink()
    if n == 1:
        return HopfLink()
    return CableOfEachOther(1, n)
