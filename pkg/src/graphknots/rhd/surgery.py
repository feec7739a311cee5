"""Level-surface simulation and validation.

``surger`` performs the purely topological part of a round 1-handle
attachment: it cuts the level surface along the two stable circles and
glues in the two unstable annuli.  ``saddle_case`` is the local case
analysis (which kind of critical-knot relation a saddle encodes).
``validate`` replays a whole decomposition and collects violations.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from .model import (
    RHD, Class, CurveClass, DeadComponent, Disk, HopfDual, InsideTube,
    RHDError, Saddle, Sink, Source, SplitBall, UnknownComponent, placement_ref,
)


class CrossingCircles(RHDError):
    pass


class BadNesting(RHDError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    event: str | None = None
    detail: str = ""

    def __str__(self) -> str:
        out = self.kind
        if self.event is not None:
            out += f" {self.event}"
        if self.detail:
            out += f": {self.detail}"
        return out


# ---------------------------------------------------------------------------
# level state


@dataclass(frozen=True)
class ComponentInfo:
    genus: int = 1
    source: str | None = None  # set while the component is an untouched source tube
    regions: frozenset = frozenset()  # {(split saddle id, "A" | "B")}


@dataclass(frozen=True)
class LevelState:
    components: Mapping[str, ComponentInfo] = field(default_factory=dict)
    aliases: Mapping[str, str] = field(default_factory=dict)
    dead: frozenset = frozenset()

    @classmethod
    def initial(cls, sources) -> "LevelState":
        return cls({s.id: ComponentInfo(1, s.id) for s in sources})

    def resolve(self, name: str) -> str:
        seen = set()
        while name in self.aliases and name not in seen:
            seen.add(name)
            name = self.aliases[name]
        if name in self.components:
            return name
        if name in self.dead:
            raise DeadComponent(f"component {name} no longer exists")
        raise UnknownComponent(f"no component named {name}")

    def euler_characteristic(self) -> int:
        return sum(2 - 2 * c.genus for c in self.components.values())

    def cap(self, name: str) -> "LevelState":
        """Remove a component (a sink fills it)."""
        name = self.resolve(name)
        comps = dict(self.components)
        del comps[name]
        return LevelState(comps, self.aliases, self.dead | {name})


def split_names(saddle_id: str) -> tuple[str, str]:
    return f"{saddle_id}.A", f"{saddle_id}.B"


def sphere_name(saddle_id: str) -> str:
    return f"{saddle_id}.S"


def surger(state: LevelState, s: Saddle) -> LevelState:
    """Attach a round 1-handle along the saddle's two stable circles.

    Only the topology is computed here: which components result and what
    their genera are.  Region tags are applied to the components they name.
    """
    n1 = state.resolve(s.c1.component)
    n2 = state.resolve(s.c2.component)
    k1, k2 = s.c1.cls, s.c2.cls
    comps = dict(state.components)
    aliases = dict(state.aliases)
    dead = set(state.dead)
    for tag, side in s.regions:
        try:
            t = state.resolve(tag)
        except RHDError:
            continue
        info = comps[t]
        comps[t] = replace(info, regions=info.regions | {(s.id, side)})

    nested = [isinstance(k, Disk) and k.nested for k in (k1, k2)]
    disks = [isinstance(k, Disk) for k in (k1, k2)]
    if n1 != n2:
        if any(nested):
            raise BadNesting("a nested disk needs its outer disk on the same component")
        a, b = comps.pop(n1), comps.pop(n2)
        regions = a.regions | b.regions
        g = a.genus + b.genus
        if all(disks):
            comps[sphere_name(s.id)] = ComponentInfo(0, None, regions)
            comps[s.id] = ComponentInfo(g, None, regions)
        else:
            # tubing along an essential annulus loses one handle
            comps[s.id] = ComponentInfo(g - 1 if g else 0, None, regions)
        aliases[n1] = aliases[n2] = s.id
        return LevelState(comps, aliases, frozenset(dead))

    a = comps.pop(n1)
    ra, rb = split_names(s.id)
    if all(disks):
        if nested[0] and nested[1]:
            raise BadNesting("two disks cannot both be nested in each other")
        if any(nested):
            comps[ra] = ComponentInfo(a.genus, None, a.regions | {(s.id, "A")})
            comps[rb] = ComponentInfo(0 if a.genus == 0 else 1, None,
                                      a.regions | {(s.id, "B")})
        else:
            comps[sphere_name(s.id)] = ComponentInfo(0, None, a.regions)
            comps[s.id] = ComponentInfo(a.genus + 1, None, a.regions)
            aliases[n1] = s.id
            return LevelState(comps, aliases, frozenset(dead))
        dead.add(n1)
        return LevelState(comps, aliases, frozenset(dead))
    if any(nested):
        raise BadNesting("a nested disk needs a disk partner")
    if any(disks):
        comps[s.id] = ComponentInfo(a.genus, None, a.regions)
        aliases[n1] = s.id
        return LevelState(comps, aliases, frozenset(dead))
    if k1 != k2:
        raise CrossingCircles(f"classes {k1} and {k2} cannot be disjoint on one torus")
    comps[ra] = ComponentInfo(a.genus, None, a.regions | {(s.id, "A")})
    comps[rb] = ComponentInfo(a.genus, None, a.regions | {(s.id, "B")})
    dead.add(n1)
    return LevelState(comps, aliases, frozenset(dead))


# ---------------------------------------------------------------------------
# local case analysis


@dataclass(frozen=True)
class SaddleCase:
    """What a saddle on genus-one components encodes.

    kind is one of ``cable``, ``absorb``, ``meridian``, ``hopf`` (distinct
    components) or ``trivial``, ``nested``, ``sum``, ``parallel`` (one
    component).  ``x`` is the index (0 or 1) of the distinguished circle:
    the longitude side of a cable, the disk side of an absorb, the meridian
    side of a meridian absorb, the outer disk when nested.
    """
    kind: str
    x: int = 0
    p: int = 0
    q: int = 0

    @property
    def splits(self) -> bool:
        return self.kind in ("nested", "sum", "parallel")


def saddle_case(k1: CurveClass, k2: CurveClass, same: bool) -> SaddleCase | Violation:
    ks = (k1, k2)
    disks = [isinstance(k, Disk) for k in ks]
    nested = [isinstance(k, Disk) and k.nested for k in ks]
    if all(disks) and not any(nested):
        return Violation("SphereProduced", detail="disjoint disks")
    if any(nested):
        if same and all(disks) and not all(nested):
            return SaddleCase("nested", x=nested.index(False))
        return Violation("BadNesting", detail="nested disk without an outer disk on the same torus")
    if any(disks):
        i = disks.index(True)
        other = ks[1 - i]
        if other == Class(1, 0):
            return SaddleCase("trivial" if same else "absorb", x=i)
        if other.is_meridian:
            return Violation("Unsupported", detail="disk against a meridian")
        return Violation("SlopeMismatch", detail=f"disk has framing 0, {other} has {other.framing}")
    c1, c2 = k1, k2
    assert isinstance(c1, Class) and isinstance(c2, Class)
    if same:
        if c1 != c2:
            return Violation("CrossingCircles", detail=f"{c1} and {c2} intersect")
        if c1.is_meridian:
            return SaddleCase("sum")
        return SaddleCase("parallel", p=c1.p, q=c1.q)
    if c1.is_meridian or c2.is_meridian:
        i = 0 if c1.is_meridian else 1
        if ks[1 - i] == Class(1, 0):
            return SaddleCase("meridian", x=i)
        if c1.is_meridian and c2.is_meridian:
            return Violation("Unsupported", detail="two meridians of distinct components")
        return Violation("SlopeMismatch", detail=f"framings {c1.framing} and {c2.framing}")
    if c1.framing != c2.framing:
        return Violation("SlopeMismatch", detail=f"framings {c1.framing} and {c2.framing}")
    if c1.p == 1 or c2.p == 1:
        i = 0 if c1.p == 1 else 1
        y = ks[1 - i]
        return SaddleCase("cable", x=i, p=y.p, q=y.q)
    if c2 == Class(c1.q, c1.p):
        return SaddleCase("hopf", x=0, p=c1.p, q=c1.q)
    return Violation("SlopeMismatch", detail=f"{c1} and {c2} are not Hopf-dual slopes")


# ---------------------------------------------------------------------------
# replay


@dataclass
class Replay:
    """Result of replaying an RHD.

    ``resolved`` is the event list with every component reference replaced
    by the live component name at the time of the event.
    """
    violations: list[Violation]
    resolved: list
    cases: dict[str, SaddleCase]
    states: list[LevelState]


def _check_ids(r: RHD, out: list[Violation]) -> None:
    seen = set()
    for e in r.events:
        if "." in e.id:
            out.append(Violation("BadIdentifier", e.id, "event ids may not contain '.'"))
        if e.id in seen:
            out.append(Violation("DuplicateId", e.id))
        seen.add(e.id)


def _check_order(r: RHD, out: list[Violation]) -> None:
    rank = {Source: 0, Saddle: 1, Sink: 2}
    names = {0: "source", 1: "saddle", 2: "sink"}
    top = 0
    top_id = None
    for e in r.events:
        k = rank[type(e)]
        if k < top:
            out.append(Violation("OrderingViolation", e.id,
                                 f"{names[k]} after {names[top]} {top_id}"))
        elif k > top:
            top, top_id = k, e.id
        elif top_id is None:
            top_id = e.id


def _check_placements(sources: list[Source], out: list[Violation]) -> None:
    ids = {s.id for s in sources}
    graph = {}
    for s in sources:
        ref = placement_ref(s.placement)
        if s.placement is None:
            out.append(Violation("PlacementMismatch", s.id, "source without placement"))
        elif ref is not None:
            if ref == s.id:
                out.append(Violation("PlacementMismatch", s.id, "placed relative to itself"))
            elif ref not in ids:
                out.append(Violation("UnknownComponent", s.id, f"placement refers to unknown source {ref}"))
            else:
                graph[s.id] = ref
    for start in graph:
        seen, node = set(), start
        while node in graph and node not in seen:
            seen.add(node)
            node = graph[node]
        if node == start:
            out.append(Violation("PlacementMismatch", start, "cyclic placement"))


def _placement_violation(state: LevelState, sources: dict[str, Source],
                         case: SaddleCase, names: tuple[str, str], sid: str) -> Violation | None:
    def pure(n: str) -> Source | None:
        src = state.components[n].source
        return sources.get(src) if src is not None else None

    def resolves_to(ref: str | None, target: str) -> bool:
        if ref is None:
            return False
        try:
            return state.resolve(ref) == target
        except RHDError:
            return False

    x, y = names[case.x], names[1 - case.x]
    if case.kind == "cable":
        s = pure(x)
        if s is not None and not (isinstance(s.placement, InsideTube)
                                  and resolves_to(s.placement.component, y)):
            return Violation("PlacementMismatch", sid, f"cable source {s.id} must lie inside the tube of {y}")
    elif case.kind == "absorb":
        s = pure(y)
        if s is not None and not isinstance(s.placement, SplitBall):
            return Violation("PlacementMismatch", sid, f"absorbed source {s.id} must lie in a split ball")
    elif case.kind == "meridian":
        s = pure(y)
        if s is not None and not (isinstance(s.placement, HopfDual)
                                  and resolves_to(s.placement.source, x)):
            return Violation("PlacementMismatch", sid, f"meridian source {s.id} must be Hopf dual to {x}")
    elif case.kind == "hopf":
        sx, sy = pure(names[0]), pure(names[1])
        ok = sx is not None and sy is not None and (
            (isinstance(sx.placement, HopfDual) and resolves_to(sx.placement.source, names[1]))
            or (isinstance(sy.placement, HopfDual) and resolves_to(sy.placement.source, names[0])))
        if not ok:
            return Violation("PlacementMismatch", sid, "Hopf saddle needs two Hopf-dual sources")
    elif case.kind == "sum":
        s = pure(x)
        if s is not None and not isinstance(s.placement, SplitBall):
            return Violation("PlacementMismatch", sid, f"summing source {s.id} must lie in a split ball")
    return None


def _region_violation(state: LevelState, s: Saddle, case: SaddleCase,
                      names: tuple[str, str]) -> Violation | None:
    if not case.splits:
        if s.regions:
            return Violation("RegionMismatch", s.id, "region tags on a saddle that does not split")
        if names[0] != names[1]:
            r1 = dict(state.components[names[0]].regions)
            r2 = dict(state.components[names[1]].regions)
            for key in r1.keys() & r2.keys():
                if r1[key] != r2[key]:
                    return Violation("RegionMismatch", s.id,
                                     f"{names[0]} and {names[1]} lie on opposite sides of {key}")
        return None
    tagged = {}
    for tag, side in s.regions:
        try:
            t = state.resolve(tag)
        except RHDError:
            return Violation("RegionMismatch", s.id, f"tag names no live component: {tag}")
        if t == names[0] or t in tagged:
            return Violation("RegionMismatch", s.id, f"component {t} tagged twice or is the split component")
        tagged[t] = side
    missing = sorted(set(state.components) - set(tagged) - {names[0]})
    if missing:
        return Violation("RegionMismatch", s.id, "untagged components: " + " ".join(missing))
    return None


class Replayer:
    """Incremental replay of saddles and sinks over a fixed set of sources.

    Each step returns the violation it hits, or None.  Steps after a
    violation are not meaningful.  ``copy`` is cheap, so callers can
    explore alternative continuations of a common prefix.
    """

    def __init__(self, sources: list[Source]):
        self.sources = {s.id: s for s in sources}
        self.state = LevelState.initial(sources)
        self.resolved: list = list(sources)
        self.cases: dict[str, SaddleCase] = {}
        self.creator = {s.id: s.id for s in sources}   # component -> creating event
        self.consumer: dict[str, str] = {}             # component -> consuming event
        self.sink_of: dict[str, str] = {}
        self.hopf_merged: set[str] = set()
        self.parallel: list[str] = []

    def copy(self) -> "Replayer":
        new = object.__new__(Replayer)
        new.sources = self.sources
        new.state = self.state
        new.resolved = list(self.resolved)
        new.cases = dict(self.cases)
        new.creator = dict(self.creator)
        new.consumer = dict(self.consumer)
        new.sink_of = dict(self.sink_of)
        new.hopf_merged = set(self.hopf_merged)
        new.parallel = list(self.parallel)
        return new

    def saddle(self, s: Saddle) -> Violation | None:
        state = self.state
        try:
            names = (state.resolve(s.c1.component), state.resolve(s.c2.component))
        except DeadComponent as exc:
            return Violation("DeadComponent", s.id, str(exc))
        except UnknownComponent as exc:
            return Violation("UnknownComponent", s.id, str(exc))
        for n in names:
            if n in self.hopf_merged:
                return Violation("Unsupported", s.id,
                                 f"{n} comes from a Hopf saddle and may only be capped by a sink")
        case = saddle_case(s.c1.cls, s.c2.cls, names[0] == names[1])
        if isinstance(case, Violation):
            return replace(case, event=s.id)
        v = (_region_violation(state, s, case, names)
             or _placement_violation(state, self.sources, case, names, s.id))
        if v is not None:
            return v
        try:
            new_state = surger(state, s)
        except RHDError as exc:  # pragma: no cover - excluded by saddle_case
            return Violation(type(exc).__name__, s.id, str(exc))
        for n, info in new_state.components.items():
            if info.genus != 1:
                kind = "SphereProduced" if info.genus == 0 else "GenusExceeded"
                return Violation(kind, s.id, f"component {n} has genus {info.genus}")
        for n in set(names):
            self.consumer[n] = s.id
        for n in new_state.components.keys() - state.components.keys():
            self.creator[n] = s.id
        if case.kind == "hopf":
            self.hopf_merged.add(s.id)
        if case.kind == "parallel":
            self.parallel.append(s.id)
        tags = tuple((state.resolve(t), side) for t, side in s.regions)
        self.resolved.append(Saddle(s.id, replace(s.c1, component=names[0]),
                                    replace(s.c2, component=names[1]), tags))
        self.cases[s.id] = case
        self.state = new_state
        return None

    def sink(self, k: Sink) -> Violation | None:
        try:
            target = self.state.resolve(k.target)
        except DeadComponent as exc:
            return Violation("DeadComponent", k.id, str(exc))
        except UnknownComponent as exc:
            return Violation("UnknownComponent", k.id, str(exc))
        self.consumer[target] = k.id
        self.sink_of[target] = k.id
        self.state = self.state.cap(target)
        self.resolved.append(Sink(k.id, target))
        return None

    def finish(self, event_ids: list[str]) -> list[Violation]:
        out = [Violation("DanglingComponent", None, f"component {n} is never capped")
               for n in sorted(self.state.components)]
        if out:
            return out
        for sid in self.parallel:
            saddle = next(e for e in self.resolved if isinstance(e, Saddle) and e.id == sid)
            used = {side for _, side in saddle.regions}
            if not any(n in self.sink_of and n[-1] not in used for n in split_names(sid)):
                out.append(Violation("Unsupported", sid,
                                     "parallel split needs one side capped directly by a sink"))
        if out:
            return out

        # Reeb graph: events are vertices, level components are edges; S^3 is
        # simply connected so the graph must be a tree.
        parent = {e: e for e in event_ids}

        def find(a: str) -> str:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        cycle = False
        for comp, made_by in self.creator.items():
            a, b = find(made_by), find(self.consumer[comp])
            if a == b:
                cycle = True
            parent[a] = b
        if cycle:
            return [Violation("ReebCycle", None, "the Reeb graph has a cycle")]
        if len({find(e) for e in event_ids}) > 1:
            return [Violation("Disconnected", None, "the Reeb graph is disconnected")]
        return []


def replay(r: RHD) -> Replay:
    out: list[Violation] = []
    _check_ids(r, out)
    for e in r.saddles:
        v = saddle_case(e.c1.cls, e.c2.cls, same=False)
        if isinstance(v, Violation) and v.kind == "SphereProduced":
            out.append(Violation("SphereProduced", e.id, v.detail))
    _check_order(r, out)
    result = Replay(out, [], {}, [])
    if any(v.kind in ("OrderingViolation", "DuplicateId", "BadIdentifier") for v in out):
        return result
    sources = r.sources
    _check_placements(sources, out)
    if out:
        return result
    rp = Replayer(sources)
    result.states.append(rp.state)
    for s in r.saddles:
        v = rp.saddle(s)
        if v is not None:
            if not (v.kind == "SphereProduced" and v.detail == "disjoint disks"):
                out.append(v)
            return result
        result.states.append(rp.state)
    for k in r.sinks:
        v = rp.sink(k)
        if v is not None:
            out.append(v)
    result.states.append(rp.state)
    result.resolved = rp.resolved
    result.cases = rp.cases
    if not out:
        out.extend(rp.finish(r.ids()))
    return result


def validate(r: RHD) -> list[Violation]:
    """Replay ``r``; an empty list means the decomposition is valid."""
    return replay(r).violations
