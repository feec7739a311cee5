"""Independent brute-force oracles.

Nothing here trusts the code it is used to check: the torus polynomial is
obtained by long division rather than from semigroup gaps, level genera
are recomputed by cutting tori into pieces and counting Euler
characteristic, and the decomposition enumerator only knows the grammar.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from math import gcd
from typing import Iterator

from .expr import Cable, KnotExpr, Sum, U, Unknot, replace_at, subterms
from .invariants import LaurentPoly
from .rhd.model import (
    RHD, AttachCircle, Class, CurveClass, Disk, HopfDual, InsideTube, MERIDIAN,
    RHDError, Saddle, Sink, Source, SplitBall,
)
from .rhd.surgery import LevelState, Replayer, Violation, saddle_case, surger


class NonCoprime(ValueError):
    pass


class DivisionRemainder(ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# torus knot polynomial by long division


def poly_div_torus(p: int, q: int) -> LaurentPoly:
    """(t^pq - 1)(t - 1) / ((t^p - 1)(t^q - 1)), divided exactly."""
    if p < 2 or q < 2:
        raise ValueError("poly_div_torus needs p, q >= 2")
    if gcd(p, q) != 1:
        raise NonCoprime(f"gcd({p},{q}) = {gcd(p, q)}")

    def t_pow_minus_one(n: int) -> LaurentPoly:
        return LaurentPoly.from_dict({n: 1, 0: -1})

    num = t_pow_minus_one(p * q) * t_pow_minus_one(1)
    den = t_pow_minus_one(p) * t_pow_minus_one(q)
    quot, rem = num.divmod(den)
    if not rem.is_zero():
        raise DivisionRemainder(f"remainder {rem} dividing by {den}")
    return quot.canonical()


# ---------------------------------------------------------------------------
# random expressions


def _coprime_pair(rng: random.Random, bound: int, signed: bool) -> tuple[int, int]:
    while True:
        p, q = rng.randint(1, bound), rng.randint(1, bound)
        if gcd(p, q) == 1:
            break
    if signed and rng.random() < 0.3:
        q = -q
    if signed and rng.random() < 0.2:
        p, q = -p, -q
    return p, q


def _random(rng: random.Random, depth: int, bound: int) -> KnotExpr:
    if depth <= 1:
        p, q = _coprime_pair(rng, bound, signed=False)
        return Cable(p, q, U)
    roll = rng.random()
    if roll < 0.55:
        p, q = _coprime_pair(rng, bound, signed=True)
        return Cable(p, q, _random(rng, depth - 1, bound))
    if roll < 0.9:
        parts = [_random(rng, rng.randint(1, depth - 1), bound)
                 for _ in range(rng.choice((2, 2, 3)))]
        if rng.random() < 0.15:
            parts.append(U)
        return Sum(*parts)
    # leaves that normalization must collapse
    p, q = _coprime_pair(rng, bound, signed=True)
    return Cable(1, q, _random(rng, depth - 1, bound)) if p % 2 else Cable(0, 1, _random(rng, depth - 1, bound))


def random_expr(seed: int, depth: int, bound: int) -> KnotExpr:
    """Deterministic pseudo-random expression of nesting depth at most ``depth``.

    Depth 1 always gives Cable(p, q, U) with 1 <= p, q <= bound.
    """
    if depth < 1 or bound < 1:
        raise ValueError("depth and bound must be positive")
    return _random(random.Random(seed), depth, bound)


def random_positive_cable(seed: int, depth: int, bound: int) -> KnotExpr:
    """Iterated cable, every class with p >= 2 and q >= 1, over a positive torus knot."""
    rng = random.Random(seed)
    e: KnotExpr = U
    for _ in range(depth):
        while True:
            p, q = rng.randint(2, bound), rng.randint(1, bound)
            if gcd(p, q) == 1 and (not isinstance(e, Unknot) or q >= 2):
                break
        e = Cable(p, q, e)
    return e


def expand_once(e: KnotExpr, rng: random.Random) -> KnotExpr:
    """Apply one isotopy-preserving expansion at a random position."""
    nodes = list(subterms(e))
    path, node = rng.choice(nodes)
    moves = ["wrap", "unknot_summand"]
    if isinstance(node, Cable):
        moves.append("negate")
    if isinstance(node, Unknot):
        moves.append("trivial_cable")
    if isinstance(node, Sum):
        moves.append("permute")
    move = rng.choice(moves)
    if move == "wrap":
        new: KnotExpr = Cable(1, rng.randint(-5, 5), node)
    elif move == "unknot_summand":
        new = Sum(*(node.summands + (U,))) if isinstance(node, Sum) else Sum(U, node)
    elif move == "negate":
        new = Cable(-node.p, -node.q, node.companion)
    elif move == "permute":
        parts = list(node.summands)
        rng.shuffle(parts)
        new = Sum(*parts)
    else:
        choice = rng.randrange(3)
        if choice == 0:
            new = Cable(0, rng.choice((1, -1)), Cable(2, 3, U))
        elif choice == 1:
            new = Cable(rng.randint(2, 5), rng.choice((1, -1)), U)
        else:
            new = Cable(rng.choice((1, -1)), rng.randint(-4, 4), U)
    return replace_at(e, path, new)


# ---------------------------------------------------------------------------
# level genera by cutting and regluing


@dataclass
class _Piece:
    chi: int
    sides: tuple[str, ...]


def _cut_one(c: CurveClass, tag: str) -> list[_Piece]:
    if isinstance(c, Disk):
        return [_Piece(1, (tag + "in",)), _Piece(-1, (tag + "out",))]
    return [_Piece(0, (tag + "in", tag + "out"))]


def _cut_two(c1: CurveClass, c2: CurveClass) -> list[_Piece] | None:
    """Pieces of one torus cut along two disjoint circles; None if they must cross."""
    d1, d2 = isinstance(c1, Disk), isinstance(c2, Disk)
    if d1 and d2:
        n1, n2 = c1.nested, c2.nested
        if n1 and n2:
            return None
        if not n1 and not n2:
            return [_Piece(1, ("1in",)), _Piece(1, ("2in",)), _Piece(-2, ("1out", "2out"))]
        inner, outer = ("1", "2") if n1 else ("2", "1")
        return [_Piece(1, (inner + "in",)), _Piece(0, (outer + "in", inner + "out")),
                _Piece(-1, (outer + "out",))]
    if d1 or d2:
        disk, ess = ("1", "2") if d1 else ("2", "1")
        return [_Piece(1, (disk + "in",)), _Piece(-1, (disk + "out", ess + "in", ess + "out"))]
    if c1 != c2:
        return None
    return [_Piece(0, ("1in", "2in")), _Piece(0, ("1out", "2out"))]


def _glue(pieces: list[_Piece]) -> list[int] | None:
    """Glue in the two unstable annuli and return the genera of the result."""
    where = {s: i for i, pc in enumerate(pieces) for s in pc.sides}
    if any(s not in where for s in ("1in", "1out", "2in", "2out")):
        return None
    pairs = None
    for a, b in (("1in", "2in"), ("1in", "2out"), ("1out", "2in"), ("1out", "2out")):
        if where[a] == where[b]:
            other_a = "1out" if a == "1in" else "1in"
            other_b = "2out" if b == "2in" else "2in"
            pairs = [(a, b), (other_a, other_b)]
            break
    if pairs is None:
        pairs = [("1in", "2in"), ("1out", "2out")]
    parent = list(range(len(pieces)))

    def find(i: int) -> int:
        while parent[i] != i:
            i = parent[i]
        return i

    for a, b in pairs:
        parent[find(where[a])] = find(where[b])
    chi: dict[int, int] = {}
    for i, pc in enumerate(pieces):
        chi[find(i)] = chi.get(find(i), 0) + pc.chi
    return sorted((2 - x) // 2 for x in chi.values())


def saddle_genera(c1: CurveClass, c2: CurveClass, same: bool) -> list[int] | None:
    """Genera of the surfaces produced from one or two tori; None if impossible."""
    if same:
        pieces = _cut_two(c1, c2)
        if pieces is None:
            return None
    else:
        if any(isinstance(c, Disk) and c.nested for c in (c1, c2)):
            return None
        pieces = _cut_one(c1, "1") + _cut_one(c2, "2")
    return _glue(pieces)


def level_genera(r: RHD) -> list[list[int]] | None:
    """Genus of every component at every regular level of ``r``.

    Component names follow the documented replay convention; the genera
    themselves come only from the cut-and-glue count above.  Returns None
    when the events cannot be replayed at all.
    """
    genus: dict[str, int] = {}
    alias: dict[str, str] = {}

    def res(n: str) -> str | None:
        seen = set()
        while n in alias and n not in seen:
            seen.add(n)
            n = alias[n]
        return n if n in genus else None

    levels = []
    for e in r.events:
        if isinstance(e, Source):
            genus[e.id] = 1
        elif isinstance(e, Saddle):
            n1, n2 = res(e.c1.component), res(e.c2.component)
            if n1 is None or n2 is None:
                return None
            out = saddle_genera(e.c1.cls, e.c2.cls, n1 == n2)
            if out is None:
                return None
            genus.pop(n1)
            genus.pop(n2, None)
            if len(out) == 1:
                genus[e.id] = out[0]
                alias[n1] = alias[n2] = e.id
            else:
                for side, g in zip(("A", "B"), out):
                    genus[f"{e.id}.{side}"] = g
        else:
            n = res(e.target)
            if n is None:
                return None
            genus.pop(n)
        levels.append(sorted(genus.values()))
    return levels


# ---------------------------------------------------------------------------
# exhaustive enumeration


@dataclass(frozen=True)
class EnumerationBudget:
    """Bounds for :func:`enumerate_rhds`.

    ``max_sources`` and ``max_sinks`` default to ``max_saddles + 1`` (at
    least 2).  With ``prune`` set, subtrees below a prefix that validate
    already rejects are skipped (no completion of such a prefix can be
    accepted); saddles along two disjoint disks are still produced, as
    leaves, so that every such configuration can be checked.
    """
    max_saddles: int = 2
    coeff_bound: int = 3
    max_depth: int = 4
    seed: int = 0
    max_sources: int | None = None
    max_sinks: int | None = None
    prune: bool = True

    @property
    def sources(self) -> int:
        return self.max_sources if self.max_sources is not None else max(2, self.max_saddles + 1)

    @property
    def sinks(self) -> int:
        return self.max_sinks if self.max_sinks is not None else max(2, self.max_saddles + 1)


def class_alphabet(bound: int) -> list[CurveClass]:
    out: list[CurveClass] = [Disk(), Disk(nested=True), MERIDIAN]
    for p in range(1, bound + 1):
        for q in range(-bound, bound + 1):
            if gcd(p, abs(q)) == 1:
                out.append(Class(p, q))
    return out


def _placements(n: int) -> Iterator[tuple]:
    # a source only refers to later sources: every acyclic placement
    # pattern has such an ordering, and source order carries no meaning
    options = []
    for i in range(n):
        opts = [SplitBall()]
        for j in range(i + 1, n):
            opts += [HopfDual(f"s{j}"), InsideTube(f"s{j}")]
        options.append(opts)
    return itertools.product(*options)


def _saddle_options(state: LevelState, sid: str, alphabet: list[CurveClass]) -> Iterator[Saddle]:
    live = sorted(state.components)
    for i, a in enumerate(live):
        for j in range(i, len(live)):
            b = live[j]
            if a == b:
                pairs = itertools.combinations_with_replacement(alphabet, 2)
            else:
                pairs = itertools.product(alphabet, alphabet)
            for ka, kb in pairs:
                base = Saddle(sid, AttachCircle(a, ka), AttachCircle(b, kb))
                yield base
                if a == b and _splits(ka, kb):
                    others = [c for c in live if c != a]
                    for sides in itertools.product("AB", repeat=len(others)):
                        if others:
                            yield Saddle(sid, base.c1, base.c2, tuple(zip(others, sides)))


def _splits(ka: CurveClass, kb: CurveClass) -> bool:
    if isinstance(ka, Disk) and isinstance(kb, Disk):
        return ka.nested != kb.nested
    return not isinstance(ka, Disk) and not isinstance(kb, Disk) and ka == kb


def _with_sinks(events: list, state: LevelState, max_sinks: int, prune: bool) -> Iterator[RHD]:
    live = sorted(state.components)
    if prune:
        # any other choice leaves a component uncapped
        if len(live) <= max_sinks:
            yield RHD(events + [Sink(f"k{i}", c) for i, c in enumerate(live)])
        return
    for size in range(1, min(len(live), max_sinks) + 1):
        for chosen in itertools.combinations(live, size):
            yield RHD(events + [Sink(f"k{i}", c) for i, c in enumerate(chosen)])


def _is_disjoint_disks(s: Saddle) -> bool:
    return all(isinstance(c.cls, Disk) and not c.cls.nested for c in (s.c1, s.c2))


def _groups_after(groups: dict[str, int], before: LevelState, after: LevelState,
                  s: Saddle) -> dict[str, int]:
    """Connected pieces of the Reeb graph so far, keyed by live component."""
    g1 = groups[before.resolve(s.c1.component)]
    g2 = groups[before.resolve(s.c2.component)]
    out = {}
    for n in after.components:
        g = groups.get(n, g1)
        out[n] = g1 if g == g2 else g
    return out


def _extend(events: list, state: LevelState, rp: Replayer | None, used: int,
            b: EnumerationBudget, alphabet: list[CurveClass],
            groups_of: dict[str, int] | None = None) -> Iterator[RHD]:
    yield from _with_sinks(events, state, b.sinks, b.prune)
    if used == b.max_saddles:
        return
    for s in _saddle_options(state, f"h{used}", alphabet):
        nxt = events + [s]
        if rp is None:
            try:
                new_state = surger(state, s)
            except RHDError:
                yield RHD(nxt)
                continue
            yield from _extend(nxt, new_state, None, used + 1, b, alphabet)
            continue
        if _is_disjoint_disks(s):
            # kept as a leaf so every such configuration gets checked
            yield RHD(nxt)
            continue
        # a locally impossible saddle rejects every completion
        if isinstance(saddle_case(s.c1.cls, s.c2.cls, s.c1.component == s.c2.component),
                      Violation):
            continue
        step = rp.copy()
        if step.saddle(s) is not None:
            continue
        groups = _groups_after(groups_of, state, step.state, s)
        # each later saddle joins at most two groups; more groups than that
        # can only end in a disconnected Reeb graph
        if len(set(groups.values())) - 1 > b.max_saddles - used - 1:
            continue
        yield from _extend(nxt, step.state, step, used + 1, b, alphabet, groups)


def enumerate_rhds(b: EnumerationBudget = EnumerationBudget()) -> Iterator[RHD]:
    """Every RHD within the budget, in a fixed order.

    Ids are canonical (sources s0.., saddles h0.., sinks k0..), events are
    in source/saddle/sink order, circles on the same saddle are unordered,
    and every reference names a live component.
    """
    alphabet = class_alphabet(b.coeff_bound)
    for n in range(1, b.sources + 1):
        for placement in _placements(n):
            sources = [Source(f"s{i}", pl) for i, pl in enumerate(placement)]
            rp = Replayer(sources) if b.prune else None
            if b.prune and n - 1 > b.max_saddles:
                continue
            groups = {s.id: i for i, s in enumerate(sources)}
            yield from _extend(list(sources), LevelState.initial(sources), rp, 0, b, alphabet, groups)
