"""Graph-knot expressions and their canonical form.

A knot expression is a tree over three constructors:

* ``Unknot()``
* ``Cable(p, q, companion)``: the curve of ``p`` longitudes plus ``q``
  meridians on the boundary of a tubular neighbourhood of ``companion``
  (Seifert framing).
* ``Sum(summands)``: the unoriented connected sum of two or more knots.

Everything here is an immutable value; all operations are pure.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Iterator, Sequence, Union


class MalformedExpression(ValueError):
    """An expression violates a structural invariant."""


@dataclass(frozen=True)
class Unknot:
    def __str__(self) -> str:
        return "U"


@dataclass(frozen=True)
class Cable:
    p: int
    q: int
    companion: "KnotExpr"

    def __post_init__(self) -> None:
        if gcd(abs(self.p), abs(self.q)) != 1:
            raise MalformedExpression(
                f"cable class ({self.p},{self.q}) is not primitive")

    def __str__(self) -> str:
        return f"cable({self.p},{self.q},{self.companion})"


@dataclass(frozen=True)
class Sum:
    summands: tuple["KnotExpr", ...]

    def __init__(self, *summands: "KnotExpr") -> None:
        if len(summands) == 1 and isinstance(summands[0], (list, tuple)):
            summands = tuple(summands[0])
        if len(summands) < 2:
            raise MalformedExpression("a sum needs at least two summands")
        object.__setattr__(self, "summands", tuple(summands))

    def __str__(self) -> str:
        return "sum(" + ",".join(str(s) for s in self.summands) + ")"


KnotExpr = Union[Unknot, Cable, Sum]

U = Unknot()


def serialize(e: KnotExpr) -> str:
    """Text form of ``e`` in the expression grammar, no whitespace."""
    return str(e)


def sort_key(e: KnotExpr) -> str:
    return serialize(e)


# ---------------------------------------------------------------------------
# Rewrite rules.  Each rule looks at a single node and returns the rewritten
# node, or None when it does not apply there.
# ---------------------------------------------------------------------------

def rule_sign(e: KnotExpr) -> KnotExpr | None:
    """(p,q) and (-p,-q) are the same unoriented curve; keep p >= 1, or (0,1)."""
    if isinstance(e, Cable) and (e.p < 0 or (e.p == 0 and e.q < 0)):
        return Cable(-e.p, -e.q, e.companion)
    return None


def rule_longitude(e: KnotExpr) -> KnotExpr | None:
    """A (1,r)-cable is isotopic to its companion."""
    if isinstance(e, Cable) and e.p == 1:
        return e.companion
    return None


def rule_meridian(e: KnotExpr) -> KnotExpr | None:
    if isinstance(e, Cable) and e.p == 0:
        return U
    return None


def rule_trivial_torus(e: KnotExpr) -> KnotExpr | None:
    """Torus knots T(p,q) with min(|p|,|q|) <= 1 are unknotted."""
    if (isinstance(e, Cable) and isinstance(e.companion, Unknot)
            and min(abs(e.p), abs(e.q)) <= 1):
        return U
    return None


def rule_drop_unknot(e: KnotExpr) -> KnotExpr | None:
    if isinstance(e, Sum) and any(isinstance(s, Unknot) for s in e.summands):
        rest = [s for s in e.summands if not isinstance(s, Unknot)]
        if not rest:
            return U
        if len(rest) == 1:
            return rest[0]
        return Sum(*rest)
    return None


def rule_flatten(e: KnotExpr) -> KnotExpr | None:
    if isinstance(e, Sum) and any(isinstance(s, Sum) for s in e.summands):
        flat: list[KnotExpr] = []
        for s in e.summands:
            flat.extend(s.summands if isinstance(s, Sum) else (s,))
        return Sum(*flat)
    return None


def rule_sort(e: KnotExpr) -> KnotExpr | None:
    if isinstance(e, Sum):
        ordered = tuple(sorted(e.summands, key=sort_key))
        if ordered != e.summands:
            return Sum(*ordered)
    return None


RULES: tuple[Callable[[KnotExpr], KnotExpr | None], ...] = (
    rule_sign, rule_longitude, rule_meridian, rule_trivial_torus,
    rule_drop_unknot, rule_flatten, rule_sort,
)


def _children(e: KnotExpr) -> tuple[KnotExpr, ...]:
    if isinstance(e, Cable):
        return (e.companion,)
    if isinstance(e, Sum):
        return e.summands
    return ()


def _replace_child(e: KnotExpr, i: int, child: KnotExpr) -> KnotExpr:
    if isinstance(e, Cable):
        return Cable(e.p, e.q, child)
    assert isinstance(e, Sum)
    parts = list(e.summands)
    parts[i] = child
    return Sum(*parts)


def subterms(e: KnotExpr, path: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], KnotExpr]]:
    """All (path, node) pairs in prefix order."""
    yield path, e
    for i, c in enumerate(_children(e)):
        yield from subterms(c, path + (i,))


def replace_at(e: KnotExpr, path: Sequence[int], new: KnotExpr) -> KnotExpr:
    if not path:
        return new
    i = path[0]
    return _replace_child(e, i, replace_at(_children(e)[i], path[1:], new))


def normalize(e: KnotExpr) -> KnotExpr:
    """Canonical form: the rewrite rules applied bottom-up to a fixpoint."""
    if isinstance(e, Unknot):
        return e
    if isinstance(e, Cable):
        node: KnotExpr = Cable(e.p, e.q, normalize(e.companion))
    elif isinstance(e, Sum):
        node = Sum(*(normalize(s) for s in e.summands))
    else:
        raise MalformedExpression(f"not a knot expression: {e!r}")
    changed = True
    while changed:
        changed = False
        for rule in RULES:
            out = rule(node)
            if out is not None:
                # children of a rule's output are already canonical
                node = out
                changed = True
                break
    return node


def rewrite(e: KnotExpr, rng: random.Random) -> KnotExpr:
    """Apply rules at randomly chosen redexes, in random order, to a fixpoint.

    Independent of :func:`normalize`; used to test confluence.
    """
    while True:
        redexes = [(path, rule) for path, node in subterms(e)
                   for rule in RULES if rule(node) is not None]
        if not redexes:
            return e
        path, rule = rng.choice(redexes)
        node = dict(subterms(e))[path]
        e = replace_at(e, path, rule(node))


def equal_normalized(a: KnotExpr, b: KnotExpr) -> bool:
    return normalize(a) == normalize(b)


def is_unknot(e: KnotExpr) -> bool:
    return isinstance(normalize(e), Unknot)


def is_canonical(e: KnotExpr) -> bool:
    return normalize(e) == e


def _require_canonical(e: KnotExpr) -> None:
    if not is_canonical(e):
        raise MalformedExpression(f"expression is not canonical: {e}")


def level(e: KnotExpr) -> int:
    """Least n with ``e`` in the n-th graph-knot class."""
    _require_canonical(e)
    return _level(e)


def _level(e: KnotExpr) -> int:
    if isinstance(e, Unknot):
        return 0
    if isinstance(e, Sum):
        return 1 + max(_level(s) for s in e.summands)
    inner = e.companion
    if isinstance(inner, Sum):
        return 1 + max(_level(s) for s in inner.summands)
    return 1 + _level(inner)


def _gamma_parts(e: KnotExpr) -> tuple[KnotExpr, ...]:
    """Summands of the sum that ``e`` is a cable of (a bare sum is its own (1,r)-cable)."""
    if isinstance(e, Sum):
        return e.summands
    assert isinstance(e, Cable)
    inner = e.companion
    return inner.summands if isinstance(inner, Sum) else (inner,)


@dataclass(frozen=True)
class GraphKit:
    """Labelled companions of a fixed graph-knot expression.

    ``top`` is the summand set of the knot the kit belongs to; ``gamma``
    gives the same for every nontrivial element.
    """
    elements: dict[str, KnotExpr] = field(default_factory=dict)
    gamma: dict[str, tuple[str, ...]] = field(default_factory=dict)
    top: tuple[str, ...] = ()

    def multiset(self) -> Counter:
        return Counter(serialize(x) for x in self.elements.values())

    def is_well_founded(self) -> bool:
        state: dict[str, int] = {}

        def visit(label: str) -> bool:
            if state.get(label) == 1:
                return False
            if state.get(label) == 2:
                return True
            state[label] = 1
            ok = all(visit(c) for c in self.gamma.get(label, ()))
            state[label] = 2
            return ok

        return all(visit(label) for label in self.elements)

    def reconstruct(self, label: str) -> KnotExpr:
        """The knot a nontrivial element is a cable of."""
        parts = [self.elements[c] for c in self.gamma[label]]
        return parts[0] if len(parts) == 1 else Sum(*parts)


def kit_of(e: KnotExpr) -> GraphKit:
    """Graph kit obtained by unrolling the structure of canonical ``e``."""
    _require_canonical(e)
    kit = GraphKit()
    if isinstance(e, Unknot):
        return kit
    counter = 0

    def fresh(x: KnotExpr) -> str:
        nonlocal counter
        counter += 1
        label = f"P{counter}"
        kit.elements[label] = x
        return label

    queue = [(None, e)]
    while queue:
        owner, node = queue.pop(0)
        labels = []
        for part in _gamma_parts(node):
            label = fresh(part)
            labels.append(label)
            if not isinstance(part, Unknot):
                queue.append((label, part))
        if owner is None:
            object.__setattr__(kit, "top", tuple(labels))
        else:
            kit.gamma[owner] = tuple(labels)
    return kit


def cable_over(e: KnotExpr, companion: KnotExpr) -> bool:
    """True when canonical ``e`` is a (p,q)-cable, p >= 1, of ``companion``."""
    e, companion = normalize(e), normalize(companion)
    if isinstance(e, Sum):
        return e == companion
    if e == companion:
        return True  # (1,0)-cable
    if isinstance(e, Cable):
        return e.companion == companion
    # e is the unknot: a meridian of anything
    return True
