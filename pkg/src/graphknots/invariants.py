"""Exact Alexander polynomial and Seifert genus of graph-knot expressions.

These are refutation oracles: two expressions with different polynomials
are certainly not isotopic.  Equal polynomials prove nothing.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .expr import Cable, KnotExpr, MalformedExpression, Sum, Unknot, normalize, is_canonical


@dataclass(frozen=True)
class LaurentPoly:
    """Integer Laurent polynomial ``sum(coeffs[i] * t**(offset + i))``.

    The constructor trims zero coefficients at both ends; the zero
    polynomial has empty ``coeffs`` and offset 0.
    """
    coeffs: tuple[int, ...] = ()
    offset: int = 0

    def __post_init__(self) -> None:
        c = list(self.coeffs)
        off = self.offset
        while c and c[0] == 0:
            c.pop(0)
            off += 1
        while c and c[-1] == 0:
            c.pop()
        if not c:
            off = 0
        object.__setattr__(self, "coeffs", tuple(c))
        object.__setattr__(self, "offset", off)

    @classmethod
    def constant(cls, c: int) -> "LaurentPoly":
        return cls((c,))

    @classmethod
    def monomial(cls, c: int, k: int) -> "LaurentPoly":
        return cls((c,), k)

    @classmethod
    def from_dict(cls, terms: dict[int, int]) -> "LaurentPoly":
        terms = {k: v for k, v in terms.items() if v}
        if not terms:
            return cls()
        lo, hi = min(terms), max(terms)
        return cls(tuple(terms.get(k, 0) for k in range(lo, hi + 1)), lo)

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def min_degree(self) -> int:
        return self.offset

    @property
    def max_degree(self) -> int:
        return self.offset + len(self.coeffs) - 1

    def span(self) -> int:
        if self.is_zero():
            raise ValueError("span of the zero polynomial")
        return len(self.coeffs) - 1

    def terms(self) -> dict[int, int]:
        return {self.offset + i: c for i, c in enumerate(self.coeffs) if c}

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = self.terms()
        for k, v in other.terms().items():
            out[k] = out.get(k, 0) + v
        return LaurentPoly.from_dict(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(tuple(-c for c in self.coeffs), self.offset)

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other: "LaurentPoly") -> "LaurentPoly":
        if self.is_zero() or other.is_zero():
            return LaurentPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return LaurentPoly(tuple(out), self.offset + other.offset)

    def __pow__(self, n: int) -> "LaurentPoly":
        result = LaurentPoly.constant(1)
        for _ in range(n):
            result = result * self
        return result

    def substitute_power(self, p: int) -> "LaurentPoly":
        """The polynomial in ``t**p`` (p >= 1)."""
        if p < 1:
            raise ValueError("substitution exponent must be positive")
        return LaurentPoly.from_dict({k * p: v for k, v in self.terms().items()})

    def divmod(self, divisor: "LaurentPoly") -> tuple["LaurentPoly", "LaurentPoly"]:
        """Long division by a divisor whose leading coefficient is +-1.

        Quotient exponents go down to ``min_degree(self) - min_degree(divisor)``,
        so exact multiples divide with zero remainder.
        """
        if divisor.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        lead = divisor.coeffs[-1]
        if lead not in (1, -1):
            raise ValueError("divisor must be monic up to sign")
        rem = self.terms()
        quot: dict[int, int] = {}
        dmax = divisor.max_degree
        dterms = divisor.terms()
        if self.is_zero():
            return LaurentPoly(), LaurentPoly()
        lowest = self.min_degree - divisor.min_degree
        while rem and max(rem) - dmax >= lowest:
            top = max(rem)
            c = rem[top] * lead
            shift = top - dmax
            quot[shift] = quot.get(shift, 0) + c
            for k, v in dterms.items():
                key = k + shift
                rem[key] = rem.get(key, 0) - c * v
                if rem[key] == 0:
                    del rem[key]
        return LaurentPoly.from_dict(quot), LaurentPoly.from_dict(rem)

    def canonical(self) -> "LaurentPoly":
        """Representative up to units +-t^k: lowest exponent 0, leading coefficient positive."""
        if self.is_zero():
            return self
        sign = 1 if self.coeffs[-1] > 0 else -1
        return LaurentPoly(tuple(sign * c for c in self.coeffs), 0)

    def __str__(self) -> str:
        if self.is_zero():
            return "0"
        parts: list[str] = []
        for k, c in sorted(self.terms().items()):
            if k == 0:
                mono = str(abs(c))
            elif k == 1:
                mono = f"{abs(c)}*t"
            else:
                mono = f"{abs(c)}*t^{k}"
            if not parts:
                parts.append(mono if c > 0 else "-" + mono)
            else:
                parts.append(("+ " if c > 0 else "- ") + mono)
        return " ".join(parts)


ONE = LaurentPoly.constant(1)


@lru_cache(maxsize=None)
def torus_alexander(p: int, q: int) -> LaurentPoly:
    """Alexander polynomial of T(p,q), p,q >= 1 coprime.

    Computed from the gaps of the numerical semigroup generated by p and q:
    Delta = 1 + (t - 1) * sum(t**g for g in gaps).  This avoids polynomial
    division, so it can be checked against the long-division oracle.
    """
    if p < 1 or q < 1 or gcd(p, q) != 1:
        raise MalformedExpression(f"T({p},{q}) is not a torus knot class")
    conductor = (p - 1) * (q - 1)
    reachable = [False] * max(conductor, 1)
    for a in range(0, conductor, p):
        for b in range(a, conductor, q):
            reachable[b] = True
    gaps = [g for g in range(conductor) if not reachable[g]]
    gap_sum = LaurentPoly.from_dict({g: 1 for g in gaps})
    t_minus_1 = LaurentPoly((-1, 1))
    return (ONE + t_minus_1 * gap_sum).canonical()


def _alexander(e: KnotExpr) -> LaurentPoly:
    if isinstance(e, Unknot):
        return ONE
    if isinstance(e, Sum):
        out = ONE
        for s in e.summands:
            out = out * _alexander(s)
        return out
    inner = _alexander(e.companion).substitute_power(e.p)
    return inner * torus_alexander(e.p, abs(e.q))


def alexander(e: KnotExpr) -> LaurentPoly:
    """Canonical Alexander polynomial, evaluated on the canonical form of ``e``."""
    return _alexander(normalize(e)).canonical()


def _genus(e: KnotExpr) -> int:
    if isinstance(e, Unknot):
        return 0
    if isinstance(e, Sum):
        return sum(_genus(s) for s in e.summands)
    return e.p * _genus(e.companion) + (e.p - 1) * (abs(e.q) - 1) // 2


def genus(e: KnotExpr) -> int:
    """Seifert genus; ``e`` must be canonical."""
    if not is_canonical(e):
        raise MalformedExpression(f"expression is not canonical: {e}")
    return _genus(e)
