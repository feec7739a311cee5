from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from graphknots.expr import Cable, MalformedExpression, Sum, U, normalize
from graphknots.invariants import LaurentPoly, alexander, genus, torus_alexander
from graphknots.oracle import NonCoprime, poly_div_torus, random_expr

T23, T25 = Cable(2, 3, U), Cable(2, 5, U)
TREFOIL = LaurentPoly((1, -1, 1))

polys = st.builds(
    LaurentPoly,
    st.lists(st.integers(-5, 5), max_size=6).map(tuple),
    st.integers(-4, 4))


def test_examples():
    assert alexander(U) == LaurentPoly.constant(1)
    assert alexander(T23) == TREFOIL
    assert alexander(Sum(T23, T23)) == TREFOIL * TREFOIL
    assert genus(U) == 0
    assert genus(T23) == 1
    assert genus(normalize(Sum(T23, T25))) == 3


def test_mirror_has_same_polynomial():
    assert alexander(Cable(2, -3, U)) == alexander(T23)


def test_cable_of_trefoil():
    # Delta of the (2,1)-cable of T(2,3) is Delta_T23(t^2)
    assert alexander(Cable(2, 1, T23)) == TREFOIL.substitute_power(2)
    assert genus(Cable(2, 1, T23)) == 2


def test_genus_requires_canonical():
    with pytest.raises(MalformedExpression):
        genus(Cable(1, 3, T23))


def test_str():
    assert str(TREFOIL) == "1 - 1*t + 1*t^2"
    assert str(LaurentPoly()) == "0"


def test_canonical_is_unit_normalized():
    p = LaurentPoly((-1, 1, -1), offset=-3)
    assert p.canonical() == TREFOIL


@pytest.mark.parametrize("p, q", [(p, q) for q in range(2, 9) for p in range(2, 9)
                                  if gcd(p, q) == 1])
def test_torus_matches_long_division(p, q):
    assert torus_alexander(p, q) == poly_div_torus(p, q)


def test_oracle_errors():
    with pytest.raises(NonCoprime):
        poly_div_torus(2, 4)
    q, r = LaurentPoly((1, 0, 1)).divmod(LaurentPoly((1, 1)))
    assert r == LaurentPoly.constant(2)
    assert q * LaurentPoly((1, 1)) + r == LaurentPoly((1, 0, 1))


@settings(max_examples=200)
@given(polys, polys, polys)
def test_ring_laws(a, b, c):
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)
    assert a - a == LaurentPoly()


@settings(max_examples=200)
@given(polys, st.integers(-3, 3))
def test_divmod_by_monic(a, shift):
    d = LaurentPoly((1, 2, 1), shift)
    q, r = (a * d).divmod(d)
    assert q == a and r.is_zero()


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_polynomial_is_symmetric(seed):
    terms = alexander(random_expr(seed, 3, 6)).terms()
    lo, hi = min(terms), max(terms)
    assert all(terms[k] == terms.get(lo + hi - k) for k in terms)
    assert sum(terms.values()) in (1, -1)
