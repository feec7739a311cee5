import pytest
from hypothesis import given, settings, strategies as st

from graphknots.expr import Cable, Sum, U, equal_normalized, normalize
from graphknots.oracle import random_expr
from graphknots.rhd import (
    CableOfEachOther, Class, DeadComponent, Disk, HopfLink, InvalidClass, InvalidDecomposition,
    LevelState, NonPrimitiveClass, NotUnknots, RHDParseError, SplitLink, UnknownComponent,
    build, build_cable, build_sum, build_unknot, classify_pair, distinguished, extract,
    parse_class, parse_rhd, replay, surger, validate,
)

T23, T25 = Cable(2, 3, U), Cable(2, 5, U)

HOPF_TREFOIL = """\
source s0 split
source s1 hopf s0
saddle h0 s0:(2,3) s1:(3,2)   # two Hopf-dual tori glued along a fibre
sink k0 h0
"""


def kinds(text):
    return [v.kind for v in validate(parse_rhd(text))]


# -- model ------------------------------------------------------------------

@pytest.mark.parametrize("tok, want", [
    ("m", Class(0, 1)), ("l4", Class(1, 4)), ("(-2,-3)", Class(2, 3)),
    ("disk", Disk(False)), ("idisk", Disk(True)),
])
def test_parse_class(tok, want):
    assert parse_class(tok) == want


def test_class_strings():
    assert str(Class(0, -1)) == "m"
    assert str(Class(1, -2)) == "l-2"
    assert str(Class(3, 2)) == "(3,2)"


def test_non_primitive_class():
    with pytest.raises(NonPrimitiveClass):
        Class(2, 4)


@pytest.mark.parametrize("text", [
    "source s0 ball\n",
    "saddle h0 s0:disk\n",
    "sink k0\n",
    "saddle h0 s0:(2,4) s0:m\n",
    "saddle h0 s0:m s0:m zone s1=A\n",
])
def test_parse_errors(text):
    with pytest.raises(RHDParseError):
        parse_rhd(text)


def test_text_round_trip():
    r = build(Sum(T23, Cable(3, 2, T25)))
    assert parse_rhd(r.to_text()) == r


# -- validate ---------------------------------------------------------------

@pytest.mark.parametrize("text, want", [
    ("source s0 split\nsink k0 s0\n", []),
    (HOPF_TREFOIL, []),
    ("source s0 split\nsink k0 s0\nsaddle h0 s0:disk s0:disk\n",
     ["SphereProduced", "OrderingViolation"]),
    ("source s0 split\nsource s1 hopf s0\nsaddle h0 s0:(2,3) s1:(2,5)\nsink k0 h0\n",
     ["SlopeMismatch"]),
    ("source s0 split\nsource s1 split\nsink k0 s0\n", ["DanglingComponent"]),
    ("source s0 split\nsource s1 split\nsink k0 s0\nsink k1 s1\n", ["Disconnected"]),
    ("source s0 split\nsink k0 s9\n", ["UnknownComponent"]),
    ("source s0 split\nsink k0 s0\nsink k1 s0\n", ["DeadComponent"]),
    ("source s0 split\nsink s0 s0\n", ["DuplicateId"]),
    ("source s.0 split\nsink k0 s.0\n", ["BadIdentifier"]),
    ("source s0 split\nsource s1 tube s0\nsaddle h0 s0:disk s1:idisk\nsink k0 h0\n",
     ["BadNesting"]),
])
def test_validate(text, want):
    assert kinds(text) == want


def test_surger_preserves_euler_characteristic():
    r = build(Sum(T23, Cable(2, 1, T25)))
    states = replay(r).states
    assert states
    assert all(s.euler_characteristic() == 0 for s in states)


def test_surger_dead_component():
    state = LevelState.initial(parse_rhd("source s0 split\n").sources)
    sad = parse_rhd("saddle h0 s0:m s0:m\n").saddles[0]
    after = surger(state, sad)
    assert set(after.components) == {"h0.A", "h0.B"}
    with pytest.raises(DeadComponent):
        surger(after, sad)


# -- build ------------------------------------------------------------------

def test_build_errors():
    with pytest.raises(NonPrimitiveClass):
        build_cable(build_unknot(), "s0", 2, 4)
    with pytest.raises(InvalidClass):
        build_cable(build_unknot(), "s0", 0, 1)
    with pytest.raises(UnknownComponent):
        build_cable(build_unknot(), "zz", 2, 3)


@pytest.mark.parametrize("e, saddles", [
    (U, 0), (T23, 1), (Sum(T23, T25), 3), (Sum(T23, T25, T23), 5),
    (Cable(2, 1, Sum(T23, T25)), 4), (Cable(3, 2, Cable(2, 3, T23)), 3),
])
def test_saddle_count(e, saddles):
    r = build(e)
    assert len(r.saddles) == saddles
    assert validate(r) == []


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 100_000), st.integers(1, 4))
def test_round_trip(seed, depth):
    e = random_expr(seed, depth, 7)
    r = build(e)
    assert validate(r) == []
    assert equal_normalized(extract(r, distinguished(r)).knot_exprs[distinguished(r)], e)


# -- extract ----------------------------------------------------------------

def test_extract_trefoil():
    r = build_cable(build_unknot(), "s0", 2, 3)
    res = extract(r, distinguished(r))
    assert res.knot_exprs[distinguished(r)] == T23
    assert list(res.kit.elements.values()) == [U]


def test_extract_sum_kit_and_witnesses():
    a, b = build(T23), build(T25)
    r = build_sum(a, b, distinguished(a), distinguished(b))
    k = distinguished(r)
    res = extract(r, k)
    assert res.knot_exprs[k] == Sum(T23, T25)
    assert sorted(map(str, res.kit.elements.values())) == ["U", "U", "cable(2,3,U)", "cable(2,5,U)"]
    for label, comp in res.witness_r.items():
        assert res.cores[comp] == res.kit.elements[label]
    assert set(res.witness_r) == set(res.kit.elements)
    for label, comp in res.witness_gamma.items():
        want = res.knot_exprs[k] if label == k else res.kit.reconstruct(label)
        assert res.cores[comp] == normalize(want)
    assert k in res.witness_gamma


def test_extract_hopf_saddle():
    res = extract(parse_rhd(HOPF_TREFOIL), "k0")
    assert res.knot_exprs["h0"] == T23
    assert res.knot_exprs["s0"] == res.knot_exprs["s1"] == U
    assert classify_pair(parse_rhd(HOPF_TREFOIL), "s0", "s1") == HopfLink()


def test_extract_rejects_invalid():
    with pytest.raises(InvalidDecomposition) as info:
        extract(parse_rhd("source s0 split\nsource s1 split\nsink k0 s0\n"), "s0")
    assert info.value.violations[0].kind == "DanglingComponent"
    with pytest.raises(UnknownComponent):
        extract(build_unknot(), "nope")


# -- classify_pair ------------------------------------------------------------

def test_classify_unknot():
    assert classify_pair(build_unknot(), "s0", "k0") == HopfLink()


def test_classify_split():
    r = build_sum(build_unknot(), build_unknot(), "s0", "s0")
    assert classify_pair(r, "k0", "k1") == SplitLink()


def test_classify_longitude_cable():
    r = parse_rhd("source s0 tube s1\nsource s1 split\nsaddle h0 s0:l3 s1:l3\nsink k0 s1\n")
    assert validate(r) == []
    assert classify_pair(r, "s0", "s1") == CableOfEachOther(1, 3)


def test_classify_needs_unknots():
    r = build(T23)
    with pytest.raises(NotUnknots):
        classify_pair(r, distinguished(r), "s1")
