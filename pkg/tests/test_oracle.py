import random

import pytest

from graphknots.expr import Cable, U, equal_normalized, is_canonical, normalize
from graphknots.oracle import (
    EnumerationBudget, class_alphabet, enumerate_rhds, expand_once, level_genera,
    random_expr, random_positive_cable, saddle_genera,
)
from graphknots.rhd import Class, Disk, build, parse_rhd, validate


def test_generators_are_deterministic():
    assert random_expr(7, 3, 7) == random_expr(7, 3, 7)
    assert random_positive_cable(3, 2, 5) == random_positive_cable(3, 2, 5)


def test_positive_cables_are_positive():
    for seed in range(50):
        e = normalize(random_positive_cable(seed, 3, 7))
        assert isinstance(e, Cable)
        while isinstance(e, Cable):
            assert e.p >= 2 and e.q >= 1
            e = e.companion


def test_expand_once_is_an_isotopy_move():
    rng = random.Random(1)
    for seed in range(200):
        e = random_expr(seed, 3, 7)
        f = expand_once(e, rng)
        assert equal_normalized(e, f)


def test_alphabet():
    alphabet = class_alphabet(3)
    assert len(alphabet) == len(set(alphabet)) == 18
    assert Disk(False) in alphabet and Class(0, 1) in alphabet


@pytest.mark.parametrize("c1, c2, same, want", [
    (Disk(False), Disk(False), True, [0, 2]),  # sphere plus genus-2 surface
    (Class(0, 1), Class(0, 1), True, [1, 1]),
    (Class(2, 3), Class(3, 2), False, [1]),
])
def test_saddle_genera(c1, c2, same, want):
    assert sorted(saddle_genera(c1, c2, same)) == want


def test_level_genera_of_built_rhds():
    for seed in range(40):
        genera = level_genera(build(random_expr(seed, 3, 5)))
        assert genera is not None
        assert all(g == 1 for level in genera for g in level)


def test_level_genera_sees_the_sphere():
    r = parse_rhd("source s0 split\nsaddle h0 s0:disk s0:disk\nsink k0 h0.S\n")
    genera = level_genera(r)
    assert genera is None or any(0 in level for level in genera)


def test_pruning_is_sound_at_one_saddle():
    def accepted(prune):
        b = EnumerationBudget(max_saddles=1, prune=prune, max_sources=2, max_sinks=2)
        return {r.to_text() for r in enumerate_rhds(b) if not validate(r)}

    assert accepted(True) == accepted(False)
