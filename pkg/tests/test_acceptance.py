"""Acceptance criteria, each with its tolerance and time limit.

Run ``pytest tests/test_acceptance.py -s`` (or execute this file) to see
one PASS/FAIL line per criterion.
"""
import random
import time
from collections import Counter
from math import gcd

import pytest

from graphknots.expr import Cable, Sum, U, equal_normalized, normalize, rewrite, serialize
from graphknots.invariants import LaurentPoly, alexander, genus
from graphknots.oracle import (
    EnumerationBudget, enumerate_rhds, expand_once, level_genera, poly_div_torus,
    random_expr, random_positive_cable,
)
from graphknots.rhd import (
    HopfLink, Saddle, build, build_sum, classify_pair, distinguished,
    extract, validate,
)


def _report(n, ok, elapsed, limit, detail=""):
    status = "PASS" if ok and elapsed < limit else "FAIL"
    print(f"criterion {n}: {status} ({elapsed:.2f}s, limit {limit}s) {detail}".rstrip())
    assert ok, detail
    assert elapsed < limit, f"took {elapsed:.2f}s"


def test_criterion_1_no_saddle_base_case():
    t0 = time.perf_counter()
    budget = EnumerationBudget(max_saddles=0, max_sources=3, max_sinks=3, prune=False)
    shapes = Counter()
    for r in enumerate_rhds(budget):
        if not validate(r):
            shapes[(len(r.sources), len(r.sinks))] += 1
    r = build(U)
    src, snk = r.sources[0].id, r.sinks[0].id
    knots = extract(r, src).knot_exprs
    ok = (set(shapes) == {(1, 1)} and knots[src] == U and knots[snk] == U
          and extract(r, snk).knot_exprs[snk] == U
          and classify_pair(r, src, snk) == HopfLink())
    _report(1, ok, time.perf_counter() - t0, 1.0, f"accepted shapes {dict(shapes)}")


def test_criterion_2_kit_of_a_sum():
    t0 = time.perf_counter()
    a, b = build(Cable(2, 3, U)), build(Cable(2, 5, U))
    r = build_sum(a, b, distinguished(a), distinguished(b))
    res = extract(r, distinguished(r))
    got = res.kit.multiset()
    want = Counter({serialize(Cable(2, 3, U)): 1, serialize(Cable(2, 5, U)): 1, "U": 2})
    _report(2, got == want, time.perf_counter() - t0, 1.0, f"kit {dict(got)}")


def test_criterion_3_round_trip():
    t0 = time.perf_counter()
    failures = []
    for seed in range(500):
        e = random_expr(seed, 1 + seed % 4, 7)
        r = build(e)
        got = extract(r, distinguished(r)).knot_exprs[distinguished(r)]
        if not equal_normalized(got, e):
            failures.append(seed)
    _report(3, not failures, time.perf_counter() - t0, 10.0,
            f"{500 - len(failures)}/500 round-tripped")


def test_criterion_4_levels_are_tori():
    t0 = time.perf_counter()
    accepted = disks = bad = 0
    for r in enumerate_rhds(EnumerationBudget(max_saddles=2, coeff_bound=3)):
        kinds = {v.kind for v in validate(r)}
        disk_saddle = any(
            isinstance(s, Saddle) and s.c1.cls == s.c2.cls and str(s.c1.cls) == "disk"
            for s in r.events)
        if disk_saddle:
            disks += 1
            bad += "SphereProduced" not in kinds
        if not kinds:
            accepted += 1
            genera = level_genera(r)
            bad += genera is None or any(g != 1 for level in genera for g in level)
    _report(4, bad == 0 and accepted > 0 and disks > 0, time.perf_counter() - t0, 60.0,
            f"{accepted} accepted, {disks} disjoint-disk configurations, {bad} bad")


def test_criterion_5_torus_oracle():
    t0 = time.perf_counter()
    mismatches = [(p, q) for q in range(3, 13) for p in range(2, q)
                  if gcd(p, q) == 1 and alexander(Cable(p, q, U)) != poly_div_torus(p, q)]
    _report(5, not mismatches, time.perf_counter() - t0, 1.0, f"mismatches {mismatches}")


def _expanded_product(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    out: dict[int, int] = {}
    for i, x in a.terms().items():
        for j, y in b.terms().items():
            out[i + j] = out.get(i + j, 0) + x * y
    return LaurentPoly.from_dict(out).canonical()


def test_criterion_6_multiplicativity():
    t0 = time.perf_counter()
    bad = 0
    for seed in range(200):
        a = random_expr(2 * seed, 1 + seed % 3, 7)
        b = random_expr(2 * seed + 1, 1 + (seed // 3) % 3, 7)
        bad += alexander(Sum(a, b)) != _expanded_product(alexander(a), alexander(b))
    _report(6, bad == 0, time.perf_counter() - t0, 5.0, f"{bad} mismatches")


def test_criterion_7_span_is_twice_genus():
    t0 = time.perf_counter()
    bad = 0
    for seed in range(50):
        e = normalize(random_positive_cable(seed, 1 + seed % 3, 7))
        bad += alexander(e).span() != 2 * genus(e)
    _report(7, bad == 0, time.perf_counter() - t0, 5.0, f"{bad} mismatches")


def test_criterion_8_confluence():
    t0 = time.perf_counter()
    bad = 0
    for seed in range(1000):
        e = random_expr(seed, 4, 7)
        a = rewrite(e, random.Random(2 * seed))
        b = rewrite(e, random.Random(2 * seed + 1))
        bad += a != b
    _report(8, bad == 0, time.perf_counter() - t0, 10.0, f"{bad} divergent")


def test_criterion_9_soundness():
    t0 = time.perf_counter()
    bad = 0
    for seed in range(300):
        e = random_expr(seed, 3, 7)
        f = expand_once(e, random.Random(seed))
        bad += not (equal_normalized(e, f) and alexander(e) == alexander(f)
                    and genus(normalize(e)) == genus(normalize(f)))
    distinct = 0
    seed = 0
    while distinct < 300:
        a, b = random_expr(10_000 + seed, 3, 7), random_expr(20_000 + seed, 3, 7)
        seed += 1
        if alexander(a) == alexander(b):
            continue
        distinct += 1
        bad += equal_normalized(a, b)
    _report(9, bad == 0, time.perf_counter() - t0, 10.0, f"{bad} unsound pairs")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
