import itertools
import random
from fractions import Fraction

import pytest

from ocreach.automaton import ValidationError, automaton
from ocreach.laurent import (ZERO_POLY, building_block, check_rho_chain,
                             exact_effect_polynomial, make_growing, normalize,
                             poly, poly_add, poly_mul, poly_of_points,
                             reach_building_block, reach_integer, reach_natural)

from conftest import random_acyclic_automaton


def test_poly_add_examples():
    assert poly_add(poly([(0, 2)]), poly([(2, 5)])).intervals == ((0, 5),)
    f = poly([(1, 4), (9, 9)])
    assert poly_add(f, ZERO_POLY) == f
    assert poly_add(poly([(0, 1)]), poly([(3, 4)])).intervals == ((0, 1), (3, 4))


def test_poly_mul_examples():
    assert poly_mul(poly([(0, 1)]), poly([(3, 4)])).intervals == ((3, 5),)
    f = poly([(2, 6)])
    assert poly_mul(f, poly([(0, 0)])) == f
    spread = poly_mul(poly_of_points([0, 10]), poly_of_points([0, 3]))
    assert spread == poly_of_points([0, 3, 10, 13])


def test_poly_semiring_laws_small():
    values = range(-4, 5)
    polys = [ZERO_POLY]
    for (a, b) in itertools.combinations_with_replacement(values, 2):
        polys.append(poly([(a, b)]))
    for (a, b, c) in itertools.combinations(values, 3):
        if b - a >= 2 and c - b >= 2:
            polys.append(poly([(a, a), (c, c)]))
    rng = random.Random(0)
    for _ in range(3000):
        f, g, h = (rng.choice(polys) for _ in range(3))
        assert poly_add(f, g) == poly_add(g, f)
        assert poly_mul(f, g) == poly_mul(g, f)
        assert poly_add(poly_add(f, g), h) == poly_add(f, poly_add(g, h))
        assert poly_mul(poly_mul(f, g), h) == poly_mul(f, poly_mul(g, h))
        assert poly_mul(f, poly_add(g, h)) == \
            poly_add(poly_mul(f, g), poly_mul(f, h))
        assert poly_add(f, ZERO_POLY) == f
        assert poly_mul(f, ZERO_POLY) == ZERO_POLY
        assert poly_mul(f, poly([(0, 0)])) == f


def test_check_rho_chain_examples():
    ok, _ = check_rho_chain([(5, 10), (None, 0)], 1)
    assert ok
    bad, report = check_rho_chain([(0, 1), (100, None)], 2)
    assert not bad and any("gap" in line for line in report)
    ok, _ = check_rho_chain([(0, None)], 1)
    assert ok


def test_rho_monotone():
    chains = [[(5, 10), (None, 0)], [(0, 2), (5, 9), (20, None)],
              [(0, 0), (4, 5), (8, None)]]
    for intervals in chains:
        for rho in range(1, 12):
            if check_rho_chain(intervals, rho)[0]:
                assert all(check_rho_chain(intervals, r)[0]
                           for r in range(rho, 13))


def test_normalize_example():
    inst = building_block(1, 3, (10, 20, 50))
    f = poly_of_points([0, 5, 12])
    assert normalize(f, inst).intervals == ((0, 12),)
    single = poly([(3, 7)])
    assert normalize(single, inst) == single
    assert normalize(ZERO_POLY, inst) == ZERO_POLY


def test_normalize_requires_growing():
    inst = building_block(2, 20, (0, 1, 10, 11, 30))
    assert inst.admissible and not inst.growing
    with pytest.raises(ValidationError) as err:
        normalize(poly([(0, 0)]), inst)
    assert "make_growing" in str(err.value)


def _window_points(target_set, lo, hi):
    return {x for x in range(lo, hi + 1) if x in target_set}


def test_normalize_soundness_random():
    rng = random.Random(17)
    checked = 0
    while checked < 200:
        m = rng.randint(0, 3)
        rho = rng.randint(2, 4)
        cursor = rng.randint(-10, 10)
        endpoints = []
        ok = True
        prev_len = 0
        for i in range(m):
            length = prev_len + rng.randint(0, 4)
            gap = rng.randint(1, max(1, rho * max(prev_len, 1)))
            lo = cursor + gap
            endpoints.extend((lo, lo + length))
            cursor = lo + length
            prev_len = length
        final_gap = rng.randint(1, max(1, rho * max(prev_len, 1)))
        endpoints.append(cursor + final_gap)
        inst = building_block(m, rho, endpoints)
        if not inst.admissible or not inst.growing:
            continue
        checked += 1
        span_lo, span_hi = endpoints[0] - 30, endpoints[-1] + 60
        points = sorted(rng.sample(range(span_lo, span_hi), rng.randint(1, 12)))
        f = poly_of_points(points)
        g = normalize(f, inst)
        assert g.interval_count <= inst.representation_bound()
        target = inst.target_set()
        meets_f = any(p in target for p in f.points())
        meets_g = any(p in target for p in g.points())
        assert meets_f == meets_g, (inst, f, g)


def test_growing_arithmetic_asserted():
    inst = building_block(2, 3, (0, 4, 6, 12, 15))
    assert inst.admissible
    for g in make_growing(inst):
        us, vs = g.derived_bounds
        for u, v in zip(us, vs):
            if v is not None:
                assert v >= 2 * u


def test_make_growing_examples():
    inst = building_block(1, 2, (0, 5, 8))
    assert make_growing(inst) == [inst]
    inst2 = building_block(2, 100, (0, 1, 10, 11, 100))
    parts = make_growing(inst2)
    assert len(parts) >= 2
    combined = set()
    for part in parts:
        assert part.growing
        combined |= _window_points(part.target_set(), -5, 120)
    assert combined == _window_points(inst2.target_set(), -5, 120)
    inst3 = building_block(1, 2, (100, 101, 104))
    assert all(g.growing for g in make_growing(inst3))


def test_reach_building_block_examples():
    a = automaton(3, [(0, 0, 1), (0, 7, 1), (1, 0, 2)], 0, 2)
    assert reach_building_block(a, building_block(1, 8, (5, 10, 50)))
    assert not reach_building_block(a, building_block(1, 8, (20, 30, 50)))
    inadmissible = building_block(1, 2, (0, 5, 100))
    assert not inadmissible.admissible
    assert not reach_building_block(a, inadmissible)


def test_reach_building_block_equals_exact_propagation():
    rng = random.Random(23)
    instances = [building_block(1, 8, (5, 10, 50)),
                 building_block(1, 3, (-12, -6, 0)),
                 building_block(2, 4, (0, 2, 4, 8, 14))]
    trials = 0
    for inst in instances:
        assert inst.admissible and inst.growing
    while trials < 170:
        a = random_acyclic_automaton(rng, 8, 16)
        effects = exact_effect_polynomial(a)
        for inst in instances:
            got = reach_building_block(a, inst)
            expected = inst.poly_intersects(effects)
            assert got == expected, (inst, a.transitions)
        trials += 1


def test_reach_integer_examples(systems, integer_classifications):
    s3 = systems["halfline_and_stretch"]
    a = automaton(3, [(0, 2, 1), (0, 7, 2), (1, 5, 2)], 0, 2)
    assert reach_integer(a, s3, (5,),
                         integer_classifications["halfline_and_stretch"])
    s2 = systems["evens_and_one"]
    b = automaton(2, [(0, 3, 1)], 0, 1)
    assert not reach_integer(b, s2, (), integer_classifications["evens_and_one"])
    single = automaton(1, [], 0, 0)
    assert reach_integer(single, s3, (0,),
                         integer_classifications["halfline_and_stretch"])


def test_reach_natural_examples(systems, natural_setup):
    base, _augmented, cls = natural_setup
    a = automaton(2, [(0, 5, 1)], 0, 1)
    assert reach_natural(a, base, (4,), cls)
    b = automaton(2, [(0, 9, 1)], 0, 1)
    assert not reach_natural(b, base, (4,), cls)
    assert not reach_natural(a, base, (-3,), cls)


def test_reach_natural_rejects_negative_weights(systems):
    a = automaton(2, [(0, -1, 1)], 0, 1)
    with pytest.raises(ValidationError):
        reach_natural(a, systems["scaled_window"], (1,))


def test_building_block_json_round_trip():
    from ocreach.laurent import BuildingBlockInstance

    inst = building_block(2, Fraction(7, 2), (0, 4, 6, 12, 10 ** 25))
    doc = inst.to_json()
    assert doc["rho"] == "7/2"
    assert doc["endpoints"][-1] == str(10 ** 25)
    assert BuildingBlockInstance.from_json(doc) == inst


def test_m1_instances_always_growing():
    rng = random.Random(71)
    for _ in range(50):
        lo = rng.randint(-20, 20)
        hi = lo + rng.randint(0, 9)
        start = hi + rng.randint(1, 3 * max(hi - lo, 1))
        inst = building_block(1, 3, (lo, hi, start))
        if inst.admissible:
            assert inst.growing
