import random

import pytest

from ocreach.automaton import Semantics, brute_force_decide
from ocreach.classify import classify
from ocreach.hardness import (gadget_automaton, hard_pair, reduce_to_gadget,
                              subset_sum, subset_sum_solve)
from ocreach.intervals import interval_set
from ocreach.targets import branch, instantiate, linear_system
from ocreach.targets import AffineForm


def test_subset_sum_examples():
    assert subset_sum_solve(subset_sum([3, 5, 7], 12)) == {1, 2}
    assert subset_sum_solve(subset_sum([3, 5, 7], 4)) is None
    assert subset_sum_solve(subset_sum([], 0)) == set()


def test_subset_sum_witness_sums():
    rng = random.Random(41)
    for _ in range(100):
        items = [rng.randint(0, 20) for _ in range(rng.randint(1, 8))]
        target = rng.randint(0, 40)
        witness = subset_sum_solve(subset_sum(items, target))
        brute = any(sum(items[i] for i in range(len(items)) if mask >> i & 1)
                    == target for mask in range(1 << len(items)))
        assert (witness is not None) == brute
        if witness is not None:
            assert sum(items[i] for i in witness) == target


def test_gadget_examples():
    g = gadget_automaton(subset_sum([3, 5, 7], 12), 0)
    assert brute_force_decide(g, Semantics.VASS,
                              interval_set([(0, 0)])).reachable
    g2 = gadget_automaton(subset_sum([1], 1), 7)
    assert brute_force_decide(g2, Semantics.VASS,
                              interval_set([(7, 7)])).reachable
    g3 = gadget_automaton(subset_sum([2], 1), 0)
    assert not brute_force_decide(g3, Semantics.VASS,
                                  interval_set([(0, 0)])).reachable


def test_hard_pair_examples(systems, integer_classifications):
    hp = hard_pair(systems["halfline_far_block"], 100,
                   integer_classifications["halfline_far_block"])
    assert (tuple(hp.t), hp.x, hp.k, hp.ell) == ((1, 49), 101, 0, 2)
    hp2 = hard_pair(systems["evens_and_one"], 5,
                    integer_classifications["evens_and_one"])
    assert hp2.residues == (1,) and hp2.x == 0


@pytest.mark.parametrize("delta", [1, 9, 250])
def test_hard_pair_conditions(systems, integer_classifications, delta):
    from ocreach.targets import branch_concrete, solve_lambda

    for name in ("halfline_far_block", "evens_and_one"):
        cls = integer_classifications[name]
        hp = hard_pair(systems[name], delta, cls)
        site = next(s for s in cls.evidence.sites if s.residues == hp.residues)
        concrete = branch_concrete(site.branch, solve_lambda(site.branch, hp.t))
        assert (hp.x + hp.k) in concrete
        assert concrete.window_empty(hp.x - delta, hp.x - 1)
        assert concrete.window_empty(hp.x + hp.ell, hp.x + hp.ell + delta)


def test_reduce_requires_hard_side(systems, integer_classifications):
    with pytest.raises(Exception):
        reduce_to_gadget(subset_sum([1], 1), systems["halfline_and_stretch"],
                         Semantics.INTEGER,
                         integer_classifications["halfline_and_stretch"])


def _round_trip(sem, system, cls, rng, trials):
    failures = []
    for _ in range(trials):
        n = rng.randint(1, 8)
        items = [rng.randint(0, 20) for _ in range(n)]
        roll = rng.random()
        if roll < 0.5:
            target = sum(rng.sample(items, rng.randint(0, n)))
        else:
            target = rng.randint(0, 25)
        inst = subset_sum(items, target)
        verdict = subset_sum_solve(inst) is not None
        red = reduce_to_gadget(inst, system, sem, cls)
        concrete = instantiate(system, red.params)
        oracle = brute_force_decide(
            red.automaton, sem, concrete,
            length_bound=red.automaton.state_count + 2)
        if oracle.reachable != verdict:
            failures.append((items, target, verdict, oracle.reachable))
    return failures


def test_round_trip_integer(systems, integer_classifications):
    rng = random.Random(55)
    for name in ("halfline_far_block", "evens_and_one"):
        failures = _round_trip(Semantics.INTEGER, systems[name],
                               integer_classifications[name], rng, 60)
        assert not failures, failures[:3]


def test_round_trip_vass(systems):
    rng = random.Random(56)
    for name in ("point_or_high", "evens_plus_odd_point"):
        cls = classify(systems[name], Semantics.VASS)
        failures = _round_trip(Semantics.VASS, systems[name], cls, rng, 60)
        assert not failures, failures[:3]


def test_round_trip_natural():
    rng = random.Random(57)
    point_set = linear_system(
        1, [branch([0], [[1]], [(AffineForm(0, (1,)), AffineForm(0, (1,)))])])
    cls = classify(point_set, Semantics.NATURAL)
    assert cls.side == "np-hard"
    failures = _round_trip(Semantics.NATURAL, point_set, cls, rng, 60)
    assert not failures, failures[:3]


def test_gadget_size_linear():
    inst = subset_sum(list(range(1, 9)), 11)
    red_target = gadget_automaton(inst, 3)
    assert red_target.state_count == len(inst.items) + 3
    assert len(red_target.transitions) == 2 * len(inst.items) + 2
