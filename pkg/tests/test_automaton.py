import random

import pytest

from ocreach.automaton import (Configuration, Semantics, ValidationError,
                               automaton, automaton_from_json,
                               automaton_to_json, brute_force_decide,
                               effect_set, path_amplitude, replay,
                               step_successors, validate_automaton)
from ocreach.hardness import gadget_automaton, subset_sum
from ocreach.intervals import interval_set

from conftest import random_general_automaton


@pytest.fixture
def two_edge():
    return automaton(2, [(0, -1, 1), (0, 2, 1)], 0, 1)


def test_step_successors_integer(two_edge):
    succ = step_successors(two_edge, Configuration(0, 0), Semantics.INTEGER)
    assert succ == {Configuration(1, -1), Configuration(1, 2)}


def test_step_successors_vass(two_edge):
    succ = step_successors(two_edge, Configuration(0, 0), Semantics.VASS)
    assert succ == {Configuration(1, 2)}


def test_step_successors_natural(two_edge):
    succ = step_successors(two_edge, Configuration(0, 0), Semantics.NATURAL)
    assert succ == {Configuration(1, 2)}


def test_step_negative_counter_rejected(two_edge):
    with pytest.raises(ValidationError):
        step_successors(two_edge, Configuration(0, -1), Semantics.VASS)


def test_semantics_inclusion_sampled():
    rng = random.Random(2024)
    for _ in range(150):
        a = random_general_automaton(rng, 4, 5)
        c = Configuration(rng.randrange(a.state_count), rng.randint(0, 6))
        nat = step_successors(a, c, Semantics.NATURAL)
        vass = step_successors(a, c, Semantics.VASS)
        integer = step_successors(a, c, Semantics.INTEGER)
        assert nat <= vass <= integer


@pytest.mark.parametrize("weights,expected", [
    ([], 0),
    ([3, -5, 1], -2),
    ([2, 3], 5),
    ([-1], -1),
    ([5, -5, -1, 10], -1),
])
def test_path_amplitude(weights, expected):
    assert path_amplitude(weights) == expected


def test_validate_negative_weight():
    a = automaton(2, [(0, -1, 1)], 0, 1)
    diags = validate_automaton(a, require_nonneg_weights=True)
    assert any("negative weight" in d for d in diags)


def test_validate_cycle():
    a = automaton(1, [(0, 1, 0)], 0, 0)
    diags = validate_automaton(a, require_acyclic=True)
    assert any("cycle at state" in d for d in diags)


def test_validate_ok():
    a = automaton(3, [(0, 2, 1), (1, 0, 2)], 0, 2)
    assert validate_automaton(a, True, True) == []


def test_oracle_identity_case():
    a = automaton(1, [], 0, 0)
    res = brute_force_decide(a, Semantics.VASS, interval_set([(0, 0)]))
    assert res.reachable and res.witness == ()


def test_oracle_gadget_positive():
    g = gadget_automaton(subset_sum([3, 5, 7], 12), 0)
    res = brute_force_decide(g, Semantics.VASS, interval_set([(0, 0)]))
    assert res.reachable
    configs = replay(g, res.witness, Semantics.VASS)
    assert configs[-1].state == g.final and configs[-1].counter == 0


def test_oracle_gadget_negative():
    g = gadget_automaton(subset_sum([3, 5, 7], 4), 0)
    res = brute_force_decide(g, Semantics.VASS, interval_set([(0, 0)]),
                             counter_bound=15 + 5)
    assert not res.reachable


def test_oracle_monotone_in_bounds():
    rng = random.Random(77)
    target = interval_set([(3, 4)])
    for _ in range(60):
        a = random_general_automaton(rng, 4, 4)
        small = brute_force_decide(a, Semantics.INTEGER, target,
                                   counter_bound=6, length_bound=4)
        big = brute_force_decide(a, Semantics.INTEGER, target,
                                 counter_bound=30, length_bound=12)
        if small.reachable:
            assert big.reachable


def test_oracle_witness_replays():
    rng = random.Random(5)
    for _ in range(80):
        a = random_general_automaton(rng, 4, 4)
        for sem in Semantics:
            target = interval_set([(-2, 3)])
            res = brute_force_decide(a, sem, target, length_bound=8)
            if res.reachable:
                configs = replay(a, res.witness, sem)
                assert configs[-1].state == a.final
                assert configs[-1].counter in target


def test_effect_set_matches_enumeration():
    rng = random.Random(12)
    for _ in range(60):
        n = rng.randint(2, 5)
        edges = []
        for i in range(n):
            for j in range(i + 1, n):
                for _ in range(rng.randint(0, 2)):
                    edges.append((i, rng.randint(-6, 6), j))
        a = automaton(n, edges, 0, n - 1)
        # path enumeration
        expected = set()
        stack = [(0, 0)]
        while stack:
            q, w = stack.pop()
            if q == a.final:
                expected.add(w)
            for t in a.outgoing[q]:
                stack.append((t.dst, w + t.weight))
        if a.initial == a.final:
            expected.add(0)
        assert effect_set(a) == expected


def test_json_round_trip():
    a = automaton(3, [(0, -(10 ** 30), 1), (1, 7, 2)], 0, 2)
    doc = automaton_to_json(a)
    assert doc["transitions"][0][1] == str(-(10 ** 30))
    back = automaton_from_json(doc)
    assert back == a


@pytest.mark.parametrize("doc", [
    {"states": 2, "initial": 0, "final": 5, "transitions": []},
    {"states": 2, "initial": 0, "final": 1, "transitions": [[0, "x", 1]]},
    {"states": 2, "initial": 0, "final": 1},
    [1, 2, 3],
])
def test_json_rejects_malformed(doc):
    with pytest.raises(ValidationError):
        automaton_from_json(doc)
