import random

import pytest

from ocreach.automaton import Semantics
from ocreach.catalog import (even_down_odd_up, evens_and_one,
                             evens_plus_odd_point, halfline_and_stretch,
                             halfline_far_block, halfline_two_blocks,
                             high_minus_point, point_or_high, scaled_window)
from ocreach.classify import classify
from ocreach.targets import augment_with_negatives


@pytest.fixture(scope="session")
def systems():
    return {
        "even_down_odd_up": even_down_odd_up(),
        "evens_and_one": evens_and_one(),
        "halfline_and_stretch": halfline_and_stretch(),
        "halfline_two_blocks": halfline_two_blocks(),
        "halfline_far_block": halfline_far_block(),
        "scaled_window": scaled_window(),
        "point_or_high": point_or_high(),
        "high_minus_point": high_minus_point(),
        "evens_plus_odd_point": evens_plus_odd_point(),
    }


@pytest.fixture(scope="session")
def integer_classifications(systems):
    names = ["even_down_odd_up", "evens_and_one", "halfline_and_stretch",
             "halfline_two_blocks", "halfline_far_block"]
    return {name: classify(systems[name], Semantics.INTEGER) for name in names}


@pytest.fixture(scope="session")
def natural_setup(systems):
    base = systems["scaled_window"]
    augmented = augment_with_negatives(base)
    cls = classify(augmented, Semantics.INTEGER)
    return base, augmented, cls


def random_acyclic_automaton(rng: random.Random, max_states: int,
                             weight_range: int, nonneg: bool = False):
    from ocreach.automaton import automaton

    n = rng.randint(2, max_states)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            for _ in range(rng.randint(0, 1)):
                w = rng.randint(0 if nonneg else -weight_range, weight_range)
                edges.append((i, w, j))
    return automaton(n, edges, 0, n - 1)


def random_general_automaton(rng: random.Random, max_states: int,
                             weight_range: int, max_edges: int = 8):
    from ocreach.automaton import automaton

    n = rng.randint(1, max_states)
    edges = [(rng.randrange(n), rng.randint(-weight_range, weight_range),
              rng.randrange(n)) for _ in range(rng.randint(0, max_edges))]
    return automaton(n, edges, 0, n - 1)
