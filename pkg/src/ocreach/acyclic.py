"""Reduction from general automata to acyclic ones.

The construction keeps every run of length at most a chosen bound and never
invents effects: a layered skeleton simulates short runs, and each layer
state carries a gadget producing the effects of repeated short cycles at
that state, with cycle effects scaled by successive powers of two so that a
logarithmic number of sections reaches the multiplicity bound.
"""

from __future__ import annotations

import math

from .automaton import (ValidationError, WeightedAutomaton, automaton,
                        graph_reachable)
from .targets import LinearIntervalSystem


def _bit_size(value: int) -> int:
    return max(1, abs(value).bit_length())


def automaton_bits(a: WeightedAutomaton) -> int:
    total = _bit_size(a.state_count)
    for t in a.transitions:
        total += _bit_size(t.weight) + 2 * _bit_size(a.state_count)
    return total


def system_bits(s: LinearIntervalSystem) -> int:
    total = _bit_size(s.p + 1)
    for br in s.branches:
        total += sum(_bit_size(x) for x in br.base)
        total += sum(_bit_size(x) for row in br.periods for x in row) or 1
        total += _bit_size(br.stride[0]) + _bit_size(br.stride[1])
        for slot in br.slots:
            for form in (slot.left, slot.right):
                if form is not None:
                    total += _bit_size(form.const)
                    total += sum(_bit_size(c) for c in form.coeffs)
    return total


# Published constants of the default run-length bound: a shortest reaching
# run is assumed to fit in 2^(C_AUTOMATON * bits(a) + C_TARGET * bits(s)).
# This is deliberately conservative; callers with tighter knowledge pass
# their own bound.
C_AUTOMATON = 2
C_TARGET = 1


def length_bound(a: WeightedAutomaton, s: LinearIntervalSystem) -> int:
    """A conservative run-length bound for reaching S from (initial, 0)."""
    return 2 ** (C_AUTOMATON * automaton_bits(a) + C_TARGET * system_bits(s))


def _short_cycle_effect_bound(a: WeightedAutomaton) -> int:
    return max(1, a.state_count * a.max_abs_weight)


def cycle_gadget(a: WeightedAutomaton, q: int, ell: int) -> WeightedAutomaton:
    """An acyclic automaton whose effects cover every concatenation of at
    most ``ell`` short cycles at ``q`` and stay within the integer cone of
    short-cycle effects.

    Chains r blocks; in each block, for j = 0..ceil(log2 ell), one short
    cycle (at most n steps, weights scaled by 2^j) is simulated or skipped.
    r is the integer-cone generator bound capped at ell.
    """
    if ell < 1:
        raise ValidationError("cycle gadget needs a bound >= 1")
    n = a.state_count
    M = _short_cycle_effect_bound(a)
    r = min(ell, math.ceil(2 * math.log2(4 * M)))
    J = max(0, math.ceil(math.log2(ell))) if ell > 1 else 0

    # State layout: joints j0..j(r*(J+1)) plus walk states per section.
    sections = r * (J + 1)
    states: dict = {}

    def sid(key) -> int:
        if key not in states:
            states[key] = len(states)
        return states[key]

    edges: list[tuple[int, int, int]] = []
    for sec in range(sections):
        scale = 2 ** (sec % (J + 1))
        entry = sid(("joint", sec))
        exit_ = sid(("joint", sec + 1))
        edges.append((entry, 0, exit_))  # skip the section
        edges.append((entry, 0, sid(("walk", sec, 0, q))))
        for step in range(n):
            for t in a.transitions:
                edges.append((sid(("walk", sec, step, t.src)), t.weight * scale,
                              sid(("walk", sec, step + 1, t.dst))))
            if step >= 0:
                edges.append((sid(("walk", sec, step + 1, q)), 0, exit_))
    first = sid(("joint", 0))
    last = sid(("joint", sections))
    gadget = automaton(len(states), edges, first, last)
    return _prune(gadget)


def _prune(a: WeightedAutomaton) -> WeightedAutomaton:
    """Drop states that are unreachable or cannot reach the final state."""
    forward = graph_reachable(a, a.initial)
    reverse_edges: dict[int, list[int]] = {}
    for t in a.transitions:
        reverse_edges.setdefault(t.dst, []).append(t.src)
    backward = {a.final}
    stack = [a.final]
    while stack:
        qq = stack.pop()
        for prev in reverse_edges.get(qq, ()):  # pragma: no branch
            if prev not in backward:
                backward.add(prev)
                stack.append(prev)
    keep = sorted(forward & backward)
    if a.initial not in backward:
        # No path at all: keep a two-state shell with no transitions.
        return automaton(2, [], 0, 1)
    remap = {old: new for new, old in enumerate(keep)}
    edges = [(remap[t.src], t.weight, remap[t.dst]) for t in a.transitions
             if t.src in remap and t.dst in remap]
    return automaton(len(keep), edges, remap[a.initial], remap[a.final])


def acyclicize(a: WeightedAutomaton, ell: int) -> WeightedAutomaton:
    """An acyclic automaton A' with Eff(runs of a of length <= ell) included
    in Eff(A') included in Eff(a).

    Already-acyclic inputs are returned unchanged (their run lengths are
    bounded by the state count, so the skeleton adds nothing).
    """
    if ell < 1:
        raise ValidationError("acyclicize needs a bound >= 1")
    if a.is_acyclic:
        return a
    n = a.state_count
    layers = n * n
    gadgets = {q: cycle_gadget(a, q, ell) for q in range(n)}

    states: dict = {}

    def sid(key) -> int:
        if key not in states:
            states[key] = len(states)
        return states[key]

    edges: list[tuple[int, int, int]] = []

    def embed(q: int, layer: int) -> tuple[int, int]:
        """Install the gadget copy for (q, layer); returns (entry, exit)."""
        g = gadgets[q]
        offset_key = ("g", q, layer)
        for t in g.transitions:
            edges.append((sid((offset_key, t.src)), t.weight,
                          sid((offset_key, t.dst))))
        return sid((offset_key, g.initial)), sid((offset_key, g.final))

    entries: dict[tuple[int, int], int] = {}
    exits: dict[tuple[int, int], int] = {}
    for layer in range(layers + 1):
        for q in range(n):
            entry, exit_ = embed(q, layer)
            entries[(q, layer)] = entry
            exits[(q, layer)] = exit_
    for layer in range(layers):
        for t in a.transitions:
            edges.append((exits[(t.src, layer)], t.weight,
                          entries[(t.dst, layer + 1)]))
    sink = sid(("final",))
    for layer in range(layers + 1):
        edges.append((exits[(a.final, layer)], 0, sink))
    built = automaton(len(states), edges, entries[(a.initial, 0)], sink)
    return _prune(built)
