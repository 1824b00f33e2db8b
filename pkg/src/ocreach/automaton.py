"""Weighted one-counter automata and their three step semantics.

The automaton model is a finite state set with integer-weighted transitions
and designated initial/final states.  A configuration pairs a state with a
counter value.  Three step relations are supported: integer steps (counter
unrestricted), VASS steps (counter stays nonnegative), and natural steps
(VASS steps that never decrease the counter).

This module also houses the bounded breadth-first oracle used as ground
truth across the test suites, plus small structural utilities (acyclicity,
effect sets of acyclic automata, JSON (de)serialization).
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Sequence


class ValidationError(ValueError):
    """Raised when an input value violates a documented format contract."""


class Semantics(Enum):
    INTEGER = "int"
    NATURAL = "nat"
    VASS = "vass"

    @classmethod
    def parse(cls, text: str) -> "Semantics":
        for sem in cls:
            if sem.value == text:
                return sem
        raise ValidationError(f"unknown semantics {text!r}; expected int|nat|vass")


@dataclass(frozen=True)
class Transition:
    src: int
    weight: int
    dst: int


@dataclass(frozen=True)
class Configuration:
    state: int
    counter: int


@dataclass(frozen=True, eq=True)
class WeightedAutomaton:
    """States ``0..state_count-1`` with integer-weighted transitions.

    Parallel transitions between the same state pair are permitted; matrix
    constructors aggregate them.  Weights are arbitrary-precision.
    """

    state_count: int
    transitions: tuple[Transition, ...]
    initial: int
    final: int

    def __post_init__(self):
        if self.state_count <= 0:
            raise ValidationError("state_count must be positive")
        for q in (self.initial, self.final):
            if not 0 <= q < self.state_count:
                raise ValidationError(f"state index {q} out of range")
        for t in self.transitions:
            if not (0 <= t.src < self.state_count and 0 <= t.dst < self.state_count):
                raise ValidationError(f"transition {t} references a missing state")

    @cached_property
    def outgoing(self) -> tuple[tuple[Transition, ...], ...]:
        out: list[list[Transition]] = [[] for _ in range(self.state_count)]
        for t in self.transitions:
            out[t.src].append(t)
        return tuple(tuple(ts) for ts in out)

    @cached_property
    def max_abs_weight(self) -> int:
        return max((abs(t.weight) for t in self.transitions), default=0)

    @cached_property
    def is_acyclic(self) -> bool:
        return topological_order(self) is not None

    def negated(self) -> "WeightedAutomaton":
        """Same structure with every weight negated (Eff flips sign)."""
        return WeightedAutomaton(
            self.state_count,
            tuple(Transition(t.src, -t.weight, t.dst) for t in self.transitions),
            self.initial,
            self.final,
        )


def automaton(state_count: int, transitions: Iterable[tuple[int, int, int]],
              initial: int, final: int) -> WeightedAutomaton:
    """Convenience constructor from ``(src, weight, dst)`` triples."""
    return WeightedAutomaton(
        state_count, tuple(Transition(s, w, d) for (s, w, d) in transitions),
        initial, final)


def topological_order(a: WeightedAutomaton) -> list[int] | None:
    """Topological state order, or None if the transition graph has a cycle."""
    indeg = [0] * a.state_count
    for t in a.transitions:
        indeg[t.dst] += 1
    queue = deque(q for q in range(a.state_count) if indeg[q] == 0)
    order: list[int] = []
    while queue:
        q = queue.popleft()
        order.append(q)
        for t in a.outgoing[q]:
            indeg[t.dst] -= 1
            if indeg[t.dst] == 0:
                queue.append(t.dst)
    return order if len(order) == a.state_count else None


def step_successors(a: WeightedAutomaton, c: Configuration,
                    sem: Semantics) -> set[Configuration]:
    """One-step successors of a configuration under the given semantics."""
    if sem is not Semantics.INTEGER and c.counter < 0:
        raise ValidationError(
            f"negative source counter {c.counter} under {sem.value} semantics")
    result = set()
    for t in a.outgoing[c.state]:
        y = c.counter + t.weight
        if sem is Semantics.VASS and y < 0:
            continue
        if sem is Semantics.NATURAL and (y < 0 or y < c.counter):
            continue
        result.add(Configuration(t.dst, y))
    return result


def path_amplitude(weights: Sequence[int]) -> int:
    """Total sum if every partial sum is nonnegative, else the minimum
    (most negative) partial sum.  The empty path has amplitude 0."""
    total = 0
    lowest = 0
    for w in weights:
        total += w
        if total < lowest:
            lowest = total
    return total if lowest >= 0 else lowest


def validate_automaton(a: WeightedAutomaton, require_nonneg_weights: bool = False,
                       require_acyclic: bool = False) -> list[str]:
    """Structured diagnostics for optional requirements; empty list means ok."""
    diagnostics: list[str] = []
    if require_nonneg_weights:
        for i, t in enumerate(a.transitions):
            if t.weight < 0:
                diagnostics.append(
                    f"negative weight {t.weight} on transition {i} "
                    f"({t.src} -> {t.dst})")
    if require_acyclic and not a.is_acyclic:
        # Name one state on a cycle for the message.
        on_stack: set[int] = set()
        seen: set[int] = set()
        culprit = None

        def dfs(q: int) -> bool:
            nonlocal culprit
            seen.add(q)
            on_stack.add(q)
            for t in a.outgoing[q]:
                if t.dst in on_stack or (t.dst not in seen and dfs(t.dst)):
                    if culprit is None:
                        culprit = t.dst if t.dst in on_stack else culprit
                    return True
            on_stack.discard(q)
            return False

        for q in range(a.state_count):
            if q not in seen and dfs(q):
                break
        diagnostics.append(f"cycle at state {culprit}")
    return diagnostics


@dataclass(frozen=True)
class OracleResult:
    """Outcome of the bounded oracle.  A negative answer is only a
    "not reachable within the explored bounds" statement."""
    reachable: bool
    witness: tuple[Transition, ...] | None
    counter_bound: int
    length_bound: int


def default_oracle_bounds(a: WeightedAutomaton,
                          length_bound: int | None = None) -> tuple[int, int]:
    lb = a.state_count * 8 if length_bound is None else length_bound
    cb = (a.state_count + 1) * (a.max_abs_weight + 1) * max(lb, 1)
    return cb, lb


def brute_force_decide(a: WeightedAutomaton, sem: Semantics, target,
                       counter_bound: int | None = None,
                       length_bound: int | None = None) -> OracleResult:
    """Breadth-first exploration of configurations with |counter| bounded and
    run length bounded, from ``(initial, 0)``.

    ``target`` is any object supporting ``value in target``.  Reachable iff
    some explored final-state configuration has its counter in the target;
    the witness transition sequence replays under the same semantics.
    """
    db_cb, db_lb = default_oracle_bounds(a, length_bound)
    cb = db_cb if counter_bound is None else counter_bound
    lb = db_lb if length_bound is None else length_bound

    start = (a.initial, 0)
    parent: dict[tuple[int, int], tuple[tuple[int, int], Transition] | None] = {
        start: None}

    def witness_for(key: tuple[int, int]) -> tuple[Transition, ...]:
        steps: list[Transition] = []
        entry = parent[key]
        while entry is not None:
            key, t = entry
            steps.append(t)
            entry = parent[key]
        return tuple(reversed(steps))

    if a.initial == a.final and 0 in target:
        return OracleResult(True, (), cb, lb)

    frontier = [start]
    low = 0 if sem is not Semantics.INTEGER else -cb
    for _depth in range(lb):
        next_frontier: list[tuple[int, int]] = []
        for (q, x) in frontier:
            for t in a.outgoing[q]:
                y = x + t.weight
                if y < low or y > cb:
                    continue
                if sem is Semantics.VASS and y < 0:
                    continue
                if sem is Semantics.NATURAL and (y < 0 or t.weight < 0):
                    continue
                key = (t.dst, y)
                if key in parent:
                    continue
                parent[key] = ((q, x), t)
                if t.dst == a.final and y in target:
                    return OracleResult(True, witness_for(key), cb, lb)
                next_frontier.append(key)
        if not next_frontier:
            break
        frontier = next_frontier
    return OracleResult(False, None, cb, lb)


def replay(a: WeightedAutomaton, run: Sequence[Transition],
           sem: Semantics) -> list[Configuration]:
    """Replay a transition sequence from (initial, 0), checking each step."""
    configs = [Configuration(a.initial, 0)]
    for t in run:
        c = configs[-1]
        if t.src != c.state:
            raise ValidationError(f"run breaks at {t}: expected source {c.state}")
        succ = Configuration(t.dst, c.counter + t.weight)
        if succ not in step_successors(a, c, sem):
            raise ValidationError(f"step {t} not allowed under {sem.value}")
        configs.append(succ)
    return configs


def graph_reachable(a: WeightedAutomaton, src: int) -> set[int]:
    """States reachable from ``src`` in the underlying directed graph."""
    seen = {src}
    stack = [src]
    while stack:
        q = stack.pop()
        for t in a.outgoing[q]:
            if t.dst not in seen:
                seen.add(t.dst)
                stack.append(t.dst)
    return seen


def effect_set(a: WeightedAutomaton) -> set[int]:
    """All run effects (initial -> final path weights) of an acyclic automaton.

    Computed with a bitmask dynamic program: per state one big integer whose
    set bits are the achievable partial sums, shifted by edge weights along a
    topological order.  Exact for arbitrary weights.
    """
    order = topological_order(a)
    if order is None:
        raise ValidationError("effect_set requires an acyclic automaton")
    # Exact per-state partial-sum bounds fix the bitmask window.
    lo: list[int | None] = [None] * a.state_count
    hi: list[int | None] = [None] * a.state_count
    lo[a.initial] = hi[a.initial] = 0
    for q in order:
        if lo[q] is None:
            continue
        for t in a.outgoing[q]:
            nl, nh = lo[q] + t.weight, hi[q] + t.weight
            lo[t.dst] = nl if lo[t.dst] is None else min(lo[t.dst], nl)
            hi[t.dst] = nh if hi[t.dst] is None else max(hi[t.dst], nh)
    if lo[a.final] is None and a.initial != a.final:
        return set()
    glo = min(v for v in lo if v is not None)
    masks = [0] * a.state_count
    masks[a.initial] = 1 << (0 - glo)
    for q in order:
        m = masks[q]
        if not m:
            continue
        for t in a.outgoing[q]:
            if t.weight >= 0:
                masks[t.dst] |= m << t.weight
            else:
                masks[t.dst] |= m >> (-t.weight)
    effects = set()
    v = masks[a.final]
    while v:
        low_bit = (v & -v).bit_length() - 1
        effects.add(low_bit + glo)
        v &= v - 1
    return effects


# ---------------------------------------------------------------------------
# JSON format: {"states": N, "initial": i, "final": j,
#               "transitions": [[src, "weight", dst], ...]}
# Weights travel as decimal strings to keep arbitrary precision portable.

def automaton_to_json(a: WeightedAutomaton) -> dict:
    return {
        "states": a.state_count,
        "initial": a.initial,
        "final": a.final,
        "transitions": [[t.src, str(t.weight), t.dst] for t in a.transitions],
    }


def _parse_int(value, field: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{field}: expected an integer, got a boolean")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        text = value.strip()
        try:
            return int(text, 10)
        except ValueError:
            raise ValidationError(f"{field}: {value!r} is not a decimal integer")
    raise ValidationError(f"{field}: expected integer or decimal string")


def automaton_from_json(doc) -> WeightedAutomaton:
    if not isinstance(doc, dict):
        raise ValidationError("automaton document must be a JSON object")
    for key in ("states", "initial", "final", "transitions"):
        if key not in doc:
            raise ValidationError(f"automaton document missing field {key!r}")
    n = _parse_int(doc["states"], "states")
    initial = _parse_int(doc["initial"], "initial")
    final = _parse_int(doc["final"], "final")
    raw = doc["transitions"]
    if not isinstance(raw, list):
        raise ValidationError("transitions: expected a list")
    transitions = []
    for i, item in enumerate(raw):
        if not (isinstance(item, list) and len(item) == 3):
            raise ValidationError(f"transitions[{i}]: expected [src, weight, dst]")
        src = _parse_int(item[0], f"transitions[{i}].src")
        w = _parse_int(item[1], f"transitions[{i}].weight")
        dst = _parse_int(item[2], f"transitions[{i}].dst")
        transitions.append((src, w, dst))
    try:
        return automaton(n, transitions, initial, final)
    except ValidationError as exc:
        raise ValidationError(f"automaton document invalid: {exc}") from exc


def load_automaton(path: str) -> WeightedAutomaton:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    return automaton_from_json(doc)
