"""Reference target systems used by the regression and acceptance suites.

Each system is written as a union of branches whose slot structure is fixed
over the branch domain, so small parameter values get their own branches.
Names describe the shape of the sets, not their provenance.
"""

from __future__ import annotations

from .targets import AffineForm, LinearIntervalSystem, branch, linear_system


def _af(const: int, *coeffs: int) -> AffineForm:
    return AffineForm(const, tuple(coeffs))


def even_down_odd_up() -> LinearIntervalSystem:
    """Nonpositive even integers together with the positive odd integers."""
    return linear_system(0, [
        branch([], [], [(None, 0)], stride=(2, 0)),
        branch([], [], [(1, None)], stride=(2, 1)),
    ])


def evens_and_one() -> LinearIntervalSystem:
    """All even integers plus the single odd point 1."""
    return linear_system(0, [
        branch([], [], [(None, None)], stride=(2, 0)),
        branch([], [], [(1, 1)], stride=(2, 1)),
    ])


def halfline_and_stretch() -> LinearIntervalSystem:
    """S[t] = (-inf, 0] ∪ [t, 2t] for t >= 0 (empty otherwise)."""
    return linear_system(1, [
        branch([0], [[]], [(None, 0)]),                      # t = 0
        branch([1], [[]], [(None, 2)]),                      # t = 1 merges
        branch([2], [[1]], [(None, 0), (_af(2, 1), _af(4, 2))]),  # t >= 2
    ])


def halfline_two_blocks() -> LinearIntervalSystem:
    """S[t,s] = (-inf,0] ∪ [t+s, 2t+2s] ∪ [3t+2s, 4t+2s] for t,s >= 0."""
    return linear_system(2, [
        # t >= 2: all three pieces separate.
        branch([2, 0], [[1, 0], [0, 1]],
               [(None, 0),
                (_af(2, 1, 1), _af(4, 2, 2)),
                (_af(6, 3, 2), _af(8, 4, 2))]),
        # t = 1: the two right pieces touch; s = 0 glues everything.
        branch([1, 0], [[], []], [(None, 4)]),
        branch([1, 1], [[0], [1]], [(None, 0), (_af(2, 1), _af(6, 2))]),
        # t = 0: the right pieces coincide.
        branch([0, 0], [[], []], [(None, 0)]),
        branch([0, 1], [[], []], [(None, 2)]),
        branch([0, 2], [[0], [1]], [(None, 0), (_af(2, 1), _af(4, 2))]),
    ])


def halfline_far_block() -> LinearIntervalSystem:
    """S[t,s] = (-inf,0] ∪ [3t+2s, 4t+2s] for t,s >= 0."""
    return linear_system(2, [
        branch([1, 0], [[1, 0], [0, 1]],
               [(None, 0), (_af(3, 3, 2), _af(4, 4, 2))]),   # t >= 1
        branch([0, 0], [[], []], [(None, 0)]),               # t = s = 0
        branch([0, 1], [[0], [1]], [(None, 0), (_af(2, 2), _af(2, 2))]),  # t=0,s>=1
    ])


def scaled_window() -> LinearIntervalSystem:
    """S[t] = [t, 2t] for t >= 0 (a window whose width scales with t)."""
    return linear_system(1, [
        branch([0], [[1]], [(_af(0, 1), _af(0, 2))]),
    ])


def point_or_high() -> LinearIntervalSystem:
    """S[t] = {0} ∪ [t, +inf) over natural counters, t >= 0."""
    return linear_system(1, [
        branch([0], [[]], [(0, None)]),
        branch([1], [[]], [(0, None)]),
        branch([2], [[1]], [(0, 0), (_af(2, 1), None)]),
    ])


def high_minus_point() -> LinearIntervalSystem:
    """S[t1,t2] = {x in ℕ : x >= t1} minus the point t2."""
    return linear_system(2, [
        # 0 <= t1, t2 >= t1 + 1: a finite block, the hole, the tail.
        branch([0, 1], [[1, 0], [1, 1]],
               [(_af(0, 1, 0), _af(0, 1, 1)), (_af(2, 1, 1), None)]),
        # t2 = t1 >= 0: hole at the left end.
        branch([0, 0], [[1], [1]], [(_af(1, 1), None)]),
        # t2 < t1 (hole below the tail), t1 >= 0.
        branch([0, -1], [[1, 0], [1, -1]], [(_af(0, 1, 0), None)]),
        # t1 < 0: tail starts at 0.
        branch([-1, 1], [[-1, 0], [0, 1]],
               [(0, _af(0, 0, 1)), (_af(2, 0, 1), None)]),
        branch([-1, 0], [[-1], [0]], [(1, None)]),
        branch([-1, -1], [[-1, 0], [0, -1]], [(0, None)]),
    ])


def evens_plus_odd_point() -> LinearIntervalSystem:
    """S[t] = {even x in ℕ} ∪ {1}, for every integer t."""
    return linear_system(1, [
        branch([0], [[1]], [(0, None)], stride=(2, 0)),
        branch([0], [[1]], [(1, 1)], stride=(2, 1)),
        branch([-1], [[-1]], [(0, None)], stride=(2, 0)),
        branch([-1], [[-1]], [(1, 1)], stride=(2, 1)),
    ])


def halfline_below() -> LinearIntervalSystem:
    """S[t] = (-inf, 0] for every t (a trivially dense set)."""
    return linear_system(1, [
        branch([0], [[1]], [(None, 0)]),
        branch([-1], [[-1]], [(None, 0)]),
    ])


INTEGER_EXAMPLES = {
    "even_down_odd_up": even_down_odd_up,
    "evens_and_one": evens_and_one,
    "halfline_and_stretch": halfline_and_stretch,
    "halfline_two_blocks": halfline_two_blocks,
    "halfline_far_block": halfline_far_block,
}

NATURAL_EXAMPLES = {
    "scaled_window": scaled_window,
}

VASS_EXAMPLES = {
    "point_or_high": point_or_high,
    "high_minus_point": high_minus_point,
    "evens_plus_odd_point": evens_plus_odd_point,
}

ALL_EXAMPLES = {**INTEGER_EXAMPLES, **NATURAL_EXAMPLES, **VASS_EXAMPLES}
