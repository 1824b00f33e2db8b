"""Boolean-coefficient Laurent polynomials and the squaring pipelines.

A polynomial is a finite set of integers stored as sorted disjoint maximal
intervals; addition is union, multiplication is Minkowski sum.  For target
sets built from an interval chain, a congruence collapses polynomials to a
bounded number of intervals without changing whether they meet the target;
``reach_building_block`` squares the automaton matrix in that quotient.

``reach_integer`` and ``reach_natural`` assemble the full decision pipelines
on top (residue splitting, acyclicization, chain schedules, and the exact
exponential fallback for sets on the hard side of the dichotomy).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .automaton import (Semantics, ValidationError, WeightedAutomaton,
                        graph_reachable, topological_order, validate_automaton)
from .intervals import ConcreteIntervalSet, Endpoint
from .targets import LinearIntervalSystem, instantiate


class SizeGuardExceeded(RuntimeError):
    """The exact propagation exceeded its configured interval budget."""


# ---------------------------------------------------------------------------
# Interval polynomials.

@dataclass(frozen=True)
class IntervalPolynomial:
    """Sorted disjoint maximal finite intervals; empty tuple is zero."""

    intervals: tuple[tuple[int, int], ...]

    def __post_init__(self):
        prev_hi = None
        for (lo, hi) in self.intervals:
            if lo > hi:
                raise ValidationError("empty interval in polynomial")
            if prev_hi is not None and lo <= prev_hi + 1:
                raise ValidationError("polynomial intervals not maximal")
            prev_hi = hi

    @property
    def is_zero(self) -> bool:
        return not self.intervals

    @property
    def interval_count(self) -> int:
        return len(self.intervals)

    def points(self) -> Iterable[int]:
        for (lo, hi) in self.intervals:
            yield from range(lo, hi + 1)

    def __contains__(self, x: int) -> bool:
        return any(lo <= x <= hi for (lo, hi) in self.intervals)

    def min(self) -> int:
        return self.intervals[0][0]

    def max(self) -> int:
        return self.intervals[-1][1]


def poly(pairs: Iterable[tuple[int, int]]) -> IntervalPolynomial:
    """Union of intervals, merged to maximal form."""
    items = sorted(pairs)
    merged: list[list[int]] = []
    for (lo, hi) in items:
        if lo > hi:
            continue
        if merged and lo <= merged[-1][1] + 1:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return IntervalPolynomial(tuple((lo, hi) for lo, hi in merged))


ZERO_POLY = poly([])
ONE_POLY = poly([(0, 0)])


def poly_of_points(points: Iterable[int]) -> IntervalPolynomial:
    return poly([(x, x) for x in points])


def poly_add(f: IntervalPolynomial, g: IntervalPolynomial) -> IntervalPolynomial:
    return poly(list(f.intervals) + list(g.intervals))


def poly_mul(f: IntervalPolynomial, g: IntervalPolynomial) -> IntervalPolynomial:
    if f.is_zero or g.is_zero:
        return ZERO_POLY
    return poly([(a + c, b + d) for (a, b) in f.intervals
                 for (c, d) in g.intervals])


# ---------------------------------------------------------------------------
# Interval chains and building-block instances.

def _length(interval: tuple[Endpoint, Endpoint]) -> int | None:
    lo, hi = interval
    if lo is None or hi is None:
        return None
    return hi - lo


def _distance(a: tuple[Endpoint, Endpoint], b: tuple[Endpoint, Endpoint]) -> int:
    """Minimum distance between disjoint intervals (None endpoints = inf)."""
    a_lo, a_hi = a
    b_lo, b_hi = b
    if a_hi is not None and b_lo is not None and a_hi < b_lo:
        return b_lo - a_hi
    if b_hi is not None and a_lo is not None and b_hi < a_lo:
        return a_lo - b_hi
    raise ValidationError("intervals overlap; distance undefined")


def check_rho_chain(intervals: Sequence[tuple[Endpoint, Endpoint]],
                    rho: Fraction | int) -> tuple[bool, list[str]]:
    """Chain conditions: pairwise disjoint, nondecreasing lengths, each gap
    at most rho times the previous length, and every interval entirely left
    or right of all its predecessors.  The last interval must be one-sided
    infinite.  Lengths use the difference convention with singletons counted
    as length one in the distance budget (otherwise no chain could ever
    leave a single point)."""
    report: list[str] = []
    if not intervals:
        return False, ["empty interval sequence"]
    last = intervals[-1]
    if not ((last[0] is None) ^ (last[1] is None)):
        report.append("last interval must be one-sided infinite")
    for idx, (lo, hi) in enumerate(intervals[:-1]):
        if lo is None or hi is None:
            report.append(f"interval {idx} must be finite")
    if report:
        return False, report
    # (A1) disjoint
    for i in range(len(intervals)):
        for j in range(i + 1, len(intervals)):
            a, b = intervals[i], intervals[j]
            try:
                _distance(a, b)
            except ValidationError:
                report.append(f"intervals {i} and {j} overlap")
    if report:
        return False, report
    # (A2) lengths nondecreasing
    for i in range(len(intervals) - 2):
        if _length(intervals[i]) > _length(intervals[i + 1]):
            report.append(f"length decreases from interval {i} to {i + 1}")
    # (A3) gaps bounded by rho * previous length (singleton floor 1)
    for i in range(len(intervals) - 1):
        d = _distance(intervals[i], intervals[i + 1])
        if d > rho * max(_length(intervals[i]), 1):
            report.append(
                f"gap {d} from interval {i} exceeds rho * length "
                f"{rho} * {max(_length(intervals[i]), 1)}")
    # (A4) each interval is on one side of all predecessors
    for i in range(1, len(intervals)):
        lefts = rights = 0
        for j in range(i):
            a, b = intervals[j], intervals[i]
            if (a[1] is not None and b[0] is not None and a[1] < b[0]):
                rights += 1
            else:
                lefts += 1
        if lefts and rights:
            report.append(f"interval {i} splits its predecessors")
    return not report, report


@dataclass(frozen=True)
class BuildingBlockInstance:
    """Endpoints (s1, t1, ..., sm, tm, s_{m+1}) of an interval chain with a
    one-sided-infinite final interval; the target set is the union of the
    chain intervals when the chain conditions hold and empty otherwise."""

    m: int
    rho: Fraction
    endpoints: tuple[int, ...]

    def __post_init__(self):
        if self.m < 0:
            raise ValidationError("m must be >= 0")
        if len(self.endpoints) != 2 * self.m + 1:
            raise ValidationError("expected 2m+1 endpoint parameters")
        if self.rho <= 1:
            raise ValidationError("rho must exceed 1")

    @cached_property
    def intervals(self) -> tuple[tuple[Endpoint, Endpoint], ...]:
        out = []
        for i in range(self.m):
            out.append((self.endpoints[2 * i], self.endpoints[2 * i + 1]))
        out.append((self.endpoints[-1], None))
        return tuple(out)

    @cached_property
    def admissible(self) -> bool:
        ok, _ = check_rho_chain(self.intervals, self.rho)
        return ok

    @cached_property
    def derived_bounds(self) -> tuple[tuple[int, ...], tuple[int | None, ...]]:
        """u_i = max distance from earlier intervals, v_i = lengths
        (1-indexed positions i in [1, m+1]; v_{m+1} is None for infinity)."""
        us: list[int] = []
        vs: list[int | None] = []
        for i, interval in enumerate(self.intervals):
            u = 0
            for j in range(i + 1):
                if j == i:
                    continue
                u = max(u, _distance(self.intervals[j], interval))
            us.append(u)
            vs.append(_length(interval))
        return tuple(us), tuple(vs)

    @cached_property
    def growing(self) -> bool:
        for i, interval in enumerate(self.intervals):
            ilen = _length(interval)
            if ilen is None:
                continue
            for j in range(i + 1):
                if j == i:
                    continue
                if ilen < 2 * _distance(self.intervals[j], interval):
                    return False
        return True

    def target_set(self) -> ConcreteIntervalSet:
        if not self.admissible:
            return ConcreteIntervalSet.empty()
        return ConcreteIntervalSet.build(
            [(lo, hi, 0) for (lo, hi) in self.intervals], 1)

    def poly_intersects(self, f: IntervalPolynomial) -> bool:
        if not self.admissible or f.is_zero:
            return False
        for (lo, hi) in f.intervals:
            for (ilo, ihi) in self.intervals:
                wlo = lo if ilo is None else max(lo, ilo)
                whi = hi if ihi is None else min(hi, ihi)
                if wlo <= whi:
                    return True
        return False

    def representation_bound(self) -> int:
        if self.m == 0:
            return 1
        bound = (self.m * (self.rho + 2)) ** self.m
        return math.ceil(bound)

    def to_json(self) -> dict:
        return {"m": self.m,
                "rho": f"{self.rho.numerator}/{self.rho.denominator}",
                "endpoints": [str(x) for x in self.endpoints]}

    @staticmethod
    def from_json(doc) -> "BuildingBlockInstance":
        try:
            num, _, den = str(doc["rho"]).partition("/")
            rho = Fraction(int(num), int(den or "1"))
            endpoints = tuple(int(str(x)) for x in doc["endpoints"])
            return BuildingBlockInstance(int(doc["m"]), rho, endpoints)
        except (KeyError, ValueError, TypeError) as exc:
            raise ValidationError(f"bad building-block document: {exc}")


def building_block(m: int, rho, endpoints: Sequence[int]) -> BuildingBlockInstance:
    return BuildingBlockInstance(m, Fraction(rho), tuple(endpoints))


def assert_growth_arithmetic(inst: BuildingBlockInstance) -> None:
    """Derived-quantity sanity for growing instances: u_{i+1}/v_i bounded by
    m(rho+1) and v_i >= 2 u_i."""
    us, vs = inst.derived_bounds
    m = inst.m
    for i in range(len(us)):
        if vs[i] is not None and vs[i] < 2 * us[i]:
            raise ValidationError("growing instance violates v >= 2u")
        if i + 1 < len(us) and vs[i] is not None and vs[i] > 0:
            if Fraction(us[i + 1], vs[i]) > max(m, 1) * (inst.rho + 1):
                raise ValidationError("growing instance violates u/v bound")


def make_growing(inst: BuildingBlockInstance) -> list[BuildingBlockInstance]:
    """Split an admissible instance into growing instances whose target
    union equals the original target."""
    if not inst.admissible:
        return [inst]
    if inst.growing:
        assert_growth_arithmetic(inst)
        return [inst]
    intervals = inst.intervals
    for i in range(1, len(intervals)):
        ilen = _length(intervals[i])
        if ilen is None:
            continue
        for j in range(i):
            if ilen < 2 * _distance(intervals[j], intervals[i]):
                # Drop interval i (admissible at 5 rho^2), and keep the
                # suffix from i (admissible at rho); recurse on both.
                without = intervals[:i] + intervals[i + 1:]
                suffix = intervals[i:]
                out = []
                out.extend(make_growing(_instance_from_intervals(
                    without, 5 * inst.rho * inst.rho)))
                out.extend(make_growing(_instance_from_intervals(
                    suffix, inst.rho)))
                return out
    return [inst]


def _instance_from_intervals(intervals, rho) -> BuildingBlockInstance:
    finite = intervals[:-1]
    endpoints = []
    for (lo, hi) in finite:
        endpoints.extend((lo, hi))
    endpoints.append(intervals[-1][0])
    return BuildingBlockInstance(len(finite), Fraction(rho), tuple(endpoints))


# ---------------------------------------------------------------------------
# Normalization in the chain congruence.

def normalize(f: IntervalPolynomial,
              inst: BuildingBlockInstance) -> IntervalPolynomial:
    """An equivalent polynomial with a bounded number of intervals.

    Works level by level: at level ℓ every inter-cluster gap of size at most
    v_ℓ whose endpoints see an anchor point at distance in [u_ℓ, v_ℓ] on the
    correct side is interpolated away.  Every fill is an instance of the
    congruence equations, so the result is congruent to the input.
    """
    if not inst.admissible:
        raise ValidationError("normalize needs an admissible instance")
    if not inst.growing:
        raise ValidationError(
            "normalize needs a growing instance; split with make_growing")
    if f.is_zero:
        return f
    us, vs = inst.derived_bounds
    intervals = [list(p) for p in f.intervals]
    first_interval = inst.intervals[0]
    for level in range(len(inst.intervals)):
        u, v = us[level], vs[level]
        # Fill side: anchors sit left of the fill when the level interval is
        # right of the chain's first interval (and for the base level).
        if level == 0:
            anchored_left = False  # anchor may be the right endpoint itself
        else:
            anchored_left = _interval_is_left(inst.intervals[level],
                                              first_interval)
        changed = True
        while changed:
            changed = False
            for i in range(len(intervals) - 1):
                a, b = intervals[i], intervals[i + 1]
                gap = b[0] - a[1]
                if v is not None and gap > v:
                    continue
                if _has_anchor(intervals, i, u, v, anchored_left, level == 0):
                    a[1] = b[1]
                    del intervals[i + 1]
                    changed = True
                    break
    result = IntervalPolynomial(tuple((lo, hi) for lo, hi in intervals))
    bound = inst.representation_bound()
    if result.interval_count > bound:
        raise AssertionError(
            f"normalized representation has {result.interval_count} intervals, "
            f"bound is {bound}")
    return result


def _interval_is_left(a: tuple[Endpoint, Endpoint],
                      b: tuple[Endpoint, Endpoint]) -> bool:
    """Is interval a entirely left of b?"""
    return a[1] is not None and b[0] is not None and a[1] < b[0]


def _has_anchor(intervals, i, u, v, anchored_left: bool, base_level: bool) -> bool:
    """Is the fill of the gap between intervals i and i+1 justified?

    For the base level the two gap endpoints themselves suffice.  Otherwise
    an existing point at distance in [u, v] from the appropriate gap endpoint
    is required: left of the gap's left endpoint when ``anchored_left``,
    right of the gap's right endpoint otherwise.
    """
    if base_level:
        return True
    if anchored_left:
        target = intervals[i][1]  # fill extends right of this point
        window_lo = target - (10 ** 30 if v is None else v)
        window_hi = target - u
    else:
        target = intervals[i + 1][0]
        window_lo = target + u
        window_hi = target + (10 ** 30 if v is None else v)
    for (lo, hi) in intervals:
        if hi < window_lo:
            continue
        if lo > window_hi:
            break
        if max(lo, window_lo) <= min(hi, window_hi):
            return True
    return False


# ---------------------------------------------------------------------------
# Reachability for a single building block (acyclic automaton).

_SQUARING_STATE_CAP = 64


def reach_building_block(a: WeightedAutomaton,
                         inst: BuildingBlockInstance) -> bool:
    """Does some initial-to-final path weight land in the instance target?

    Builds the identity-augmented matrix over interval polynomials and
    squares it ceil(log2 n) times, normalizing every entry, then tests the
    (initial, final) entry against the chain intervals.  Large automata use
    an equivalent normalized forward propagation along a topological order
    instead of the quadratic matrix (the quotient is a congruence, so the
    result is the same class either way).
    """
    if not a.is_acyclic:
        raise ValidationError("reach_building_block requires an acyclic automaton")
    if not inst.admissible:
        return False  # inadmissible endpoints denote the empty target
    if not inst.growing:
        raise ValidationError("instance is not growing; split with make_growing")
    n = a.state_count
    if n > _SQUARING_STATE_CAP:
        reached = _forward_propagation(a, inst)
        return inst.poly_intersects(reached)
    matrix: list[list[IntervalPolynomial]] = [
        [ZERO_POLY] * n for _ in range(n)]
    for t in a.transitions:
        matrix[t.src][t.dst] = poly_add(matrix[t.src][t.dst],
                                        poly([(t.weight, t.weight)]))
    for q in range(n):
        matrix[q][q] = poly_add(matrix[q][q], ONE_POLY)
    rounds = max(0, math.ceil(math.log2(max(n, 1))))
    for _ in range(rounds):
        matrix = _square_normalized(matrix, inst)
    return inst.poly_intersects(matrix[a.initial][a.final])


def _forward_propagation(a: WeightedAutomaton,
                         inst: BuildingBlockInstance) -> IntervalPolynomial:
    order = topological_order(a)
    values: list[IntervalPolynomial] = [ZERO_POLY] * a.state_count
    values[a.initial] = ONE_POLY
    for q in order:
        f = values[q]
        if f.is_zero:
            continue
        for t in a.outgoing[q]:
            shifted = poly_mul(f, poly([(t.weight, t.weight)]))
            values[t.dst] = normalize(poly_add(values[t.dst], shifted), inst)
    return values[a.final]


def _square_normalized(matrix, inst):
    n = len(matrix)
    out = [[ZERO_POLY] * n for _ in range(n)]
    for i in range(n):
        row = matrix[i]
        for j in range(n):
            acc = ZERO_POLY
            for k in range(n):
                f = row[k]
                if f.is_zero:
                    continue
                g = matrix[k][j]
                if g.is_zero:
                    continue
                acc = poly_add(acc, poly_mul(f, g))
            out[i][j] = acc if acc.is_zero else normalize(acc, inst)
    return out


# ---------------------------------------------------------------------------
# Exact propagation (hard-side fallback) and the decision pipelines.

DEFAULT_SIZE_GUARD = 10 ** 6


def exact_effect_polynomial(a: WeightedAutomaton,
                            size_guard: int = DEFAULT_SIZE_GUARD
                            ) -> IntervalPolynomial:
    """The exact set of path effects of an acyclic automaton, via matrix
    squaring without the quotient; guarded by a total interval budget.
    Large automata propagate forward along a topological order instead."""
    if not a.is_acyclic:
        raise ValidationError("exact propagation requires an acyclic automaton")
    n = a.state_count
    if n > _SQUARING_STATE_CAP:
        order = topological_order(a)
        values: list[IntervalPolynomial] = [ZERO_POLY] * n
        values[a.initial] = ONE_POLY
        total = 1
        for q in order:
            f = values[q]
            if f.is_zero:
                continue
            for t in a.outgoing[q]:
                shifted = poly_mul(f, poly([(t.weight, t.weight)]))
                old = values[t.dst]
                values[t.dst] = poly_add(old, shifted)
                total += values[t.dst].interval_count - old.interval_count
                if total > size_guard:
                    raise SizeGuardExceeded(
                        f"exact propagation exceeded {size_guard} intervals")
        return values[a.final]
    matrix: list[list[IntervalPolynomial]] = [
        [ZERO_POLY] * n for _ in range(n)]
    for t in a.transitions:
        matrix[t.src][t.dst] = poly_add(matrix[t.src][t.dst],
                                        poly([(t.weight, t.weight)]))
    for q in range(n):
        matrix[q][q] = poly_add(matrix[q][q], ONE_POLY)
    rounds = max(0, math.ceil(math.log2(max(n, 1))))
    for _ in range(rounds):
        nxt = [[ZERO_POLY] * n for _ in range(n)]
        total = 0
        for i in range(n):
            for j in range(n):
                acc = ZERO_POLY
                for k in range(n):
                    f = matrix[i][k]
                    if f.is_zero:
                        continue
                    g = matrix[k][j]
                    if g.is_zero:
                        continue
                    acc = poly_add(acc, poly_mul(f, g))
                total += acc.interval_count
                if total > size_guard:
                    raise SizeGuardExceeded(
                        f"exact propagation exceeded {size_guard} intervals")
                nxt[i][j] = acc
        matrix = nxt
    return matrix[a.initial][a.final]


def _poly_meets_set(f: IntervalPolynomial, target: ConcreteIntervalSet) -> bool:
    return any(target.intersects_window(lo, hi) for (lo, hi) in f.intervals)


def reach_integer(a: WeightedAutomaton, s: LinearIntervalSystem,
                  t: Sequence[int], cls=None, *,
                  length_bound: int | None = None,
                  size_guard: int = DEFAULT_SIZE_GUARD) -> bool:
    """Integer-semantics reachability of S[t] from (initial, 0).

    Tractable classifications run the residue-split + acyclicize + chain
    schedule pipeline; hard-side classifications fall back to exact
    propagation (exponential, size-guarded).
    """
    from .classify import classify, harbor_chains

    if cls is None:
        cls = classify(s, Semantics.INTEGER)
    if cls.side == "np-hard":
        acyclic = _ensure_acyclic(a, s, length_bound)
        try:
            effects = exact_effect_polynomial(acyclic, size_guard)
        except SizeGuardExceeded:
            raise
        return _poly_meets_set(effects, instantiate(s, t))

    ev = cls.evidence
    B = ev.modulus
    residues = tuple(v % B for v in t)
    scaled = tuple((v - r) // B for v, r in zip(t, residues))
    from .targets import solve_lambda, unwrap_modulo_automaton

    for b_x in range(B):
        key = residues + (b_x,)
        plans = ev.classes.get(key, ())
        if not plans:
            continue
        unwrapped = unwrap_modulo_automaton(a, B, b_x)
        prepared: WeightedAutomaton | None = None
        prepared_neg: WeightedAutomaton | None = None
        for plan in plans:
            lam = solve_lambda(plan.branch, scaled)
            if lam is None:
                continue
            if _branch_is_full_line(plan.branch):
                if _nonempty_path(unwrapped):
                    return True
                continue
            if prepared is None:
                prepared = _ensure_acyclic(unwrapped, s, length_bound)
            for schedule in harbor_chains(plan.branch, scaled, rho=plan.rho):
                machine = prepared
                if schedule.flipped:
                    if prepared_neg is None:
                        prepared_neg = prepared.negated()
                    machine = prepared_neg
                for inst in make_growing(schedule.instance):
                    if inst.admissible and reach_building_block(machine, inst):
                        return True
    return False


def _branch_is_full_line(br) -> bool:
    return (len(br.slots) == 1 and br.slots[0].left is None
            and br.slots[0].right is None)


def _nonempty_path(a: WeightedAutomaton) -> bool:
    return a.final in graph_reachable(a, a.initial)


def _ensure_acyclic(a: WeightedAutomaton, s: LinearIntervalSystem,
                    length_bound: int | None) -> WeightedAutomaton:
    if a.is_acyclic:
        return a
    from .acyclic import acyclicize, length_bound as default_bound

    ell = default_bound(a, s) if length_bound is None else length_bound
    return acyclicize(a, ell)


def reach_natural(a: WeightedAutomaton, s: LinearIntervalSystem,
                  t: Sequence[int], cls=None, *,
                  length_bound: int | None = None,
                  size_guard: int = DEFAULT_SIZE_GUARD) -> bool:
    """Natural-semantics reachability: all weights must be nonnegative, and
    the decision equals integer reachability of the negatives-augmented set."""
    from .classify import classify
    from .targets import augment_with_negatives

    diagnostics = validate_automaton(a, require_nonneg_weights=True)
    if diagnostics:
        raise ValidationError("; ".join(diagnostics))
    augmented = augment_with_negatives(s)
    if cls is None:
        cls = classify(augmented, Semantics.INTEGER)
    return reach_integer(a, augmented, t, cls,
                         length_bound=length_bound, size_guard=size_guard)
