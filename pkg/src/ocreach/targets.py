"""Parametric semilinear target sets.

A :class:`LinearIntervalSystem` describes a set S of (parameter, counter)
pairs as a union of branches.  Each branch maps a nonnegative vector λ to a
parameter vector t = base + periods·λ and, for that t, contributes a list of
interval slots whose endpoints are affine forms in λ, restricted to one
residue class mod the branch stride.  Interval widths and inter-slot gaps
must be monotone forms (nonnegative coefficients), which keeps growth
questions decidable by coefficient inspection.

Operations: instantiation S[t], residue-class splitting, the mod-B automaton
unwrapping, and the negatives augmentation used by the natural-semantics
pipeline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .automaton import ValidationError, WeightedAutomaton, automaton
from .intervals import ConcreteIntervalSet


class NotExpressibleError(ValidationError):
    """A requested transformation leaves the supported target format."""


# ---------------------------------------------------------------------------
# Affine forms over the branch variables λ ∈ ℕ^k.

@dataclass(frozen=True)
class AffineForm:
    const: int
    coeffs: tuple[int, ...]

    def __call__(self, lam: Sequence[int]) -> int:
        if len(lam) != len(self.coeffs):
            raise ValidationError("affine form arity mismatch")
        return self.const + sum(c * x for c, x in zip(self.coeffs, lam))

    def sub(self, other: "AffineForm") -> "AffineForm":
        return AffineForm(self.const - other.const,
                          tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def add_const(self, delta: int) -> "AffineForm":
        return AffineForm(self.const + delta, self.coeffs)

    def shift_var(self, j: int, delta: int) -> "AffineForm":
        """Substitute λ_j -> λ_j + delta."""
        return AffineForm(self.const + self.coeffs[j] * delta, self.coeffs)

    def drop_var(self, j: int) -> "AffineForm":
        """Substitute λ_j -> 0 and remove the variable."""
        return AffineForm(self.const, self.coeffs[:j] + self.coeffs[j + 1:])

    @property
    def is_constant(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def monotone(self) -> bool:
        return all(c >= 0 for c in self.coeffs)

    def nonneg_everywhere(self) -> bool:
        return self.monotone and self.const >= 0


def const_form(value: int, k: int) -> AffineForm:
    return AffineForm(value, (0,) * k)


@dataclass(frozen=True)
class Slot:
    left: AffineForm | None  # None encodes -inf
    right: AffineForm | None  # None encodes +inf

    def width(self) -> AffineForm | None:
        """Right minus left, or None when either side is infinite."""
        if self.left is None or self.right is None:
            return None
        return self.right.sub(self.left)


# ---------------------------------------------------------------------------
# Exact linear algebra over the rationals (tiny systems).

def _row_reduce(rows: list[list[Fraction]]) -> list[list[Fraction]]:
    rows = [row[:] for row in rows]
    pivot_row = 0
    cols = len(rows[0]) if rows else 0
    for col in range(cols):
        pivot = next((r for r in range(pivot_row, len(rows)) if rows[r][col] != 0),
                     None)
        if pivot is None:
            continue
        rows[pivot_row], rows[pivot] = rows[pivot], rows[pivot_row]
        lead = rows[pivot_row][col]
        rows[pivot_row] = [x / lead for x in rows[pivot_row]]
        for r in range(len(rows)):
            if r != pivot_row and rows[r][col] != 0:
                factor = rows[r][col]
                rows[r] = [x - factor * y for x, y in zip(rows[r], rows[pivot_row])]
        pivot_row += 1
        if pivot_row == len(rows):
            break
    return rows


def _matrix_rank(matrix: Sequence[Sequence[int]]) -> int:
    if not matrix or not matrix[0]:
        return 0
    reduced = _row_reduce([[Fraction(x) for x in row] for row in matrix])
    return sum(1 for row in reduced if any(x != 0 for x in row))


def _solve_unique(matrix: Sequence[Sequence[int]], rhs: Sequence[int]):
    """Solve M x = rhs for a full-column-rank M.

    Returns the unique rational solution, or None when inconsistent.
    """
    k = len(matrix[0]) if matrix else 0
    if k == 0:
        return [] if all(v == 0 for v in rhs) else None
    aug = [[Fraction(x) for x in row] + [Fraction(b)]
           for row, b in zip(matrix, rhs)]
    reduced = _row_reduce(aug)
    solution: list[Fraction | None] = [None] * k
    for row in reduced:
        head = next((i for i in range(k) if row[i] != 0), None)
        if head is None:
            if row[k] != 0:
                return None
            continue
        solution[head] = row[k]
    # Full column rank guarantees every variable got a pivot.
    if any(v is None for v in solution):
        raise ValidationError("system is not parameter-injective")
    for row, b in zip(matrix, rhs):
        if sum(Fraction(c) * v for c, v in zip(row, solution)) != b:
            return None
    return solution


# ---------------------------------------------------------------------------
# Branches and systems.

@dataclass(frozen=True)
class Branch:
    base: tuple[int, ...]
    periods: tuple[tuple[int, ...], ...]  # one row per parameter
    slots: tuple[Slot, ...]
    stride: tuple[int, int] = (1, 0)

    @property
    def p(self) -> int:
        return len(self.base)

    @property
    def k(self) -> int:
        if self.periods:
            return len(self.periods[0])
        return 0

    def width_forms(self) -> list[AffineForm | None]:
        return [s.width() for s in self.slots]

    def gap_forms(self) -> list[AffineForm]:
        """Inter-slot gap forms left_{i+1} - right_i (finite by sortedness)."""
        gaps = []
        for a, b in zip(self.slots, self.slots[1:]):
            if a.right is None or b.left is None:
                raise ValidationError("interior slots must have finite endpoints")
            gaps.append(b.left.sub(a.right))
        return gaps

    def map_signature(self):
        return (self.base, self.periods, self.stride)


def branch(base: Sequence[int], periods: Sequence[Sequence[int]],
           slots: Sequence[tuple], stride: tuple[int, int] = (1, 0)) -> Branch:
    """Constructor accepting slot endpoint shorthands.

    Each slot is (left, right) where an endpoint is None (infinite), an int
    (constant form), or an AffineForm.
    """
    periods_t = tuple(tuple(int(x) for x in row) for row in periods)
    k = len(periods_t[0]) if periods_t else 0
    if any(len(row) != k for row in periods_t):
        raise ValidationError("period matrix rows must have equal length")

    def endpoint(v):
        if v is None:
            return None
        if isinstance(v, AffineForm):
            if len(v.coeffs) != k:
                raise ValidationError("slot form arity mismatch")
            return v
        return const_form(int(v), k)

    slots_t = tuple(Slot(endpoint(l), endpoint(r)) for (l, r) in slots)
    br = Branch(tuple(int(x) for x in base), periods_t, slots_t,
                (int(stride[0]), int(stride[1])))
    validate_branch(br)
    return br


def validate_branch(br: Branch) -> None:
    bx, c = br.stride
    if bx < 1:
        raise ValidationError("stride modulus must be >= 1")
    if not 0 <= c < bx:
        raise ValidationError("stride residue must lie in [0, modulus)")
    if br.periods and len(br.periods) != br.p:
        raise ValidationError("period matrix must have one row per parameter")
    if br.p and not br.periods and br.k != 0:
        raise ValidationError("missing period matrix")
    if br.k and _matrix_rank(br.periods) != br.k:
        raise ValidationError("branch not parameter-injective")
    for i, slot in enumerate(br.slots):
        if slot.left is None and i != 0:
            raise ValidationError("only the first slot may extend to -inf")
        if slot.right is None and i != len(br.slots) - 1:
            raise ValidationError("only the last slot may extend to +inf")
        w = slot.width()
        if w is not None:
            if not w.monotone or w.const < 0:
                raise ValidationError(
                    "monotone representation required: slot width form "
                    f"{w} of slot {i} must have nonnegative coefficients "
                    "and constant")
            if bx > 1 and w.const < bx - 1:
                if not w.is_constant:
                    raise ValidationError(
                        "strided slot narrower than the stride must have "
                        "constant width")
                left = slot.left
                if not left.is_constant and any(co % bx for co in left.coeffs):
                    raise ValidationError(
                        "narrow strided slot alignment varies with parameters")
    for i, g in enumerate(br.gap_forms()):
        if not g.monotone or g.const < 2 * bx:
            raise ValidationError(
                "monotone representation required: gap form between slots "
                f"{i} and {i + 1} must have nonnegative coefficients and "
                f"constant >= {2 * bx}")


@dataclass(frozen=True)
class LinearIntervalSystem:
    p: int
    branches: tuple[Branch, ...]
    union_mode: bool = field(default=False, compare=False)

    @property
    def stride_lcm(self) -> int:
        return math.lcm(1, *(br.stride[0] for br in self.branches))


def linear_system(p: int, branches: Iterable[Branch],
                  assume_disjoint: bool = False) -> LinearIntervalSystem:
    branch_list = tuple(branches)
    for br in branch_list:
        if br.p != p:
            raise ValidationError("branch parameter arity mismatch")
    union_mode = False
    if not assume_disjoint:
        for b1, b2 in itertools.combinations(branch_list, 2):
            if _domains_relation(b1, b2) == "unknown":
                union_mode = True
                break
    return LinearIntervalSystem(p, branch_list, union_mode)


def _domains_relation(b1: Branch, b2: Branch) -> str:
    """'same-map' | 'disjoint' | 'overlap' | 'unknown' for parameter images."""
    if (b1.base, b1.periods) == (b2.base, b2.periods):
        return "same-map"
    if b1.p == 0:
        return "overlap"
    matrix = [list(r1) + [-x for x in r2]
              for r1, r2 in zip(b1.periods or [[]] * b1.p,
                                b2.periods or [[]] * b2.p)]
    k_total = b1.k + b2.k
    if k_total == 0:
        return "disjoint" if b1.base != b2.base else "overlap"
    rhs = [x2 - x1 for x1, x2 in zip(b1.base, b2.base)]
    if _matrix_rank(matrix) == k_total:
        sol = _solve_unique(matrix, rhs)
        if sol is None:
            return "disjoint"
        if all(v.denominator == 1 and v >= 0 for v in sol):
            return "overlap"
        return "disjoint"
    # Underdetermined: row-reduce and look for rows forcing a negative value
    # on nonnegative variables (pivot = v - sum of nonneg multiples >= ...).
    aug = _row_reduce([[Fraction(x) for x in row] + [Fraction(b)]
                       for row, b in zip(matrix, rhs)])
    for row in aug:
        head = next((i for i in range(k_total) if row[i] != 0), None)
        if head is None:
            if row[k_total] != 0:
                return "disjoint"  # inconsistent over the rationals
            continue
        others = row[head + 1:k_total]
        if row[k_total] < 0 and all(c >= 0 for c in others):
            return "disjoint"
    return "unknown"


def solve_lambda(br: Branch, t: Sequence[int]) -> tuple[int, ...] | None:
    """The unique λ ∈ ℕ^k with base + periods·λ = t, or None."""
    if len(t) != br.p:
        raise ValidationError("parameter arity mismatch")
    rhs = [ti - bi for ti, bi in zip(t, br.base)]
    if br.k == 0:
        return () if all(v == 0 for v in rhs) else None
    sol = _solve_unique([list(row) for row in br.periods], rhs)
    if sol is None:
        return None
    if any(v.denominator != 1 or v < 0 for v in sol):
        return None
    return tuple(int(v) for v in sol)


def instantiate(s: LinearIntervalSystem, t: Sequence[int]) -> ConcreteIntervalSet:
    """The concrete set S[t], the union over matching branches."""
    matched: list[tuple[Branch, tuple[int, ...]]] = []
    for br in s.branches:
        lam = solve_lambda(br, t)
        if lam is not None:
            matched.append((br, lam))
    if not matched:
        return ConcreteIntervalSet.empty()
    modulus = math.lcm(*(br.stride[0] for br, _ in matched))
    pieces = []
    for br, lam in matched:
        bx, c = br.stride
        for slot in br.slots:
            lo = None if slot.left is None else slot.left(lam)
            hi = None if slot.right is None else slot.right(lam)
            for j in range(modulus // bx):
                pieces.append((lo, hi, c + j * bx))
    return ConcreteIntervalSet.build(pieces, modulus)


def branch_concrete(br: Branch, lam: Sequence[int]) -> ConcreteIntervalSet:
    bx, c = br.stride
    pieces = []
    for slot in br.slots:
        lo = None if slot.left is None else slot.left(lam)
        hi = None if slot.right is None else slot.right(lam)
        pieces.append((lo, hi, c))
    return ConcreteIntervalSet.build(pieces, bx)


# ---------------------------------------------------------------------------
# Branch normalization: keep slot structure uniform over the whole λ-orthant
# by dropping provably-empty slots, merging contiguous ones, and splitting
# the orthant when a width or gap form changes character at small λ.

def _substitute_zero(base, periods, slots, j):
    new_periods = tuple(row[:j] + row[j + 1:] for row in periods)
    new_slots = tuple(Slot(None if s.left is None else s.left.drop_var(j),
                           None if s.right is None else s.right.drop_var(j))
                      for s in slots)
    return base, new_periods, new_slots


def _shift_var(base, periods, slots, j, delta):
    new_base = tuple(b + row[j] * delta for b, row in zip(base, periods)) \
        if periods else base
    new_slots = tuple(Slot(None if s.left is None else s.left.shift_var(j, delta),
                           None if s.right is None else s.right.shift_var(j, delta))
                      for s in slots)
    return new_base, periods, new_slots


def _orthant_cases(base, periods, slots, bad_vars):
    """Partition ℕ^k by which of ``bad_vars`` is the first nonzero one."""
    cases = []
    # All bad variables zero.
    cur = (base, periods, slots)
    for j in sorted(bad_vars, reverse=True):
        cur = _substitute_zero(*cur, j)
    cases.append(cur)
    ordered = sorted(bad_vars)
    for idx, j in enumerate(ordered):
        cur = _shift_var(base, periods, slots, j, 1)
        for jj in sorted(ordered[:idx], reverse=True):
            cur = _substitute_zero(*cur, jj)
        cases.append(cur)
    return cases


def _merge_slots(a: Slot, b: Slot) -> Slot:
    return Slot(a.left, b.right)


def _form_extreme(forms: list[AffineForm], want_max: bool) -> AffineForm:
    """Coefficient-wise maximum/minimum of comparable affine forms."""
    best = forms[0]
    for f in forms[1:]:
        diff = f.sub(best)
        if diff.monotone and diff.const >= 0:
            cand_is_bigger = True
        elif all(c <= 0 for c in diff.coeffs) and diff.const <= 0:
            cand_is_bigger = False
        else:
            raise NotExpressibleError(
                "cannot order overlapping slot endpoints over the whole "
                "parameter orthant")
        if cand_is_bigger == want_max:
            best = f
    return best


def _combine_unbounded_slots(slots: tuple[Slot, ...]) -> tuple[Slot, ...]:
    """Fold duplicate left/right-infinite slots into single extremal slots."""
    if any(s.left is None and s.right is None for s in slots):
        return (Slot(None, None),)
    left_open = [s for s in slots if s.left is None]
    right_open = [s for s in slots if s.right is None]
    rest = [s for s in slots if s.left is not None and s.right is not None]
    out: list[Slot] = []
    if left_open:
        out.append(Slot(None, _form_extreme([s.right for s in left_open], True)))
    out.extend(rest)
    if right_open:
        out.append(Slot(_form_extreme([s.left for s in right_open], False), None))
    return tuple(out)


def normalize_branch(base, periods, slots, stride) -> list[Branch]:
    """Turn raw branch data into a list of uniform branches (possibly empty)."""
    bx, _c = stride
    work = [(tuple(base), tuple(tuple(r) for r in periods),
             _combine_unbounded_slots(tuple(slots)))]
    done: list[Branch] = []
    guard = 0
    while work:
        guard += 1
        if guard > 10000:
            raise NotExpressibleError("branch normalization did not converge")
        cur_base, cur_periods, cur_slots = work.pop()
        acted = False
        # 0. provable left-endpoint order (swap or split when undecided)
        for i in range(len(cur_slots) - 1):
            a, b = cur_slots[i], cur_slots[i + 1]
            if b.left is None:
                raise NotExpressibleError("two left-infinite slots remain")
            if a.left is None:
                continue
            f = b.left.sub(a.left)
            if f.monotone and f.const >= 0:
                continue
            if all(c <= 0 for c in f.coeffs) and f.const <= 0:
                swapped = (cur_slots[:i] + (b, a) + cur_slots[i + 2:])
                work.append((cur_base, cur_periods, swapped))
            else:
                sign = 1 if f.const < 0 else -1
                bad = [j for j, co in enumerate(f.coeffs) if co * sign > 0]
                work.extend(_orthant_cases(cur_base, cur_periods,
                                           cur_slots, bad))
            acted = True
            break
        if acted:
            continue
        # 1. slot width issues
        for i, slot in enumerate(cur_slots):
            w = slot.width()
            if w is None:
                continue
            if any(co < 0 for co in w.coeffs):
                raise NotExpressibleError(
                    "monotone representation required for slot widths")
            if w.const < 0:
                bad = [j for j, co in enumerate(w.coeffs) if co > 0]
                if not bad:
                    reduced = cur_slots[:i] + cur_slots[i + 1:]
                    work.append((cur_base, cur_periods, reduced))
                else:
                    work.extend(_orthant_cases(cur_base, cur_periods,
                                               cur_slots, bad))
                acted = True
                break
        if acted:
            continue
        # 2. gap issues between consecutive slots
        for i in range(len(cur_slots) - 1):
            a, b = cur_slots[i], cur_slots[i + 1]
            if b.left is None:
                raise NotExpressibleError("slots out of order")
            if a.right is None:
                # a extends to +inf and starts left of b, so b is inside a.
                work.append((cur_base, cur_periods,
                             cur_slots[:i + 1] + cur_slots[i + 2:]))
                acted = True
                break
            g = b.left.sub(a.right)
            if any(co < 0 for co in g.coeffs):
                raise NotExpressibleError(
                    "monotone representation required for gap forms")
            if g.const >= 2 * bx:
                continue
            if g.is_constant:
                if g.const >= 2:
                    continue  # fine for a stride-free branch
                # Contiguous or overlapping: merge, unless b ends inside a.
                if b.right is not None and a.right is not None:
                    e = b.right.sub(a.right)
                    if not (e.const >= 0 and e.monotone):
                        if e.const < 0 and all(c <= 0 for c in e.coeffs):
                            # b never reaches beyond a: drop b entirely.
                            reduced = cur_slots[:i + 1] + cur_slots[i + 2:]
                            work.append((cur_base, cur_periods, reduced))
                        else:
                            # Split where the sign of e is still undecided:
                            # positive coefficients raise a negative constant,
                            # zeroing negative ones settles monotonicity.
                            sign = 1 if e.const < 0 else -1
                            bad = [j for j, co in enumerate(e.coeffs)
                                   if co * sign > 0]
                            work.extend(_orthant_cases(cur_base, cur_periods,
                                                       cur_slots, bad))
                        acted = True
                        break
                merged = cur_slots[:i] + (_merge_slots(a, b),) + cur_slots[i + 2:]
                work.append((cur_base, cur_periods, merged))
                acted = True
                break
            # Non-constant gap with small constant: split until decided.
            if g.const <= 1:
                bad = [j for j, co in enumerate(g.coeffs) if co > 0]
                work.extend(_orthant_cases(cur_base, cur_periods, cur_slots, bad))
                acted = True
                break
        if acted:
            continue
        if cur_slots:
            done.append(Branch(cur_base, cur_periods, cur_slots, stride))
    return _dedupe_branches(done)


def _dedupe_branches(branches: list[Branch]) -> list[Branch]:
    seen = set()
    out = []
    for br in branches:
        key = (br.base, br.periods, br.slots, br.stride)
        if key not in seen:
            seen.add(key)
            out.append(br)
    return out


def merge_same_map_branches(branches: Sequence[Branch]) -> list[Branch]:
    """Merge branches sharing (base, periods, stride) into single branches.

    Slot lists are concatenated in order of their left endpoints and the gap
    machinery re-establishes uniformity (splitting the orthant when needed).
    """
    groups: dict = {}
    for br in branches:
        groups.setdefault(br.map_signature(), []).append(br)
    out: list[Branch] = []
    for (base, periods, stride), members in groups.items():
        if len(members) == 1:
            out.append(members[0])
            continue
        slots = [s for br in members for s in br.slots]

        def sort_key(slot: Slot):
            if slot.left is None:
                return (0, 0, 0)
            return (1, slot.left.const, sum(slot.left.coeffs))

        slots.sort(key=sort_key)
        out.extend(normalize_branch(base, periods, slots, stride))
    return out


# ---------------------------------------------------------------------------
# Residue-class splitting.

def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def residue_split_set(s: LinearIntervalSystem, B: int
                      ) -> dict[tuple[int, ...], LinearIntervalSystem]:
    """The residue classes {u : B·u + b ∈ S} for b ∈ [0,B-1]^(p+1).

    Every output system is stride-free.  B must be a common multiple of all
    branch strides.
    """
    if B < 1:
        raise ValidationError("split modulus must be >= 1")
    for br in s.branches:
        if B % br.stride[0] != 0:
            raise ValidationError(
                f"{B} is not a multiple of branch stride {br.stride[0]}")
    collected: dict[tuple[int, ...], list[Branch]] = {}
    for br in s.branches:
        bx, c = br.stride
        for lam_bar in itertools.product(range(B), repeat=br.k):
            shifted = [bi + sum(row[j] * lam_bar[j] for j in range(br.k))
                       for bi, row in zip(br.base, br.periods or
                                          [[]] * br.p)]
            if br.p and not br.periods:
                shifted = list(br.base)
            r = tuple(v % B for v in shifted)
            new_base = tuple((v - ri) // B for v, ri in zip(shifted, r))
            for b_x in range(B):
                if b_x % bx != c:
                    continue
                new_slots = []
                for slot in br.slots:
                    if slot.left is None:
                        left = None
                    else:
                        a0 = slot.left.const + sum(
                            co * lb for co, lb in zip(slot.left.coeffs, lam_bar))
                        left = AffineForm(_ceil_div(a0 - b_x, B), slot.left.coeffs)
                    if slot.right is None:
                        right = None
                    else:
                        a0 = slot.right.const + sum(
                            co * lb for co, lb in zip(slot.right.coeffs, lam_bar))
                        right = AffineForm((a0 - b_x) // B, slot.right.coeffs)
                    new_slots.append(Slot(left, right))
                key = r + (b_x,)
                collected.setdefault(key, []).extend(
                    normalize_branch(new_base, br.periods, new_slots, (1, 0)))
    out = {}
    for key in itertools.product(range(B), repeat=s.p + 1):
        branches = _dedupe_branches(collected.get(key, []))
        out[key] = linear_system(s.p, branches, assume_disjoint=True)
    return out


# ---------------------------------------------------------------------------
# Automaton unwrapping: effects x with B·x + b realized by the input.

def unwrap_modulo_automaton(a: WeightedAutomaton, B: int,
                            b: int) -> WeightedAutomaton:
    if B < 1:
        raise ValidationError("modulus must be >= 1")
    if not 0 <= b < B:
        raise ValidationError("residue must lie in [0, B)")
    if B == 1:
        return a
    n = a.state_count

    def enc(q: int, i: int) -> int:
        return q * B + i

    edges = []
    for t in a.transitions:
        y, r = divmod(t.weight, B)
        for i in range(B):
            j = i + r
            if j < B:
                edges.append((enc(t.src, i), y, enc(t.dst, j)))
            else:
                edges.append((enc(t.src, i), y + 1, enc(t.dst, j - B)))
    return automaton(n * B, edges, enc(a.initial, 0), enc(a.final, b))


# ---------------------------------------------------------------------------
# Negatives augmentation (natural semantics lives inside integer semantics).

def _coordinate_domains(br: Branch) -> list[ConcreteIntervalSet]:
    """Per-coordinate domains when the parameter map is a separable box."""
    if br.k:
        col_rows = []
        for j in range(br.k):
            rows = [i for i in range(br.p) if br.periods[i][j] != 0]
            if len(rows) != 1:
                raise NotExpressibleError(
                    "parameter map is not coordinate-separable")
            col_rows.append(rows[0])
        if len(set(col_rows)) != len(col_rows):
            raise NotExpressibleError(
                "two period columns drive the same parameter")
    domains = []
    for i in range(br.p):
        entries = [(j, br.periods[i][j]) for j in range(br.k)
                   if br.periods and br.periods[i][j] != 0]
        if not entries:
            domains.append(ConcreteIntervalSet.build(
                [(br.base[i], br.base[i], 0)], 1))
            continue
        (_j, d) = entries[0]
        step = abs(d)
        if d > 0:
            domains.append(ConcreteIntervalSet.build(
                [(br.base[i], None, br.base[i] % step)], step))
        else:
            domains.append(ConcreteIntervalSet.build(
                [(None, br.base[i], br.base[i] % step)], step))
    return domains


def _box_subtract(box_a, box_b):
    """A \\ B for boxes of 1-D sets, as a list of disjoint boxes."""
    p = len(box_a)
    inters = [a.intersect(b) for a, b in zip(box_a, box_b)]
    if any(i.is_empty for i in inters):
        return [box_a]
    out = []
    for i in range(p):
        diff = box_a[i].intersect(box_b[i].complement())
        if diff.is_empty:
            continue
        piece = list(inters[:i]) + [diff] + list(box_a[i + 1:])
        out.append(tuple(piece))
    return out


_FINITE_PIECE_CAP = 64


def _piece_generators(coord_set: ConcreteIntervalSet):
    """Turn a 1-D set into (base, step) generators (step 0 = a single point)."""
    gens = []
    B = coord_set.modulus
    for (lo, hi, r) in coord_set.pieces:
        if lo is None and hi is None:
            gens.append((r, B))
            gens.append((r - B, -B))
        elif lo is None:
            gens.append((hi, -B))
        elif hi is None:
            gens.append((lo, B))
        else:
            count = (hi - lo) // B + 1
            if count > _FINITE_PIECE_CAP:
                raise NotExpressibleError(
                    "domain complement has a large finite stretch")
            gens.extend((lo + i * B, 0) for i in range(count))
    return gens


def _box_to_branches(box, p: int) -> list[Branch]:
    """Branches with slot (-inf, -1] whose parameter images tile the box."""
    per_coord = [_piece_generators(cs) for cs in box]
    out = []
    for combo in itertools.product(*per_coord):
        base = tuple(b for (b, _step) in combo)
        cols = [(i, step) for i, (_b, step) in enumerate(combo) if step != 0]
        k = len(cols)
        matrix = [[0] * k for _ in range(p)]
        for col_idx, (row, step) in enumerate(cols):
            matrix[row][col_idx] = step
        slots = (Slot(None, const_form(-1, k)),)
        out.append(Branch(base, tuple(tuple(r) for r in matrix), slots, (1, 0)))
    return out


def augment_with_negatives(s: LinearIntervalSystem) -> LinearIntervalSystem:
    """S ∪ (ℤ^p × ℤ_{<0}): every parameter point gains all negative counters.

    Companion branches add the negative half-line on each branch domain; the
    complement of the union of branch domains (when expressible as boxes of
    one-dimensional semilinear sets) is covered by catch-all branches.
    """
    new_branches: list[Branch] = list(s.branches)
    for br in s.branches:
        slots = (Slot(None, const_form(-1, br.k)),)
        new_branches.append(Branch(br.base, br.periods, slots, (1, 0)))

    if s.p == 0:
        if not s.branches:
            new_branches.append(Branch((), (), (Slot(None, const_form(-1, 0)),),
                                       (1, 0)))
    else:
        region = [tuple(ConcreteIntervalSet.all_integers() for _ in range(s.p))]
        seen_domains = set()
        for br in s.branches:
            domains = tuple(_coordinate_domains(br))
            key = tuple(d.pieces + (d.modulus,) for d in domains)
            if key in seen_domains:
                continue
            seen_domains.add(key)
            region = [piece for box in region
                      for piece in _box_subtract(box, domains)]
        for box in region:
            new_branches.extend(_box_to_branches(box, s.p))
    return linear_system(s.p, _dedupe_branches(new_branches),
                         assume_disjoint=True)


# ---------------------------------------------------------------------------
# VASS preparation: clip the counter axis to ℕ.

def clip_to_naturals(s: LinearIntervalSystem) -> LinearIntervalSystem:
    """Replace left-infinite slots by left endpoint 0 and require every other
    left endpoint to be provably nonnegative."""
    out = []
    for br in s.branches:
        slots = list(br.slots)
        changed = False
        kept = []
        for i, slot in enumerate(slots):
            left = slot.left
            if left is None:
                left = const_form(0, br.k)
                changed = True
            elif not left.nonneg_everywhere():
                raise ValidationError(
                    "VASS targets must have slots provably within the "
                    "naturals")
            if slot.right is not None:
                width = slot.right.sub(left)
                if width.is_constant and width.const < 0:
                    changed = True
                    continue  # slot entirely below zero
            kept.append(Slot(left, slot.right))
        if changed:
            merged = normalize_branch(br.base, br.periods, kept, br.stride)
            out.extend(merged)
        else:
            out.append(br)
    return linear_system(s.p, out, assume_disjoint=True)


# ---------------------------------------------------------------------------
# JSON target format.

def _form_to_json(f: AffineForm) -> dict:
    return {"const": str(f.const), "coeffs": [str(c) for c in f.coeffs]}


def _parse_int(value, field_name: str) -> int:
    if isinstance(value, bool):
        raise ValidationError(f"{field_name}: expected integer")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip(), 10)
        except ValueError:
            raise ValidationError(f"{field_name}: {value!r} is not an integer")
    raise ValidationError(f"{field_name}: expected integer or decimal string")


def _form_from_json(doc, k: int, field_name: str) -> AffineForm:
    if not isinstance(doc, dict) or "const" not in doc:
        raise ValidationError(f"{field_name}: expected an affine form object")
    const = _parse_int(doc["const"], f"{field_name}.const")
    coeffs = doc.get("coeffs", [])
    if not isinstance(coeffs, list):
        raise ValidationError(f"{field_name}.coeffs: expected a list")
    parsed = tuple(_parse_int(c, f"{field_name}.coeffs[{i}]")
                   for i, c in enumerate(coeffs))
    if len(parsed) != k:
        raise ValidationError(
            f"{field_name}: form has {len(parsed)} coefficients, branch has "
            f"{k} period columns")
    return AffineForm(const, parsed)


def target_to_json(s: LinearIntervalSystem) -> dict:
    branches = []
    for br in s.branches:
        slots = []
        for slot in br.slots:
            slots.append({
                "left": "-inf" if slot.left is None else _form_to_json(slot.left),
                "right": "+inf" if slot.right is None else _form_to_json(slot.right),
            })
        branches.append({
            "base": [str(x) for x in br.base],
            "periods": [[str(x) for x in row] for row in br.periods],
            "stride": [br.stride[0], br.stride[1]],
            "slots": slots,
        })
    return {"p": s.p, "branches": branches}


def target_from_json(doc) -> LinearIntervalSystem:
    if not isinstance(doc, dict):
        raise ValidationError("target document must be a JSON object")
    if "p" not in doc or "branches" not in doc:
        raise ValidationError("target document needs fields 'p' and 'branches'")
    p = _parse_int(doc["p"], "p")
    if p < 0:
        raise ValidationError("p must be >= 0")
    raw = doc["branches"]
    if not isinstance(raw, list):
        raise ValidationError("branches: expected a list")
    branches = []
    for bi, bdoc in enumerate(raw):
        where = f"branches[{bi}]"
        if not isinstance(bdoc, dict):
            raise ValidationError(f"{where}: expected an object")
        base = [_parse_int(x, f"{where}.base[{i}]")
                for i, x in enumerate(bdoc.get("base", []))]
        if len(base) != p:
            raise ValidationError(f"{where}.base: expected {p} entries")
        period_rows = bdoc.get("periods", [])
        if not isinstance(period_rows, list):
            raise ValidationError(f"{where}.periods: expected a list of rows")
        periods = [[_parse_int(x, f"{where}.periods[{i}][{j}]")
                    for j, x in enumerate(row)] for i, row in enumerate(period_rows)]
        if periods and len(periods) != p:
            raise ValidationError(f"{where}.periods: expected {p} rows")
        k = len(periods[0]) if periods else 0
        stride_doc = bdoc.get("stride", [1, 0])
        if not (isinstance(stride_doc, list) and len(stride_doc) == 2):
            raise ValidationError(f"{where}.stride: expected [modulus, residue]")
        stride = (_parse_int(stride_doc[0], f"{where}.stride[0]"),
                  _parse_int(stride_doc[1], f"{where}.stride[1]"))
        slots_doc = bdoc.get("slots", [])
        slots = []
        for si, sdoc in enumerate(slots_doc):
            sw = f"{where}.slots[{si}]"
            if not isinstance(sdoc, dict):
                raise ValidationError(f"{sw}: expected an object")
            left_doc = sdoc.get("left", "-inf")
            right_doc = sdoc.get("right", "+inf")
            left = None if left_doc == "-inf" else _form_from_json(
                left_doc, k, f"{sw}.left")
            right = None if right_doc == "+inf" else _form_from_json(
                right_doc, k, f"{sw}.right")
            slots.append((left, right))
        branches.append(branch(base, periods, slots, stride))
    return linear_system(p, branches)


def load_target(path: str) -> LinearIntervalSystem:
    import json

    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: malformed JSON ({exc})") from exc
    return target_from_json(doc)
