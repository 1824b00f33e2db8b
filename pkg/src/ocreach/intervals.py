"""Concrete semilinear subsets of the integers.

A :class:`ConcreteIntervalSet` is a finite union of *strided intervals*: each
piece is an interval (possibly one-sided infinite) restricted to a single
residue class modulo the set's modulus.  A stride-free set has modulus 1.

The single-residue case matches the canonical "(intervals, stride)" form;
allowing a residue per piece keeps the type closed under the unions produced
by instantiating multi-branch systems.  All counting is exact (fractions).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .automaton import ValidationError


class _Omega:
    """The ω entry of ratio matrices (an unbounded gap/interval quotient)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "omega"


OMEGA = _Omega()

Endpoint = int | None  # None encodes -inf on the left / +inf on the right


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


def _snap_up(value: int, residue: int, modulus: int) -> int:
    """Smallest x >= value with x ≡ residue (mod modulus)."""
    return value + (residue - value) % modulus


def _snap_down(value: int, residue: int, modulus: int) -> int:
    """Largest x <= value with x ≡ residue (mod modulus)."""
    return value - (value - residue) % modulus


@dataclass(frozen=True)
class ConcreteIntervalSet:
    """Finite union of strided integer intervals, canonicalized."""

    modulus: int
    pieces: tuple[tuple[Endpoint, Endpoint, int], ...]

    # -- construction ------------------------------------------------------

    @staticmethod
    def build(pieces: Iterable[tuple[Endpoint, Endpoint, int]],
              modulus: int = 1) -> "ConcreteIntervalSet":
        if modulus < 1:
            raise ValidationError("modulus must be >= 1")
        per_res: dict[int, list[tuple[Endpoint, Endpoint]]] = {}
        for (lo, hi, res) in pieces:
            r = res % modulus
            if lo is not None:
                lo = _snap_up(lo, r, modulus)
            if hi is not None:
                hi = _snap_down(hi, r, modulus)
            if lo is not None and hi is not None and lo > hi:
                continue
            per_res.setdefault(r, []).append((lo, hi))
        out: list[tuple[Endpoint, Endpoint, int]] = []
        for r, items in per_res.items():
            items.sort(key=lambda p: (-math.inf if p[0] is None else p[0]))
            merged: list[list[Endpoint]] = []
            for lo, hi in items:
                if merged:
                    plo, phi = merged[-1]
                    # Same residue class: contiguous when the index gap <= 1.
                    if phi is None or (lo is not None and lo <= phi + modulus):
                        if phi is not None and (hi is None or hi > phi):
                            merged[-1][1] = hi
                        continue
                merged.append([lo, hi])
            out.extend((lo, hi, r) for lo, hi in merged)
        out.sort(key=lambda p: ((-math.inf if p[0] is None else p[0]), p[2]))
        return ConcreteIntervalSet(modulus, tuple(out))

    @staticmethod
    def from_intervals(intervals: Iterable[tuple[Endpoint, Endpoint]],
                       stride: tuple[int, int] = (1, 0)) -> "ConcreteIntervalSet":
        b, c = stride
        return ConcreteIntervalSet.build(
            [(lo, hi, c) for (lo, hi) in intervals], modulus=b)

    @staticmethod
    def empty() -> "ConcreteIntervalSet":
        return ConcreteIntervalSet.build([], 1)

    @staticmethod
    def all_integers() -> "ConcreteIntervalSet":
        return ConcreteIntervalSet.build([(None, None, 0)], 1)

    # -- basic queries ------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    @property
    def stride(self) -> tuple[int, int]:
        """The (modulus, residue) pair when all pieces share one residue."""
        residues = {r for (_, _, r) in self.pieces}
        if len(residues) > 1:
            raise ValidationError("set mixes residue classes; no single stride")
        return (self.modulus, residues.pop() if residues else 0)

    @property
    def stride_free(self) -> bool:
        return self.modulus == 1

    def __contains__(self, x: int) -> bool:
        for (lo, hi, r) in self.pieces:
            if x % self.modulus != r:
                continue
            if (lo is None or x >= lo) and (hi is None or x <= hi):
                return True
        return False

    def min_element(self) -> int | None:
        """Smallest element, or None when empty / unbounded below."""
        best = None
        for (lo, hi, _r) in self.pieces:
            if lo is None:
                return None
            best = lo if best is None else min(best, lo)
        return best

    def min_member(self, lower: int, congruence: tuple[int, int] | None = None
                   ) -> int | None:
        """Smallest member >= lower, optionally also ≡ r (mod m)."""
        best: int | None = None
        for (lo, hi, res) in self.pieces:
            start = lower if lo is None else max(lo, lower)
            if congruence is None:
                cand = _snap_up(start, res, self.modulus)
            else:
                m, r = congruence
                g = math.gcd(self.modulus, m)
                if (r - res) % g != 0:
                    continue
                step = self.modulus * m // g
                cand = None
                for off in range(0, step, self.modulus):
                    x = _snap_up(start, res, self.modulus) + off
                    if x % m == r % m:
                        cand = x
                        break
                if cand is None:
                    continue
            if hi is not None and cand > hi:
                continue
            best = cand if best is None else min(best, cand)
        return best

    def window_count(self, a: int, b: int) -> int:
        """|self ∩ [a, b]| exactly (a <= b)."""
        total = 0
        for (lo, hi, res) in self.pieces:
            wlo = a if lo is None else max(a, lo)
            whi = b if hi is None else min(b, hi)
            if wlo > whi:
                continue
            first = _snap_up(wlo, res, self.modulus)
            if first > whi:
                continue
            total += (whi - first) // self.modulus + 1
        return total

    def window_empty(self, a: int, b: int) -> bool:
        return a > b or self.window_count(a, b) == 0

    def intersects_window(self, lo: Endpoint, hi: Endpoint) -> bool:
        """Does the set meet [lo, hi] (None endpoints meaning unbounded)?"""
        for (plo, phi, res) in self.pieces:
            wlo = plo if lo is None else (lo if plo is None else max(lo, plo))
            whi = phi if hi is None else (hi if phi is None else min(hi, phi))
            if wlo is None and whi is None:
                return True
            if wlo is None:
                return True  # unbounded below, some point <= whi exists
            if whi is None:
                return True
            if _snap_up(wlo, res, self.modulus) <= whi:
                return True
        return False

    def count_progression(self, x: int, k: int, n: int) -> int:
        """|self ∩ (x + k·[-n, n])| exactly, k >= 1."""
        if k < 1 or n < 0:
            raise ValidationError("progression needs k >= 1 and n >= 0")
        total = 0
        for (lo, hi, res) in self.pieces:
            jlo = -n if lo is None else max(-n, _ceil_div(lo - x, k))
            jhi = n if hi is None else min(n, (hi - x) // k)
            if jlo > jhi:
                continue
            # Count j in [jlo, jhi] with x + k j ≡ res (mod modulus).
            g = math.gcd(k, self.modulus)
            if (res - x) % g != 0:
                continue
            m = self.modulus // g
            # Solve (k/g) j ≡ (res-x)/g (mod m).
            kk = (k // g) % m
            rhs = ((res - x) // g) % m
            j0 = (rhs * pow(kk, -1, m)) % m if m > 1 else 0
            first = jlo + (j0 - jlo) % m
            if first > jhi:
                continue
            total += (jhi - first) // m + 1
        return total

    def negated(self) -> "ConcreteIntervalSet":
        """The set {-x : x in self}."""
        return ConcreteIntervalSet.build(
            [((None if hi is None else -hi), (None if lo is None else -lo),
              (-r) % self.modulus) for (lo, hi, r) in self.pieces],
            self.modulus)

    def shifted(self, delta: int) -> "ConcreteIntervalSet":
        return ConcreteIntervalSet.build(
            [((None if lo is None else lo + delta),
              (None if hi is None else hi + delta),
              (r + delta) % self.modulus) for (lo, hi, r) in self.pieces],
            self.modulus)

    # -- set algebra ---------------------------------------------------------

    def rescaled(self, modulus: int) -> "ConcreteIntervalSet":
        """Same set re-expressed at a coarser common modulus (a multiple)."""
        if modulus % self.modulus != 0:
            raise ValidationError("rescale modulus must be a multiple")
        factor = modulus // self.modulus
        pieces = []
        for (lo, hi, r) in self.pieces:
            for i in range(factor):
                pieces.append((lo, hi, r + i * self.modulus))
        return ConcreteIntervalSet.build(pieces, modulus)

    def union(self, other: "ConcreteIntervalSet") -> "ConcreteIntervalSet":
        m = math.lcm(self.modulus, other.modulus)
        a, b = self.rescaled(m), other.rescaled(m)
        return ConcreteIntervalSet.build(list(a.pieces) + list(b.pieces), m)

    def intersect(self, other: "ConcreteIntervalSet") -> "ConcreteIntervalSet":
        m = math.lcm(self.modulus, other.modulus)
        out = []
        for (lo1, hi1, r1) in self.pieces:
            for (lo2, hi2, r2) in other.pieces:
                g = math.gcd(self.modulus, other.modulus)
                if (r1 - r2) % g != 0:
                    continue
                # CRT residue modulo m.
                res = r1
                step = self.modulus
                while res % other.modulus != r2:
                    res += step
                lo = lo1 if lo2 is None else (lo2 if lo1 is None else max(lo1, lo2))
                hi = hi1 if hi2 is None else (hi2 if hi1 is None else min(hi1, hi2))
                if lo is not None and hi is not None and lo > hi:
                    continue
                out.append((lo, hi, res % m))
        return ConcreteIntervalSet.build(out, m)

    def complement(self) -> "ConcreteIntervalSet":
        """ℤ minus this set, expressed at the same modulus."""
        out: list[tuple[Endpoint, Endpoint, int]] = []
        for r in range(self.modulus):
            # Index line x = r + modulus * i; pieces are canonical, so the
            # per-residue index intervals are disjoint, sorted, gaps >= 2.
            idx = [((None if lo is None else (lo - r) // self.modulus),
                    (None if hi is None else (hi - r) // self.modulus))
                   for (lo, hi, res) in self.pieces if res == r]
            idx.sort(key=lambda p: (-math.inf if p[0] is None else p[0]))

            def to_x(i: int) -> int:
                return r + self.modulus * i

            if not idx:
                out.append((None, None, r))
                continue
            first_lo = idx[0][0]
            if first_lo is not None:
                out.append((None, to_x(first_lo - 1), r))
            for (_, hi1), (lo2, _) in zip(idx, idx[1:]):
                out.append((to_x(hi1 + 1), to_x(lo2 - 1), r))
            last_hi = idx[-1][1]
            if last_hi is not None:
                out.append((to_x(last_hi + 1), None, r))
        return ConcreteIntervalSet.build(out, self.modulus)

    def same_set(self, other: "ConcreteIntervalSet") -> bool:
        """Semantic equality (representation-independent)."""
        m = math.lcm(self.modulus, other.modulus)
        return self.rescaled(m).pieces == other.rescaled(m).pieces


def interval_set(intervals: Sequence[tuple[Endpoint, Endpoint]],
                 stride: tuple[int, int] = (1, 0)) -> ConcreteIntervalSet:
    """Shorthand constructor used heavily by tests."""
    return ConcreteIntervalSet.from_intervals(intervals, stride)


# ---------------------------------------------------------------------------
# Canonical decomposition, gaps, types, ratio matrices (stride-free sets).

TYPE_FINITE = "1"
TYPE_LEFT_INF = "-inf"
TYPE_RIGHT_INF = "+inf"
TYPE_BOTH_INF = "2inf"


def _interval_type(lo: Endpoint, hi: Endpoint) -> str:
    if lo is None and hi is None:
        return TYPE_BOTH_INF
    if lo is None:
        return TYPE_LEFT_INF
    if hi is None:
        return TYPE_RIGHT_INF
    return TYPE_FINITE


def canonical_decomposition(s: ConcreteIntervalSet):
    """Maximal disjoint intervals, the complement's decomposition, and the
    type tuple.  Requires a stride-free set."""
    if not s.stride_free:
        raise ValidationError("canonical decomposition requires a stride-free set")
    intervals = [(lo, hi) for (lo, hi, _r) in s.pieces]
    gaps = [(lo, hi) for (lo, hi, _r) in s.complement().pieces]
    types = tuple(_interval_type(lo, hi) for (lo, hi) in intervals)
    return intervals, gaps, types


def interval_length(lo: Endpoint, hi: Endpoint) -> int | None:
    """Largest minus smallest; None encodes an infinite length."""
    if lo is None or hi is None:
        return None
    return hi - lo


def ratio_matrix(s: ConcreteIntervalSet):
    """Rows index complement gaps, columns index intervals; each entry is
    ceil(|gap| / |interval|) with ω for infinite gaps, 0 for infinite
    intervals, and singleton intervals counted as length 1."""
    if s.is_empty:
        raise ValidationError("ratio matrix of the empty set is undefined")
    intervals, gaps, _types = canonical_decomposition(s)
    rows = []
    for (glo, ghi) in gaps:
        glen = interval_length(glo, ghi)
        row = []
        for (ilo, ihi) in intervals:
            if glen is None:
                row.append(OMEGA)
                continue
            ilen = interval_length(ilo, ihi)
            if ilen is None:
                row.append(0)
            else:
                row.append(_ceil_div(glen, max(ilen, 1)))
        rows.append(row)
    return rows


# ---------------------------------------------------------------------------
# Density measures (exact rationals).

def density_at(s: ConcreteIntervalSet, x: int, k: int, n: int) -> Fraction:
    """|S ∩ (x + k·[-n,n])| / (2n+1) for k, n >= 1."""
    if n < 1:
        raise ValidationError("density_at needs n >= 1")
    return Fraction(s.count_progression(x, k, n), 2 * n + 1)


def density_plus_at(s: ConcreteIntervalSet, x: int, k: int, n: int) -> Fraction:
    """Nonnegative-progression variant; requires x - k n >= 0."""
    if x < 0:
        raise ValidationError("density_plus_at needs x >= 0")
    if x - k * n < 0:
        raise ValidationError("density_plus_at requires x - k*n >= 0")
    mn = s.min_element()
    if mn is not None and mn < 0 or any(lo is None for (lo, _hi, _r) in s.pieces):
        if s.intersects_window(None, -1):
            raise ValidationError("density_plus_at is defined for subsets of ℕ")
    if n == 0:
        return Fraction(1 if x in s else 0, 1)
    return Fraction(s.count_progression(x, k, n), 2 * n + 1)


def density_infimum(s: ConcreteIntervalSet, x: int, k: int, max_n: int,
                    plus: bool = False) -> Fraction:
    """min over 1 <= n <= max_n (and x-kn >= 0 when plus) of the density."""
    best: Fraction | None = None
    for n in range(1, max_n + 1):
        if plus and x - k * n < 0:
            break
        d = (density_plus_at if plus else density_at)(s, x, k, n)
        if best is None or d < best:
            best = d
    if best is None:
        best = Fraction(1 if x in s else 0, 1)
    return best
