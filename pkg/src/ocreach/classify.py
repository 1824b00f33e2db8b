"""The three tractable/hard dichotomy classifiers with executable evidence.

Integer semantics: split away strides, then hunt per branch for a pair of
gaps that grow unboundedly relative to every interval between them (an
omega constellation).  None anywhere means the set decomposes into interval
chains (tractable, with chain schedules); otherwise the stored witness
generator produces isolation witnesses for arbitrary margins.

Natural semantics reduces to integer semantics on the negatives-augmented
set.  VASS semantics is tractable exactly when every residue-class branch
keeps an infinite tail and constant-size interior gaps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .automaton import Semantics, ValidationError
from .intervals import ConcreteIntervalSet, Endpoint
from .laurent import BuildingBlockInstance, check_rho_chain
from .targets import (AffineForm, Branch, LinearIntervalSystem,
                      augment_with_negatives, branch_concrete, clip_to_naturals,
                      instantiate, merge_same_map_branches, residue_split_set,
                      solve_lambda)


class EvidenceError(ValidationError):
    """A classification was used on the wrong side of the dichotomy."""


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ---------------------------------------------------------------------------
# Branch geometry: interval and gap forms of a stride-free uniform branch.

@dataclass(frozen=True)
class GapInfo:
    """A maximal complement stretch of a branch.  ``position`` j means the
    gap separates interval j-1 from interval j; the leading gap has j = 0 and
    the trailing gap j = (number of intervals).  ``length`` is an affine form
    (largest minus smallest) or None for a one-sided-infinite gap."""

    position: int
    length: AffineForm | None


def branch_gaps(br: Branch) -> list[GapInfo]:
    if br.stride[0] != 1:
        raise ValidationError("gap analysis requires a stride-free branch")
    gaps: list[GapInfo] = []
    slots = br.slots
    if not slots:
        return gaps
    if slots[0].left is not None:
        gaps.append(GapInfo(0, None))
    for i in range(len(slots) - 1):
        length = slots[i + 1].left.sub(slots[i].right).add_const(-2)
        gaps.append(GapInfo(i + 1, length))
    if slots[-1].right is not None:
        gaps.append(GapInfo(len(slots), None))
    return gaps


@dataclass(frozen=True)
class RatioVerdict:
    bounded: bool
    bound: int | None = None
    direction: tuple[int, ...] | None = None


def _ratio_of_forms(gap_length: AffineForm | None,
                    interval_width: AffineForm | None, k: int) -> RatioVerdict:
    if gap_length is None:
        return RatioVerdict(False, direction=(0,) * k)
    if interval_width is None:
        return RatioVerdict(True, bound=0)
    g, h = gap_length, interval_width
    for v in range(k):
        if g.coeffs[v] > 0 and h.coeffs[v] == 0:
            direction = tuple(1 if i == v else 0 for i in range(k))
            return RatioVerdict(False, direction=direction)
    best = Fraction(max(g.const, 0), max(h.const, 1))
    for v in range(k):
        if g.coeffs[v] > 0:
            best = max(best, Fraction(g.coeffs[v], h.coeffs[v]))
    return RatioVerdict(True, bound=math.ceil(best))


def ratio_boundedness(br: Branch, gap_idx: int, interval_idx: int) -> RatioVerdict:
    """Is the gap/interval length quotient bounded over the branch domain?

    Unbounded verdicts carry a period direction along which the gap grows
    while the interval keeps its length (the zero direction for one-sided
    infinite gaps)."""
    gaps = branch_gaps(br)
    widths = br.width_forms()
    for w in widths:
        if w is not None and not w.monotone:
            raise ValidationError("monotone representation required")
    return _ratio_of_forms(gaps[gap_idx].length, widths[interval_idx], br.k)


@dataclass(frozen=True)
class Constellation:
    gap_low: int  # index into branch_gaps
    gap_high: int
    between: tuple[int, ...]  # interval indices strictly between the gaps
    direction: tuple[int, ...]


def detect_omega_constellation(br: Branch) -> Constellation | None:
    """Two gaps, both growing unboundedly relative to every interval between
    them along one common period direction; pairs are scanned by increasing
    distance so the reported pair is the tightest one."""
    gaps = branch_gaps(br)
    widths = br.width_forms()
    k = br.k
    if len(gaps) < 2:
        return None
    order = sorted(range(len(gaps)), key=lambda g: gaps[g].position)
    for span in range(1, len(gaps)):
        for a in range(len(gaps) - span):
            g1, g2 = gaps[order[a]], gaps[order[a + span]]
            between = tuple(range(g1.position, g2.position))
            summed = _sum_forms([widths[i] for i in between], k)
            if summed is None:
                continue  # an infinite interval sits between the gaps
            d1 = _growth_direction(g1.length, summed, k)
            if d1 is None:
                continue
            d2 = _growth_direction(g2.length, summed, k)
            if d2 is None:
                continue
            direction = tuple(x + y for x, y in zip(d1, d2))
            return Constellation(order[a], order[a + span], between, direction)
    return None


def _sum_forms(widths, k: int) -> AffineForm | None:
    total = AffineForm(0, (0,) * k)
    for w in widths:
        if w is None:
            return None
        total = AffineForm(total.const + w.const,
                           tuple(a + b for a, b in zip(total.coeffs, w.coeffs)))
    return total


def _growth_direction(gap_length: AffineForm | None, summed: AffineForm,
                      k: int) -> tuple[int, ...] | None:
    """A direction growing the gap while the summed interval form stays
    constant; the zero vector for infinite gaps; None when there is none."""
    if gap_length is None:
        return (0,) * k
    for v in range(k):
        if gap_length.coeffs[v] > 0 and summed.coeffs[v] == 0:
            return tuple(1 if i == v else 0 for i in range(k))
    return None


def branch_growth_cap(br: Branch) -> int:
    """Largest bounded gap/interval quotient over the branch (the R of the
    chain parameter rho = 2 R (m + 1))."""
    gaps = branch_gaps(br)
    best = 0
    for g in range(len(gaps)):
        for i in range(len(br.slots)):
            verdict = ratio_boundedness(br, g, i)
            if verdict.bounded:
                best = max(best, verdict.bound)
    return best


def branch_rho(br: Branch) -> int:
    m = len(br.slots)
    return max(2 * branch_growth_cap(br) * (m + 1), 2)


# ---------------------------------------------------------------------------
# Harbor chains and chain schedules.

@dataclass(frozen=True)
class ChainSchedule:
    chain: tuple[int, ...]  # interval indices, start to infinite end
    instance: BuildingBlockInstance
    flipped: bool


def _concrete_intervals(br: Branch, lam) -> list[tuple[Endpoint, Endpoint]]:
    out = []
    for slot in br.slots:
        lo = None if slot.left is None else slot.left(lam)
        hi = None if slot.right is None else slot.right(lam)
        out.append((lo, hi))
    return out


def _ilen(interval) -> int | None:
    lo, hi = interval
    if lo is None or hi is None:
        return None
    return hi - lo


def _idist(a, b) -> int:
    if a[1] is not None and b[0] is not None and a[1] < b[0]:
        return b[0] - a[1]
    if b[1] is not None and a[0] is not None and b[1] < a[0]:
        return a[0] - b[1]
    raise ValidationError("intervals overlap")


def harbor_chains(br: Branch, t: Sequence[int], rho: int | None = None
                  ) -> list[ChainSchedule]:
    """For every interval of S-branch[t], a chain hopping to ever-larger
    intervals and ending in a one-sided-infinite one, as building-block data.

    Each hop goes to a strictly larger interval within rho times the current
    length with no larger interval in between; chains whose infinite interval
    extends to -inf are emitted with a sign flip.  The per-hop distance bound
    is doubled as a fallback when the base rho admits no hop.
    """
    lam = solve_lambda(br, t)
    if lam is None:
        raise ValidationError("parameter vector outside the branch domain")
    if rho is None:
        rho = branch_rho(br)
    intervals = _concrete_intervals(br, lam)
    if len(intervals) == 1 and intervals[0][0] is None and intervals[0][1] is None:
        return []
    schedules: list[ChainSchedule] = []
    seen: set[tuple[int, ...]] = set()
    for start in range(len(intervals)):
        chain = [start]
        cur = start
        while _ilen(intervals[cur]) is not None:
            nxt = _find_harbor(intervals, cur, rho)
            if nxt is None:
                raise AssertionError(
                    "no harbor found on the tractable side; escalation "
                    "exhausted")
            chain.append(nxt)
            cur = nxt
        key = tuple(chain)
        if key in seen:
            continue
        seen.add(key)
        schedules.append(_schedule_for_chain(chain, intervals, rho))
    return schedules


def _find_harbor(intervals, cur, rho) -> int | None:
    cur_len = _ilen(intervals[cur])
    factor = rho
    for _ in range(40):
        best = None
        for j in range(len(intervals)):
            if j == cur:
                continue
            jlen = _ilen(intervals[j])
            if jlen is not None and jlen <= cur_len:
                continue
            lo, hi = sorted((cur, j))
            if any(_between_len_exceeds(intervals, k, cur_len)
                   for k in range(lo + 1, hi)):
                continue
            d = _idist(intervals[cur], intervals[j])
            if d > factor * max(cur_len, 1):
                continue
            if best is None or d < best[0] or (d == best[0] and j < best[1]):
                best = (d, j)
        if best is not None:
            return best[1]
        factor *= 2
    return None


def _between_len_exceeds(intervals, k, cur_len) -> bool:
    klen = _ilen(intervals[k])
    return klen is None or klen > cur_len


def _schedule_for_chain(chain, intervals, rho) -> ChainSchedule:
    ordered = [intervals[i] for i in chain]
    last = ordered[-1]
    flipped = last[1] is not None  # the infinite interval extends to -inf
    if flipped:
        ordered = [((None if hi is None else -hi), (None if lo is None else -lo))
                   for (lo, hi) in ordered]
    endpoints: list[int] = []
    for (lo, hi) in ordered[:-1]:
        endpoints.extend((lo, hi))
    endpoints.append(ordered[-1][0])
    rho_val = Fraction(max(rho, 2))
    for _ in range(40):
        inst = BuildingBlockInstance(len(ordered) - 1, rho_val, tuple(endpoints))
        if inst.admissible:
            ok, report = check_rho_chain(inst.intervals, inst.rho)
            if not ok:
                raise AssertionError(f"chain check failed: {report}")
            return ChainSchedule(tuple(chain), inst, flipped)
        rho_val *= 2
    raise AssertionError("chain never became admissible")


# ---------------------------------------------------------------------------
# Classification results and evidence.

@dataclass(frozen=True)
class BranchPlan:
    branch: Branch
    rho: int
    m: int


@dataclass(frozen=True)
class IntegerTractableEvidence:
    modulus: int
    classes: dict  # residue vector -> tuple[BranchPlan, ...]


@dataclass(frozen=True)
class IsolationSite:
    residues: tuple[int, ...]
    branch: Branch
    constellation: Constellation


@dataclass(frozen=True)
class HardnessEvidence:
    modulus: int
    sites: tuple[IsolationSite, ...]


@dataclass(frozen=True)
class VassGapSite:
    residues: tuple[int, ...]
    branch: Branch
    kind: str  # "finite-trailing" | "growing-gap"
    gap_slot: int | None = None
    direction: tuple[int, ...] | None = None


@dataclass(frozen=True)
class VassHardnessEvidence:
    modulus: int
    sites: tuple[VassGapSite, ...]


@dataclass(frozen=True)
class VassTractableEvidence:
    delta: int
    bound_m: int
    class_systems: dict  # residue vector -> LinearIntervalSystem (stride-free)
    clipped: LinearIntervalSystem

    def exceptional_points(self, t: Sequence[int]) -> list[int]:
        """The points whose addition makes S[t] upward closed by delta."""
        B = self.delta
        residues = tuple(v % B for v in t)
        scaled = tuple((v - r) // B for v, r in zip(t, residues))
        points: set[int] = set()
        for b_x in range(B):
            system = self.class_systems[residues + (b_x,)]
            for br in system.branches:
                lam = solve_lambda(br, scaled)
                if lam is None:
                    continue
                concrete = branch_concrete(br, lam)
                pieces = concrete.pieces
                for (aa, bb) in zip(pieces, pieces[1:]):
                    for z in range(aa[1] + 1, bb[0]):
                        points.add(B * z + b_x)
        return sorted(points)

    def closure_set(self, t: Sequence[int]) -> ConcreteIntervalSet:
        base = instantiate(self.clipped, t)
        extra = self.exceptional_points(t)
        if not extra:
            return base
        points = ConcreteIntervalSet.build([(f, f, 0) for f in extra], 1)
        return base.union(points)


@dataclass(frozen=True)
class Classification:
    semantics: Semantics
    side: str  # "tractable" | "np-hard"
    evidence: object
    flagged: bool = False


# ---------------------------------------------------------------------------
# The classifiers.

def classify(s: LinearIntervalSystem, sem: Semantics) -> Classification:
    if sem is Semantics.INTEGER:
        return _classify_integer(s, Semantics.INTEGER)
    if sem is Semantics.NATURAL:
        augmented = augment_with_negatives(s)
        inner = _classify_integer(augmented, Semantics.NATURAL)
        return inner
    if sem is Semantics.VASS:
        return _classify_vass(s)
    raise ValidationError(f"unknown semantics {sem}")


def _classify_integer(s: LinearIntervalSystem, sem: Semantics) -> Classification:
    B = s.stride_lcm
    split = residue_split_set(s, B)
    classes: dict = {}
    sites: list[IsolationSite] = []
    for key, subsystem in split.items():
        merged = merge_same_map_branches(subsystem.branches)
        plans = []
        for br in merged:
            constellation = detect_omega_constellation(br)
            if constellation is not None:
                sites.append(IsolationSite(key, br, constellation))
            else:
                plans.append(BranchPlan(br, branch_rho(br), len(br.slots)))
        classes[key] = tuple(plans)
    if sites:
        return Classification(sem, "np-hard",
                              HardnessEvidence(B, tuple(sites)),
                              flagged=s.union_mode)
    return Classification(sem, "tractable",
                          IntegerTractableEvidence(B, classes),
                          flagged=s.union_mode)


def _classify_vass(s: LinearIntervalSystem) -> Classification:
    clipped = clip_to_naturals(s)
    B = clipped.stride_lcm
    split = residue_split_set(clipped, B)
    merged_split: dict = {}
    sites: list[VassGapSite] = []
    for key, subsystem in split.items():
        merged = merge_same_map_branches(subsystem.branches)
        merged_split[key] = LinearIntervalSystem(clipped.p, tuple(merged), False)
        for br in merged:
            if not br.slots:
                continue
            if br.slots[-1].right is not None:
                sites.append(VassGapSite(key, br, "finite-trailing"))
                continue
            for i, gap in enumerate(br.gap_forms()):
                if not gap.is_constant:
                    v = next(j for j, c in enumerate(gap.coeffs) if c > 0)
                    direction = tuple(1 if j == v else 0 for j in range(br.k))
                    sites.append(VassGapSite(key, br, "growing-gap", i, direction))
    if sites:
        return Classification(Semantics.VASS, "np-hard",
                              VassHardnessEvidence(B, tuple(sites)),
                              flagged=s.union_mode)
    # Uniform closure data: delta = B, M = worst-case interior gap points.
    bound_m = 0
    residue_keys: dict = {}
    for key, subsystem in merged_split.items():
        residue_keys.setdefault(key[:-1], []).append(subsystem)
    for param_res, systems in residue_keys.items():
        total = 0
        for subsystem in systems:
            worst = 0
            for br in subsystem.branches:
                pts = 0
                for gap in br.gap_forms():
                    # A constant gap form g leaves g - 1 interior points.
                    pts += gap.const - 1
                worst = max(worst, pts)
            total += worst
        bound_m = max(bound_m, total)
    return Classification(Semantics.VASS, "tractable",
                          VassTractableEvidence(B, bound_m, merged_split, clipped),
                          flagged=s.union_mode)


# ---------------------------------------------------------------------------
# Witness generators (hard side).

@dataclass(frozen=True)
class IsolationWitness:
    residues: tuple[int, ...]
    t: tuple[int, ...]
    x: int
    ell: int

    def original_parameters(self, modulus: int) -> tuple[int, ...]:
        return tuple(modulus * v + r for v, r in zip(self.t, self.residues[:-1]))


def isolation_witness(s: LinearIntervalSystem, delta: int,
                      cls: Classification | None = None,
                      sem: Semantics = Semantics.INTEGER) -> IsolationWitness:
    """Parameters and a window [x, x+ell-1] meeting the (residue-class) set,
    flanked on both sides by at least ``delta`` empty points."""
    if delta < 1:
        raise ValidationError("delta must be >= 1")
    if cls is None:
        cls = classify(s, sem)
    if cls.side != "np-hard" or not isinstance(cls.evidence, HardnessEvidence):
        raise EvidenceError("isolation witnesses exist only on the hard side")
    ev = cls.evidence
    site = ev.sites[0]
    witness = _isolation_from_site(site, delta)
    _verify_isolation(site, witness, delta)
    return witness


def _isolation_from_site(site: IsolationSite, delta: int) -> IsolationWitness:
    br = site.branch
    cons = site.constellation
    k = br.k
    gaps = branch_gaps(br)
    g_low = gaps[cons.gap_low]
    g_high = gaps[cons.gap_high]

    def needed_scale(gap: GapInfo) -> tuple[int, int]:
        """Point count of the gap as (const, slope) along the direction."""
        if gap.length is None:
            return (delta, 0)  # infinite gap: always wide enough
        length = gap.length
        slope = sum(c * d for c, d in zip(length.coeffs, cons.direction))
        return (length.const + 1, slope)

    scale = 0
    for gap in (g_low, g_high):
        const, slope = needed_scale(gap)
        if const >= delta:
            continue
        if slope <= 0:
            raise AssertionError("stored direction does not grow the gap")
        scale = max(scale, _ceil_div(delta - const, slope))
    lam = tuple(scale * d for d in cons.direction)
    intervals = _concrete_intervals(br, lam)
    first = cons.between[0]
    last = cons.between[-1]
    x = intervals[first][0]
    ell = intervals[last][1] - x + 1
    t = tuple(b + sum(row[j] * lam[j] for j in range(k))
              for b, row in zip(br.base, br.periods or [[]] * br.p))
    return IsolationWitness(site.residues, t, x, ell)


def _verify_isolation(site: IsolationSite, w: IsolationWitness, delta: int) -> None:
    concrete = branch_concrete(site.branch, solve_lambda(site.branch, w.t))
    if concrete.window_empty(w.x, w.x + w.ell - 1):
        raise AssertionError("isolation window misses the set")
    if not concrete.window_empty(w.x - delta, w.x - 1):
        raise AssertionError("left flank not empty")
    if not concrete.window_empty(w.x + w.ell, w.x + w.ell + delta):
        raise AssertionError("right flank not empty")


@dataclass(frozen=True)
class VassGapWitness:
    residues: tuple[int, ...]
    t: tuple[int, ...]
    u: int
    gap: int


def vass_gap_witness(cls: Classification, gap: int) -> VassGapWitness:
    """A class point u with [u, u+gap] meeting the class set only at u."""
    if cls.side != "np-hard" or not isinstance(cls.evidence, VassHardnessEvidence):
        raise EvidenceError("gap witnesses exist only on the hard VASS side")
    site = cls.evidence.sites[0]
    br = site.branch
    if site.kind == "finite-trailing":
        lam = (0,) * br.k
    else:
        gap_form = br.gap_forms()[site.gap_slot]
        slope = sum(c * d for c, d in zip(gap_form.coeffs, site.direction))
        have = gap_form.const - 2 + 1  # interior points at lam = 0
        scale = max(0, _ceil_div(gap + 1 - have, slope))
        lam = tuple(scale * d for d in site.direction)
    intervals = _concrete_intervals(br, lam)
    if site.kind == "finite-trailing":
        u = intervals[-1][1]
    else:
        u = intervals[site.gap_slot][1]
    t = tuple(b + sum(row[j] * lam[j] for j in range(br.k))
              for b, row in zip(br.base, br.periods or [[]] * br.p))
    concrete = branch_concrete(br, lam)
    if u not in concrete:
        raise AssertionError("gap witness point is not in the set")
    if not concrete.window_empty(u + 1, u + gap):
        raise AssertionError("gap witness window is not empty")
    return VassGapWitness(site.residues, t, u, gap)
