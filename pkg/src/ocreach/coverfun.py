"""The semiring of coverability functions and the coverability solvers.

A coverability function maps a starting counter value to the largest counter
value attainable at a target state (or -inf when no run exists).  Such
functions are strictly monotone with finitely many jump discontinuities, so
each is stored as its sorted list of discontinuities ``(u_i, v_i)``.
Addition is pointwise maximum, multiplication is composition.

``cover_iterate`` runs the amplitude-tripling rounds on an acyclic automaton;
``cover_table`` extracts coverability tables from the converged matrix;
``vass_cover`` decides coverability in unrestricted automata under VASS
semantics; ``reach_vass_decide`` decides reachability of tractable-side
target sets under VASS semantics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import total_ordering
from typing import Sequence

from . import _ampkernels
from .automaton import (ValidationError, WeightedAutomaton, automaton,
                        graph_reachable)


# ---------------------------------------------------------------------------
# Simple elements: 0, X^j (add j), Xbar^i (require >= i, subtract i).

@total_ordering
@dataclass(frozen=True)
class Simple:
    """A simple element, encoded by its counter effect (None = zero)."""

    effect: int | None

    @staticmethod
    def zero() -> "Simple":
        return Simple(None)

    @staticmethod
    def xpow(j: int) -> "Simple":
        if j < 0:
            raise ValidationError("xpow exponent must be >= 0")
        return Simple(j)

    @staticmethod
    def xbar(i: int) -> "Simple":
        if i < 0:
            raise ValidationError("xbar exponent must be >= 0")
        return Simple(-i)

    @property
    def is_zero(self) -> bool:
        return self.effect is None

    def __lt__(self, other: "Simple") -> bool:
        if self.effect is None:
            return other.effect is not None
        if other.effect is None:
            return False
        return self.effect < other.effect

    def lift(self) -> "CoverFunction":
        if self.effect is None:
            return ZERO_CF
        if self.effect >= 0:
            return CoverFunction(((0, self.effect),))
        return CoverFunction(((-self.effect, 0),))

    def __repr__(self):
        if self.effect is None:
            return "Simple(0)"
        if self.effect >= 0:
            return f"Simple(X^{self.effect})"
        return f"Simple(Xbar^{-self.effect})"


def simple_of_amplitude(amplitude: int) -> Simple:
    return Simple(amplitude)


def simple_for_weight(w: int) -> Simple:
    """The edge element: X^w for w >= 0, Xbar^{-w} for w < 0."""
    return Simple(w)


# ---------------------------------------------------------------------------
# Coverability functions.

@dataclass(frozen=True)
class CoverFunction:
    """Strictly monotone step function given by its discontinuities.

    ``jumps`` is a sorted tuple of pairs (u, v): the function equals
    v_j + (i - u_j) for the largest u_j <= i and -inf below u_1.  The empty
    tuple is the constant -inf (the additive zero).
    """

    jumps: tuple[tuple[int, int], ...]

    def __post_init__(self):
        last_u = last_v = None
        for (u, v) in self.jumps:
            if u < 0 or v < 0:
                raise ValidationError("cover function entries must be >= 0")
            if last_u is not None:
                if u <= last_u or v <= last_v:
                    raise ValidationError("cover table entries must increase")
                if v <= last_v + (u - last_u):
                    raise ValidationError(
                        f"({u}, {v}) is not a genuine discontinuity")
            last_u, last_v = u, v

    def __call__(self, i: int | None) -> int | None:
        if i is None:
            return None
        best = None
        for (u, v) in self.jumps:
            if u > i:
                break
            best = v + (i - u)
        return best

    @property
    def is_zero(self) -> bool:
        return not self.jumps


ZERO_CF = CoverFunction(())
IDENTITY_CF = CoverFunction(((0, 0),))


def _prune(pairs: list[tuple[int, int]]) -> CoverFunction:
    """Keep only genuine discontinuities of the piecewise slope-one hull."""
    kept: list[tuple[int, int]] = []
    for (u, v) in pairs:
        if kept and u == kept[-1][0]:
            if v > kept[-1][1]:
                kept[-1] = (u, v)
            continue
        if kept and v <= kept[-1][1] + (u - kept[-1][0]):
            continue
        kept.append((u, v))
    return CoverFunction(tuple(kept))


def cover_function(pairs: Sequence[tuple[int, int]]) -> CoverFunction:
    """Build a cover function from (possibly redundant) jump pairs."""
    cleaned = sorted(set((int(u), int(v)) for (u, v) in pairs))
    return _prune(cleaned)


def cf_add(f: CoverFunction, g: CoverFunction) -> CoverFunction:
    """Pointwise maximum."""
    candidates = sorted({u for (u, _v) in f.jumps} | {u for (u, _v) in g.jumps})
    pairs = []
    for u in candidates:
        vals = [w for w in (f(u), g(u)) if w is not None]
        if vals:
            pairs.append((u, max(vals)))
    return _prune(pairs)


def _first_input_reaching(f: CoverFunction, target: int) -> int | None:
    """Smallest i with f(i) >= target, or None when no such input exists."""
    jumps = f.jumps
    for idx, (u, v) in enumerate(jumps):
        if v >= target:
            return u
        if idx + 1 < len(jumps):
            nxt_u = jumps[idx + 1][0]
            top = v + (nxt_u - u - 1)
            if top >= target:
                return u + (target - v)
        else:
            return u + max(0, target - v)
    return None


def cf_compose(f: CoverFunction, g: CoverFunction) -> CoverFunction:
    """Composition, f applied first: i -> g(f(i))."""
    if f.is_zero or g.is_zero:
        return ZERO_CF
    candidates = {u for (u, _v) in f.jumps}
    for (ug, _vg) in g.jumps:
        i = _first_input_reaching(f, ug)
        if i is not None:
            candidates.add(i)
    pairs = []
    for u in sorted(candidates):
        y = g(f(u))
        if y is not None:
            pairs.append((u, y))
    return _prune(pairs)


def cf_leq(f: CoverFunction, g: CoverFunction) -> bool:
    """Pointwise f <= g."""
    points = {u for (u, _v) in f.jumps} | {u for (u, _v) in g.jumps}
    for i in points:
        fv, gv = f(i), g(i)
        if fv is None:
            continue
        if gv is None or fv > gv:
            return False
    return True


def sigma(f: CoverFunction) -> Simple:
    """Largest simple element below f."""
    if f.is_zero:
        return Simple.zero()
    u1, v1 = f.jumps[0]
    if u1 == 0:
        return Simple.xpow(v1)
    return Simple.xbar(u1)


# ---------------------------------------------------------------------------
# Matrices over simple elements; the tripling iteration.

def adjacency_matrix(a: WeightedAutomaton,
                     with_identity: bool = False) -> list[list[Simple]]:
    """Entry (p, q) is the order-maximum over parallel edges p -> q, zero
    when there is no edge; ``with_identity`` adds X^0 self loops."""
    n = a.state_count
    eff: list[list[int | None]] = [[None] * n for _ in range(n)]
    for t in a.transitions:
        cur = eff[t.src][t.dst]
        if cur is None or t.weight > cur:
            eff[t.src][t.dst] = t.weight
    if with_identity:
        for q in range(n):
            if eff[q][q] is None or eff[q][q] < 0:
                eff[q][q] = 0
    return [[Simple(e) for e in row] for row in eff]


def _iteration_rounds(n: int) -> int:
    return max(0, math.ceil(math.log2(max(n, 1)))) + 1


def cover_iterate(a: WeightedAutomaton) -> list[list[Simple]]:
    """Amplitude-tripling rounds on an acyclic automaton.

    Starts from the adjacency matrix with identity self-loops and applies
    ceil(log2 n) + 1 rounds (stopping early at the fixpoint); in the result,
    paths of length at most two realize every coverability table entry.
    """
    if not a.is_acyclic:
        raise ValidationError("cover_iterate requires an acyclic automaton")
    base = adjacency_matrix(a, with_identity=True)
    matrix = [[s.effect for s in row] for row in base]
    result = _ampkernels.iterate_amplitude(matrix, _iteration_rounds(a.state_count))
    return [[Simple(e) for e in row] for row in result]


def cover_table_matrix(iterated: list[list[Simple]]) -> list[list[CoverFunction]]:
    """All-pairs coverability tables from a converged simple matrix."""
    n = len(iterated)
    tables = [[ZERO_CF] * n for _ in range(n)]
    lifted = [[s.lift() for s in row] for row in iterated]
    for p in range(n):
        for q in range(n):
            acc = ZERO_CF
            for r in range(n):
                if iterated[p][r].is_zero or iterated[r][q].is_zero:
                    continue
                acc = cf_add(acc, cf_compose(lifted[p][r], lifted[r][q]))
            tables[p][q] = acc
    return tables


def cover_table(a: WeightedAutomaton, p: int, q: int) -> CoverFunction:
    """The (p, q) coverability table of an acyclic automaton."""
    iterated = cover_iterate(a)
    acc = ZERO_CF
    for r in range(a.state_count):
        if iterated[p][r].is_zero or iterated[r][q].is_zero:
            continue
        acc = cf_add(acc, cf_compose(iterated[p][r].lift(), iterated[r][q].lift()))
    return acc


# -- exact matrix powers over the cover-function semiring (baseline) --------

def cf_matrix_mul(A: list[list[CoverFunction]],
                  B: list[list[CoverFunction]]) -> list[list[CoverFunction]]:
    n = len(A)
    C = [[ZERO_CF] * n for _ in range(n)]
    for i in range(n):
        for k in range(n):
            f = A[i][k]
            if f.is_zero:
                continue
            for j in range(n):
                g = B[k][j]
                if g.is_zero:
                    continue
                C[i][j] = cf_add(C[i][j], cf_compose(f, g))
    return C


def cf_identity_matrix(n: int) -> list[list[CoverFunction]]:
    return [[IDENTITY_CF if i == j else ZERO_CF for j in range(n)]
            for i in range(n)]


def cf_matrix_power(M: list[list[CoverFunction]], e: int) -> list[list[CoverFunction]]:
    n = len(M)
    result = cf_identity_matrix(n)
    base = [row[:] for row in M]
    while e:
        if e & 1:
            result = cf_matrix_mul(result, base)
        e >>= 1
        if e:
            base = cf_matrix_mul(base, base)
    return result


def exact_cover_matrix(a: WeightedAutomaton) -> list[list[CoverFunction]]:
    """A0^n over the cover-function semiring by repeated squaring (the exact
    set-propagation baseline used in tests and benchmarks)."""
    if not a.is_acyclic:
        raise ValidationError("exact cover matrix requires an acyclic automaton")
    n = a.state_count
    base = [[s.lift() for s in row] for row in adjacency_matrix(a, with_identity=True)]
    M = base
    rounds = max(0, math.ceil(math.log2(max(n, 1))))
    for _ in range(rounds):
        M = cf_matrix_mul(M, M)
    return M


# ---------------------------------------------------------------------------
# Coverability in unrestricted (possibly cyclic) automata.

_LAYERED_STATE_CAP = 14


def _layered_tables(a: WeightedAutomaton):
    """Tables over the layered unrolling with states (q, layer 0..n)."""
    n = a.state_count
    layers = n + 1

    def idx(q: int, layer: int) -> int:
        return q * layers + layer

    edges = []
    for t in a.transitions:
        for layer in range(n):
            edges.append((idx(t.src, layer), t.weight, idx(t.dst, layer + 1)))
    layered = automaton(n * layers, edges, 0, 0)
    iterated = cover_iterate(layered)
    return idx, cover_table_matrix(iterated)


def vass_cover(a: WeightedAutomaton, p: int, u: int, q: int, v: int,
               method: str = "auto") -> bool:
    """Can configuration (p, u) cover (q, v) under VASS semantics?

    For small automata this follows the layered unrolling: either some layer
    copy of q is covered directly, or some state admits a pumpable table
    entry (v_i > u_i) reachable from (p, u) with q graph-reachable from it.
    Larger automata use an equivalent saturating search (exact; promotes a
    configuration once its counter is high enough that graph reachability
    alone decides coverability).
    """
    if u < 0 or v < 0:
        raise ValidationError("vass_cover requires u, v >= 0")
    if method == "auto":
        method = "layered" if a.state_count <= _LAYERED_STATE_CAP else "saturate"
    if method == "layered":
        return _vass_cover_layered(a, p, u, q, v)
    if method == "saturate":
        return _vass_cover_saturate(a, p, u, q, v)
    raise ValidationError(f"unknown vass_cover method {method!r}")


def _vass_cover_layered(a: WeightedAutomaton, p: int, u: int, q: int, v: int) -> bool:
    n = a.state_count
    idx, tables = _layered_tables(a)
    # (i) direct cover of some layer copy of q.
    for layer in range(n + 1):
        val = tables[idx(p, 0)][idx(q, layer)](u)
        if val is not None and val >= v:
            return True
    # (ii) pump a positive cycle, then walk to q.
    reach_q_from = {r for r in range(n) if q in graph_reachable(a, r)}
    for r in range(n):
        if r not in reach_q_from:
            continue
        threshold = None
        for layer in range(1, n + 1):
            for (ui, vi) in tables[idx(r, 0)][idx(r, layer)].jumps:
                if vi > ui and (threshold is None or ui < threshold):
                    threshold = ui
        if threshold is None:
            continue
        for layer in range(n + 1):
            val = tables[idx(p, 0)][idx(r, layer)](u)
            if val is not None and val >= threshold:
                return True
    return False


def _vass_cover_saturate(a: WeightedAutomaton, p: int, u: int, q: int, v: int) -> bool:
    n = a.state_count
    promote = v + n * a.max_abs_weight
    reaches_q: dict[int, bool] = {}

    def can_walk_to_q(s: int) -> bool:
        if s not in reaches_q:
            reaches_q[s] = q in graph_reachable(a, s)
        return reaches_q[s]

    if p == q and u >= v:
        return True
    if u >= promote and can_walk_to_q(p):
        return True
    best = {p: u}
    stack = [p]
    while stack:
        s = stack.pop()
        x = best[s]
        for t in a.outgoing[s]:
            y = x + t.weight
            if y < 0:
                continue
            if t.dst == q and y >= v:
                return True
            if y >= promote:
                if can_walk_to_q(t.dst):
                    return True
                continue  # dead branch: q is unreachable from here
            if y > best.get(t.dst, -1):
                best[t.dst] = y
                stack.append(t.dst)
    return False


# ---------------------------------------------------------------------------
# VASS-semantics reachability for tractable target sets.

def _primes_up_to(limit: int) -> list[int]:
    sieve = [True] * (limit + 1)
    primes = []
    for x in range(2, limit + 1):
        if sieve[x]:
            primes.append(x)
            for y in range(x * x, limit + 1, x):
                sieve[y] = False
    return primes


def _distinct_tuples(pool: list[int], m: int):
    if m == 0:
        yield ()
        return
    for i, p in enumerate(pool):
        for rest in _distinct_tuples(pool[:i] + pool[i + 1:], m - 1):
            yield (p,) + rest


def reach_vass_decide(a: WeightedAutomaton, cls, t: Sequence[int]) -> bool:
    """Decide VASS reachability of S[t] given a tractable VASS classification.

    Computes the exceptional points F(t) and the per-residue minima of the
    upward-closure S[t] ∪ F(t); for every residue class modulo the closure
    period and every tuple of distinct primes excluding the exceptional
    points in the control state, the question reduces to coverability of the
    per-residue minimum.
    """
    from .classify import VassTractableEvidence  # local import, no cycle

    if not isinstance(cls.evidence, VassTractableEvidence):
        raise ValidationError("reach_vass_decide needs a tractable VASS classification")
    ev = cls.evidence
    delta = ev.delta
    exceptional = ev.exceptional_points(t)
    closure = ev.closure_set(t)
    if closure.is_empty:
        return False

    m = len(exceptional)
    if m == 0:
        pools: list[tuple[int, ...]] = [()]
    else:
        max_f = max(exceptional)
        limit = 2 * math.ceil(math.log2(max_f + 2)) + 8
        primes = _primes_up_to(limit)
        pools = list(_distinct_tuples(primes, m))

    for residue in range(delta):
        mu = closure.min_member(0, (delta, residue)) if delta > 1 else \
            closure.min_member(0)
        if mu is None:
            continue
        for tup in pools:
            if _excluded_cover(a, delta, residue, exceptional, tup, mu):
                return True
    return False


def _excluded_cover(a: WeightedAutomaton, delta: int, residue: int,
                    exceptional: list[int], primes: tuple[int, ...],
                    mu: int) -> bool:
    """Coverability of mu at the final state, restricted to counter values
    ≡ residue (mod delta) and ≢ f_i (mod p_i) for each exceptional point."""
    mods = [delta] + list(primes)
    targets = [residue] + [f % p for f, p in zip(exceptional, primes)]

    combos: list[tuple[int, ...]] = [()]
    for m in mods:
        combos = [c + (r,) for c in combos for r in range(m)]
    index = {c: i for i, c in enumerate(combos)}

    def accepts(c: tuple[int, ...]) -> bool:
        if c[0] != targets[0] % delta:
            return False
        return all(c[i] != targets[i] for i in range(1, len(mods)))

    n = a.state_count
    size = n * len(combos)

    def enc(q: int, c: tuple[int, ...]) -> int:
        return q * len(combos) + index[c]

    edges = []
    for t in a.transitions:
        for c in combos:
            c2 = tuple((r + t.weight) % m for r, m in zip(c, mods))
            edges.append((enc(t.src, c), t.weight, enc(t.dst, c2)))
    zero = tuple(0 for _ in mods)
    product = automaton(size, edges, enc(a.initial, zero), 0)
    for c in combos:
        if not accepts(c):
            continue
        if vass_cover(product, product.initial, 0, enc(a.final, c), mu):
            return True
    return False
