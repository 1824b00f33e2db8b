"""Amplitude-matrix rounds for the coverability iteration.

One round replaces every matrix entry (p, q) by the maximal amplitude over
compositions of up to three entries along p -> r -> s -> q.  Entries are
"simple" elements encoded as plain integer effects, with ``None`` for the
absent entry.

The maximization decomposes into four masked max-plus matrix products:
with m = min(a, a+b, a+b+c) and t = a+b+c,

    amp3 = t   when a >= 0, a+b >= 0 and t >= 0 hold for some (r, s)
           m   otherwise (the best min prefix over all pairs),

and both branches reduce to max-plus products because
min(a, a+b, a+b+c) = a + min(0, b + min(0, c)).

The fast engine stores each value as two int64 limbs (hi = v >> 32,
lo = v & 0xffffffff), exact for |v| < 2**93, and runs numba kernels when
available.  A pure-Python engine handles arbitrary magnitudes.
"""

from __future__ import annotations

import numpy as np

try:  # pragma: no cover - exercised implicitly
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):  # type: ignore
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


B32 = 1 << 32
MASK32 = B32 - 1
NEGHI = -(1 << 60)  # sentinel hi limb for "no entry"
TH = -(1 << 59)  # operands at or below this hi are treated as absent
LIMIT = 1 << 92  # magnitudes the limb encoding supports


@njit(cache=True)
def _mp_kernel(ahi, alo, bhi, blo, chi, clo):  # pragma: no cover - jitted
    n = ahi.shape[0]
    for p in range(n):
        for s in range(n):
            chi[p, s] = NEGHI
            clo[p, s] = 0
        for r in range(n):
            h = ahi[p, r]
            if h <= TH:
                continue
            l = alo[p, r]
            for s in range(n):
                bh = bhi[r, s]
                if bh <= TH:
                    continue
                shi = h + bh
                slo = l + blo[r, s]
                if slo >= B32:
                    shi += 1
                    slo -= B32
                if shi > chi[p, s] or (shi == chi[p, s] and slo > clo[p, s]):
                    chi[p, s] = shi
                    clo[p, s] = slo


def _mp_numpy(ahi, alo, bhi, blo, chi, clo):
    """Reference implementation of the kernel (no numba)."""
    n = ahi.shape[0]
    chi[:] = NEGHI
    clo[:] = 0
    for r in range(n):
        acol_hi = ahi[:, r]
        ok_a = acol_hi > TH
        if not ok_a.any():
            continue
        brow_hi = bhi[r]
        ok_b = brow_hi > TH
        if not ok_b.any():
            continue
        shi = acol_hi[:, None] + brow_hi[None, :]
        slo = alo[:, r][:, None] + blo[r][None, :]
        carry = slo >> 32
        shi += carry
        slo &= MASK32
        valid = ok_a[:, None] & ok_b[None, :]
        better = valid & ((shi > chi) | ((shi == chi) & (slo > clo)))
        chi[better] = shi[better]
        clo[better] = slo[better]


class _LimbEngine:
    """Round computation on (hi, lo) int64 limb matrices."""

    def __init__(self, use_numba: bool):
        self._mp = _mp_kernel if use_numba else _mp_numpy

    @staticmethod
    def encode(matrix):
        n = len(matrix)
        hi = np.full((n, n), NEGHI, dtype=np.int64)
        lo = np.zeros((n, n), dtype=np.int64)
        for i, row in enumerate(matrix):
            for j, v in enumerate(row):
                if v is None:
                    continue
                hi[i, j] = v >> 32
                lo[i, j] = v & MASK32
        return hi, lo

    @staticmethod
    def decode(hi, lo):
        n = hi.shape[0]
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                h = int(hi[i, j])
                row.append(None if h <= TH else (h << 32) + int(lo[i, j]))
            out.append(row)
        return out

    def round(self, hi, lo):
        n = hi.shape[0]
        mp = self._mp

        def product(xhi, xlo, yhi, ylo):
            rhi = np.empty((n, n), dtype=np.int64)
            rlo = np.empty((n, n), dtype=np.int64)
            mp(xhi, xlo, yhi, ylo, rhi, rlo)
            return rhi, rlo

        def masked_nonneg(xhi, xlo):
            keep = xhi >= 0
            return (np.where(keep, xhi, NEGHI), np.where(keep, xlo, 0))

        def minzero(xhi, xlo):
            keep = xhi < 0  # negative values and the sentinel stay
            return (np.where(keep, xhi, 0), np.where(keep, xlo, 0))

        aphi, aplo = masked_nonneg(hi, lo)
        whi, wlo = product(aphi, aplo, hi, lo)
        whi, wlo = masked_nonneg(whi, wlo)
        thi, tlo = product(whi, wlo, hi, lo)

        xhi, xlo = product(hi, lo, *minzero(hi, lo))
        mhi, mlo = product(hi, lo, *minzero(xhi, xlo))

        feasible = thi >= 0
        rhi = np.where(feasible, thi, mhi)
        rlo = np.where(feasible, tlo, mlo)
        return rhi, rlo


class _PythonEngine:
    """Arbitrary-precision fallback on list-of-list matrices."""

    @staticmethod
    def encode(matrix):
        return [row[:] for row in matrix]

    @staticmethod
    def decode(matrix):
        return [row[:] for row in matrix]

    @staticmethod
    def _product(A, B):
        n = len(A)
        C = [[None] * n for _ in range(n)]
        for p in range(n):
            Ap = A[p]
            Cp = C[p]
            for r in range(n):
                a = Ap[r]
                if a is None:
                    continue
                Br = B[r]
                for s in range(n):
                    b = Br[s]
                    if b is None:
                        continue
                    val = a + b
                    if Cp[s] is None or val > Cp[s]:
                        Cp[s] = val
        return C

    def round(self, matrix):
        n = len(matrix)

        def masked_nonneg(M):
            return [[v if (v is not None and v >= 0) else None for v in row]
                    for row in M]

        def minzero(M):
            return [[None if v is None else min(0, v) for v in row]
                    for row in M]

        W = masked_nonneg(self._product(masked_nonneg(matrix), matrix))
        T = self._product(W, matrix)
        X = self._product(matrix, minzero(matrix))
        M = self._product(matrix, minzero(X))
        out = [[t if (t is not None and t >= 0) else m
                for t, m in zip(trow, mrow)] for trow, mrow in zip(T, M)]
        return out


def iterate_amplitude(matrix, rounds: int):
    """Run ``rounds`` amplitude rounds, stopping early at a fixpoint.

    ``matrix`` is a list of lists of ``int | None`` effects.
    """
    n = len(matrix)
    max_abs = max((abs(v) for row in matrix for v in row if v is not None),
                  default=0)
    # Entries never exceed (longest path) * (max input magnitude).
    if (max_abs + 1) * max(n, 1) * 4 < LIMIT:
        engine = _LimbEngine(HAVE_NUMBA)
        hi, lo = engine.encode(matrix)
        for _ in range(rounds):
            nhi, nlo = engine.round(hi, lo)
            if np.array_equal(nhi, hi) and np.array_equal(nlo, lo):
                break
            hi, lo = nhi, nlo
        return engine.decode(hi, lo)
    engine = _PythonEngine()
    cur = engine.encode(matrix)
    for _ in range(rounds):
        nxt = engine.round(cur)
        if nxt == cur:
            break
        cur = nxt
    return engine.decode(cur)
