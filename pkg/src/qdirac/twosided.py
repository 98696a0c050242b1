"""Operators psi -> L psi R on L2(D_q) (x) L2(S^1), with circle-mode shifts.

Every operator in the package (left and right multiplications, the twisted
derivations, the Dirac blocks, twisted commutators) is a finite sum of
:class:`TwoSidedTerm`.  Vectors are arrays of shape ``(2M+1, K, K)``:
``psi[m + M, j, k]`` is the coefficient of ``E_jk (x) e^{imt}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.sparse as sp

from . import disc
from .disc import DiscElement
from .errors import ParameterError
from .kernels import twosided_coo


@dataclass(frozen=True)
class TwoSidedTerm:
    """``psi_m -> scalar * (i m)**dt * left @ psi_m @ right``, landing in mode ``m + shift``."""

    left: DiscElement
    right: DiscElement
    shift: int = 0
    scalar: complex = 1.0
    dt: int = 0

    def reach(self):
        """Largest upward moves of (row index, column index, |mode|)."""
        up_j = max([d for d in self.left.values if d > 0], default=0)
        up_k = max([-d for d in self.right.values if d < 0], default=0)
        return up_j, up_k, abs(self.shift)


class TermSum:
    """Finite sum of two-sided terms sharing the coefficient parameters (q, K)."""

    def __init__(self, terms, q, K):
        self.terms = tuple(t for t in terms if t.scalar != 0)
        self.q = float(q)
        self.K = int(K)
        self._dense = {}

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, q, K):
        return cls((), q, K)

    @classmethod
    def identity(cls, q, K):
        one = disc.make_generator("one", q, K)
        return cls((TwoSidedTerm(one, one),), q, K)

    @classmethod
    def left(cls, x):
        return cls((TwoSidedTerm(x, disc.make_generator("one", x.q, x.K)),), x.q, x.K)

    @classmethod
    def right(cls, x):
        return cls((TwoSidedTerm(disc.make_generator("one", x.q, x.K), x),), x.q, x.K)

    @classmethod
    def mode_shift(cls, n, q, K):
        one = disc.make_generator("one", q, K)
        return cls((TwoSidedTerm(one, one, shift=int(n)),), q, K)

    @classmethod
    def d_dt(cls, q, K):
        one = disc.make_generator("one", q, K)
        return cls((TwoSidedTerm(one, one, dt=1),), q, K)

    # -- algebra ------------------------------------------------------------
    def _check(self, other):
        if self.q != other.q or self.K != other.K:
            raise ParameterError("operators built on different (q, K)")

    def __add__(self, other):
        self._check(other)
        return TermSum(self.terms + other.terms, self.q, self.K)

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, c):
        if not np.isscalar(c):
            return NotImplemented
        return TermSum(
            [TwoSidedTerm(t.left, t.right, t.shift, t.scalar * c, t.dt) for t in self.terms],
            self.q, self.K)

    __rmul__ = __mul__

    def __matmul__(self, other):
        """Composition ``self o other`` (``other`` acts first)."""
        self._check(other)
        out = []
        for a in self.terms:
            for b in other.terms:
                left = disc.mul(a.left, b.left)
                right = disc.mul(b.right, a.right)
                # (i(m + shift_b))^dt_a (i m)^dt_b expanded in powers of (i m)
                for r in range(a.dt + 1):
                    coef = comb(a.dt, r) * (1j * b.shift) ** (a.dt - r)
                    if coef == 0:
                        continue
                    out.append(TwoSidedTerm(left, right, a.shift + b.shift,
                                            a.scalar * b.scalar * coef, r + b.dt))
        return TermSum(out, self.q, self.K)

    def reach(self):
        r = [t.reach() for t in self.terms]
        if not r:
            return 0, 0, 0
        return tuple(max(x[i] for x in r) for i in range(3))

    @property
    def valid(self):
        return min([min(t.left.valid, t.right.valid) for t in self.terms], default=self.K)

    # -- realisations -------------------------------------------------------
    def _mats(self, K):
        if K not in self._dense:
            self._dense[K] = [(disc.to_matrix(t.left, K), disc.to_matrix(t.right, K)) for t in self.terms]
        return self._dense[K]

    def apply(self, psi):
        """Apply to a mode array of shape ``(2M+1, K, K)`` (truncating the output)."""
        psi = np.asarray(psi, dtype=np.complex128)
        nm, K, _ = psi.shape
        M = (nm - 1) // 2
        out = np.zeros_like(psi)
        ms = np.arange(-M, M + 1)
        for t, (L, R) in zip(self.terms, self._mats(K)):
            fac = t.scalar * (1j * ms) ** t.dt
            lo, hi = max(-M, -M - t.shift), min(M, M - t.shift)
            if lo > hi:
                continue
            src = slice(lo + M, hi + M + 1)
            dst = slice(lo + t.shift + M, hi + t.shift + M + 1)
            out[dst] += fac[src, None, None] * (L @ psi[src] @ R)
        return out

    def matrix(self, K, M):
        """Sparse CSR matrix on the flat basis ``((m+M)*K + j)*K + k``."""
        if K > self.K:
            raise ParameterError(f"coefficients were built for K={self.K}, asked for {K}")
        N = (2 * M + 1) * K * K
        rows, cols, vals = [], [], []
        for t in self.terms:
            ld = np.array(sorted(t.left.values), dtype=np.int64)
            rd = np.array(sorted(t.right.values), dtype=np.int64)
            if ld.size == 0 or rd.size == 0:
                continue
            lt = np.array([t.left.values[d][:K] for d in ld])
            rt = np.array([t.right.values[d][:K] for d in rd])
            r, c, v = twosided_coo(ld, lt, rd, rt, K, M, t.shift, t.scalar, t.dt)
            rows.append(r)
            cols.append(c)
            vals.append(v)
        if not rows:
            return sp.csr_matrix((N, N), dtype=np.complex128)
        A = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(N, N))
        return A.tocsr()


def left(x):
    return TermSum.left(x)


def right(x):
    return TermSum.right(x)


def mode_shift(n, q, K):
    return TermSum.mode_shift(n, q, K)


def d_dt(q, K):
    return TermSum.d_dt(q, K)
