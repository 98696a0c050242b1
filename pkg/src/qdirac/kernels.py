"""Hot inner loops, each with a numba path and a vectorised numpy path.

The numba path is used when numba imports and ``QDIRAC_NUMBA`` is not set
to ``0``.  Both paths are always importable so that tests and the benchmark
can compare them directly.
"""
from __future__ import annotations

import numpy as np

from ._jit import HAVE_NUMBA, njit

__all__ = ["shift_product", "twosided_coo", "basis_index", "HAVE_NUMBA", "USE_NUMBA"]

USE_NUMBA = HAVE_NUMBA


def basis_index(m, j, k, K, M):
    """Flat index of ``E_jk (x) e^{imt}`` in the truncated basis."""
    return ((np.asarray(m) + M) * K + np.asarray(j)) * K + np.asarray(k)


# ---------------------------------------------------------------------------
# product of two normal-ordered coefficient tables
# ---------------------------------------------------------------------------
#
# Tables are passed pre-extended past K with their substitution values, so
# neither path has to know about boundaries beyond the two scalars needed for
# the deviation formula  dev(ab) = a0*dev(b) + dev(a)*b0 + dev(a)*dev(b).
#
# ra/rb are the first indices at which reads of a/b stop being exact (a value
# >= the extended length means "never").  A result index is inexact when it
# reads an inexact entry whose partner is nonzero.  Two such thresholds are
# tracked: for deviations (``*_dev``) and for values (``*_val``).

def _shift_product_numpy(a_val, a_dev, b_val, b_dev, a0, b0, d1, d2, K, ra_dev, rb_dev, ra_val, rb_val):
    d = d1 + d2
    i = np.arange(K)
    j = i + max(d, 0)
    k = i + max(-d, 0)
    l = j - d1
    ok = l >= 0
    ia_all = np.where(ok, np.minimum(j, l), 0)
    ib_all = np.where(ok, np.minimum(l, k), 0)
    ia, ib = ia_all[ok], ib_all[ok]
    val = np.zeros(K, dtype=np.complex128)
    dev = np.full(K, -a0 * b0, dtype=np.complex128)
    val[ok] = a_val[ia] * b_val[ib]
    dev[ok] = a0 * b_dev[ib] + a_dev[ia] * b0 + a_dev[ia] * b_dev[ib]
    nz_a = a_val[ia_all] != 0
    nz_b = b_val[ib_all] != 0

    def bad(ra, rb):
        ba = ok & (ia_all >= ra)
        bb = ok & (ib_all >= rb)
        return (ba & (nz_b | bb)) | (bb & (nz_a | ba))

    bd = bad(ra_dev, rb_dev)
    first = int(np.argmax(bd)) if bd.any() else K
    past = bool(np.any(bad(max(ra_val, K), max(rb_val, K))))
    return val, dev, first, past


@njit(cache=True)
def _shift_product_numba(a_val, a_dev, b_val, b_dev, a0, b0, d1, d2, K, ra_dev, rb_dev, ra_val, rb_val):
    d = d1 + d2
    val = np.zeros(K, dtype=np.complex128)
    dev = np.empty(K, dtype=np.complex128)
    first = K
    past = False
    ra_v = max(ra_val, K)
    rb_v = max(rb_val, K)
    for i in range(K):
        j = i + max(d, 0)
        k = i + max(-d, 0)
        l = j - d1
        if l < 0:
            dev[i] = -a0 * b0
            continue
        ia = min(j, l)
        ib = min(l, k)
        av = a_val[ia]
        bv = b_val[ib]
        val[i] = av * bv
        dev[i] = a0 * b_dev[ib] + a_dev[ia] * b0 + a_dev[ia] * b_dev[ib]
        if first == K:
            ba = ia >= ra_dev
            bb = ib >= rb_dev
            if (ba and (bv != 0 or bb)) or (bb and (av != 0 or ba)):
                first = i
        if not past:
            ba = ia >= ra_v
            bb = ib >= rb_v
            if (ba and (bv != 0 or bb)) or (bb and (av != 0 or ba)):
                past = True
    return val, dev, first, past


def shift_product(a_val, a_dev, b_val, b_dev, a0, b0, d1, d2, K,
                  ra_dev=None, rb_dev=None, ra_val=None, rb_val=None, use_numba=None):
    """Degree ``d1 + d2`` table of ``(s-degree d1 part) * (s-degree d2 part)``.

    Returns ``(values, deviations, first_inexact_index, inexact_read_past_K)``.
    Reliability thresholds default to "always exact".
    """
    if use_numba is None:
        use_numba = USE_NUMBA
    never = len(a_val) + len(b_val) + K
    ra_dev, rb_dev, ra_val, rb_val = (never if r is None else int(min(r, never))
                                      for r in (ra_dev, rb_dev, ra_val, rb_val))
    fn = _shift_product_numba if use_numba else _shift_product_numpy
    val, dev, first, past = fn(a_val, a_dev, b_val, b_dev, complex(a0), complex(b0), int(d1), int(d2), int(K),
                               ra_dev, rb_dev, ra_val, rb_val)
    return val, dev, int(first), bool(past)


# ---------------------------------------------------------------------------
# sparse assembly of psi -> scalar * (i m)^dt * L psi_m R, shifted in mode
# ---------------------------------------------------------------------------

def _twosided_coo_numpy(ldeg, ltab, rdeg, rtab, K, M, shift, scalar, dt):
    rows, cols, vals = [], [], []
    ms = np.arange(-M, M + 1)
    ms = ms[(ms + shift >= -M) & (ms + shift <= M)]
    fac = scalar * (1j * ms.astype(np.complex128)) ** dt
    keep = fac != 0
    ms, fac = ms[keep], fac[keep]
    if ms.size == 0:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), np.zeros(0, dtype=np.complex128)
    jj, kk = np.meshgrid(np.arange(K), np.arange(K), indexing="ij")
    for a in range(len(ldeg)):
        jp = jj + ldeg[a]
        for b in range(len(rdeg)):
            kp = kk - rdeg[b]
            ok = (jp >= 0) & (jp < K) & (kp >= 0) & (kp < K)
            if not ok.any():
                continue
            j, k, jo, ko = jj[ok], kk[ok], jp[ok], kp[ok]
            w = ltab[a, np.minimum(jo, j)] * rtab[b, np.minimum(k, ko)]
            nz = w != 0
            j, k, jo, ko, w = j[nz], k[nz], jo[nz], ko[nz], w[nz]
            if w.size == 0:
                continue
            rows.append(basis_index(ms[:, None] + shift, jo[None, :], ko[None, :], K, M).ravel())
            cols.append(basis_index(ms[:, None], j[None, :], k[None, :], K, M).ravel())
            vals.append((fac[:, None] * w[None, :]).ravel())
    if not rows:
        empty = np.zeros(0, dtype=np.int64)
        return empty, empty.copy(), np.zeros(0, dtype=np.complex128)
    return (np.concatenate(rows).astype(np.int64), np.concatenate(cols).astype(np.int64),
            np.concatenate(vals))


@njit(cache=True)
def _twosided_coo_numba(ldeg, ltab, rdeg, rtab, K, M, shift, scalar, dt):
    nl = ldeg.shape[0]
    nr = rdeg.shape[0]
    cap = (2 * M + 1) * K * K * nl * nr
    rows = np.empty(cap, dtype=np.int64)
    cols = np.empty(cap, dtype=np.int64)
    vals = np.empty(cap, dtype=np.complex128)
    c = 0
    for mi in range(2 * M + 1):
        m = mi - M
        mo = m + shift
        if mo < -M or mo > M:
            continue
        fac = scalar
        for _ in range(dt):
            fac = fac * (1j * m)
        if fac == 0:
            continue
        for j in range(K):
            for a in range(nl):
                jp = j + ldeg[a]
                if jp < 0 or jp >= K:
                    continue
                lv = ltab[a, min(jp, j)]
                if lv == 0:
                    continue
                for k in range(K):
                    for b in range(nr):
                        kp = k - rdeg[b]
                        if kp < 0 or kp >= K:
                            continue
                        rv = rtab[b, min(k, kp)]
                        if rv == 0:
                            continue
                        rows[c] = ((mo + M) * K + jp) * K + kp
                        cols[c] = (mi * K + j) * K + k
                        vals[c] = fac * lv * rv
                        c += 1
    return rows[:c], cols[:c], vals[:c]


def twosided_coo(ldeg, ltab, rdeg, rtab, K, M, shift=0, scalar=1.0, dt=0, use_numba=None):
    """COO triplets of one two-sided term on the basis ``E_jk (x) e^{imt}``.

    ``ltab[a]`` is the coefficient table of s-degree ``ldeg[a]`` of the left
    factor (entry ``(j+d, j)`` read at ``min``), likewise for the right factor.
    The mode factor is ``scalar * (i m)**dt`` evaluated on the input mode.
    """
    if use_numba is None:
        use_numba = USE_NUMBA
    ldeg = np.ascontiguousarray(ldeg, dtype=np.int64)
    rdeg = np.ascontiguousarray(rdeg, dtype=np.int64)
    ltab = np.ascontiguousarray(ltab, dtype=np.complex128)
    rtab = np.ascontiguousarray(rtab, dtype=np.complex128)
    fn = _twosided_coo_numba if use_numba else _twosided_coo_numpy
    return fn(ldeg, ltab, rdeg, rtab, int(K), int(M), int(shift), complex(scalar), int(dt))
