"""Function algebra of the quantum disc in normal-ordered form.

An element is stored as  sum_{n>=0} s^n f_n(y) + sum_{n>=1} f_{-n}(y) s*^n
with each coefficient function tabulated on the spectral grid q^0..q^{K-1}
plus its value at the spectral point 0 (the "boundary").  In matrix terms
the degree-d table sits on the d-th subdiagonal: entry (j, k) with
j - k = d holds ``values[d][min(j, k)]``.

Next to the values each table keeps its deviation from the boundary value,
computed without cancellation.  Differences of elements that agree at the
boundary (commutators of generators) therefore stay accurate to full
relative precision, which matters once they are divided by powers of y.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import ParameterError, UnboundedSymbolError
from .kernels import shift_product

INF = complex(math.inf, 0.0)

# tail of a table counts as converged to its boundary below this relative gap
_TAIL_TOL = 1e-14


def check_params(q, K):
    """Validate a deformation parameter and truncation size."""
    if isinstance(q, bool) or not isinstance(q, (int, float, np.floating)):
        raise ParameterError(f"q must be a real number, got {q!r}")
    if not (0.0 < float(q) < 1.0):
        raise ParameterError(f"q must lie strictly between 0 and 1, got {q}")
    if isinstance(K, bool) or not isinstance(K, (int, np.integer)) or K < 1:
        raise ParameterError(f"K must be a positive integer, got {K!r}")
    return float(q), int(K)


def _isinf(b):
    return math.isinf(b.real) or math.isinf(b.imag)


def tail_limit(v):
    """Estimate lim_{i->inf} of a tabulated sequence from its last entries.

    Converged tails return their last value, geometrically converging tails
    are extrapolated with Aitken's delta-squared step (exact for
    ``c + d*rho**i``), anything else is treated as divergent and returns INF.
    """
    n = len(v)
    if n == 0:
        return 0j
    if n < 3:
        return complex(v[-1])
    x0, x1, x2 = complex(v[-3]), complex(v[-2]), complex(v[-1])
    if x0 == x1 == x2:
        return x2
    d1, d2 = x1 - x0, x2 - x1
    if abs(d2) <= 1e-12 * max(abs(x1), abs(x2)):
        return x2
    if d1 == 0:
        return INF
    rho = d2 / d1
    if abs(rho) >= 1.0 - 1e-9:
        return INF
    return x2 + d2 * rho / (1.0 - rho)


@dataclass(frozen=True, eq=False)
class DiscElement:
    """Immutable element of F(D_q) truncated to K grid points.

    ``values[d]`` and ``devs[d]`` are length-K arrays for every stored
    s-degree ``d``; ``boundary[d]`` is f_d(0) (``INF`` when unbounded).
    ``valid`` counts the leading grid indices computed without substituting
    boundary values for reads past the truncation.
    """

    q: float
    K: int
    values: Mapping[int, np.ndarray]
    devs: Mapping[int, np.ndarray]
    boundary: Mapping[int, complex]
    approx_flag: bool = False
    valid: int = field(default=-1)

    def __post_init__(self):
        if self.valid < 0:
            object.__setattr__(self, "valid", self.K)
        for tab in list(self.values.values()) + list(self.devs.values()):
            if tab.shape != (self.K,):
                raise ParameterError("every coefficient table must have length K")
            tab.setflags(write=False)

    # -- inspection -------------------------------------------------------
    @property
    def degrees(self):
        return sorted(self.values)

    @property
    def maxdeg(self):
        return max((abs(d) for d in self.values), default=0)

    @property
    def bounded(self):
        return not any(_isinf(b) for b in self.boundary.values())

    def table(self, d):
        if d in self.values:
            return self.values[d]
        return np.zeros(self.K, dtype=np.complex128)

    def __repr__(self):
        degs = ", ".join(str(d) for d in self.degrees) or "-"
        flag = ", approx" if self.approx_flag else ""
        return f"DiscElement(q={self.q}, K={self.K}, degrees=[{degs}]{flag})"

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, DiscElement):
            return add(self, other)
        if np.isscalar(other):
            return add(self, make_generator("one", self.q, self.K) * other)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return scale(self, -1.0)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, DiscElement):
            return mul(self, other)
        if np.isscalar(other):
            return scale(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return scale(self, other)
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ParameterError("only non-negative integer powers are defined")
        out = make_generator("one", self.q, self.K)
        for _ in range(int(n)):
            out = mul(out, self)
        return out

    def star(self):
        return star(self)

    def sigma(self, alpha):
        return sigma(self, alpha)

    def to_matrix(self, K=None):
        return to_matrix(self, K)


def _build(q, K, entries, approx=False, valid=None):
    """entries: degree -> (values, devs, boundary)."""
    values, devs, boundary = {}, {}, {}
    for d, (val, dev, b) in entries.items():
        b = complex(b)
        if b == 0 and not np.any(val):
            continue
        values[int(d)] = np.array(val, dtype=np.complex128)
        devs[int(d)] = np.array(dev, dtype=np.complex128)
        boundary[int(d)] = b
    return DiscElement(q, K, values, devs, boundary, bool(approx), K if valid is None else max(int(valid), 0))


def from_tables(q, K, tables, boundary=None):
    """Element with given degree -> table map; boundaries default to 0."""
    q, K = check_params(q, K)
    boundary = boundary or {}
    entries = {}
    for d, tab in tables.items():
        tab = np.asarray(tab, dtype=np.complex128)
        if tab.shape != (K,):
            raise ParameterError(f"table for degree {d} must have length {K}")
        b = complex(boundary.get(d, 0.0))
        entries[d] = (tab, tab if _isinf(b) else tab - b, b)
    return _build(q, K, entries)


def from_matrix(mat, q):
    """Finitely supported element whose truncated matrix is ``mat`` (K x K)."""
    mat = np.asarray(mat, dtype=np.complex128)
    K = mat.shape[0]
    q, K = check_params(q, K)
    tables = {}
    for d in range(-(K - 1), K):
        diag = np.diagonal(mat, offset=-d)
        if np.any(diag):
            tab = np.zeros(K, dtype=np.complex128)
            tab[: diag.size] = diag
            tables[d] = tab
    return from_tables(q, K, tables)


def make_generator(kind, q, K, beta=None, k=None):
    """Normal form of a generator.

    ``kind`` is one of ``one, z, z_star, y, y_pow, s, s_star, indicator``;
    ``y_pow`` takes the real exponent ``beta`` (covering y^-1 and sqrt(y)),
    ``indicator`` the grid index ``k`` of the spectral projection.
    """
    q, K = check_params(q, K)
    i = np.arange(K, dtype=float)
    ones = np.ones(K, dtype=np.complex128)
    zeros = np.zeros(K, dtype=np.complex128)
    if kind == "one":
        return _build(q, K, {0: (ones, zeros, 1.0)})
    if kind == "y":
        kind, beta = "y_pow", 1.0
    if kind == "y_pow":
        if beta is None:
            raise ParameterError("y_pow needs an exponent beta")
        beta = float(beta)
        vals = (q ** (beta * i)).astype(np.complex128)
        if beta > 0:
            return _build(q, K, {0: (vals, vals, 0.0)})
        if beta == 0:
            return _build(q, K, {0: (ones, zeros, 1.0)})
        return _build(q, K, {0: (vals, vals, INF)})
    if kind in ("z", "z_star"):
        x = q ** (2.0 * (i + 1.0))
        root = np.sqrt(1.0 - x)
        dev = -x / (1.0 + root)
        zel = _build(q, K, {-1: (root.astype(np.complex128), dev.astype(np.complex128), 1.0)})
        return zel if kind == "z" else star(zel)
    if kind == "s":
        return _build(q, K, {1: (ones, zeros, 1.0)})
    if kind == "s_star":
        return _build(q, K, {-1: (ones, zeros, 1.0)})
    if kind == "indicator":
        if k is None or not (0 <= int(k) < K):
            raise ParameterError(f"indicator index must satisfy 0 <= k < K, got {k!r}")
        vals = zeros.copy()
        vals[int(k)] = 1.0
        return _build(q, K, {0: (vals, vals.copy(), 0.0)})
    raise ParameterError(f"unknown generator kind {kind!r}")


def zero(q, K):
    q, K = check_params(q, K)
    return DiscElement(q, K, {}, {}, {})


def _same(a, b):
    if a.q != b.q or a.K != b.K:
        raise ParameterError(f"parameter mismatch: (q={a.q}, K={a.K}) vs (q={b.q}, K={b.K})")


def _extended(a, d, pad):
    """Value/deviation tables padded past K with the substitution values."""
    b = a.boundary[d]
    if _isinf(b):
        val = np.concatenate([a.values[d], np.zeros(pad, dtype=np.complex128)])
        return val, val, 0j
    val = np.concatenate([a.values[d], np.full(pad, b, dtype=np.complex128)])
    dev = np.concatenate([a.devs[d], np.zeros(pad, dtype=np.complex128)])
    return val, dev, b


def _tail_exact(a, d):
    b = a.boundary[d]
    if _isinf(b):
        return False
    return abs(a.values[d][-1] - b) <= _TAIL_TOL * max(1.0, abs(b))


def _finish(q, K, acc, approx, valid):
    entries = {}
    for d, (val, dev, bnd, infinite) in acc.items():
        if not infinite:
            entries[d] = (bnd + dev, dev, bnd)
            continue
        b = tail_limit(val[:valid])
        entries[d] = (val, val if _isinf(b) else val - b, b)
    return _build(q, K, entries, approx, valid)


def _reliable(el, d):
    """(first index whose deviation is not exactly known, same for the value to double precision)."""
    if el.valid < el.K:
        return el.valid, el.valid
    b = el.boundary[d]
    dev_exact = not _isinf(b) and el.devs[d][-1] == 0
    return (math.inf if dev_exact else el.K), (math.inf if _tail_exact(el, d) else el.K)


def mul(a, b):
    """Normal-ordered product ``a * b``.

    Uses s*s = 1 and s s* = 1 - indicator(0) implicitly through the matrix
    picture.  Reads past the last grid point take the boundary value (zero for
    unbounded tables); when such a read is not exact (table not yet at its
    boundary, or unbounded) and meets a nonzero partner, ``approx_flag`` is
    set and ``valid`` is lowered to the first affected grid index.
    """
    _same(a, b)
    q, K = a.q, a.K
    pad = a.maxdeg + b.maxdeg + 2
    acc = {}
    approx = a.approx_flag or b.approx_flag
    valid = K
    for d1 in a.values:
        av, adev, a0 = _extended(a, d1, pad)
        a_inf = _isinf(a.boundary[d1])
        ra_dev, ra_val = _reliable(a, d1)
        for d2 in b.values:
            bv, bdev, b0 = _extended(b, d2, pad)
            b_inf = _isinf(b.boundary[d2])
            rb_dev, rb_val = _reliable(b, d2)
            val, dev, first, past = shift_product(av, adev, bv, bdev, a0, b0, d1, d2, K,
                                                  ra_dev, rb_dev, ra_val, rb_val)
            valid = min(valid, first)
            approx = approx or past
            d = d1 + d2
            if d not in acc:
                acc[d] = [np.zeros(K, dtype=np.complex128), np.zeros(K, dtype=np.complex128), 0j, False]
            slot = acc[d]
            slot[0] = slot[0] + val
            if a_inf or b_inf:
                slot[3] = True
            else:
                slot[1] = slot[1] + dev
                slot[2] = slot[2] + a0 * b0
    return _finish(q, K, acc, approx, valid)


def add(a, b):
    _same(a, b)
    q, K = a.q, a.K
    valid = min(a.valid, b.valid)
    acc = {}
    for el in (a, b):
        for d in el.values:
            if d not in acc:
                acc[d] = [np.zeros(K, dtype=np.complex128), np.zeros(K, dtype=np.complex128), 0j, False]
            slot = acc[d]
            slot[0] = slot[0] + el.values[d]
            bd = el.boundary[d]
            if _isinf(bd):
                slot[3] = True
            else:
                slot[1] = slot[1] + el.devs[d]
                slot[2] = slot[2] + bd
    return _finish(q, K, acc, a.approx_flag or b.approx_flag, valid)


def scale(a, c):
    c = complex(c)
    if c == 0:
        return zero(a.q, a.K)
    entries = {}
    for d in a.values:
        b = a.boundary[d]
        entries[d] = (a.values[d] * c, a.devs[d] * c, b if _isinf(b) else b * c)
    return _build(a.q, a.K, entries, a.approx_flag, a.valid)


def star(a):
    """Adjoint in normal form: degree d becomes -d with conjugated tables."""
    entries = {}
    for d in a.values:
        b = a.boundary[d]
        entries[-d] = (np.conj(a.values[d]), np.conj(a.devs[d]), b if _isinf(b) else b.conjugate())
    return _build(a.q, a.K, entries, a.approx_flag, a.valid)


def sigma(a, alpha):
    """Scaling automorphism: s -> q^-alpha s, s* -> q^alpha s*, f(y) fixed."""
    entries = {}
    for d in a.values:
        f = a.q ** (-float(alpha) * d)
        b = a.boundary[d]
        entries[d] = (a.values[d] * f, a.devs[d] * f, b if _isinf(b) else b * f)
    return _build(a.q, a.K, entries, a.approx_flag, a.valid)


def to_matrix(a, K=None):
    """Truncated matrix on e_0..e_{K-1}; K defaults to (and must not exceed) a.K."""
    n = a.K if K is None else int(K)
    if n > a.K:
        raise ParameterError(f"cannot realise a K={a.K} element on {n} basis vectors")
    out = np.zeros((n, n), dtype=np.complex128)
    for d, tab in a.values.items():
        length = n - abs(d)
        if length <= 0:
            continue
        i = np.arange(length)
        if d >= 0:
            out[i + d, i] = tab[:length]
        else:
            out[i, i - d] = tab[:length]
    return out


def distance(a, b, n=None):
    """Largest table discrepancy on the first ``n`` grid points (default: jointly valid range)."""
    _same(a, b)
    if n is None:
        n = min(a.valid, b.valid)
    worst = 0.0
    for d in set(a.values) | set(b.values):
        diff = a.table(d)[:n] - b.table(d)[:n]
        if diff.size:
            worst = max(worst, float(np.max(np.abs(diff))))
    return worst


@dataclass(frozen=True)
class CircleElement:
    """Trigonometric polynomial  sum_m coeffs[m] e^{imt}."""

    coeffs: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(m): complex(c) for m, c in self.coeffs.items() if complex(c) != 0}
        object.__setattr__(self, "coeffs", clean)

    def __add__(self, other):
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = out.get(m, 0j) + c
        return CircleElement(out)

    def __mul__(self, other):
        if isinstance(other, CircleElement):
            out = {}
            for m1, c1 in self.coeffs.items():
                for m2, c2 in other.coeffs.items():
                    out[m1 + m2] = out.get(m1 + m2, 0j) + c1 * c2
            return CircleElement(out)
        return CircleElement({m: c * other for m, c in self.coeffs.items()})

    __rmul__ = __mul__

    def star(self):
        return CircleElement({-m: c.conjugate() for m, c in self.coeffs.items()})

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return sum((c * np.exp(1j * m * t) for m, c in self.coeffs.items()), np.zeros_like(t, dtype=complex))

    def distance(self, other):
        keys = set(self.coeffs) | set(other.coeffs)
        return max((abs(self.coeffs.get(m, 0j) - other.coeffs.get(m, 0j)) for m in keys), default=0.0)


def symbol(a):
    """Boundary-value map onto trigonometric polynomials.

    Degree d goes to the mode e^{idt}: s maps to e^{it}, z (degree -1) to
    e^{-it}, the mode-lowering shift in the b_k basis.
    """
    coeffs = {}
    for d, b in a.boundary.items():
        if _isinf(b):
            raise UnboundedSymbolError(f"degree {d} coefficient is unbounded at the boundary")
        coeffs[d] = b
    return CircleElement(coeffs)


def random_f0(q, K, rng, support=None, maxdeg=2):
    """Random finitely supported element with tables confined to ``[0, support)``."""
    q, K = check_params(q, K)
    support = K if support is None else min(int(support), K)
    tables = {}
    for d in range(-maxdeg, maxdeg + 1):
        tab = np.zeros(K, dtype=np.complex128)
        tab[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
        tables[d] = tab
    return from_tables(q, K, tables)
