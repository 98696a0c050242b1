"""Quantum SU(2) functions as disc elements tensored with circle modes.

An :class:`SU2Element` is a finite sum  sum_m f_m (x) e^{imt}.  The disc
factor and the circle factor commute, so products convolve in the mode index.
Generators: ``a = z (x) 1`` and ``c = y (x) e^{it}``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import disc
from .disc import DiscElement
from .errors import ParameterError, UnboundedSymbolError
from .twosided import TermSum, TwoSidedTerm


@dataclass(frozen=True, eq=False)
class SU2Element:
    q: float
    K: int
    parts: Mapping[int, DiscElement] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for m, f in self.parts.items():
            if f.q != self.q or f.K != self.K:
                raise ParameterError("disc part built on different (q, K)")
            if f.values:
                clean[int(m)] = f
        object.__setattr__(self, "parts", clean)

    @property
    def modes(self):
        return sorted(self.parts)

    @property
    def approx_flag(self):
        return any(f.approx_flag for f in self.parts.values())

    @property
    def valid(self):
        return min((f.valid for f in self.parts.values()), default=self.K)

    @property
    def bounded(self):
        return all(f.bounded for f in self.parts.values())

    def part(self, m):
        return self.parts.get(m, disc.zero(self.q, self.K))

    def __repr__(self):
        return f"SU2Element(q={self.q}, K={self.K}, modes={self.modes})"

    def __add__(self, other):
        if np.isscalar(other):
            other = from_disc(disc.make_generator("one", self.q, self.K) * other)
        _same(self, other)
        out = dict(self.parts)
        for m, f in other.parts.items():
            out[m] = out[m] + f if m in out else f
        return SU2Element(self.q, self.K, out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, SU2Element):
            return su2_mul(self, other)
        if np.isscalar(other):
            return SU2Element(self.q, self.K, {m: f * other for m, f in self.parts.items()})
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return self * other
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, (int, np.integer)) or n < 0:
            raise ParameterError("only non-negative integer powers are defined")
        out = one(self.q, self.K)
        for _ in range(int(n)):
            out = su2_mul(out, self)
        return out

    def star(self):
        return su2_star(self)

    def sigma(self, alpha):
        return SU2Element(self.q, self.K, {m: disc.sigma(f, alpha) for m, f in self.parts.items()})

    def map_parts(self, fn):
        return SU2Element(self.q, self.K, {m: fn(f) for m, f in self.parts.items()})


def _same(a, b):
    if a.q != b.q or a.K != b.K:
        raise ParameterError(f"parameter mismatch: (q={a.q}, K={a.K}) vs (q={b.q}, K={b.K})")


def from_disc(f, mode=0):
    return SU2Element(f.q, f.K, {int(mode): f})


def zero(q, K):
    return SU2Element(q, K, {})


def one(q, K):
    return from_disc(disc.make_generator("one", q, K))


def circle(m, q, K):
    """The pure circle mode e^{imt}."""
    return from_disc(disc.make_generator("one", q, K), m)


def generators(q, K):
    """(a, c) with a = z (x) 1 and c = y (x) e^{it}."""
    return (from_disc(disc.make_generator("z", q, K), 0),
            from_disc(disc.make_generator("y", q, K), 1))


def su2_mul(a, b):
    _same(a, b)
    out = {}
    for m1, f in a.parts.items():
        for m2, g in b.parts.items():
            p = disc.mul(f, g)
            m = m1 + m2
            out[m] = out[m] + p if m in out else p
    return SU2Element(a.q, a.K, out)


def su2_star(a):
    return SU2Element(a.q, a.K, {-m: disc.star(f) for m, f in a.parts.items()})


def distance(a, b, n=None):
    _same(a, b)
    keys = set(a.parts) | set(b.parts)
    return max((disc.distance(a.part(m), b.part(m), n) for m in keys), default=0.0)


def rho_tilde(x, check_bounded=True):
    """Left multiplication by ``x`` on L2(D_q) (x) L2(S^1) as an operator."""
    if isinstance(x, DiscElement):
        x = from_disc(x)
    if check_bounded and not x.bounded:
        raise UnboundedSymbolError("multiplication operator of an unbounded element")
    unit = disc.make_generator("one", x.q, x.K)
    return TermSum([TwoSidedTerm(f, unit, shift=m) for m, f in x.parts.items()], x.q, x.K)


@dataclass(frozen=True, eq=False)
class SpinorVector:
    """Pair of mode arrays (upper, lower), each of shape (2M+1, K, K)."""

    q: float
    alpha: float
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        if np.shape(self.upper) != np.shape(self.lower):
            raise ParameterError("spinor components must have equal shapes")

    @property
    def K(self):
        return self.upper.shape[-1]

    @property
    def M(self):
        return (self.upper.shape[0] - 1) // 2

    def flat(self):
        return np.concatenate([np.ravel(self.upper), np.ravel(self.lower)])

    @classmethod
    def from_flat(cls, v, q, alpha, K, M):
        n = (2 * M + 1) * K * K
        shape = (2 * M + 1, K, K)
        return cls(q, alpha, np.reshape(v[:n], shape), np.reshape(v[n:], shape))

    def inner(self, other):
        from .l2 import mode_inner
        return (mode_inner(self.upper, other.upper, self.q, self.alpha)
                + mode_inner(self.lower, other.lower, self.q, self.alpha))

    def norm(self):
        return float(np.sqrt(max(self.inner(self).real, 0.0)))


def relation_residuals(q, K, M, margin=4, seed=0):
    """Defining relations of the algebra checked through the multiplication representation.

    Each entry is ``(name, relative residual)`` measured on a random mode array
    supported away from the truncation edge.
    """
    from . import l2
    from .rng import generator

    a, c = generators(q, K)
    A, C = rho_tilde(a), rho_tilde(c)
    As, Cs = rho_tilde(a.star()), rho_tilde(c.star())
    I = TermSum.identity(q, K)
    rels = {
        "ac=qca": (A @ C, q * (C @ A)),
        "ac*=qc*a": (A @ Cs, q * (Cs @ A)),
        "cc*=c*c": (C @ Cs, Cs @ C),
        "a*a+cc*=1": (As @ A + C @ Cs, I),
        "aa*+q2cc*=1": (A @ As + (q * q) * (C @ Cs), I),
    }
    psi = l2.random_modes(q, K, M, 2.0, generator(seed), margin=margin, mode_margin=min(margin, M))
    out = []
    for name, (lhs, rhs) in rels.items():
        u, v = lhs.apply(psi), rhs.apply(psi)
        scale = max(float(np.max(np.abs(u))), float(np.max(np.abs(v))), 1e-300)
        out.append((name, float(np.max(np.abs(u - v))) / scale))
    return out


def gamma1_report(phi, twist=1, sweep=(8, 16, 24), M=4, c=1.0, gamma_q=None, expr=None):
    """Norms of the twisted derivatives of ``phi`` and ``phi*`` across a K sweep.

    Both readings are measured: the collapsed element (a multiplication
    operator) and the two-sided operator.  ``phi`` must have been built at a
    K at least as large as every entry of the sweep, or ``expr`` (a callable
    K -> SU2Element) must be given to rebuild it per K.
    """
    from . import dirac

    rows = []
    for K in sweep:
        cfg = dirac.DiracConfig(q=phi.q, twist=twist, c=c, gamma_q=gamma_q, K=int(K), M=M)
        el = expr(cfg.kc) if expr is not None else phi
        row = {"K": int(K)}
        for label, x in (("phi", el), ("phi_star", el.star())):
            for reading in ("collapsed", "two_sided"):
                res = dirac.apply_HEF(x, cfg, reading)
                for name, val in res.items():
                    row[f"{label}.{name}.{reading}"] = dirac.field_norm(val, cfg, reading)
        rows.append(row)
    keys = [k for k in rows[0] if k != "K"]
    fits = {k: classify_growth([r["K"] for r in rows], [r[k] for r in rows]) for k in keys}
    return {"q": phi.q, "twist": twist, "rows": rows, "growth": fits}


def classify_growth(Ks, norms, tol=0.05):
    """Fit log(norm) ~ a + b K; classify as zero, bounded or growing.

    The exponent is reported as the per-index growth rate exp(b).
    """
    Ks = np.asarray(Ks, dtype=float)
    norms = np.asarray(norms, dtype=float)
    if np.all(norms <= 1e-300) or len(Ks) == 0:
        return {"class": "zero", "rate": 1.0, "slope": 0.0}
    if len(Ks) < 2 or np.any(norms <= 0):
        return {"class": "bounded", "rate": 1.0, "slope": 0.0}
    slope = float(np.polyfit(Ks, np.log(norms), 1)[0])
    rate = float(np.exp(slope))
    if slope > tol:
        cls = "growing"
    elif slope < -tol:
        cls = "decaying"
    else:
        cls = "bounded"
    return {"class": cls, "rate": rate, "slope": slope}
