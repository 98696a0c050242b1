"""Twisted derivations of the quantum disc and the circle derivative.

``d_z f = -(1/(1-q^2)) y^-2 [z*, f]`` and ``d_zbar f = (1/(1-q^2)) y^-2 [z, f]``
are sigma^2-twisted; ``T1 = y d_z`` and ``T2 = y d_zbar`` are sigma^1-twisted.
``T0 = y^-1 d/dt`` and ``S0 = y^-2 d/dt`` act through the circle mode index.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import disc
from .disc import DiscElement, _isinf
from .errors import DomainError, ParameterError
from .su2 import SU2Element, from_disc, rho_tilde
from .twosided import TermSum, TwoSidedTerm

# kind -> (twist exponent, power of y^-1, commutes with z* / z / circle)
_KINDS = {
    "d_z": (2, 2, "z_star"),
    "d_zbar": (2, 2, "z"),
    "T1": (1, 1, "z_star"),
    "T2": (1, 1, "z"),
    "T0": (1, 1, "t"),
    "S0": (2, 2, "t"),
}

# operator headroom: coefficient tables are built this far past the vector size
PAD = 8

# ratio of tail to head sup beyond which a table counts as growing
_GROWTH = 1e6


@dataclass(frozen=True)
class TwistedDerivation:
    kind: str
    q: float
    K: int

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ParameterError(f"unknown derivation {self.kind!r}; choose from {sorted(_KINDS)}")
        disc.check_params(self.q, self.K)

    @property
    def twist(self):
        return _KINDS[self.kind][0]

    @property
    def order(self):
        return _KINDS[self.kind][1]

    def __call__(self, f):
        return apply(self, f)

    def operator(self, K=None):
        """The derivation acting on mode arrays of size K (coefficients built with headroom)."""
        return derivation_operator(self.kind, self.q, (self.K if K is None else K) + PAD)


def _prefactor(kind, q):
    return -1.0 / (1.0 - q * q) if _KINDS[kind][2] == "z_star" else 1.0 / (1.0 - q * q)


def derivation_operator(kind, q, K):
    """TermSum for ``kind`` (also ``M2``: left multiplication by y^-2) with coefficients at K."""
    one = disc.make_generator("one", q, K)
    if kind == "M2":
        return TermSum.left(disc.make_generator("y_pow", q, K, beta=-2))
    _, order, var = _KINDS[kind]
    yinv = disc.make_generator("y_pow", q, K, beta=-order)
    if var == "t":
        return TermSum([TwoSidedTerm(yinv, one, dt=1)], q, K)
    w = disc.make_generator(var, q, K)
    pre = _prefactor(kind, q)
    return TermSum([TwoSidedTerm(disc.mul(yinv, w), one, scalar=pre),
                    TwoSidedTerm(yinv, w, scalar=-pre)], q, K)


def check_domain(f, name="derivation"):
    """Raise DomainError when a result table is unbounded or grows toward the truncation edge."""
    for d in f.degrees:
        if _isinf(f.boundary[d]):
            raise DomainError(f"{name} leaves the domain: degree {d} is unbounded", derivation=name, degree=d)
        n = f.valid
        tab = np.abs(f.values[d][:n])
        if n < 8 or tab[-1] == 0:
            continue
        head = float(np.max(tab[: n // 2]))
        tail = float(np.max(tab[n // 2:]))
        if tail > _GROWTH * max(head, abs(f.boundary[d]), 1e-300):
            raise DomainError(f"{name} leaves the domain: degree {d} grows toward the edge",
                              derivation=name, degree=d)
    return f


def _apply_disc(deriv, f, check=True):
    q, K = f.q, f.K
    _, order, var = _KINDS[deriv.kind]
    if var == "t":
        return disc.zero(q, K)
    w = disc.make_generator(var, q, K)
    comm = disc.mul(w, f) - disc.mul(f, w)
    yinv = disc.make_generator("y_pow", q, K, beta=-order)
    out = _prefactor(deriv.kind, q) * disc.mul(yinv, comm)
    return check_domain(out, deriv.kind) if check else out


def apply(deriv, f, check=True):
    """Apply a twisted derivation to a DiscElement or, mode by mode, to an SU2Element."""
    if isinstance(f, DiscElement):
        return _apply_disc(deriv, f, check)
    if not isinstance(f, SU2Element):
        raise ParameterError("derivations act on DiscElement or SU2Element")
    if _KINDS[deriv.kind][2] == "t":
        return t0_apply(f, deriv.order)
    return f.map_parts(lambda g: _apply_disc(deriv, g, check))


def t0_apply(f, kind=1):
    """``y^-kind d/dt``: the mode-m part is multiplied by (i m) and by y^-kind on the left."""
    if isinstance(f, DiscElement):
        f = from_disc(f)
    if kind not in (1, 2):
        raise ParameterError("the circle derivative comes with y^-1 or y^-2")
    yinv = disc.make_generator("y_pow", f.q, f.K, beta=-kind)
    return SU2Element(f.q, f.K, {m: disc.mul(yinv, g) * (1j * m) for m, g in f.parts.items() if m != 0})


def _as_su2(f):
    return from_disc(f) if isinstance(f, DiscElement) else f


def _matrices(f, n):
    return {m: disc.to_matrix(g, n) for m, g in _as_su2(f).parts.items()}


def leibniz_residual(deriv, f, g):
    """Relative defect of  D(fg) = D(f) g + sigma^w(f) D(g)  on the jointly valid grid."""
    fg = _as_su2(f) * _as_su2(g)
    lhs = apply(deriv, fg, check=False)
    t1 = apply(deriv, _as_su2(f), check=False) * _as_su2(g)
    t2 = _as_su2(f).sigma(deriv.twist) * apply(deriv, _as_su2(g), check=False)
    n = min(x.valid for x in (lhs, t1, t2))
    if n <= 0:
        raise ParameterError("no exactly computed grid points left; increase K")
    pieces = [_matrices(x, n) for x in (lhs, t1, t2)]
    modes = set().union(*pieces)
    worst, scale = 0.0, 0.0
    zero = np.zeros((n, n))
    for m in modes:
        a, b, c = (p.get(m, zero) for p in pieces)
        worst = max(worst, float(np.max(np.abs(a - b - c))))
        scale = max(scale, float(np.max(np.abs(a))), float(np.max(np.abs(b))), float(np.max(np.abs(c))))
    return worst / scale if scale > 0 else 0.0


@dataclass(frozen=True)
class Lemma1Result:
    composed: np.ndarray
    closed: np.ndarray
    residual: float


def lemma1_commutator(deriv, x, f, psi, alpha=None):
    """Twisted commutator of  psi -> T(psi) x  with left multiplication by f, two ways.

    ``composed`` applies the operators in sequence, ``closed`` evaluates
    psi -> (T f) psi x.  ``psi`` is a mode array that should vanish near the
    truncation edge.  The residual is relative to the two composed pieces.
    """
    psi = np.asarray(psi, dtype=np.complex128)
    K = psi.shape[-1]
    f = _as_su2(f)
    if x.K < K or f.K < K:
        raise ParameterError("coefficients must be built at least at the vector size")
    T = deriv.operator(K)
    X = TermSum.right(x)
    pf = rho_tilde(f, check_bounded=False)
    pfs = rho_tilde(f.sigma(deriv.twist), check_bounded=False)
    first = X.apply(T.apply(pf.apply(psi)))
    second = pfs.apply(X.apply(T.apply(psi)))
    composed = first - second
    tf = apply(deriv, f)
    unit = disc.make_generator("one", f.q, f.K)
    closed_op = TermSum([TwoSidedTerm(g, unit, shift=m) for m, g in tf.parts.items()], f.q, f.K)
    closed = X.apply(closed_op.apply(psi))
    scale = max(float(np.max(np.abs(first))), float(np.max(np.abs(second))), 1e-300)
    return Lemma1Result(composed, closed, float(np.max(np.abs(composed - closed))) / scale)
