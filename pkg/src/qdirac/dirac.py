"""Twisted vector fields H, E, F and the Dirac operators built from them.

Twist 1 (weight alpha = 2) uses the sigma^1-twisted fields; twist 2
(alpha = 1) their sigma^2 counterparts.  Operators act on spinors, pairs of
mode arrays; the flat basis index of ``E_jk (x) e^{imt}`` in spinor
component ``s`` is ``s*N + ((m+M)*K + j)*K + k`` with ``N = (2M+1) K^2``.

Two readings of "the derivative of phi along a field" are provided:

* ``collapsed``: an algebra element  sum scalar * (T phi) * x,
* ``two_sided``: the operator  psi -> scalar * (T phi) psi x  (what a twisted
  commutator with the field actually produces).
"""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components
from scipy.sparse.linalg import svds

from . import calculus, disc, l2
from .calculus import PAD, TwistedDerivation, derivation_operator
from .errors import ConfigError, SizeError
from .rng import generator
from .su2 import SU2Element, classify_growth, from_disc, rho_tilde
from .twosided import TermSum, TwoSidedTerm

ALPHA_FOR_TWIST = {1: 2.0, 2: 1.0}
DEFAULT_CAP = 6000

# dense SVD for graph components up to this size, Lanczos beyond
_DENSE_NORM = 1200


def worker_count():
    """Worker pool size: QDIRAC_THREADS if set, else the CPU count (at most 8)."""
    env = os.environ.get("QDIRAC_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"QDIRAC_THREADS must be a positive integer, got {env!r}") from None
    return max(1, min(8, os.cpu_count() or 1))


@dataclass(frozen=True)
class DiracConfig:
    q: float = 0.5
    twist: int = 1
    alpha: float | None = None
    c: float = 1.0
    gamma_q: float | None = None
    K: int = 16
    M: int = 4
    keep_shift: bool = True
    size_cap: int = DEFAULT_CAP

    def __post_init__(self):
        try:
            disc.check_params(self.q, self.K)
        except Exception as exc:
            raise ConfigError(str(exc)) from None
        if self.twist not in ALPHA_FOR_TWIST:
            raise ConfigError(f"twist must be 1 or 2, got {self.twist!r}")
        want = ALPHA_FOR_TWIST[self.twist]
        if self.alpha is None:
            object.__setattr__(self, "alpha", want)
        elif float(self.alpha) != want:
            raise ConfigError(f"twist {self.twist} requires alpha = {want:g}, got {self.alpha:g}")
        object.__setattr__(self, "alpha", float(self.alpha))
        if self.gamma_q is None:
            object.__setattr__(self, "gamma_q", self.q / (1.0 + self.q))
        if self.gamma_q == 0:
            raise ConfigError("gamma_q must be nonzero")
        if not isinstance(self.M, (int, np.integer)) or self.M < 0:
            raise ConfigError(f"M must be a non-negative integer, got {self.M!r}")
        if self.size_cap < 1:
            raise ConfigError("size cap must be positive")

    @property
    def kc(self):
        """Coefficient size: tables are built with headroom past K."""
        return self.K + PAD

    @property
    def N(self):
        return (2 * self.M + 1) * self.K * self.K


# -- field terms ---------------------------------------------------------------

def _coefficient(name, q, K):
    g = lambda kind, **kw: disc.make_generator(kind, q, K, **kw)
    if name == "one":
        return g("one")
    if name == "z/y":
        return disc.mul(g("z"), g("y_pow", beta=-1))
    if name == "z*/y":
        return disc.mul(g("z_star"), g("y_pow", beta=-1))
    if name == "y.z":
        return disc.mul(g("y"), g("z"))
    if name == "y.z*":
        return disc.mul(g("y"), g("z_star"))
    if name == "y2":
        return g("y_pow", beta=2)
    return g({"z": "z", "z*": "z_star", "y": "y"}[name])


def field_terms(twist, q, gamma_q):
    """name -> list of (scalar, right coefficient, derivation kind, mode shift).

    Each term is  psi -> scalar * e^{i shift t} * (kind psi) * coefficient.
    Kind ``M2`` is left multiplication by y^-2 (no derivative).
    """
    if twist == 1:
        w = 1.0 / (1.0 + q)
        return {
            "H": [(1.0, "z/y", "T1", 0), (-1.0, "z*/y", "T2", 0), (1j, "y", "T0", 0)],
            "E": [(-1.0, "one", "T2", -1), (-1j * w / q, "z", "T0", -1)],
            "F": [(q, "one", "T1", 1), (-1j * q * w, "z*", "T0", 1)],
        }
    g = gamma_q
    return {
        "H": [(q, "z", "d_z", 0), (-1.0, "z*", "d_zbar", 0), (1j, "y2", "S0", 0)],
        "E": [(-1.0 / q, "y", "d_zbar", -1), (-1j * g, "y.z", "S0", -1), (-g / 2, "y.z", "M2", -1)],
        "F": [(q, "y", "d_z", 1), (-1j * g, "y.z*", "S0", 1), (g / 2, "y.z*", "M2", 1)],
    }


@lru_cache(maxsize=64)
def field_operators(twist, q, gamma_q, K):
    """The three fields as TermSums with coefficients built at size K."""
    out = {}
    for name, terms in field_terms(twist, q, gamma_q).items():
        acc = TermSum.zero(q, K)
        for scalar, coef, kind, shift in terms:
            op = TermSum.mode_shift(shift, q, K) @ TermSum.right(_coefficient(coef, q, K)) @ derivation_operator(kind, q, K)
            acc = acc + op * scalar
        out[name] = acc
    return out


def _derive(kind, phi):
    if kind == "M2":
        return None
    if kind in ("T0", "S0"):
        return calculus.t0_apply(phi, 1 if kind == "T0" else 2)
    return calculus.apply(TwistedDerivation(kind, phi.q, phi.K), phi)


def apply_HEF(phi, config, reading="collapsed"):
    """Derivatives of ``phi`` along the three fields.

    Returns ``{"H": ..., "E": ..., "F": ...}``: SU2Elements for the collapsed
    reading, lists of TwoSidedTerm for the two-sided reading.  Zeroth-order
    terms (kind ``M2``) twisted-commute with multiplication operators and do
    not contribute.
    """
    if isinstance(phi, disc.DiscElement):
        phi = from_disc(phi)
    if reading not in ("collapsed", "two_sided"):
        raise ConfigError(f"reading must be 'collapsed' or 'two_sided', got {reading!r}")
    q, K = phi.q, phi.K
    if q != config.q:
        raise ConfigError("element and configuration use different q")
    derived = {}
    out = {}
    for name, terms in field_terms(config.twist, q, config.gamma_q).items():
        collapsed = SU2Element(q, K, {})
        pieces = []
        for scalar, coef, kind, shift in terms:
            if kind not in derived:
                derived[kind] = _derive(kind, phi)
            d = derived[kind]
            if d is None:
                continue
            x = _coefficient(coef, q, K)
            for m, g in d.parts.items():
                if reading == "collapsed":
                    collapsed = collapsed + SU2Element(q, K, {m + shift: disc.mul(g, x) * scalar})
                else:
                    pieces.append(TwoSidedTerm(g, x, shift=m + shift, scalar=scalar))
        out[name] = collapsed if reading == "collapsed" else pieces
    return out


# -- assembled operators ----------------------------------------------------

def basis_grades(K, M):
    """Grade (j - k) - m of every basis vector of one spinor component."""
    m, j, k = np.meshgrid(np.arange(-M, M + 1), np.arange(K), np.arange(K), indexing="ij")
    return ((j - k) - m).ravel()


def spinor_weights(q, K, M, alpha):
    w = np.broadcast_to(l2.weights(q, K, alpha)[None, None, :], (2 * M + 1, K, K)).ravel()
    return np.concatenate([w, w])


def to_orthonormal(A, w_rows, w_cols=None):
    """Matrix in orthonormal coordinates: W^1/2 A W^-1/2."""
    w_cols = w_rows if w_cols is None else w_cols
    return (sp.diags(np.sqrt(w_rows)) @ sp.csr_matrix(A) @ sp.diags(1.0 / np.sqrt(w_cols))).tocsr()


@dataclass(frozen=True, eq=False)
class DiracMatrix:
    config: DiracConfig
    matrix: sp.csr_matrix
    grade: np.ndarray
    weights: np.ndarray
    blocks: dict = field(default_factory=dict)

    def orthonormal(self):
        return to_orthonormal(self.matrix, self.weights)

    def grade_leak(self):
        """Largest |entry| connecting different grades (exactly 0 when grading holds)."""
        A = self.matrix.tocoo()
        cross = self.grade[A.row] != self.grade[A.col]
        return float(np.max(np.abs(A.data[cross]))) if np.any(cross) else 0.0

    def interior(self, margin=2, mode_margin=1):
        """Boolean mask of basis vectors with j, k < K - margin and |m| <= M - mode_margin."""
        K, M = self.config.K, self.config.M
        m, j, k = np.meshgrid(np.arange(-M, M + 1), np.arange(K), np.arange(K), indexing="ij")
        mask = ((j < K - margin) & (k < K - margin) & (np.abs(m) <= M - mode_margin)).ravel()
        return np.concatenate([mask, mask])


def assemble_dirac(config):
    """Sparse matrix of  [[H - 2, cE], [cF, -H - 2]]  (the shift dropped when ``keep_shift`` is False)."""
    ops = field_operators(config.twist, config.q, config.gamma_q, config.kc)
    K, M, c = config.K, config.M, config.c
    H, E, F = (ops[n].matrix(K, M) for n in ("H", "E", "F"))
    eye = sp.identity(config.N, dtype=np.complex128, format="csr")
    s = 2.0 if config.keep_shift else 0.0
    D = sp.bmat([[H - s * eye, c * E], [c * F, -H - s * eye]], format="csr")
    D.eliminate_zeros()
    g = basis_grades(K, M)
    return DiracMatrix(config, D, np.concatenate([g, g]), spinor_weights(config.q, K, M, config.alpha),
                       {"H": H, "E": E, "F": F})


def dirac_reach(config):
    ops = field_operators(config.twist, config.q, config.gamma_q, config.kc)
    r = [op.reach() for op in ops.values()]
    return tuple(max(x[i] for x in r) for i in range(3))


def random_spinor(config, rng, margin, mode_margin):
    """Random spinor supported on the interior, drawn in orthonormal coordinates."""
    K, M, q, a = config.K, config.M, config.q, config.alpha
    up = l2.random_modes(q, K, M, a, rng, margin, mode_margin)
    lo = l2.random_modes(q, K, M, a, rng, margin, mode_margin)
    return np.concatenate([up.ravel(), lo.ravel()])


def _winner(x, y, w):
    return complex(np.sum(np.conj(x) * y * w))


def symmetry_residual(dm, npairs=20, seed=0, margin=None, mode_margin=None):
    """max over random interior pairs of |<D f, g> - <f, D g>| / (|Df||g| + |f||Dg|)."""
    cfg = dm.config
    r = dirac_reach(cfg)
    margin = max(r[0], r[1]) + 1 if margin is None else margin
    mode_margin = r[2] if mode_margin is None else mode_margin
    rng = generator(seed)
    w = dm.weights
    worst = 0.0
    for _ in range(npairs):
        f = random_spinor(cfg, rng, margin, mode_margin)
        g = random_spinor(cfg, rng, margin, mode_margin)
        Df, Dg = dm.matrix @ f, dm.matrix @ g
        lhs, rhs = _winner(Df, g, w), _winner(f, Dg, w)
        nrm = lambda v: np.sqrt(_winner(v, v, w).real)
        scale = nrm(Df) * nrm(g) + nrm(f) * nrm(Dg)
        worst = max(worst, abs(lhs - rhs) / scale if scale > 0 else 0.0)
    return worst


def hermitian_defect(dm, margin=0, mode_margin=0):
    """Relative size of B - B^H for the orthonormal matrix compressed to the interior."""
    B = dm.orthonormal()
    idx = np.flatnonzero(dm.interior(margin, mode_margin))
    C = B[idx][:, idx]
    scale = abs(C).max()
    return float(abs(C - C.conj().T).max() / scale) if scale > 0 else 0.0


# -- adjoint identities ---------------------------------------------------------

def adjoint_identities(alpha, q, K):
    """(name, A, B) with  <A f, g> = <f, B g>  on the dense domain, coefficients at K."""
    g = lambda kind, **kw: disc.make_generator(kind, q, K, **kw)
    z, zs, y = g("z"), g("z_star"), g("y")
    yinv, y2inv = g("y_pow", beta=-1), g("y_pow", beta=-2)
    L, R = TermSum.left, TermSum.right
    up, down = TermSum.mode_shift(1, q, K), TermSum.mode_shift(-1, q, K)
    idt = TermSum.d_dt(q, K) * 1j
    D = lambda kind: derivation_operator(kind, q, K)
    out = []
    if alpha == 2.0:
        T1, T2 = D("T1"), D("T2")
        sig = L(yinv) @ R(y)
        zy, zsy = disc.mul(z, yinv), disc.mul(zs, yinv)
        out += [
            ("T1*", T1, (q ** -2 / (1 + q)) * (R(z) @ L(yinv)) - (1 / q) * T2),
            ("T2*", T2, (q / (1 + q)) * (R(zs) @ L(yinv)) - q * T1),
            ("T21", R(zy) @ T1, -1.0 * sig - R(zsy) @ T2),
            ("T12", R(zsy) @ T2, -1.0 * sig - R(zy) @ T1),
            ("edt", R(zs) @ L(yinv) @ up @ idt,
             q ** -2 * (R(z) @ L(yinv) @ down) + q ** -2 * (R(z) @ L(yinv) @ down @ idt)),
            ("zdt*", R(z) @ L(yinv) @ down @ idt,
             -q ** 2 * (R(zs) @ L(yinv) @ up) + q ** 2 * (R(zs) @ L(yinv) @ up @ idt)),
        ]
        ops = field_operators(1, q, q / (1 + q), K)
        out += [("H_symmetric", ops["H"], ops["H"]),
                ("E_in_F*", ops["F"], ops["E"]),
                ("F_in_E*", ops["E"], ops["F"])]
    elif alpha == 1.0:
        dz, dzb = D("d_z"), D("d_zbar")
        yz, yzs = disc.mul(y, z), disc.mul(y, zs)
        a_op = 0.5 * (R(yz) @ L(y2inv) @ down) + R(yz) @ L(y2inv) @ down @ idt
        b_op = -0.5 * (R(yzs) @ L(y2inv) @ up) + R(yzs) @ L(y2inv) @ up @ idt
        h = q * (R(z) @ dz) - R(zs) @ dzb
        yy = R(g("y_pow", beta=2)) @ L(y2inv) @ idt
        out += [
            ("yopdz", q * (R(y) @ dz), (-1 / q) * (R(y) @ dzb)),
            ("qzdz", h, h),
            ("yydt", yy, yy),
            ("ef", b_op, a_op),
            ("ee", a_op, b_op),
        ]
        ops = field_operators(2, q, q / (1 + q), K)
        out += [("H1_symmetric", ops["H"], ops["H"]),
                ("E1_in_F1*", ops["F"], ops["E"]),
                ("F1_in_E1*", ops["E"], ops["F"])]
    else:
        raise ConfigError(f"no adjoint identities recorded for alpha = {alpha}")
    return out


def adjoint_residuals(config, npairs=100, seed=0, threshold=1e-10):
    """Check every recorded adjoint inclusion on random interior pairs."""
    K, M, q, a = config.K, config.M, config.q, config.alpha
    checks = []
    for i, (name, A, B) in enumerate(adjoint_identities(a, q, config.kc)):
        ra, rb = A.reach(), B.reach()
        margin = max(ra[0], ra[1], rb[0], rb[1]) + 1
        mm = max(ra[2], rb[2])
        rng = generator(seed, i)
        worst = 0.0
        for _ in range(npairs):
            f = l2.random_modes(q, K, M, a, rng, margin, mm)
            g = l2.random_modes(q, K, M, a, rng, margin, mm)
            Af, Bg = A.apply(f), B.apply(g)
            lhs, rhs = l2.mode_inner(Af, g, q, a), l2.mode_inner(f, Bg, q, a)
            scale = (l2.mode_norm(Af, q, a) * l2.mode_norm(g, q, a)
                     + l2.mode_norm(f, q, a) * l2.mode_norm(Bg, q, a))
            worst = max(worst, abs(lhs - rhs) / scale if scale > 0 else 0.0)
        checks.append({"name": name, "max_residual": worst, "threshold": threshold, "pass": worst <= threshold})
    return checks


# -- twisted commutators -----------------------------------------------------

def operator_norm(B):
    """Largest singular value of a sparse matrix.

    The matrix is split into the connected components of its row/column
    incidence graph (grading makes these small) and each block is solved
    densely; oversized blocks fall back to a Lanczos estimate.
    """
    B = sp.csr_matrix(B)
    if B.shape[0] == 0 or B.shape[1] == 0 or B.nnz == 0:
        return 0.0
    nr = B.shape[0]
    pattern = sp.csr_matrix((np.ones(B.nnz), B.indices, B.indptr), shape=B.shape)
    graph = sp.bmat([[None, pattern], [pattern.T, None]], format="csr")
    _, labels = connected_components(graph, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.flatnonzero(np.diff(labels[order])) + 1
    best = 0.0
    for idx in np.split(order, bounds):
        rows, cols = idx[idx < nr], idx[idx >= nr] - nr
        if rows.size == 0 or cols.size == 0:
            continue
        blk = B[rows][:, cols]
        if min(blk.shape) <= _DENSE_NORM:
            val = float(np.linalg.norm(blk.toarray(), 2))
        else:
            val = _lanczos_norm(blk)
        best = max(best, val)
    return best


def _lanczos_norm(B):
    n = min(B.shape)
    if B.shape[1] != n:
        B = B.conj().T
    v0 = np.ones(n) / np.sqrt(n)
    return float(svds(B, k=1, ncv=min(n - 1, 32), v0=v0, return_singular_vectors=False)[0])


def _pi(phi, K, M):
    P = rho_tilde(phi, check_bounded=False).matrix(K, M)
    return sp.block_diag([P, P], format="csr")


def field_norm(value, config, reading):
    """Operator norm, in orthonormal coordinates on interior columns, of one field derivative."""
    if reading == "collapsed":
        op = rho_tilde(value, check_bounded=False)
    else:
        if not value:
            return 0.0
        left = value[0].left
        op = TermSum(value, left.q, left.K)
    K, M = config.K, config.M
    A = op.matrix(K, M)
    w = spinor_weights(config.q, K, M, config.alpha)[: config.N]
    rj, rk, rm = op.reach()
    m, j, k = np.meshgrid(np.arange(-M, M + 1), np.arange(K), np.arange(K), indexing="ij")
    cols = np.flatnonzero(((j < K - rj) & (k < K - rk) & (np.abs(m) <= M - rm)).ravel())
    B = to_orthonormal(A, w)[:, cols]
    return operator_norm(B)


@dataclass
class CommutatorReport:
    rows: list
    growth: dict
    matrix: sp.csr_matrix | None = None


def _commutator_at(config, phi, norms=True):
    dm = assemble_dirac(config)
    K, M, w = config.K, config.M, config.twist
    D = dm.matrix
    P, Ps = _pi(phi, K, M), _pi(phi.sigma(w), K, M)
    DP, PsD = (D @ P).tocsr(), (Ps @ D).tocsr()
    composed = (DP - PsD).tocsr()

    c = config.c
    two = apply_HEF(phi, config, "two_sided")
    col = apply_HEF(phi, config, "collapsed")

    def block(ops):
        H, E, F = ops
        return sp.bmat([[H, c * E], [c * F, -H]], format="csr")

    mats = [TermSum(two[n], phi.q, phi.K).matrix(K, M) for n in ("H", "E", "F")]
    lemma = block(mats)
    collapsed = block([rho_tilde(col[n], check_bounded=False).matrix(K, M) for n in ("H", "E", "F")])
    if config.keep_shift:
        corr = 2.0 * (Ps - P)
        lemma = lemma + corr
        collapsed = collapsed + corr

    rD = dirac_reach(config)
    rP = rho_tilde(phi, check_bounded=False).reach()
    margin_j, margin_k = rD[0] + rP[0], rD[1] + rP[1]
    mode_margin = rD[2] + rP[2]
    m, j, k = np.meshgrid(np.arange(-M, M + 1), np.arange(K), np.arange(K), indexing="ij")
    mask = ((j < K - margin_j) & (k < K - margin_k) & (np.abs(m) <= M - mode_margin)).ravel()
    cols = np.flatnonzero(np.concatenate([mask, mask]))
    wt = dm.weights

    on = lambda A: to_orthonormal(A, wt)[:, cols]
    diff = on(composed - lemma)
    scale = max(abs(on(DP)).max() if DP.nnz else 0.0, abs(on(PsD)).max() if PsD.nnz else 0.0)
    resid = float(abs(diff).max() / scale) if scale > 0 and diff.nnz else 0.0
    row = {"K": K, "oracle_residual": resid, "interior_columns": int(cols.size)}
    if norms:
        row["norm_two_sided"] = operator_norm(on(composed))
        row["norm_collapsed"] = operator_norm(on(collapsed))
    return row, composed


def twisted_commutator(config, phi, sweep=None):
    """[D, pi(phi)]_sigma by composition and by the field-derivative assembly, across a K sweep.

    ``phi`` is an SU2Element built at a size of at least every K in the sweep
    plus the coefficient headroom, or a callable K -> SU2Element.
    """
    sweep = [config.K] if sweep is None else list(sweep)
    rows = []
    mat = None
    for K in sweep:
        cfg = replace(config, K=int(K))
        el = phi(cfg.kc) if callable(phi) else phi
        if el.K < cfg.K:
            raise ConfigError(f"element built at K={el.K} cannot be used at K={cfg.K}")
        row, mat = _commutator_at(cfg, el)
        rows.append(row)
    Ks = [r["K"] for r in rows]
    growth = {r: classify_growth(Ks, [row[f"norm_{r}"] for row in rows]) for r in ("two_sided", "collapsed")}
    return CommutatorReport(rows, growth, mat)


# -- spectra -----------------------------------------------------------------

@dataclass
class SpectrumReport:
    rows: list
    asymmetry: float
    max_imag: float
    block_sizes: dict


def _grade_spectra(config, grades=None):
    dm = assemble_dirac(config)
    B = dm.orthonormal()
    g_all = dm.grade
    wanted = sorted(set(g_all.tolist())) if grades is None else sorted(set(grades))
    sizes = {g: int(np.count_nonzero(g_all == g)) for g in wanted}
    big = {g: n for g, n in sizes.items() if n > config.size_cap}
    if big:
        g, n = max(big.items(), key=lambda kv: kv[1])
        raise SizeError(f"grade {g} block has dimension {n} > cap {config.size_cap}; "
                        f"restrict the grade or lower K/M", size=n, cap=config.size_cap)

    def solve(g):
        idx = np.flatnonzero(g_all == g)
        C = B[idx][:, idx].toarray()
        asym = float(np.max(np.abs(C - C.conj().T))) if C.size else 0.0
        scale = float(np.max(np.abs(C))) if C.size else 0.0
        vals = np.linalg.eigvalsh(0.5 * (C + C.conj().T)) if C.size else np.zeros(0)
        return g, vals, (asym / scale if scale > 0 else 0.0)

    order = sorted(wanted, key=lambda g: -sizes[g])
    with ThreadPoolExecutor(max_workers=worker_count()) as pool:
        results = list(pool.map(solve, order))
    results.sort(key=lambda r: r[0])
    return {g: v for g, v, _ in results}, max((a for _, _, a in results), default=0.0), sizes


def spectrum(config, grade=None, count=None, delta=True, delta_step=8):
    """Eigenvalues of the symmetrised grade blocks, with the change to K + delta_step."""
    grades = None if grade is None else ([grade] if np.isscalar(grade) else list(grade))
    by_grade, asym, sizes = _grade_spectra(config, grades)
    ref = None
    if delta:
        ref, _, _ = _grade_spectra(replace(config, K=config.K + delta_step), list(by_grade))
    rows = []
    for g, vals in by_grade.items():
        if count is not None:
            keep = np.sort(np.argsort(np.abs(vals), kind="stable")[: int(count)])
            vals = vals[keep]
        for i, lam in enumerate(vals):
            d = None
            if ref is not None:
                other = ref.get(g, np.zeros(0))
                d = float(np.min(np.abs(other - lam))) if other.size else float("inf")
            rows.append({"grade": int(g), "index": i, "eigenvalue": float(lam), "delta_K": d})
    rows.sort(key=lambda r: (r["eigenvalue"], r["grade"], r["index"]))
    return SpectrumReport(rows, asym, 0.0, sizes)


# -- gauge comparison between the two twists --------------------------------

def gauge_comparison(q, K, M, c=1.0, gamma_q=None):
    """Distance between D (alpha = 2) and D1 (alpha = 1) after the natural identifications.

    ``unitary``: both in orthonormal coordinates, which is transport by the
    unitary psi -> psi sqrt(y) between the two weighted spaces.
    ``sqrt_y``: D additionally conjugated by left multiplication with sqrt(y).
    Returned values are relative Frobenius distances; this is a measurement.
    """
    d2 = assemble_dirac(DiracConfig(q=q, twist=1, c=c, gamma_q=gamma_q, K=K, M=M))
    d1 = assemble_dirac(DiracConfig(q=q, twist=2, c=c, gamma_q=gamma_q, K=K, M=M))
    A2, A1 = d2.orthonormal(), d1.orthonormal()
    ref = sp.linalg.norm(A1)
    _, j, _ = np.meshgrid(np.arange(-M, M + 1), np.arange(K), np.arange(K), indexing="ij")
    s = np.tile(q ** (0.5 * j.ravel()), 2)
    S = sp.diags(s) @ A2 @ sp.diags(1.0 / s)
    return {
        "q": q, "K": K, "M": M,
        "unitary": float(sp.linalg.norm(A2 - A1) / ref),
        "sqrt_y": float(sp.linalg.norm(S - A1) / ref),
    }
