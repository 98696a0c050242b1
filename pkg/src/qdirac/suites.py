"""Verification suites: algebra, calculus, adjoints, dirac.

Each suite returns ``{suite, q, alpha, K, M, checks}`` where every check is
``{name, max_residual, threshold, pass}``.  Residuals are relative to the
size of the compared quantities unless the identity is an exact table
equality.  Independent groups run on the worker pool; results are put back
in a fixed order.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import calculus, dirac, disc, l2, su2
from .calculus import TwistedDerivation
from .config import RunConfig
from .errors import DomainError
from .rng import generator

EXACT = 1e-12
LOOSE = 1e-10
SUITES = ("algebra", "calculus", "adjoints", "dirac", "all")

# stream ids keep the random draws of different groups independent
_STREAM = {"algebra": 1, "leibniz": 2, "lemma": 3, "words": 4}


def check(name, residual, threshold=EXACT):
    r = float(residual)
    return {"name": name, "max_residual": r, "threshold": threshold, "pass": bool(r <= threshold)}


def _rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = max(float(np.max(np.abs(a), initial=0.0)), float(np.max(np.abs(b), initial=0.0)))
    return float(np.max(np.abs(a - b), initial=0.0)) / scale if scale > 0 else 0.0


def _parallel(jobs):
    with ThreadPoolExecutor(max_workers=dirac.worker_count()) as pool:
        futures = [pool.submit(fn) for fn in jobs]
        out = []
        for f in futures:
            out.extend(f.result())
    return out


# -- algebra -------------------------------------------------------------------

def _relations(q, K):
    g = lambda kind, **kw: disc.make_generator(kind, q, K, **kw)
    z, zs, y, one = g("z"), g("z_star"), g("y"), g("one")
    s, ss = g("s"), g("s_star")
    zero = disc.zero(q, K)
    d = disc.distance
    return [
        check("zz*-q2z*z=1-q2", d(z * zs - (q * q) * (zs * z) - (1 - q * q) * one, zero)),
        check("zy=qyz", d(z * y, q * (y * z))),
        check("yz*=qz*y", d(y * zs, q * (zs * y))),
        check("z*z=1-y2", d(zs * z, one - y * y)),
        check("s*s=1", d(ss * s, one)),
        check("ss*=1-P0", d(s * ss, one - g("indicator", k=0))),
        check("star(z)=z*", d(disc.star(z), zs)),
        check("sigma(s)=q^-a s", max(d(disc.sigma(s, a), q ** -a * s) for a in (1.0, 2.0))),
        check("sigma(y)=y", max(d(disc.sigma(y, a), y) for a in (1.0, 2.0))),
        check("symbol(z)", disc.symbol(z).distance(disc.CircleElement({-1: 1.0}))),
        check("symbol(y)=0", disc.symbol(y).distance(disc.CircleElement({}))),
    ]


def _random_algebra(q, K, rng, trials=20):
    """Identities on random finitely supported elements."""
    supp = max(1, K // 4)
    worst = {k: 0.0 for k in ("star involution", "star antimultiplicative", "associativity",
                              "product matrix", "sigma multiplicative", "star-sigma", "symbol homomorphism")}
    for _ in range(trials):
        a, b, c = (disc.random_f0(q, K, rng, support=supp) for _ in range(3))
        worst["star involution"] = max(worst["star involution"], disc.distance(disc.star(disc.star(a)), a))
        worst["star antimultiplicative"] = max(worst["star antimultiplicative"],
                                               disc.distance(disc.star(a * b), disc.star(b) * disc.star(a)))
        n = K - 2 * a.maxdeg - 2 * b.maxdeg - 2 * c.maxdeg
        A, B, C = (disc.to_matrix(x) for x in (a, b, c))
        worst["associativity"] = max(worst["associativity"],
                                     _rel(disc.to_matrix((a * b) * c)[:n, :n], disc.to_matrix(a * (b * c))[:n, :n]))
        worst["product matrix"] = max(worst["product matrix"], _rel(disc.to_matrix(a * b)[:n, :n], (A @ B)[:n, :n]))
        for al in (1.0, 2.0):
            worst["sigma multiplicative"] = max(worst["sigma multiplicative"],
                                                _rel_el(disc.sigma(a * b, al), disc.sigma(a, al) * disc.sigma(b, al)))
            worst["star-sigma"] = max(worst["star-sigma"],
                                      _rel_el(disc.star(disc.sigma(a, al)), disc.sigma(disc.star(a), -al)))
    # bounded elements with nonzero boundary values for the symbol check
    g = lambda kind: disc.make_generator(kind, q, K)
    words = [g("z"), g("z_star"), g("s"), g("y") + g("z"), g("z") * g("z_star") + g("s_star")]
    for x in words:
        for w in words:
            worst["symbol homomorphism"] = max(worst["symbol homomorphism"],
                                               disc.symbol(x * w).distance(disc.symbol(x) * disc.symbol(w)))
    return [check(k, v) for k, v in worst.items()]


def _rel_el(a, b):
    scale = max((float(np.max(np.abs(t))) for t in list(a.values.values()) + list(b.values.values())), default=0.0)
    return disc.distance(a, b) / scale if scale > 0 else 0.0


def _hilbert(q, K, rng, alpha, trials=20):
    out = []
    for al in (1.0, 2.0):
        one = disc.make_generator("one", q, K)
        I = l2.integrate(one, al)
        exact = (1 - q) / (1 - q ** al)
        out.append(check(f"integral(one), alpha={al:g}", max(0.0, abs(I.value - exact) - I.tail_bound)))
    ind = l2.integrate(disc.make_generator("indicator", q, K, k=0), alpha).value
    out.append(check("integral(P0)=1-q", abs(ind - (1 - q))))
    sy = disc.make_generator("s", q, K) * disc.make_generator("y", q, K)
    out.append(check("integral(s y)=0", abs(l2.integrate(sy, alpha).value)))
    e01 = l2.matrix_unit(0, 1, q, K, alpha)
    out.append(check("<E01,E01>", abs(l2.inner(e01, e01) - (1 - q) * q ** alpha)))
    out.append(check("<E01,E10>", abs(l2.inner(e01, l2.matrix_unit(1, 0, q, K, alpha)))))

    supp, margin = max(1, K // 4), K // 2
    worst = {"lmul *-representation": 0.0, "rmul adjoint": 0.0, "modular identity": 0.0,
             "left/right commute": 0.0, "positivity": 0.0}
    for _ in range(trials):
        x = disc.random_f0(q, K, rng, support=supp)
        w = disc.random_f0(q, K, rng, support=supp)
        f = l2.random_vector(q, K, alpha, rng, margin=margin)
        g = l2.random_vector(q, K, alpha, rng, margin=margin)
        lhs, rhs = l2.inner(l2.lmul(x, f), g), l2.inner(f, l2.lmul(disc.star(x), g))
        worst["lmul *-representation"] = max(worst["lmul *-representation"], _rel(lhs, rhs))
        lhs, rhs = l2.inner(l2.rmul(x, f), g), l2.inner(f, l2.rmul(disc.star(disc.sigma(x, alpha)), g))
        worst["rmul adjoint"] = max(worst["rmul adjoint"], _rel(lhs, rhs))
        i1 = l2.integrate(x * w, alpha)
        i2 = l2.integrate(disc.sigma(w, alpha) * x, alpha)
        worst["modular identity"] = max(worst["modular identity"],
                                        max(0.0, _rel(i1.value, i2.value) - i1.tail_bound - i2.tail_bound))
        worst["left/right commute"] = max(worst["left/right commute"],
                                          _rel(l2.lmul(x, l2.rmul(w, f)).coeffs, l2.rmul(w, l2.lmul(x, f)).coeffs))
        # positivity: record a violation as residual 1
        if not f.norm() > 0:
            worst["positivity"] = 1.0
    out += [check(k, v) for k, v in worst.items()]
    return out


def algebra(cfg: RunConfig):
    q, K = cfg.q, cfg.K
    rng = generator(cfg.seed, _STREAM["algebra"])
    rng2 = generator(cfg.seed, _STREAM["algebra"] + 100)
    jobs = [
        lambda: _relations(q, K),
        lambda: _random_algebra(q, K, rng),
        lambda: _hilbert(q, K, rng2, cfg.alpha),
        lambda: [check(f"su2 {name}", r) for name, r in su2.relation_residuals(q, K, cfg.M, cfg.margin, cfg.seed)],
    ]
    return _report("algebra", cfg, _parallel(jobs))


# -- calculus ------------------------------------------------------------------

LEIBNIZ_KINDS = ("T1", "T2", "T0", "d_z", "d_zbar", "S0")


def leibniz_pairs(q, K, n, seed, kind):
    """Seeded random pairs; circle-derivative kinds get each factor on a random mode."""
    rng = generator(seed, _STREAM["leibniz"] * 1000 + LEIBNIZ_KINDS.index(kind))
    supp = max(1, K // 2)
    out = []
    for _ in range(n):
        f = disc.random_f0(q, K, rng, support=supp)
        g = disc.random_f0(q, K, rng, support=supp)
        if kind in ("T0", "S0"):
            m1, m2 = (int(m) for m in rng.integers(-2, 3, size=2))
            out.append((su2.from_disc(f, m1), su2.from_disc(g, m2)))
        else:
            out.append((f, g))
    return out


def leibniz_checks(q, K, npairs, seed, kinds=LEIBNIZ_KINDS):
    def run(kind):
        D = TwistedDerivation(kind, q, K)
        worst = max((calculus.leibniz_residual(D, f, g) for f, g in leibniz_pairs(q, K, npairs, seed, kind)),
                    default=0.0)
        return [check(f"leibniz {kind} (sigma^{D.twist})", worst)]

    return _parallel([lambda k=k: run(k) for k in kinds])


def _closed_forms(q, K):
    g = lambda kind, **kw: disc.make_generator(kind, q, K, **kw)
    z, zs, y, one = g("z"), g("z_star"), g("y"), g("one")
    D = lambda kind: TwistedDerivation(kind, q, K)
    a, c = su2.generators(q, K)
    out = [
        check("T1(z)=y", disc.distance(D("T1")(z), y)),
        check("T2(z*)=y", disc.distance(D("T2")(zs), y)),
        check("d_z(z)=1", disc.distance(D("d_z")(z), one)),
        check("d_zbar(z*)=1", disc.distance(D("d_zbar")(zs), one)),
        check("d_z(z*)=0", disc.distance(D("d_z")(zs), disc.zero(q, K))),
        check("T0(c)=i", su2.distance(calculus.t0_apply(c, 1), su2.circle(1, q, K) * 1j)),
    ]
    try:
        D("d_z")(y)
        guarded = 1.0
    except DomainError:
        guarded = 0.0
    out.append(check("d_z(y) rejected as outside the domain", guarded))
    return out


def _lemma_checks(q, K, seed, margin):
    rng = generator(seed, _STREAM["lemma"])
    Kc = K + calculus.PAD
    g = lambda kind, **kw: disc.make_generator(kind, q, Kc, **kw)
    coefs = {"z/y": g("z") * g("y_pow", beta=-1), "z*/y": g("z_star") * g("y_pow", beta=-1),
             "y": g("y"), "z": g("z"), "z*": g("z_star"), "y.z": g("y") * g("z"), "one": g("one")}
    a, c = su2.generators(q, Kc)
    elements = {1: [a, c, a.star(), c.star(), a.star() * c], 2: [a, a.star(), a * a.star()]}
    psi = l2.random_modes(q, K, 3, 2.0, rng, margin=margin, mode_margin=1)
    out = []
    for kind in LEIBNIZ_KINDS:
        D = TwistedDerivation(kind, q, Kc)
        worst = 0.0
        for x in coefs.values():
            for f in elements[D.twist]:
                worst = max(worst, calculus.lemma1_commutator(D, x, f, psi).residual)
        out.append(check(f"twisted commutator closed form {kind}", worst))
    return out


def calculus_suite(cfg: RunConfig, npairs=200):
    q, K = cfg.q, cfg.K
    jobs = [lambda: _closed_forms(q, K), lambda: _lemma_checks(q, K, cfg.seed, cfg.margin)]
    checks = _parallel(jobs) + leibniz_checks(q, K, npairs, cfg.seed)
    return _report("calculus", cfg, checks)


# -- adjoints ------------------------------------------------------------------

def adjoints(cfg: RunConfig, npairs=100):
    checks = []
    for twist in (1, 2):
        dc = cfg.dirac(twist=twist)
        for ch in dirac.adjoint_residuals(dc, npairs=npairs, seed=cfg.seed, threshold=LOOSE):
            checks.append(dict(ch, name=f"alpha={dc.alpha:g} {ch['name']}"))
    return _report("adjoints", cfg, checks)


# -- dirac ---------------------------------------------------------------------

def random_words(q, K, n, seed, letters=("a", "a*", "c", "c*"), maxlen=3):
    """``n`` seeded words in the generators, returned as (text, element)."""
    rng = generator(seed, _STREAM["words"])
    a, c = su2.generators(q, K)
    table = {"a": a, "a*": a.star(), "c": c, "c*": c.star()}
    out = []
    for _ in range(n):
        length = int(rng.integers(1, maxlen + 1))
        picks = [letters[int(i)] for i in rng.integers(0, len(letters), size=length)]
        el = table[picks[0]]
        for p in picks[1:]:
            el = el * table[p]
        out.append((" * ".join(picks), el))
    return out


def commutator_oracle(cfg: RunConfig, Ks=None, nwords=20):
    """Worst composed-vs-assembled residual for the generators and random words, per twist."""
    Ks = [cfg.K] if Ks is None else list(Ks)
    checks = []
    for twist in (1, 2):
        letters = ("a", "a*", "c", "c*") if twist == 1 else ("a", "a*")
        worst = 0.0
        for K in Ks:
            dc = cfg.dirac(twist=twist, K=K)
            a, c = su2.generators(cfg.q, dc.kc)
            named = {"a": a, "a*": a.star(), "c": c, "c*": c.star()}
            elems = [named[x] for x in letters] + [el for _, el in random_words(cfg.q, dc.kc, nwords, cfg.seed, letters)]
            for el in elems:
                row, _ = dirac._commutator_at(dc, el, norms=False)
                worst = max(worst, row["oracle_residual"])
        checks.append(check(f"twisted commutator oracle, twist {twist}, K in {Ks}", worst, LOOSE))
    return checks


def collapsed_closed_forms(q, K, M=2):
    dc = dirac.DiracConfig(q=q, twist=1, K=K, M=M)
    Kc = dc.kc
    a, c = su2.generators(q, Kc)
    z = disc.make_generator("z", q, Kc)
    y = disc.make_generator("y", q, Kc)
    ra, rc = dirac.apply_HEF(a, dc), dirac.apply_HEF(c, dc)
    return [
        check("H(a)=z/q", _su2_matrix_gap(ra["H"], su2.from_disc(z * (1 / q)), K)),
        check("E(a)=0", _su2_matrix_gap(ra["E"], su2.zero(q, Kc), K)),
        check("F(a)=q y (x) e^{it}", _su2_matrix_gap(ra["F"], su2.from_disc(y * q, 1), K)),
        check("E(c)=z/q", _su2_matrix_gap(rc["E"], su2.from_disc(z * (1 / q)), K)),
    ]


def _su2_matrix_gap(x, ref, n):
    """Largest entry gap of the truncated matrices, mode by mode (brute-force oracle)."""
    worst = 0.0
    for m in set(x.parts) | set(ref.parts):
        worst = max(worst, float(np.max(np.abs(disc.to_matrix(x.part(m), n) - disc.to_matrix(ref.part(m), n)))))
    return worst


def dirac_suite(cfg: RunConfig, Ks=None, nwords=20):
    checks = []
    for twist in (1, 2):
        dc = cfg.dirac(twist=twist)
        dm = dirac.assemble_dirac(dc)
        tag = f"twist {twist} (alpha={dc.alpha:g})"
        checks.append(check(f"symmetric on interior spinors, {tag}",
                            dirac.symmetry_residual(dm, npairs=20, seed=cfg.seed), LOOSE))
        checks.append(check(f"grade blocks decouple, {tag}", dm.grade_leak(), 0.0))
    checks += collapsed_closed_forms(cfg.q, cfg.K)
    checks += commutator_oracle(cfg, Ks, nwords)
    return _report("dirac", cfg, checks)


def exploratory(cfg: RunConfig):
    """Measurements with no pass/fail gate: gauge distance and derivative norm growth."""
    sweep = list(cfg.sweep) if cfg.sweep else [max(4, cfg.K // 2), cfg.K]
    Kmax = max(sweep) + calculus.PAD
    a, c = su2.generators(cfg.q, Kmax)
    out = {"gauge": dirac.gauge_comparison(cfg.q, cfg.K, cfg.M, cfg.c, cfg.gamma_q), "derivative_norms": {}}
    for name, el in (("a", a), ("c", c)):
        out["derivative_norms"][name] = su2.gamma1_report(el, twist=1, sweep=sweep, M=cfg.M, c=cfg.c)
    return out


# -- driver --------------------------------------------------------------------

def _report(suite, cfg, checks):
    return {"suite": suite, "q": cfg.q, "alpha": cfg.alpha, "K": cfg.K, "M": cfg.M, "seed": cfg.seed,
            "checks": checks}


def run(suite, cfg: RunConfig, npairs=None, explore=False):
    if suite == "algebra":
        return algebra(cfg)
    if suite == "calculus":
        return calculus_suite(cfg, npairs or 200)
    if suite == "adjoints":
        return adjoints(cfg, npairs or 100)
    if suite == "dirac":
        return dirac_suite(cfg)
    if suite == "all":
        parts = [algebra(cfg), calculus_suite(cfg, npairs or 200), adjoints(cfg, npairs or 100), dirac_suite(cfg)]
        checks = [dict(ch, name=f"{p['suite']}: {ch['name']}") for p in parts for ch in p["checks"]]
        rep = _report("all", cfg, checks)
        if explore:
            rep["exploratory"] = exploratory(cfg)
        return rep
    raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")


def passed(report):
    return all(ch["pass"] for ch in report["checks"])
