"""``qdirac`` command line: verify, spectrum, commutator, symbol.

Exit codes: 0 all checks pass, 1 a check failed, 2 bad configuration or
expression, 3 a resource cap was hit, 4 an element left a domain.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import __version__, dirac, disc, expr, su2, suites
from .config import load
from .errors import ConfigError, DomainError, ParseError, SizeError, UnboundedSymbolError

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_CAP, EXIT_DOMAIN = 0, 1, 2, 3, 4

ORACLE_TOL = 1e-10


# -- serialisation -----------------------------------------------------------------

def plain(x):
    """JSON-ready copy: complex as {re, im}, non-finite floats as strings."""
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": plain(float(x.real)), "im": plain(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def to_json(report):
    return json.dumps(plain(report), sort_keys=True, indent=2, allow_nan=False) + "\n"


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return plain(v) if not math.isfinite(v) else repr(v)
    return v


def to_csv(rows, columns):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c)) for c in columns])
    return buf.getvalue()


def emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _header(command, cfg):
    return {"command": command, "version": __version__, "config": cfg.describe()}


# -- commands ------------------------------------------------------------------

def cmd_verify(cfg, args):
    report = suites.run(args.suite, cfg, npairs=args.npairs, explore=args.explore)
    report = _header("verify", cfg) | report
    if cfg.format == "csv":
        text = to_csv(report["checks"], ["name", "max_residual", "threshold", "pass"])
    else:
        text = to_json(report)
    emit(text, cfg.out)
    return EXIT_OK if suites.passed(report) else EXIT_FAIL


def cmd_spectrum(cfg, args):
    dc = cfg.dirac()
    rep = dirac.spectrum(dc, grade=args.grade, count=args.count, delta=not args.no_delta, delta_step=args.delta_step)
    report = _header("spectrum", cfg) | {
        "rows": rep.rows,
        "asymmetry": rep.asymmetry,
        "block_sizes": rep.block_sizes,
        "delta_K_reference": None if args.no_delta else cfg.K + args.delta_step,
    }
    if cfg.format == "csv":
        text = to_csv(rep.rows, ["grade", "index", "eigenvalue", "delta_K"])
    else:
        text = to_json(report)
    emit(text, cfg.out)
    return EXIT_OK


def _element(text):
    node = expr.parse(text)
    return node, (lambda q, K: expr.evaluate(node, q, K))


def cmd_commutator(cfg, args):
    node, build = _element(args.phi)
    dc = cfg.dirac()
    sweep = list(cfg.sweep) if cfg.sweep else [cfg.K]
    rep = dirac.twisted_commutator(dc, lambda K: build(cfg.q, K), sweep)
    keep = ["two_sided", "collapsed"] if args.reading == "both" else [args.reading]
    rows = [{k: v for k, v in r.items() if not k.startswith("norm_") or k[5:] in keep} for r in rep.rows]
    report = _header("commutator", cfg) | {
        "phi": expr.to_text(node),
        "reading": args.reading,
        "rows": rows,
        "growth": {k: rep.growth[k] for k in keep},
        "oracle_tolerance": ORACLE_TOL,
    }
    if cfg.format == "csv":
        text = to_csv(rows, ["K", "oracle_residual", "interior_columns"] + [f"norm_{k}" for k in keep])
    else:
        text = to_json(report)
    emit(text, cfg.out)
    ok = all(r["oracle_residual"] <= ORACLE_TOL for r in rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_symbol(cfg, args):
    node, build = _element(args.phi)
    el = build(cfg.q, cfg.K)
    rows = []
    for m in el.modes:
        sym = disc.symbol(el.part(m))
        for d in sorted(sym.coeffs):
            v = sym.coeffs[d]
            rows.append({"circle_mode": m, "degree": d, "symbol_mode": d + m, "re": v.real, "im": v.imag})
    report = _header("symbol", cfg) | {"phi": expr.to_text(node), "coefficients": rows,
                                       "approx_flag": el.approx_flag}
    if cfg.format == "csv":
        text = to_csv(rows, ["circle_mode", "degree", "symbol_mode", "re", "im"])
    else:
        text = to_json(report)
    emit(text, cfg.out)
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------

def _sweep(text):
    try:
        vals = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"sweep must be comma-separated integers, got {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("sweep is empty")
    return vals


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="FILE", help="JSON config file; flags override it")
    common.add_argument("--q", type=float)
    common.add_argument("--twist", type=int, choices=(1, 2))
    common.add_argument("--alpha", type=float, help="weight exponent; must match the twist")
    common.add_argument("--c", type=float)
    common.add_argument("--gamma", dest="gamma_q", type=float)
    common.add_argument("--K", type=int)
    common.add_argument("--M", type=int)
    common.add_argument("--margin", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--size-cap", dest="size_cap", type=int)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--format", choices=("json", "csv"))

    p = argparse.ArgumentParser(prog="qdirac", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"qdirac {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run identity suites")
    v.add_argument("--suite", choices=suites.SUITES, default="all")
    v.add_argument("--npairs", type=int, help="random pairs per randomized check")
    v.add_argument("--explore", action="store_true", help="add gauge and derivative-norm measurements")

    s = sub.add_parser("spectrum", parents=[common], help="eigenvalues per grade block")
    s.add_argument("--grade", type=int, help="restrict to one grade")
    s.add_argument("--count", type=int, help="keep the N eigenvalues smallest in modulus per grade")
    s.add_argument("--delta-step", type=int, default=8, help="K increment for the convergence gap")
    s.add_argument("--no-delta", action="store_true")

    c = sub.add_parser("commutator", parents=[common], help="twisted commutator norms across K")
    c.add_argument("--phi", default="a", help="algebra expression, e.g. \"a* * c\"")
    c.add_argument("--reading", choices=("both", "collapsed", "two_sided"), default="both")
    c.add_argument("--sweep", type=_sweep, help="comma-separated K values")

    y = sub.add_parser("symbol", parents=[common], help="boundary symbol of an expression")
    y.add_argument("--phi", required=True)
    return p


_CONFIG_KEYS = ("q", "twist", "alpha", "c", "gamma_q", "K", "M", "margin", "seed", "size_cap", "out", "format")

_COMMANDS = {"verify": cmd_verify, "spectrum": cmd_spectrum, "commutator": cmd_commutator, "symbol": cmd_symbol}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        dirac.worker_count()
        over = {k: getattr(args, k) for k in _CONFIG_KEYS}
        over["sweep"] = getattr(args, "sweep", None)
        cfg = load(args.config, **over)
        return _COMMANDS[args.command](cfg, args)
    except (ConfigError, ParseError) as exc:
        print(f"qdirac: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SizeError as exc:
        print(f"qdirac: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except DomainError as exc:
        who = f" (derivation {exc.derivation})" if exc.derivation else ""
        print(f"qdirac: domain error{who}: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except UnboundedSymbolError as exc:
        print(f"qdirac: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
