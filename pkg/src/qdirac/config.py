"""Run configuration shared by the suites and the command line.

A config file is a JSON object with any subset of the fields below;
command-line flags override it.  Defaults:

    q = 0.5, twist = 1, alpha = 2 for twist 1 and 1 for twist 2,
    c = 1.0, gamma_q = q / (1 + q), K = 16, M = 4, margin = 4, seed = 0,
    sweep = [K], format = "json", out = stdout.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields, replace

import jsonschema

from .dirac import ALPHA_FOR_TWIST, DEFAULT_CAP, DiracConfig
from .errors import ConfigError

SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "properties": {
        "q": {"type": "number", "exclusiveMinimum": 0, "exclusiveMaximum": 1},
        "twist": {"enum": [1, 2]},
        "alpha": {"type": ["number", "null"]},
        "c": {"type": "number"},
        "gamma_q": {"type": ["number", "null"], "not": {"const": 0}},
        "K": {"type": "integer", "minimum": 1},
        "M": {"type": "integer", "minimum": 0},
        "margin": {"type": "integer", "minimum": 0},
        "seed": {"type": "integer", "minimum": 0, "maximum": 2 ** 64 - 1},
        "sweep": {"type": ["array", "null"], "items": {"type": "integer", "minimum": 1}, "minItems": 1},
        "size_cap": {"type": "integer", "minimum": 1},
        "out": {"type": ["string", "null"]},
        "format": {"enum": ["json", "csv"]},
    },
}


@dataclass(frozen=True)
class RunConfig:
    q: float = 0.5
    twist: int = 1
    alpha: float | None = None
    c: float = 1.0
    gamma_q: float | None = None
    K: int = 16
    M: int = 4
    margin: int = 4
    seed: int = 0
    sweep: tuple | None = None
    size_cap: int = DEFAULT_CAP
    out: str | None = None
    format: str = "json"

    def __post_init__(self):
        validate(asdict(self) | {"sweep": None if self.sweep is None else list(self.sweep)})
        want = ALPHA_FOR_TWIST[self.twist]
        if self.alpha is None:
            object.__setattr__(self, "alpha", want)
        elif float(self.alpha) != want:
            raise ConfigError(f"twist {self.twist} pairs with alpha = {want:g}, got alpha = {self.alpha:g}")
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "q", float(self.q))
        object.__setattr__(self, "c", float(self.c))
        if self.gamma_q is None:
            object.__setattr__(self, "gamma_q", self.q / (1.0 + self.q))
        object.__setattr__(self, "gamma_q", float(self.gamma_q))
        if self.sweep is not None:
            object.__setattr__(self, "sweep", tuple(int(k) for k in self.sweep))

    def dirac(self, **over):
        """The matching DiracConfig (overrides forwarded)."""
        base = dict(q=self.q, twist=self.twist, c=self.c, gamma_q=self.gamma_q, K=self.K, M=self.M,
                    size_cap=self.size_cap)
        base.update(over)
        return DiracConfig(**base)

    def describe(self):
        """The fields that determine results (output routing excluded)."""
        d = asdict(self)
        d.pop("out")
        d.pop("format")
        d["sweep"] = list(self.sweep) if self.sweep is not None else [self.K]
        return d


def validate(obj):
    try:
        jsonschema.validate(obj, SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "config"
        raise ConfigError(f"{where}: {exc.message}") from None


def load(path=None, **overrides):
    """Read a JSON config file (optional) and apply non-None overrides."""
    data = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config {path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
        validate(data)
    data.update({k: v for k, v in overrides.items() if v is not None})
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    return RunConfig(**data)


def with_twist(cfg, twist):
    """Same run at the other twist, with alpha re-derived."""
    return replace(cfg, twist=twist, alpha=None)
