"""Run configuration (flags over EDSMODEL_* environment over defaults) and a lazy object graph."""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace
from functools import cached_property

from . import arith
from .curve import Curve, CurveConfig
from .errors import ConfigError

ENV_PREFIX = "EDSMODEL_"

# flag name -> (env suffix, parser)
_ENV_FIELDS = {
    "a": ("A", int),
    "b": ("B", int),
    "gen": ("GEN", str),
    "nmax": ("NMAX", int),
    "budget": ("BUDGET", int),
    "rho_iters": ("RHO_ITERS", int),
    "qmax": ("QMAX", int),
    "m1": ("M1", int),
    "challenge": ("CHALLENGE", int),
    "ledger": ("LEDGER", str),
    "format": ("FORMAT", str),
}


def parse_gen(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2:
        raise ConfigError(f"--gen expects 'x,y' with rational coordinates, got {text!r}")
    try:
        return arith.to_mpq(parts[0]), arith.to_mpq(parts[1])
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad generator {text!r}: {exc}") from exc


@dataclass(frozen=True)
class RunConfig:
    curve: CurveConfig = field(default_factory=CurveConfig)
    sieve_bound: int = 5000
    m1: int = 1
    challenge_atom: int = 19
    fmt: str = "table"
    ledger_path: str | None = None

    def __post_init__(self):
        if self.fmt not in ("json", "csv", "table"):
            raise ConfigError(f"unknown output format {self.fmt!r}")
        if self.sieve_bound < 2:
            raise ConfigError("sieve bound must be at least 2")

    @classmethod
    def resolve(cls, flags: dict, env=None) -> RunConfig:
        """Merge explicit flags (None means unset) over EDSMODEL_* variables over defaults."""
        env = os.environ if env is None else env
        merged = {}
        for name, (suffix, conv) in _ENV_FIELDS.items():
            value = flags.get(name)
            if value is None and ENV_PREFIX + suffix in env:
                try:
                    value = conv(env[ENV_PREFIX + suffix])
                except ValueError as exc:
                    raise ConfigError(f"{ENV_PREFIX}{suffix}: {exc}") from exc
            merged[name] = value
        base = CurveConfig()
        kw = {}
        if merged["a"] is not None:
            kw["a"] = merged["a"]
        if merged["b"] is not None:
            kw["b"] = merged["b"]
        if merged["gen"] is not None:
            kw["gen_x"], kw["gen_y"] = parse_gen(merged["gen"])
        if merged["nmax"] is not None:
            kw["n_max"] = merged["nmax"]
        if merged["budget"] is not None:
            kw["factor_budget"] = merged["budget"]
        if merged["rho_iters"] is not None:
            kw["rho_iterations"] = merged["rho_iters"]
        try:
            curve = replace(base, **kw) if kw else base
        except (TypeError, ValueError) as exc:
            raise ConfigError(str(exc)) from exc
        fmt = "json" if flags.get("json") else (merged["format"] or "table")
        return cls(
            curve=curve,
            sieve_bound=merged["qmax"] if merged["qmax"] is not None else 5000,
            m1=merged["m1"] if merged["m1"] is not None else 1,
            challenge_atom=merged["challenge"] if merged["challenge"] is not None else 19,
            fmt=fmt,
            ledger_path=merged["ledger"],
        )


class Workspace:
    """Builds curve -> ledger -> prime sets -> ring -> model -> protocol on first use."""

    def __init__(self, config: RunConfig):
        self.config = config

    @cached_property
    def curve(self) -> Curve:
        return Curve(self.config.curve)

    @cached_property
    def apparition(self):
        from .apparition import Apparition

        return Apparition(self.curve)

    def load_ledger(self, required: bool = True):
        from .ledger import FactorLedger

        path = self.config.ledger_path
        if path is None:
            return FactorLedger(self.curve)
        if not required and not os.path.exists(path):
            return FactorLedger(self.curve)
        return FactorLedger.load(path, self.curve)

    @cached_property
    def ledger(self):
        return self.load_ledger(required=True).build_all()

    @cached_property
    def sets(self):
        from .primesets import PrimeSets

        return PrimeSets(self.ledger)

    @cached_property
    def ring(self):
        from .ring import Ring

        return Ring(self.sets, self.apparition)

    @cached_property
    def model(self):
        from .model import Model

        return Model(self.ring)

    @cached_property
    def protocol(self):
        from .firstorder import Protocol, ProtocolConfig

        cfg = ProtocolConfig(m1=self.config.m1, challenge_atom=self.config.challenge_atom, sieve_bound=self.config.sieve_bound)
        return Protocol(self.model, cfg)
