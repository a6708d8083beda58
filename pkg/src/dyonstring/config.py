"""Plain-text ``key = value`` run configuration."""
from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path

from .integrator import IntegratorConfig, Method
from .model import Params
from .seed import SeedOptions

__all__ = ["ConfigError", "RunConfig", "KEYS", "parse_config_text", "load_config", "describe_keys"]


class ConfigError(ValueError):
    """Bad configuration input; the message names the offending key."""


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# key -> (section, attribute, parser, help)
KEYS = {
    "lambda": ("params", "lam", float, "cosmological constant"),
    "kappa": ("params", "kappa", float, "coupling 4 pi G / g^2"),
    "g": ("params", "g", float, "gauge coupling (energy density only)"),
    "a": ("params", "a", float, "electric shooting parameter, Phi ~ a r"),
    "b": ("params", "b", float, "magnetic shooting parameter, W ~ 1 - b r^2"),
    "r0": ("params", "r0", float, "core radius"),
    "c0": ("seed", "c0", float, "C(r0)"),
    "cp0": ("seed", "cp0", float, "C'(r0)"),
    "use_paper_c_formula": ("seed", "use_paper_c_formula", _bool,
                            "take C(r0) from the closed-form near-core constant"),
    "method": ("integ", "method", Method, "primary_high_order | crosscheck_alt_order"),
    "abs_tol": ("integ", "abs_tol", float, "absolute local error tolerance"),
    "rel_tol": ("integ", "rel_tol", float, "relative local error tolerance"),
    "h_init": ("integ", "h_init", float, "first trial step"),
    "h_min": ("integ", "h_min", float, "smallest step before step_underflow"),
    "h_max": ("integ", "h_max", float, "largest step"),
    "r_max": ("integ", "r_max", float, "outer radius"),
    "blowup_limit": ("integ", "blowup_limit", float, "magnitude that ends a run as blowup"),
    "horizon_epsilon": ("integ", "horizon_epsilon", float, "horizon when C <= epsilon * C(r0)"),
    "dense_dr": ("integ", "dense_dr", float, "output sample spacing"),
    "workers": ("run", "workers", int, "parallel processes for sweeps"),
}


@dataclass(frozen=True)
class RunConfig:
    params: Params = field(default_factory=Params)
    seed: SeedOptions = field(default_factory=SeedOptions)
    integ: IntegratorConfig = field(default_factory=IntegratorConfig)
    workers: int = 1

    def get(self, key: str):
        section, attr, _, _ = KEYS[key]
        return getattr(self if section == "run" else getattr(self, section), attr)

    def as_dict(self) -> dict:
        out = {}
        for key in KEYS:
            v = self.get(key)
            out[key] = v.value if isinstance(v, Method) else v
        return out


def _apply(cfg: RunConfig, values: dict[str, str]) -> RunConfig:
    grouped: dict[str, dict] = {"params": {}, "seed": {}, "integ": {}, "run": {}}
    for key, text in values.items():
        if key not in KEYS:
            raise ConfigError(f"unknown key {key!r}")
        section, attr, parse, _ = KEYS[key]
        try:
            grouped[section][attr] = parse(text)
        except ValueError as exc:
            raise ConfigError(f"bad value for {key!r}: {text!r} ({exc})") from None
    try:
        return RunConfig(
            params=replace(cfg.params, **grouped["params"]),
            seed=replace(cfg.seed, **grouped["seed"]),
            integ=replace(cfg.integ, **grouped["integ"]),
            workers=grouped["run"].get("workers", cfg.workers),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_config_text(text: str, base: RunConfig | None = None) -> RunConfig:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        values[key] = value
    return _apply(base or RunConfig(), values)


def load_config(path: str | Path | None, overrides: list[str] = ()) -> RunConfig:
    cfg = RunConfig()
    if path is not None:
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
        cfg = parse_config_text(text, cfg)
    pairs = {}
    for item in overrides:
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not KEY=VALUE")
        k, v = item.split("=", 1)
        pairs[k.strip()] = v.strip()
    return _apply(cfg, pairs)


def describe_keys() -> str:
    """Key table with defaults, for ``--help``."""
    cfg = RunConfig()
    lines = []
    for key, (_, _, _, text) in KEYS.items():
        v = cfg.get(key)
        v = v.value if isinstance(v, Method) else v
        lines.append(f"  {key:<20} {str(v):<20} {text}")
    return "\n".join(lines)
