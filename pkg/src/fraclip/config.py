"""Run configuration: strict key-value schema loaded from JSON or TOML."""

from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from .geometry import STANDARD_OFFSETS, BallFamily, centered_family, standard_family
from .params import ExponentVector, ParameterPoint, parse_exponent
from .quadrature import QuadratureConfig
from .weights.forms import WeightVector

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover - depends on the interpreter
    import tomli as tomllib


class ConfigError(ValueError):
    """Schema violation; the CLI maps it to exit code 2."""


COMMANDS = ("region", "check-weights", "construct", "verify", "experiment")
TOP_KEYS = {"command", "seed", "jobs", "point", "p", "weights", "quantities", "q", "rh_s", "sigma",
            "family", "quadrature", "output", "experiment", "notes"}
POINT_KEYS = {"n", "m", "beta", "delta", "delta_tilde", "gamma"}
FAMILY_KEYS = {"kind", "r_min", "r_max", "per_decade", "offsets", "radii"}
QUAD_KEYS = {"base_cells", "depth", "kink_depth", "order", "tolerance", "grading"}
OUTPUT_KEYS = {"dir", "prefix"}
EXPERIMENT_KEYS = {"kind", "variant", "alpha", "alpha_tilde", "kernel", "symbols", "functions", "mode",
                   "direction", "alphas", "construct", "inputs"}
EXPERIMENT_KINDS = ("boundedness", "local_lemma", "triviality", "asymptotic", "corollary",
                    "construction")
QUANTITY_NAMES = ("hm_full", "hm_local", "hm_global", "hm_sigma", "apq", "ap", "rh", "doubling")


def _reject_unknown(data: dict, allowed: set, where: str) -> None:
    extra = sorted(set(data) - allowed)
    if extra:
        raise ConfigError(f"unknown keys in {where}: {', '.join(extra)}")


def _require(data: dict, key: str, where: str):
    if key not in data:
        raise ConfigError(f"missing key {key!r} in {where}")
    return data[key]


@dataclass
class RunConfig:
    raw: dict
    command: str | None = None
    seed: int = 0
    jobs: int = 1
    point: ParameterPoint | None = None
    p: ExponentVector | None = None
    weights: WeightVector | None = None
    quantities: tuple = ("hm_full",)
    q: float = float("inf")
    rh_s: float = 2.0
    sigma: tuple | None = None
    family: BallFamily | None = None
    quadrature: QuadratureConfig | None = None
    output_dir: Path = Path(".")
    prefix: str = ""
    experiment: dict = field(default_factory=dict)

    @property
    def config_hash(self) -> str:
        return config_hash(self.raw)


def config_hash(data: dict) -> str:
    canonical = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(canonical.encode()).hexdigest()[:16]


def load_config_file(path: str | Path) -> dict:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        if path.suffix.lower() == ".toml":
            return tomllib.loads(text)
        return json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc


def parse_point(data: dict) -> ParameterPoint:
    if not isinstance(data, dict):
        raise ConfigError("point must be a table")
    _reject_unknown(data, POINT_KEYS, "point")
    try:
        return ParameterPoint(n=int(data.get("n", 1)), m=int(_require(data, "m", "point")),
                              beta=float(_require(data, "beta", "point")),
                              delta=float(_require(data, "delta", "point")),
                              delta_tilde=float(data.get("delta_tilde", 0.0)),
                              gamma=float(data.get("gamma", 1.0)))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid point: {exc}") from exc


def parse_p(values) -> ExponentVector:
    try:
        return ExponentVector([parse_exponent(v) for v in values])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid exponent vector: {exc}") from exc


def parse_family(data: dict | None, n: int = 1) -> BallFamily:
    data = dict(data or {})
    _reject_unknown(data, FAMILY_KEYS, "family")
    kind = data.get("kind", "standard")
    try:
        if kind == "standard":
            return standard_family(n, float(data.get("r_min", 1e-3)), float(data.get("r_max", 1e3)),
                                   int(data.get("per_decade", 2)),
                                   tuple(float(o) for o in data.get("offsets", STANDARD_OFFSETS)))
        if kind == "centered":
            return centered_family([float(r) for r in _require(data, "radii", "family")], n)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"invalid family: {exc}") from exc
    raise ConfigError(f"unknown family kind {kind!r}")


def parse_quadrature(data: dict | None) -> QuadratureConfig | None:
    if not data:
        return None
    _reject_unknown(data, QUAD_KEYS, "quadrature")
    try:
        return QuadratureConfig(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid quadrature settings: {exc}") from exc


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a table")
    _reject_unknown(data, TOP_KEYS, "config")
    cfg = RunConfig(raw=data)
    cmd = data.get("command")
    if cmd is not None and cmd not in COMMANDS:
        raise ConfigError(f"unknown command {cmd!r}")
    cfg.command = cmd
    try:
        cfg.seed = int(data.get("seed", 0))
        cfg.jobs = int(data.get("jobs", 1))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"seed and jobs must be integers: {exc}") from exc
    if cfg.jobs < 1:
        raise ConfigError("jobs must be at least 1")
    if "point" in data:
        cfg.point = parse_point(data["point"])
    if "p" in data:
        cfg.p = parse_p(data["p"])
        if cfg.point is not None and cfg.p.m != cfg.point.m:
            raise ConfigError(f"p has {cfg.p.m} entries but m = {cfg.point.m}")
    if "weights" in data:
        try:
            cfg.weights = WeightVector.from_json(data["weights"])
        except (TypeError, ValueError, KeyError) as exc:
            raise ConfigError(f"invalid weights: {exc}") from exc
    quantities = data.get("quantities", ["hm_full"])
    if isinstance(quantities, str):
        quantities = [quantities]
    bad = [q for q in quantities if q not in QUANTITY_NAMES]
    if bad:
        raise ConfigError(f"unknown quantities: {', '.join(bad)}")
    cfg.quantities = tuple(quantities)
    try:
        cfg.q = parse_exponent(data.get("q", "inf"))
        cfg.rh_s = parse_exponent(data.get("rh_s", 2.0))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid exponent: {exc}") from exc
    if "sigma" in data:
        bits = data["sigma"]
        if not all(b in (0, 1) for b in bits):
            raise ConfigError("sigma must be a list of 0/1 bits")
        cfg.sigma = tuple(int(b) for b in bits)
    n = cfg.point.n if cfg.point is not None else 1
    cfg.family = parse_family(data.get("family"), n)
    cfg.quadrature = parse_quadrature(data.get("quadrature"))
    out = dict(data.get("output", {}))
    _reject_unknown(out, OUTPUT_KEYS, "output")
    cfg.output_dir = Path(out.get("dir", "."))
    cfg.prefix = str(out.get("prefix", ""))
    exp = dict(data.get("experiment", {}))
    _reject_unknown(exp, EXPERIMENT_KEYS, "experiment")
    if exp and exp.get("kind") not in EXPERIMENT_KINDS:
        raise ConfigError(f"experiment kind must be one of {', '.join(EXPERIMENT_KINDS)}")
    cfg.experiment = exp
    return cfg
