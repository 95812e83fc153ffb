"""
Experiment configuration

Config files use the dotenv key-value grammar and are read with
python-dotenv. Values resolve as: command-line flags, then the config file,
then the process environment (``LAURENT_LAB_*``), then built-in defaults.
Space and weight literals are parsed here; symbol literals are parsed by
:func:`laurent_lab.symbols.parse_symbol`.
"""

import logging
import os
import re
from dataclasses import dataclass, field, fields
from typing import Any, Dict, List, Optional, Tuple

from dotenv import dotenv_values

from laurent_lab.errors import ConfigError, DomainError
from laurent_lab.spaces import (
    YOUNG_LOG_POWER,
    YOUNG_PIECEWISE,
    YOUNG_POWER,
    SpaceSpec,
    YoungFunctionSpec,
)
from laurent_lab.symbols import parse_real, parse_symbol, split_arguments
from laurent_lab.weights import FULL_LINE, HALF_LINE, Weight

logger = logging.getLogger(__name__)

EXPERIMENT_KINDS = ("fejer", "weights", "boyd", "verify", "calibrate")
OUTPUT_FORMATS = ("csv", "json")
WEIGHT_FAMILIES = ("power", "exponent")

THREADS_ENV = "LAURENT_LAB_THREADS"
LOG_LEVEL_ENV = "LAURENT_LAB_LOG_LEVEL"

DEFAULT_FIXTURES = [
    "trigpoly: 0.5,1,0,1,0",
    "hat(1,pi)",
    "hat(1,pi/2)",
    "const(1)",
    "trigpoly: 0,0,1",
]


@dataclass
class ExperimentConfig:
    """Settings for one experiment run."""

    kind: str = "verify"
    symbol: str = "hat(1,pi)"
    space: str = "lebesgue(2)"
    weight: Optional[str] = None
    spaces: List[str] = field(
        default_factory=lambda: ["lebesgue(1.5)", "lebesgue(2)", "lebesgue(3)"]
    )
    weights: List[Optional[str]] = field(default_factory=list)
    fixtures: List[str] = field(default_factory=lambda: list(DEFAULT_FIXTURES))
    section_schedule: List[int] = field(default_factory=lambda: [32, 64, 128])
    fejer_degrees: List[int] = field(
        default_factory=lambda: [4, 8, 16, 32, 64, 128, 256]
    )
    seed: int = 0
    tolerance: float = 1e-9
    threads: int = 1
    output: Optional[str] = None
    format: str = "csv"
    restarts: int = 4
    iterations: int = 100
    deltas: Optional[Tuple[float, float, float, float]] = None
    fejer_constant: Optional[float] = None
    calibration: Optional[str] = None
    family: str = "power"
    params: List[float] = field(
        default_factory=lambda: [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9]
    )
    p_grid: List[float] = field(default_factory=lambda: [2.0])
    base_p: float = 2.0
    budgets: List[int] = field(default_factory=lambda: [256, 512, 1024, 2048, 4096])
    delta_grid: List[float] = field(default_factory=lambda: [0.0, 0.1, 0.25, 0.5, 1.0])
    rh_cap: float = 10.0
    plateau_tolerance: float = 0.01
    divergence_threshold: float = 0.10
    decay_ceiling: float = 0.96
    anchor_range: int = 64
    j_max: int = 1024
    boyd_budget: int = 2**16
    inject_asymmetric: bool = False
    acceptance_n: int = 2048
    acceptance_tolerance: float = 0.02

    def validate(self) -> "ExperimentConfig":
        """Raise ConfigError on inconsistent settings; returns self."""
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(f"Unknown experiment kind: {self.kind}")
        if self.format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unknown output format: {self.format}")
        if self.family not in WEIGHT_FAMILIES:
            raise ConfigError(f"Unknown weight family: {self.family}")

        for name in ("section_schedule", "fejer_degrees", "budgets"):
            values = getattr(self, name)
            if not values:
                raise ConfigError(f"{name} must not be empty")
            if any(b <= a for a, b in zip(values, values[1:])):
                raise ConfigError(f"{name} must be strictly increasing: {values}")
        if self.section_schedule[0] < 1 or self.fejer_degrees[0] < 0:
            raise ConfigError("Schedules must start at N >= 1 and n >= 0")
        if len(self.budgets) < 2:
            raise ConfigError("At least two budgets are needed for a growth verdict")

        for name in (
            "tolerance",
            "rh_cap",
            "plateau_tolerance",
            "divergence_threshold",
        ):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.plateau_tolerance > self.divergence_threshold:
            raise ConfigError("plateau_tolerance must not exceed divergence_threshold")
        if not 0 < self.decay_ceiling < 1:
            raise ConfigError("decay_ceiling must lie in (0, 1)")
        if self.threads < 1:
            raise ConfigError("threads must be >= 1")
        if self.restarts < 1 or self.iterations < 1:
            raise ConfigError("restarts and iterations must be >= 1")
        if self.acceptance_n < 1 or not 0 < self.acceptance_tolerance < 1:
            raise ConfigError(
                "acceptance_n must be >= 1 and acceptance_tolerance in (0, 1)"
            )
        if self.j_max < 4 or self.boyd_budget < 1:
            raise ConfigError("j_max must be >= 4 and boyd_budget >= 1")
        if self.seed < 0:
            raise ConfigError("seed must be nonnegative")
        if self.fejer_constant is not None and not self.fejer_constant > 0:
            raise ConfigError("fejer_constant must be positive")
        return self


# value parsing

_INT_LIST = ("section_schedule", "fejer_degrees", "budgets")
_FLOAT_LIST = ("params", "p_grid", "delta_grid")
_LITERAL_LIST = ("spaces", "weights", "fixtures")
_INTS = (
    "seed",
    "threads",
    "restarts",
    "iterations",
    "anchor_range",
    "j_max",
    "boyd_budget",
    "acceptance_n",
)
_FLOATS = (
    "tolerance",
    "base_p",
    "rh_cap",
    "plateau_tolerance",
    "divergence_threshold",
    "decay_ceiling",
    "fejer_constant",
    "acceptance_tolerance",
)
_STRINGS = (
    "kind",
    "symbol",
    "space",
    "weight",
    "output",
    "format",
    "calibration",
    "family",
)

# config-file key -> field name
FILE_KEYS = {
    "KIND": "kind",
    "SYMBOL": "symbol",
    "SPACE": "space",
    "WEIGHT": "weight",
    "SPACES": "spaces",
    "WEIGHTS": "weights",
    "FIXTURES": "fixtures",
    "N_SCHEDULE": "section_schedule",
    "FEJER_DEGREES": "fejer_degrees",
    "SEED": "seed",
    "TOLERANCE": "tolerance",
    "THREADS": "threads",
    "OUTPUT": "output",
    "FORMAT": "format",
    "RESTARTS": "restarts",
    "ITERATIONS": "iterations",
    "DELTAS": "deltas",
    "FEJER_CONSTANT": "fejer_constant",
    "CALIBRATION": "calibration",
    "FAMILY": "family",
    "PARAMS": "params",
    "P_GRID": "p_grid",
    "BASE_P": "base_p",
    "BUDGETS": "budgets",
    "DELTA_GRID": "delta_grid",
    "RH_CAP": "rh_cap",
    "PLATEAU_TOLERANCE": "plateau_tolerance",
    "DIVERGENCE_THRESHOLD": "divergence_threshold",
    "DECAY_CEILING": "decay_ceiling",
    "J_MAX": "j_max",
    "BOYD_BUDGET": "boyd_budget",
    "INJECT_ASYMMETRIC": "inject_asymmetric",
    "ACCEPTANCE_N": "acceptance_n",
    "ACCEPTANCE_TOLERANCE": "acceptance_tolerance",
    "ANCHOR_RANGE": "anchor_range",
}


def _parse_int(text: str) -> int:
    text = text.strip()
    match = re.fullmatch(r"2\s*\*\*\s*(\d+)", text)
    if match:
        return 2 ** int(match.group(1))
    return int(text)


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("1", "true", "yes", "on"):
        return True
    if lowered in ("0", "false", "no", "off", ""):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def parse_value(name: str, raw: Optional[str]) -> Any:
    """Convert a raw string to the type of config field ``name``."""
    if raw is None:
        return None
    text = raw.strip()
    try:
        if name in _INT_LIST:
            return [_parse_int(v) for v in text.split(",") if v.strip()]
        if name in _FLOAT_LIST:
            return [parse_real(v) for v in text.split(",") if v.strip()]
        if name in _LITERAL_LIST:
            items = [v.strip() for v in text.split(";") if v.strip()]
            if name == "weights":
                return [None if v.lower() == "none" else v for v in items]
            return items
        if name == "deltas":
            if not text:
                return None
            values = tuple(parse_real(v) for v in text.split(","))
            if len(values) != 4:
                raise ValueError("expected four values delta_1..delta_4")
            return values
        if name in _INTS:
            return _parse_int(text)
        if name in _FLOATS:
            if name == "fejer_constant" and not text:
                return None
            return parse_real(text)
        if name == "inject_asymmetric":
            return _parse_bool(text)
        if name in _STRINGS:
            return text or None
    except (ValueError, ConfigError) as e:
        raise ConfigError(f"Invalid value for {name}: {raw!r} ({str(e)})")
    raise ConfigError(f"Unknown configuration field: {name}")


def load_config(
    path: Optional[str] = None, kind: Optional[str] = None
) -> ExperimentConfig:
    """Defaults, then environment, then the config file at ``path``."""
    config = ExperimentConfig()
    env_threads = os.getenv(THREADS_ENV)
    if env_threads:
        config.threads = parse_value("threads", env_threads)

    if path:
        if not os.path.exists(path):
            raise ConfigError(f"Config file not found: {path}")
        entries = dotenv_values(path)
        for key, raw in entries.items():
            name = FILE_KEYS.get(key.upper())
            if name is None:
                raise ConfigError(f"Unknown config key {key!r} in {path}")
            if raw is None:
                continue
            setattr(config, name, parse_value(name, raw))
        logger.info(f"Loaded configuration from {path}")

    if kind:
        config.kind = kind
    return config


def apply_overrides(
    config: ExperimentConfig, overrides: Dict[str, Any]
) -> ExperimentConfig:
    """Apply command-line values; ``None`` entries leave the config unchanged."""
    known = {f.name for f in fields(ExperimentConfig)}
    for name, value in overrides.items():
        if value is None:
            continue
        if name not in known:
            raise ConfigError(f"Unknown configuration field: {name}")
        setattr(config, name, value)
    return config


def render_config(config: ExperimentConfig) -> str:
    """Config file text (dotenv grammar) reproducing ``config``."""
    reverse = {v: k for k, v in FILE_KEYS.items()}
    lines = []
    for f in fields(ExperimentConfig):
        value = getattr(config, f.name)
        if value is None:
            continue
        if f.name in _LITERAL_LIST:
            text = ";".join("none" if v is None else v for v in value)
        elif isinstance(value, (list, tuple)):
            text = ",".join(f"{v:g}" if isinstance(v, float) else str(v) for v in value)
        elif isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = f"{value:g}"
        else:
            text = str(value)
        lines.append(f"{reverse[f.name]}={text}")
    return "\n".join(lines) + "\n"


# literal parsing


def _call(literal: str) -> Tuple[str, List[str]]:
    match = re.fullmatch(r"\s*([a-z_]+)\s*\((.*)\)\s*", literal, re.DOTALL)
    if not match:
        raise ConfigError(f"Malformed literal: {literal!r}")
    return match.group(1), split_arguments(match.group(2))


def parse_space(literal: str, weight: Optional[Weight] = None) -> SpaceSpec:
    """lebesgue(p) | lorentz(p,q) | orlicz(power,p) | orlicz(log_power,p,s)
    | orlicz(piecewise,p0,p1)."""
    name, args = _call(literal)
    try:
        if name == "lebesgue" and len(args) == 1:
            return SpaceSpec.lebesgue(parse_real(args[0]), weight)
        if name == "lorentz" and len(args) == 2:
            return SpaceSpec.lorentz(parse_real(args[0]), parse_real(args[1]), weight)
        if name == "orlicz" and args:
            family = args[0]
            numbers = [parse_real(a) for a in args[1:]]
            if family == YOUNG_POWER and len(numbers) == 1:
                phi = YoungFunctionSpec(YOUNG_POWER, numbers[0])
            elif family == YOUNG_LOG_POWER and len(numbers) == 2:
                phi = YoungFunctionSpec(YOUNG_LOG_POWER, numbers[0], s=numbers[1])
            elif family == YOUNG_PIECEWISE and len(numbers) == 2:
                phi = YoungFunctionSpec(YOUNG_PIECEWISE, numbers[0], p1=numbers[1])
            else:
                raise ConfigError(f"Unknown Young function in {literal!r}")
            return SpaceSpec.orlicz(phi, weight)
    except DomainError as e:
        raise ConfigError(f"Invalid space literal {literal!r}: {str(e)}")
    raise ConfigError(f"Unrecognised space literal: {literal!r}")


def parse_weight(literal: Optional[str]) -> Optional[Weight]:
    """const(c) | power(g) | power(g,half) | table(...) | halftable(...), each
    optionally followed by ^e."""
    if literal is None or not literal.strip() or literal.strip().lower() == "none":
        return None
    text = literal.strip()
    exponent = None
    match = re.fullmatch(r"(.*\))\s*\^\s*(.+)", text, re.DOTALL)
    if match:
        text, exponent = match.group(1), parse_real(match.group(2))

    name, args = _call(text)
    try:
        if name == "const" and len(args) == 1:
            weight = Weight.constant(parse_real(args[0]))
        elif name == "power" and len(args) in (1, 2):
            domain = FULL_LINE
            if len(args) == 2:
                if args[1] != "half":
                    raise ConfigError(f"Unknown weight domain in {literal!r}")
                domain = HALF_LINE
            weight = Weight.power(parse_real(args[0]), domain)
        elif name == "table":
            weight = Weight.from_table([parse_real(a) for a in args], FULL_LINE)
        elif name == "halftable":
            weight = Weight.from_table([parse_real(a) for a in args], HALF_LINE)
        else:
            raise ConfigError(f"Unrecognised weight literal: {literal!r}")
    except DomainError as e:
        raise ConfigError(f"Invalid weight literal {literal!r}: {str(e)}")

    return weight.pow(exponent) if exponent is not None else weight


def parse_symbol_literal(literal: str):
    """Symbol literal with errors mapped to ConfigError."""
    try:
        return parse_symbol(literal)
    except DomainError as e:
        raise ConfigError(f"Invalid symbol literal {literal!r}: {str(e)}")


def resolve_space(literal: str, weight_literal: Optional[str]) -> SpaceSpec:
    return parse_space(literal, parse_weight(weight_literal))
