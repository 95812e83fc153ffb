"""
Stechkin constant calibration

For each (space, weight) pair the smallest c with
c (||a||_inf + V(a)) >= lower bound of ||L(a)|| over every fixture symbol is
recorded together with its provenance. Records are stored as JSON and feed
the stechkin route of multiplier_norm_upper.
"""

import json
import logging
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional

from experiments.config import ExperimentConfig, parse_symbol_literal, resolve_space
from experiments.grid import run_grid
from experiments.report import EXACT, LOWER, Report, ReportRow
from laurent_lab.errors import ConfigError
from laurent_lab.laurent import multiplier_norm_lower
from laurent_lab.symbols import sup_norm, total_variation

logger = logging.getLogger(__name__)


@dataclass
class CalibrationEntry:
    space: str
    constant: float
    N: int
    seed: int
    ratios: Dict[str, float] = field(default_factory=dict)


@dataclass
class CalibrationRecord:
    entries: Dict[str, CalibrationEntry] = field(default_factory=dict)

    def constants(self) -> Dict[str, float]:
        """Constant per space label."""
        return {label: entry.constant for label, entry in self.entries.items()}

    def merge(self, other: "CalibrationRecord") -> "CalibrationRecord":
        """Combine two records; constants never decrease."""
        merged = CalibrationRecord(entries=dict(self.entries))
        for label, entry in other.entries.items():
            current = merged.entries.get(label)
            if current is None:
                merged.entries[label] = entry
                continue
            ratios = {**current.ratios, **entry.ratios}
            merged.entries[label] = CalibrationEntry(
                space=label,
                constant=max(current.constant, entry.constant),
                N=max(current.N, entry.N),
                seed=entry.seed,
                ratios=ratios,
            )
        return merged

    def to_json(self) -> str:
        payload = {
            label: asdict(entry) for label, entry in sorted(self.entries.items())
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CalibrationRecord":
        try:
            payload = json.loads(text)
            entries = {
                label: CalibrationEntry(**data) for label, data in payload.items()
            }
        except (ValueError, TypeError) as e:
            raise ConfigError(f"Malformed calibration record: {str(e)}")
        return cls(entries=entries)

    def save(self, path: str):
        with open(path, "w") as handle:
            handle.write(self.to_json())
        logger.info(f"Saved calibration for {len(self.entries)} spaces to {path}")

    @classmethod
    def load(cls, path: str) -> "CalibrationRecord":
        try:
            with open(path) as handle:
                return cls.from_json(handle.read())
        except OSError as e:
            raise ConfigError(f"Cannot read calibration record {path}: {str(e)}")


def calibrate_constants(
    config: ExperimentConfig, existing: Optional[CalibrationRecord] = None
) -> CalibrationRecord:
    """Calibrate c for every configured (space, weight) over the fixture symbols."""
    record, _ = calibration_report(config, existing)
    return record


def calibration_report(
    config: ExperimentConfig, existing: Optional[CalibrationRecord] = None
):
    """(record, report) for :func:`calibrate_constants`."""
    try:
        space_literals = config.spaces or [config.space]
        weight_literals: List[Optional[str]] = config.weights or [config.weight]
        specs = [
            resolve_space(space, weight)
            for space in space_literals
            for weight in weight_literals
        ]
        fixtures = {
            literal: parse_symbol_literal(literal) for literal in config.fixtures
        }
        N = config.section_schedule[-1]

        points = [
            (s_index, f_index)
            for s_index in range(len(specs))
            for f_index in range(len(config.fixtures))
        ]

        def measure(point):
            s_index, f_index = point
            literal = config.fixtures[f_index]
            a = fixtures[literal]
            lower = multiplier_norm_lower(
                a,
                specs[s_index],
                N,
                restarts=config.restarts,
                iterations=config.iterations,
                seed=config.seed + f_index,
            ).lower
            scale = sup_norm(a) + total_variation(a)
            return lower, scale

        results = run_grid(points, measure, config.threads, desc="Calibration")

        record = CalibrationRecord()
        report = Report(title="calibrate", metadata={"N": N, "seed": config.seed})
        for s_index, spec in enumerate(specs):
            ratios = {}
            for f_index, literal in enumerate(config.fixtures):
                lower, scale = results[(s_index, f_index)]
                ratio = lower / scale if scale > 0 else 0.0
                ratios[literal] = ratio
                row = ReportRow(params={"space": spec.label(), "fixture": literal})
                row.measure("multiplier_lower", lower, LOWER)
                row.measure("sup_plus_variation", scale, EXACT)
                row.measure("ratio", ratio, LOWER)
                report.add(row)
            record.entries[spec.label()] = CalibrationEntry(
                space=spec.label(),
                constant=max(ratios.values(), default=0.0),
                N=N,
                seed=config.seed,
                ratios=ratios,
            )
            logger.info(
                f"Calibrated {spec.label()}: "
                f"c={record.entries[spec.label()].constant:.6g}"
            )

        if existing is not None:
            record = existing.merge(record)
        report.sort("space", "fixture")
        return record, report

    except Exception as e:
        logger.error(f"Error in calibrate_constants: {str(e)}")
        raise
