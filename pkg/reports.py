"""Verification reports and flat-file persistence of reports and iteration traces."""
import csv
import json
import logging
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Any, Dict, List, Optional

import numpy as np

from config import config

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _jsonable(value: Any) -> Any:
    """Plain JSON values; non-finite floats become the strings "inf", "-inf" and "nan"."""
    if isinstance(value, np.ndarray):
        return _jsonable(value.tolist())
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    return value


@dataclass
class Check:
    """One named check; it passes iff residual <= tolerance."""

    name: str
    property: str
    expected: Any
    actual: Any
    residual: float
    tolerance: float
    expected_failure: bool = False
    reference: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    @classmethod
    def numeric(cls, name: str, property: str, residual: float, tolerance: float,
                expected: Any = 0.0, actual: Any = None) -> "Check":
        residual = float(residual)
        return cls(name, property, expected, residual if actual is None else actual, residual, tolerance)

    @classmethod
    def boolean(cls, name: str, property: str, expected: bool, actual: bool,
                expected_failure: bool = False) -> "Check":
        return cls(name, property, bool(expected), bool(actual), 0.0 if bool(expected) == bool(actual) else 1.0,
                   0.0, expected_failure)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "property": self.property,
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "residual": _jsonable(self.residual),
            "tolerance": _jsonable(self.tolerance),
            "pass": self.passed,
            "expected_failure": self.expected_failure,
            "reference": self.reference,
        }


@dataclass
class Report:
    fixture: str
    suite: str
    seed: Optional[int] = None
    checks: List[Check] = field(default_factory=list)
    traces: List[Dict[str, Any]] = field(default_factory=list)
    notes: str = ""
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat())

    def add(self, check: Check) -> Check:
        self.checks.append(check)
        return check

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def attach_references(self, references: Dict[str, str], default: str):
        """Give every uncited check a reference: by full name, then last, then first name component."""
        for check in self.checks:
            if check.reference:
                continue
            parts = check.name.split(".")
            for key in (check.name, parts[-1], parts[0]):
                if key in references:
                    check.reference = references[key]
                    break
            else:
                check.reference = default

    def to_dict(self) -> Dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "fixture": self.fixture,
            "suite": self.suite,
            "seed": self.seed,
            "notes": self.notes,
            "timestamp": self.timestamp,
            "pass": self.passed,
            "checks": [c.to_dict() for c in sorted(self.checks, key=lambda c: c.name)],
            "traces": _jsonable(self.traces),
        }


class ReportStore:
    """Writes reports as JSON and traces as CSV under an output directory."""

    def __init__(self, output_dir: Optional[str] = None):
        self.output_dir = output_dir

    def resolve(self, path: Optional[str], default_name: str) -> Optional[str]:
        """Explicit path, else a file in the output directory, else None (nothing written)."""
        if path:
            return path
        if self.output_dir:
            return os.path.join(self.output_dir, default_name)
        return None

    def _prepare(self, path: str):
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)

    def write_report(self, report: Report, path: Optional[str] = None) -> Optional[str]:
        path = self.resolve(path, f"{report.fixture}-{report.suite}.json")
        if path is None:
            return None
        try:
            self._prepare(path)
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(report.to_dict(), fh, indent=2, sort_keys=True, allow_nan=False)
                fh.write("\n")
            logger.info(f"Wrote report {path}")
            return path
        except OSError as e:
            logger.error(f"Failed to write report {path}: {e}")
            raise

    def write_trace(self, trace, path: Optional[str] = None, name: str = "trace") -> Optional[str]:
        """CSV with header n,x_0..,shadow_0..,residual; floats with 17 significant digits."""
        path = self.resolve(path, f"{name}.csv")
        if path is None:
            return None
        dim = trace.iterates[0].size
        header = ["n"] + [f"x_{i}" for i in range(dim)] + [f"shadow_{i}" for i in range(dim)] + ["residual"]
        try:
            self._prepare(path)
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(header)
                for n, *values in trace.rows():
                    writer.writerow([n] + [format(v, ".17g") for v in values])
            logger.info(f"Wrote trace {path} ({len(trace.iterates)} rows)")
            return path
        except OSError as e:
            logger.error(f"Failed to write trace {path}: {e}")
            raise


# Global store instance
store = ReportStore(config.OUTPUT_DIR)
