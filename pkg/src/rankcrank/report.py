"""Experiment reports and the golden-threshold file."""
from __future__ import annotations

import json
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

SCHEMA_VERSION = 1
GOLDEN_SCHEMA_VERSION = 1


def _plain(v: Any) -> Any:
    """Convert numpy scalars, Fractions and tuples into JSON-ready values."""
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, np.ndarray):
        return [_plain(x) for x in v.tolist()]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, Fraction):
        return {"numerator": str(v.numerator), "denominator": str(v.denominator), "float": float(v)}
    if isinstance(v, (float, np.floating)):
        f = float(v)
        return f if math.isfinite(f) else repr(f)
    if isinstance(v, complex):
        return {"re": v.real, "im": v.imag}
    return v


@dataclass
class ExperimentReport:
    """Structured outcome of one verification run.

    ``reference`` values carry a ``provenance`` tag: ``closed_form``,
    ``exact_oracle``, ``definition`` or ``golden``.
    """

    experiment: str
    parameters: dict
    seed: int | None = None
    backend: str | None = None
    computed: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    criteria: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    wall_time: float = 0.0
    _t0: float = field(default_factory=time.perf_counter, repr=False)

    def ref(self, name: str, value, provenance: str, source: str = "") -> None:
        self.reference[name] = {"value": value, "provenance": provenance, "source": source}

    def check(self, name: str, passed: bool, value=None, threshold=None, relation: str = "<", **extra) -> bool:
        entry = {"passed": bool(passed), "value": value, "threshold": threshold, "relation": relation}
        entry.update(extra)
        self.criteria[name] = entry
        return bool(passed)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.criteria.values())

    def finish(self) -> "ExperimentReport":
        self.wall_time = time.perf_counter() - self._t0
        return self

    def to_dict(self) -> dict:
        return _plain(
            {
                "schema_version": SCHEMA_VERSION,
                "experiment": self.experiment,
                "parameters": self.parameters,
                "seed": self.seed,
                "backend": self.backend,
                "computed": self.computed,
                "reference": self.reference,
                "criteria": self.criteria,
                "passed": self.passed,
                "notes": self.notes,
                "wall_time": self.wall_time,
            }
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def summary_lines(self) -> list[str]:
        out = []
        for name, c in sorted(self.criteria.items()):
            flag = "PASS" if c["passed"] else "FAIL"
            out.append(f"[{flag}] {self.experiment}.{name}: value={c['value']!r} {c['relation']} {c['threshold']!r}")
        return out


# ---------------------------------------------------------------------------
# golden thresholds


def default_golden_path():
    return resources.files("rankcrank").joinpath("golden.json")


def load_golden(path=None) -> dict:
    src = Path(path) if path is not None else default_golden_path()
    data = json.loads(src.read_text())
    if data.get("schema_version") != GOLDEN_SCHEMA_VERSION:
        raise ValueError(f"unsupported golden schema {data.get('schema_version')!r}")
    return data


def write_golden(path, data: dict) -> None:
    Path(path).write_text(json.dumps(_plain(data), sort_keys=True, indent=2) + "\n")
