"""Assertion and suite records with a deterministic JSON form."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

__all__ = ["Assertion", "SuiteResult", "jsonable", "report_measured"]


def jsonable(x: Any) -> Any:
    """Plain JSON value; non-finite floats become the strings ``inf``, ``-inf`` and ``nan``."""
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


@dataclass(frozen=True)
class Assertion:
    id: str
    passed: bool
    measured: Any
    tolerance: Any = None
    witness: str | None = None

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "pass": bool(self.passed),
            "measured": jsonable(self.measured),
            "tolerance": jsonable(self.tolerance),
        }
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class SuiteResult:
    suite: str
    seed: int
    assertions: list[Assertion] = field(default_factory=list)
    runtime_ms: float | None = None

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    @property
    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def get(self, assertion_id: str) -> Assertion:
        for a in self.assertions:
            if a.id == assertion_id:
                return a
        raise KeyError(assertion_id)

    def to_dict(self) -> dict:
        return {
            "suite": self.suite,
            "seed": self.seed,
            "assertions": [a.to_dict() for a in self.assertions],
            "runtime_ms": None if self.runtime_ms is None else round(self.runtime_ms, 3),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def report_measured(rep) -> dict:
    """Measured fields of an :class:`EquivalenceReport` for a JSON assertion."""
    return {
        "min_ratio": rep.min_ratio,
        "max_ratio": rep.max_ratio,
        "argmin": rep.argmin,
        "argmax": rep.argmax,
        "constant": rep.bracket_constant(),
        "half_constant": rep.half_constant,
        "excluded": rep.excluded,
        "failures": list(rep.failures),
        "stable": rep.stable,
    }
