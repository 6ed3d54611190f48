"""
Canonical JSON Reports

Every command writes one Report to standard output:
{tool_version, command, results, findings, timing}

Serialization is canonical: sorted keys, floats with 17 significant digits,
NaN/Infinity as null, newline-terminated UTF-8. Identical reports serialize
to identical bytes.
"""

import json
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
from rest_framework.utils.encoders import JSONEncoder

from . import __version__
from .engine import NumericalRadius, SeminormResult, SweepPoint
from .states import state_payload


@dataclass
class Report:
    command: dict
    results: Any
    findings: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    tool_version: str = __version__

    def as_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "command": self.command,
            "results": self.results,
            "findings": self.findings,
            "timing": self.timing,
        }


def format_float(value: float) -> str:
    if not math.isfinite(value):
        return "null"
    text = "%.17g" % value
    if not any(c in text for c in ".e"):
        text += ".0"
    return text


_fallback = JSONEncoder()


def _encode(value: Any) -> str:
    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, Enum):
        return _encode(value.value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = sorted((str(key), item) for key, item in value.items())
        return "{" + ",".join(json.dumps(key) + ":" + _encode(item) for key, item in items) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_encode(item) for item in value) + "]"
    if hasattr(value, "as_dict"):
        return _encode(value.as_dict())
    # numpy arrays, Decimals, dates
    return _encode(_fallback.default(value))


def serialize_report(report: Report) -> bytes:
    """Canonical JSON bytes of a report."""
    return (_encode(report.as_dict()) + "\n").encode("utf-8")


def seminorm_payload(result: SeminormResult) -> dict:
    return {
        "value": result.value,
        "witness": state_payload(result.witness),
        "converged": result.converged,
        "starts_agreeing": result.starts_agreeing,
        "iterations_total": result.iterations_total,
    }


def radius_payload(radius: NumericalRadius) -> dict:
    return {
        "value": radius.value,
        "theta": radius.theta,
        "witness": state_payload(radius.witness),
    }


def sweep_payload(points: list[SweepPoint]) -> list[dict]:
    return [
        {
            "mu": point.mu,
            "value": point.value,
            "converged": point.converged,
            "reference": point.reference,
            "deviation": point.deviation,
        }
        for point in points
    ]
