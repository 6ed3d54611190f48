"""
Input Serializers

Validation of the external inputs:
- matrix files in the Matrix JSON format {"n": int, "entries": [[re, im], ...]}
- parameters of each management command
"""

import math
from io import BytesIO
from pathlib import Path

import numpy as np
from rest_framework import serializers
from rest_framework.exceptions import ParseError
from rest_framework.parsers import JSONParser

from .checks import REGISTRY
from .engine import StateClass
from .linalg import matrix_from_payload
from .meanlib import MeanKind


MAX_DIMENSION = 64

MEAN_CHOICES = [kind.value for kind in MeanKind]
STATE_CHOICES = [kind.value for kind in StateClass]


class MatrixFileError(ValueError):
    """Unreadable or ill-formed matrix file; ``details`` maps field to messages."""

    def __init__(self, message: str, details=None):
        self.details = details or {}
        super().__init__(message)


class StrictFloatField(serializers.FloatField):
    """A JSON number: rejects strings, booleans and non-finite values."""

    default_error_messages = {
        "not_number": "A JSON number is required.",
        "not_finite": "Entries must be finite.",
    }

    def to_internal_value(self, data):
        if isinstance(data, bool) or not isinstance(data, (int, float)):
            self.fail("not_number")
        value = float(data)
        if not math.isfinite(value):
            self.fail("not_finite")
        return value


class CommaSeparatedListField(serializers.Field):
    """"2,3,4" -> [2, 3, 4], each item validated by ``child``."""

    default_error_messages = {
        "empty": "At least one value is required.",
    }

    def __init__(self, child, **kwargs):
        self.child = child
        super().__init__(**kwargs)
        self.child.bind(field_name="", parent=self)

    def to_internal_value(self, data):
        items = data if isinstance(data, (list, tuple)) else [i.strip() for i in str(data).split(",")]
        items = [item for item in items if item != ""]
        if not items:
            self.fail("empty")
        values = []
        for index, item in enumerate(items):
            try:
                values.append(self.child.run_validation(item))
            except serializers.ValidationError as exc:
                raise serializers.ValidationError({index: exc.detail})
        return values

    def to_representation(self, value):
        return ",".join(str(item) for item in value)


class MatrixSerializer(serializers.Serializer):
    """Matrix JSON: row-major [re, im] pairs, length n^2."""
    n = serializers.IntegerField(min_value=1, max_value=MAX_DIMENSION)
    entries = serializers.ListField(
        child=serializers.ListField(child=StrictFloatField(), min_length=2, max_length=2),
    )

    def validate(self, data):
        expected = data["n"] ** 2
        if len(data["entries"]) != expected:
            raise serializers.ValidationError({
                "entries": [f"Expected {expected} [re, im] pairs for n={data['n']}, got {len(data['entries'])}."]
            })
        return data


def parse_matrix(raw: bytes) -> np.ndarray:
    """
    Parse Matrix JSON bytes into a complex matrix.

    Raises:
        MatrixFileError: invalid JSON (including NaN/Infinity literals) or
            schema errors, with serializer errors as details
    """
    try:
        payload = JSONParser().parse(BytesIO(raw))
    except ParseError as exc:
        raise MatrixFileError(f"Invalid JSON: {exc.detail}") from None

    if not isinstance(payload, dict):
        raise MatrixFileError("Matrix JSON must be an object with fields 'n' and 'entries'")
    serializer = MatrixSerializer(data=payload)
    if not serializer.is_valid():
        fields = ", ".join(sorted(serializer.errors))
        raise MatrixFileError(f"Invalid matrix field(s): {fields}", serializer.errors)
    return matrix_from_payload(serializer.validated_data)


def load_matrix(path) -> np.ndarray:
    """Read and validate a Matrix JSON file."""
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise MatrixFileError(f"Cannot read matrix file {path}: {exc.strerror}") from None
    return parse_matrix(raw)


class OptimizerParamsSerializer(serializers.Serializer):
    states = serializers.ChoiceField(choices=STATE_CHOICES)
    seed = serializers.IntegerField(min_value=0, default=0)
    starts = serializers.IntegerField(min_value=1)


class ComputeParamsSerializer(OptimizerParamsSerializer):
    matrix = serializers.CharField()
    mean = serializers.ChoiceField(choices=MEAN_CHOICES)
    mu = serializers.FloatField(min_value=0, max_value=1)


class SweepParamsSerializer(OptimizerParamsSerializer):
    matrix = serializers.CharField()
    mean = serializers.ChoiceField(choices=MEAN_CHOICES)
    steps = serializers.IntegerField(min_value=1, max_value=10000)


class VerifyParamsSerializer(serializers.Serializer):
    dims = CommaSeparatedListField(child=serializers.IntegerField(min_value=2, max_value=MAX_DIMENSION))
    trials = serializers.IntegerField(min_value=1)
    seed = serializers.IntegerField(min_value=0)
    checks = CommaSeparatedListField(child=serializers.ChoiceField(choices=sorted(REGISTRY)), required=False)
    means = CommaSeparatedListField(child=serializers.ChoiceField(choices=MEAN_CHOICES), required=False)
    mus = CommaSeparatedListField(child=serializers.FloatField(min_value=0, max_value=1), required=False)
    states = serializers.ChoiceField(choices=STATE_CHOICES)


class FuzzParamsSerializer(serializers.Serializer):
    property = serializers.ChoiceField(choices=sorted(REGISTRY))
    mean = serializers.ChoiceField(choices=MEAN_CHOICES)
    mu = serializers.FloatField(min_value=0, max_value=1, default=0.5)
    trials = serializers.IntegerField(min_value=1)
    seed = serializers.IntegerField(min_value=0)
    dims = CommaSeparatedListField(child=serializers.IntegerField(min_value=2, max_value=MAX_DIMENSION))
    states = serializers.ChoiceField(choices=STATE_CHOICES)


class OracleParamsSerializer(serializers.Serializer):
    matrix = serializers.CharField()
    mean = serializers.ChoiceField(choices=MEAN_CHOICES)
    mu = serializers.FloatField(min_value=0, max_value=1)
    grid = serializers.IntegerField(min_value=2, max_value=1 << 14)
