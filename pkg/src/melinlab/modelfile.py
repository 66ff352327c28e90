"""Model-file loading and schema validation.

A model file is the JSON graded-symbol literal plus optional experiment
sections:

    {
      "d": 1, "m": 0, "k": 2,
      "levels": [{"j": 0, "terms": [{"c": [1, 0], "y": [4], "eta": [0]}, ...]}, ...],
      "sweep": {"lambdas": [16, 64], "truncations": [16, 32],
                "limit_tol": 0.05, "slope_tol": 0.05},
      "phase": {"alpha": [0.7, 2.5, 10], "beta": [-0.5, 0.5, 10],
                "gamma": [0.7, 2.5, 10], "s": [-1, 1, 5], "truncation": 64}
    }

Unknown keys are rejected at every nesting level; all validation runs
before any computation.
"""

from __future__ import annotations

import json
from fractions import Fraction

import jsonschema

from .errors import ModelFileError
from .symbols import GradedSymbol
from .sweep import ModelSpec

__all__ = ["MODEL_SCHEMA", "load_model_dict", "load_model_file", "sweep_spec_from_model"]

_RANGE = {
    "type": "array",
    "items": {"type": "number"},
    "minItems": 3,
    "maxItems": 3,
}

MODEL_SCHEMA = {
    "type": "object",
    "additionalProperties": False,
    "required": ["d", "m", "k", "levels"],
    "properties": {
        "d": {"type": "integer", "minimum": 1, "maximum": 2},
        "m": {"type": "number"},
        "k": {"type": "integer", "minimum": 0},
        "levels": {
            "type": "array",
            "items": {
                "type": "object",
                "additionalProperties": False,
                "required": ["j", "terms"],
                "properties": {
                    "j": {"type": "integer", "minimum": 0},
                    "terms": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["c", "y", "eta"],
                            "properties": {
                                "c": {
                                    "type": "array",
                                    "items": {"type": "number"},
                                    "minItems": 2,
                                    "maxItems": 2,
                                },
                                "y": {
                                    "type": "array",
                                    "items": {"type": "integer", "minimum": 0},
                                },
                                "eta": {
                                    "type": "array",
                                    "items": {"type": "integer", "minimum": 0},
                                },
                            },
                        },
                    },
                },
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["lambdas", "truncations"],
            "properties": {
                "lambdas": {
                    "type": "array",
                    "items": {"type": "number", "minimum": 1},
                    "minItems": 1,
                },
                "truncations": {
                    "type": "array",
                    "items": {"type": "integer", "minimum": 2},
                    "minItems": 1,
                },
                "limit_tol": {"type": "number", "exclusiveMinimum": 0},
                "slope_tol": {"type": "number", "exclusiveMinimum": 0},
            },
        },
        "phase": {
            "type": "object",
            "additionalProperties": False,
            "required": ["alpha", "beta", "gamma", "s"],
            "properties": {
                "alpha": _RANGE,
                "beta": _RANGE,
                "gamma": _RANGE,
                "s": _RANGE,
                "truncation": {"type": "integer", "minimum": 2, "maximum": 256},
            },
        },
    },
}


def load_model_dict(data: dict) -> tuple[GradedSymbol, dict | None, dict | None]:
    """Validate a parsed model dict; returns (symbol, sweep, phase)."""
    try:
        jsonschema.validate(data, MODEL_SCHEMA)
    except jsonschema.ValidationError as exc:
        where = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise ModelFileError(f"model file invalid at {where}: {exc.message}") from exc
    seen = set()
    for entry in data["levels"]:
        if entry["j"] in seen:
            raise ModelFileError(f"duplicate level index {entry['j']}")
        seen.add(entry["j"])
        for term in entry["terms"]:
            if len(term["y"]) != data["d"] or len(term["eta"]) != data["d"]:
                raise ModelFileError(
                    f"level {entry['j']}: exponent lists must have length d={data['d']}"
                )
    try:
        symbol = GradedSymbol.from_dict(data)
    except (ValueError, TypeError) as exc:
        raise ModelFileError(f"model file invalid: {exc}") from exc
    if Fraction(symbol.m * 2).denominator != 1:
        raise ModelFileError(f"order m={symbol.m} must be a half-integer")
    return symbol, data.get("sweep"), data.get("phase")


def load_model_file(path: str) -> tuple[GradedSymbol, dict | None, dict | None]:
    """Read and validate a model file."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ModelFileError(f"cannot read model file {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelFileError(f"model file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ModelFileError(f"model file {path} must contain a JSON object")
    return load_model_dict(data)


def sweep_spec_from_model(symbol: GradedSymbol, section: dict) -> ModelSpec:
    """Build the sweep spec from a validated model-file section."""
    try:
        return ModelSpec(
            symbol=symbol,
            lambdas=section["lambdas"],
            truncations=section["truncations"],
            limit_tol=section.get("limit_tol", 0.05),
            slope_tol=section.get("slope_tol", 0.05),
        )
    except ValueError as exc:
        raise ModelFileError(f"sweep section invalid: {exc}") from exc
