"""Canonical JSON rendering for reports.

Rationals are always rendered as exact strings ("7", "-3/2"), never floats,
and keys are sorted so identical inputs give byte-identical documents.
"""

import json
from fractions import Fraction
from typing import Any

SCHEMA_VERSION = 1


def render_fraction(value: Fraction) -> str:
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def to_jsonable(obj: Any) -> Any:
    """Recursively convert a report payload into JSON-compatible values."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return render_fraction(obj)
    if isinstance(obj, int):
        return obj
    if hasattr(obj, "to_dict"):
        return to_jsonable(obj.to_dict())
    if isinstance(obj, dict):
        return {str(to_jsonable(k)): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(item) for item in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted((to_jsonable(item) for item in obj), key=str)
    return str(obj)


def dump_json(document: Any, indent: int = 2) -> str:
    return json.dumps(to_jsonable(document), sort_keys=True, indent=indent) + "\n"
