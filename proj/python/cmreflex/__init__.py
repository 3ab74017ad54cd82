"""Exact computations with CM fields, reflex norms and CM elliptic curves."""

import json
from pathlib import Path

from ._cmreflex import (
    CMReflexError,
    class_number,
    cm_types,
    count_points,
    field_info,
    frobenius,
    ray_class_group,
    reflex,
    reflex_norm,
    verify_reflex,
)

__all__ = [
    "CMReflexError",
    "class_number",
    "cm_types",
    "count_points",
    "field_info",
    "frobenius",
    "load_curves",
    "load_field",
    "ray_class_group",
    "reflex",
    "reflex_norm",
    "verify_reflex",
]


def load_field(path):
    """min_poly of a field record file."""
    return json.loads(Path(path).read_text())["min_poly"]


def load_curves(path):
    """Records of a curve corpus file."""
    data = json.loads(Path(path).read_text())
    return data["curves"] if isinstance(data, dict) else data
