"""JSON readers and writers for tensors and reports."""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .tensor_core import CurvatureTensor, constant_curvature_tensor, validate_curvature_tensor


def load_tensor(source) -> CurvatureTensor:
    """Read ``{"n", "components"}`` or ``{"n", "model": "constant", "c0"}``."""
    if isinstance(source, (str, Path)):
        source = json.loads(Path(source).read_text())
    n = int(source["n"])
    if source.get("model") == "constant":
        return constant_curvature_tensor(n, float(source["c0"]))
    if "model" in source:
        raise ValueError(f"unknown curvature model {source['model']!r}")
    R = np.asarray(source["components"], dtype=float)
    if R.shape != (n,) * 4:
        raise ValueError(f"components have shape {R.shape}, expected {(n,) * 4}")
    return validate_curvature_tensor(R)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _plain(obj.tolist())
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dumps(obj) -> str:
    """Deterministic JSON; floats use the shortest repr that round-trips exactly."""
    return json.dumps(_plain(obj), sort_keys=True, indent=2, allow_nan=False)
