"""Graphon description files (JSON) and built-in graphon families.

Three kinds are accepted::

    {"kind": "step", "measures": [...], "blocks": [[...]]}
    {"kind": "grid", "resolution": n, "values": [[...]]}
    {"kind": "builtin", "name": "...", "params": {...}}

Matrices are row-major and must be symmetric within 1e-9 on load (they are
re-symmetrized afterwards); built-in names are ``bipartite``, ``er``,
``circular_band`` and ``one_minus_max``.  Serialization writes full-precision
floats, so a dump/load round trip reproduces values exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import (
    GridGraphon,
    Partition,
    StepGraphon,
    ValidationError,
    lift,
)

LOAD_SYM_TOL = 1e-9
BUILTIN_NAMES = ("bipartite", "er", "circular_band", "one_minus_max")


def bipartite_graphon() -> StepGraphon:
    """Two equal communities joined completely, nothing inside either."""
    return lift(np.array([[0.0, 1.0], [1.0, 0.0]]))


def er_graphon(p: float) -> StepGraphon:
    """Constant kernel of density p (Erdos-Renyi limit)."""
    p = float(p)
    return StepGraphon(Partition(np.array([1.0])), np.array([[p]]))


def circular_band_graphon(tau: float, resolution: int) -> GridGraphon:
    """Indicator of circular distance at most tau, sampled at cell centers.

    Cell-center sampling keeps the support band exactly ``floor(tau * n)``
    cells wide on each side, which the distance layers rely on.
    """
    tau = float(tau)
    if not (0.0 < tau <= 0.5):
        raise ValidationError("circular band needs 0 < tau <= 1/2")
    n = int(resolution)
    # circular gap between cell centers i and j is min(|i-j|, n-|i-j|)/n;
    # dividing the integer gap once avoids rounding fuzz at the band edge
    idx = np.arange(n)
    gap = np.abs(idx[:, None] - idx[None, :])
    delta = np.minimum(gap, n - gap) / n
    return GridGraphon(n, (delta <= tau).astype(float))


def one_minus_max_graphon(resolution: int) -> GridGraphon:
    """W(x,y) = 1 - max(x,y), sampled at cell centers."""
    n = int(resolution)
    centers = (np.arange(n) + 0.5) / n
    return GridGraphon(n, 1.0 - np.maximum(centers[:, None], centers[None, :]))


def builtin_graphon(name: str, params: dict | None = None,
                    resolution: int = 512):
    """Construct a named builtin; grid builtins honor a ``resolution``
    entry in params, falling back to the given default."""
    params = dict(params or {})
    res = int(params.get("resolution", resolution))
    if name == "bipartite":
        return bipartite_graphon()
    if name == "er":
        if "p" not in params:
            raise ValidationError("builtin 'er' needs params {'p': ...}")
        return er_graphon(params["p"])
    if name == "circular_band":
        if "tau" not in params:
            raise ValidationError(
                "builtin 'circular_band' needs params {'tau': ...}"
            )
        return circular_band_graphon(params["tau"], res)
    if name == "one_minus_max":
        return one_minus_max_graphon(res)
    raise ValidationError(
        f"unknown builtin {name!r}; choose one of {', '.join(BUILTIN_NAMES)}"
    )


def _load_matrix(rows, what: str) -> np.ndarray:
    a = np.asarray(rows, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{what} must be a square matrix")
    if a.size and float(np.max(np.abs(a - a.T))) > LOAD_SYM_TOL:
        raise ValidationError(f"{what} is not symmetric within {LOAD_SYM_TOL:g}")
    return (a + a.T) / 2.0


def graphon_from_dict(data: dict, grid_resolution: int = 512):
    kind = data.get("kind")
    if kind == "step":
        if "measures" not in data or "blocks" not in data:
            raise ValidationError("step graphon needs 'measures' and 'blocks'")
        return StepGraphon(Partition(np.asarray(data["measures"], float)),
                           _load_matrix(data["blocks"], "'blocks'"))
    if kind == "grid":
        if "resolution" not in data or "values" not in data:
            raise ValidationError("grid graphon needs 'resolution' and 'values'")
        return GridGraphon(int(data["resolution"]),
                           _load_matrix(data["values"], "'values'"))
    if kind == "builtin":
        if "name" not in data:
            raise ValidationError("builtin graphon needs a 'name'")
        return builtin_graphon(data["name"], data.get("params"),
                               grid_resolution)
    raise ValidationError(
        f"unknown graphon kind {kind!r}; expected step, grid or builtin"
    )


def load_graphon(source, grid_resolution: int = 512):
    """Load a graphon from an already-parsed dict or a JSON file path."""
    if isinstance(source, dict):
        return graphon_from_dict(source, grid_resolution)
    text = Path(source).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid graphon JSON in {source}: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"graphon JSON in {source} must be an object")
    return graphon_from_dict(data, grid_resolution)


def graphon_to_dict(w) -> dict:
    if isinstance(w, StepGraphon):
        return {"kind": "step",
                "measures": w.partition.measures.tolist(),
                "blocks": w.blocks.tolist()}
    if isinstance(w, GridGraphon):
        return {"kind": "grid",
                "resolution": w.resolution,
                "values": w.values.tolist()}
    raise ValidationError(f"cannot serialize {type(w).__name__}")


def dump_graphon(w, path) -> None:
    Path(path).write_text(json.dumps(graphon_to_dict(w)), encoding="utf-8")
