"""Batch command line front end.

Subcommands: ``varadhan`` (distance matrix CSV + layer heatmap PGM + summary
JSON), ``slope`` (log-log slope experiments, set-pair or matrix-transform
mode), ``metrics`` (communicability matrix / embedding / cut norm),
``connectivity`` and ``sample``.  Exit codes: 0 ok, 1 expectation check
failed, 2 invalid input, 3 mathematical domain error (including a
disconnected graphon without --allow-disconnected), 4 I/O failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .connectivity import (
    block_distance_matrix,
    default_epsilon,
    diameter,
    is_connected,
    support_graph,
)
from .core import (
    GridGraphon,
    IntervalSet,
    MathDomainError,
    StepGraphon,
    ValidationError,
)
from .io import load_graphon
from .linalg import EXPONENTIAL, RESOLVENT
from .metrics import (
    communicability_distance,
    communicability_embedding,
    cut_norm,
)
from .sampler import RNG_ALGORITHM, compare_with_varadhan, sample_graph
from .varadhan import (
    default_t_grid,
    distance_field,
    general_varadhan_slope,
    varadhan_slope,
)


@dataclass
class RunConfig:
    """Validated options of one CLI invocation."""

    command: str
    input: Path
    out: Path
    grid: int = 512
    epsilon: float | None = None
    tgrid: np.ndarray | None = None
    expect: float | None = None
    tolerance: float = 0.1
    seed: int = 0
    reproducible: bool = False
    allow_disconnected: bool = False
    sets: list[IntervalSet] = field(default_factory=list)
    set_u: IntervalSet | None = None
    set_v: IntervalSet | None = None
    transform: str | None = None
    weights: str = "random"
    embed: int | None = None
    cutnorm: bool = False
    n: int = 500
    trials: int = 1


def parse_interval_set(text: str) -> IntervalSet:
    """Parse 'a:b,c:d' into an interval set."""
    pairs = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            lo, hi = chunk.split(":")
            pairs.append((float(lo), float(hi)))
        except ValueError as exc:
            raise ValidationError(
                f"bad interval {chunk!r}; expected 'a:b'"
            ) from exc
    return IntervalSet(tuple(pairs))


def parse_t_grid(text: str) -> np.ndarray:
    """Parse 'a:b:k' into k log-spaced t values, ordered decreasing."""
    try:
        lo_s, hi_s, k_s = text.split(":")
        lo, hi, k = float(lo_s), float(hi_s), int(k_s)
    except ValueError as exc:
        raise ValidationError(f"bad t grid {text!r}; expected 'a:b:k'") from exc
    if lo <= 0 or hi <= 0 or k < 2:
        raise ValidationError("t grid needs positive endpoints and k >= 2")
    lo, hi = min(lo, hi), max(lo, hi)
    return np.logspace(math.log10(hi), math.log10(lo), k)


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphondist",
        description="Distances on graphons: Varadhan (shortest-path), "
                    "communicability, neighbourhood/similarity and cut "
                    "metrics, plus W-random sampling.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="graphon JSON file")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--grid", type=int, default=512,
                       help="grid resolution for builtin grid graphons")
        p.add_argument("--epsilon", type=float, default=None,
                       help="support threshold override")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--reproducible", action="store_true",
                       help="suppress timestamps for byte-identical output")
        p.add_argument("--allow-disconnected", action="store_true")
        p.add_argument("--tolerance", type=float, default=0.1)

    p = sub.add_parser("varadhan", help="distance field, layers, summary")
    common(p)

    p = sub.add_parser("slope", help="log-log slope experiments")
    common(p)
    p.add_argument("--u", help="interval set 'a:b,c:d'")
    p.add_argument("--v", help="interval set 'a:b,c:d'")
    p.add_argument("--tgrid", default=None, help="'a:b:k' log-spaced t grid")
    p.add_argument("--expect", type=float, default=None)
    p.add_argument("--transform", choices=["exp", "resolvent"], default=None,
                   help="matrix-transform mode over all block pairs")
    p.add_argument("--weights", choices=["unit", "random"], default="random")

    p = sub.add_parser("metrics", help="communicability / embedding / cut norm")
    common(p)
    p.add_argument("--sets", help="semicolon-separated interval sets")
    p.add_argument("--embed", type=int, default=None,
                   help="embedding truncation (needs --sets)")
    p.add_argument("--cutnorm", action="store_true")

    p = sub.add_parser("connectivity", help="connectedness and diameter")
    common(p)

    p = sub.add_parser("sample", help="W-random graph and agreement report")
    common(p)
    p.add_argument("--n", type=int, default=500)
    p.add_argument("--trials", type=int, default=1)
    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(
        command=args.command,
        input=Path(args.input),
        out=Path(args.out),
        grid=args.grid,
        epsilon=args.epsilon,
        tolerance=args.tolerance,
        seed=args.seed,
        reproducible=args.reproducible,
        allow_disconnected=args.allow_disconnected,
    )
    if cfg.grid < 1:
        raise ValidationError("--grid must be a positive resolution")
    if args.command == "slope":
        cfg.tgrid = parse_t_grid(args.tgrid) if args.tgrid else None
        cfg.expect = args.expect
        cfg.transform = args.transform
        cfg.weights = args.weights
        if args.u:
            cfg.set_u = parse_interval_set(args.u)
        if args.v:
            cfg.set_v = parse_interval_set(args.v)
    elif args.command == "metrics":
        if args.sets:
            cfg.sets = [parse_interval_set(s)
                        for s in args.sets.split(";") if s.strip()]
        cfg.embed = args.embed
        cfg.cutnorm = args.cutnorm
    elif args.command == "sample":
        cfg.n = args.n
        cfg.trials = args.trials
    return cfg


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _metadata(cfg: RunConfig, options: dict) -> dict:
    meta = {
        "tool": "graphondist",
        "version": __version__,
        "input": str(cfg.input),
        "input_sha256": hashlib.sha256(cfg.input.read_bytes()).hexdigest(),
        "options": options,
    }
    if not cfg.reproducible:
        meta["generated_at"] = datetime.now(timezone.utc).isoformat()
    return meta


def _meta_lines(meta: dict) -> list[str]:
    return [f"# {key}: {json.dumps(meta[key], sort_keys=True)}"
            for key in sorted(meta)]


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n",
                    encoding="utf-8")


def _axis_labels(w) -> list[str]:
    if isinstance(w, GridGraphon):
        return [repr((i + 0.5) / w.resolution) for i in range(w.resolution)]
    return [f"block_{i}" for i in range(w.size)]


def _write_csv(path: Path, matrix: np.ndarray, labels: list[str],
               meta: dict) -> None:
    lines = _meta_lines(meta)
    lines.append(",".join(["index"] + labels))
    for label, row in zip(labels, matrix):
        cells = [label] + ["inf" if math.isinf(v) else repr(float(v))
                           for v in row]
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv_matrix(path) -> np.ndarray:
    """Read back a matrix CSV written by this tool (metadata lines skipped)."""
    rows = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line or line.startswith("#") or line.startswith("index,"):
            continue
        cells = line.split(",")[1:]
        rows.append([math.inf if c == "inf" else float(c) for c in cells])
    return np.asarray(rows)


def _write_pgm(path: Path, values: np.ndarray, maxval: int,
               meta: dict) -> None:
    lines = ["P2"]
    lines.extend(_meta_lines(meta))
    n_rows, n_cols = values.shape
    lines.append(f"{n_cols} {n_rows}")
    lines.append(str(max(1, maxval)))
    for row in values:
        lines.append(" ".join(str(int(v)) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_varadhan(cfg: RunConfig) -> int:
    w = load_graphon(cfg.input, cfg.grid)
    fld = distance_field(w, cfg.epsilon)
    if not fld.connected and not cfg.allow_disconnected:
        print("graphon is disconnected; rerun with --allow-disconnected",
              file=sys.stderr)
        return 3
    meta = _metadata(cfg, {"epsilon": cfg.epsilon, "grid": cfg.grid,
                           "kind": fld.kind})
    cfg.out.mkdir(parents=True, exist_ok=True)
    labels = _axis_labels(w)
    _write_csv(cfg.out / "varadhan_distance.csv", fld.matrix, labels, meta)

    has_unreachable = not fld.connected
    maxval = fld.layer_count + (1 if has_unreachable else 0)
    pixels = np.where(np.isfinite(fld.matrix), fld.matrix, maxval)
    _write_pgm(cfg.out / "varadhan_layers.pgm", pixels, maxval, meta)

    mu = w.block_measures
    layer_sizes = {}
    for level in range(1, fld.layer_count + 1):
        mask = fld.matrix == level
        layer_sizes[str(level)] = float(
            np.sum(np.outer(mu, mu)[mask])
        )
    summary = {
        "meta": meta,
        "connected": fld.connected,
        "diameter": fld.layer_count if fld.connected else "unbounded",
        "layer_count": fld.layer_count,
        "layer_sizes": layer_sizes,
        "blocks": int(fld.size),
    }
    _write_json(cfg.out / "varadhan_summary.json", summary)
    return 0


def _transform_family(name: str):
    return EXPONENTIAL if name == "exp" else RESOLVENT


def _slope_transform_mode(cfg: RunConfig, w) -> int:
    if not isinstance(w, StepGraphon):
        raise ValidationError("transform mode requires a step graphon")
    pattern = support_graph(w, cfg.epsilon).matrix.astype(float)
    n = pattern.shape[0]
    rng = np.random.default_rng(cfg.seed)
    if cfg.weights == "random":
        raw = rng.uniform(0.5, 1.5, size=(n, n))
        weights = pattern * (raw + raw.T) / 2.0
        diag = rng.uniform(-1.0, 1.0, size=n)
    else:
        weights = pattern
        diag = np.zeros(n)
    family = _transform_family(cfg.transform)
    walk = block_distance_matrix(support_graph(w, cfg.epsilon))
    expected = walk.copy()
    np.fill_diagonal(expected, 0.0)
    tgrid = cfg.tgrid if cfg.tgrid is not None else default_t_grid()
    pairs = []
    all_ok = True
    for i in range(n):
        for j in range(n):
            est = general_varadhan_slope(pattern, weights, diag, family,
                                         i, j, tgrid)
            want = float(expected[i, j])
            ok = bool(math.isfinite(want)
                      and abs(est.slope - want) <= cfg.tolerance)
            all_ok = all_ok and ok
            pairs.append({
                "pair": [i, j],
                "slope": est.slope,
                "residual": est.residual,
                "estimated": est.estimated_distance,
                "expected": want if math.isfinite(want) else "unreachable",
                "match": ok,
            })
    meta = _metadata(cfg, {"transform": cfg.transform, "weights": cfg.weights,
                           "seed": cfg.seed, "tolerance": cfg.tolerance,
                           "t_grid": tgrid.tolist()})
    payload = {"meta": meta, "mode": "transform", "family": cfg.transform,
               "pairs": pairs, "all_match": all_ok, "rng": RNG_ALGORITHM}
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_json(cfg.out / "slope.json", payload)
    return 0 if all_ok else 1


def cmd_slope(cfg: RunConfig) -> int:
    w = load_graphon(cfg.input, cfg.grid)
    if cfg.transform:
        return _slope_transform_mode(cfg, w)
    if cfg.set_u is None or cfg.set_v is None:
        raise ValidationError("slope needs --u and --v (or --transform)")
    tgrid = cfg.tgrid if cfg.tgrid is not None else default_t_grid()
    est = varadhan_slope(w, cfg.set_u, cfg.set_v, tgrid)
    meta = _metadata(cfg, {"u": [list(p) for p in cfg.set_u.intervals],
                           "v": [list(p) for p in cfg.set_v.intervals],
                           "tolerance": cfg.tolerance,
                           "expect": cfg.expect})
    payload = {
        "meta": meta,
        "pair": {"u": [list(p) for p in cfg.set_u.intervals],
                 "v": [list(p) for p in cfg.set_v.intervals]},
        "t_grid": est.t_grid.tolist(),
        "log_values": est.log_values.tolist(),
        "slope": est.slope,
        "residual": est.residual,
        "estimated_distance": est.estimated_distance,
        "expected": cfg.expect,
    }
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_json(cfg.out / "slope.json", payload)
    if cfg.expect is not None and abs(est.slope - cfg.expect) > cfg.tolerance:
        print(f"slope {est.slope:.4f} misses expected {cfg.expect} "
              f"by more than {cfg.tolerance}", file=sys.stderr)
        return 1
    return 0


def cmd_metrics(cfg: RunConfig) -> int:
    w = load_graphon(cfg.input, cfg.grid)
    if not cfg.sets and not cfg.cutnorm:
        raise ValidationError("metrics needs --sets and/or --cutnorm")
    cfg.out.mkdir(parents=True, exist_ok=True)
    wrote = []
    if cfg.sets:
        if not isinstance(w, StepGraphon):
            raise ValidationError(
                "communicability metrics require a step graphon"
            )
        sets = cfg.sets
        meta = _metadata(cfg, {"sets": [[list(p) for p in s.intervals]
                                        for s in sets]})
        m = np.zeros((len(sets), len(sets)))
        for i, si in enumerate(sets):
            for j, sj in enumerate(sets):
                if j < i:
                    m[i, j] = m[j, i]
                else:
                    m[i, j] = communicability_distance(w, si, sj)
        labels = [f"set_{i}" for i in range(len(sets))]
        _write_csv(cfg.out / "metrics_communicability.csv", m, labels, meta)
        wrote.append("metrics_communicability.csv")
        if cfg.embed is not None:
            entries = []
            for i, s in enumerate(sets):
                emb = communicability_embedding(w, s, cfg.embed)
                entries.append({
                    "set": [list(p) for p in s.intervals],
                    "coordinates": emb.coordinates.tolist(),
                    "kernel_norm": emb.kernel_norm,
                    "truncation": emb.truncation,
                })
            _write_json(cfg.out / "metrics_embedding.json",
                        {"meta": meta, "embeddings": entries})
            wrote.append("metrics_embedding.json")
    if cfg.cutnorm:
        if not isinstance(w, StepGraphon):
            raise ValidationError("cut norm requires a step graphon")
        meta = _metadata(cfg, {"cutnorm": True})
        _write_json(cfg.out / "metrics_cutnorm.json",
                    {"meta": meta, "cut_norm": cut_norm(w),
                     "blocks": w.size})
        wrote.append("metrics_cutnorm.json")
    return 0


def cmd_connectivity(cfg: RunConfig) -> int:
    w = load_graphon(cfg.input, cfg.grid)
    eps = cfg.epsilon if cfg.epsilon is not None else default_epsilon(w)
    connected = is_connected(w, eps)
    diam = diameter(w, eps)
    meta = _metadata(cfg, {"epsilon": eps})
    payload = {
        "meta": meta,
        "connected": connected,
        "diameter": diam if math.isfinite(diam) else "unbounded",
        "epsilon": eps,
        "resolution": "cell" if isinstance(w, GridGraphon) else "block",
        # block-level decisions are exact for step graphons; the cell
        # support graph of a grid is a discretization
        "exact": isinstance(w, StepGraphon),
    }
    cfg.out.mkdir(parents=True, exist_ok=True)
    _write_json(cfg.out / "connectivity.json", payload)
    return 0


def cmd_sample(cfg: RunConfig) -> int:
    w = load_graphon(cfg.input, cfg.grid)
    connected = is_connected(w, cfg.epsilon)
    if not connected and not cfg.allow_disconnected:
        print("graphon is disconnected; rerun with --allow-disconnected",
              file=sys.stderr)
        return 3
    cfg.out.mkdir(parents=True, exist_ok=True)
    graph = sample_graph(w, cfg.n, cfg.seed)
    meta = _metadata(cfg, {"n": cfg.n, "trials": cfg.trials,
                           "seed": cfg.seed, "rng": RNG_ALGORITHM})
    edge_lines = _meta_lines(meta)
    edge_lines.extend(f"{u} {v}" for u, v in graph.edge_list())
    (cfg.out / "sample_edges.txt").write_text("\n".join(edge_lines) + "\n",
                                              encoding="utf-8")
    payload = {"meta": meta, "edges": graph.edge_count,
               "vertices": graph.n}
    if connected:
        payload["comparison"] = compare_with_varadhan(w, cfg.n, cfg.trials,
                                                      cfg.seed)
    _write_json(cfg.out / "sample_report.json", payload)
    return 0


_DISPATCH = {
    "varadhan": cmd_varadhan,
    "slope": cmd_slope,
    "metrics": cmd_metrics,
    "connectivity": cmd_connectivity,
    "sample": cmd_sample,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        cfg = _config_from_args(args)
        return _DISPATCH[cfg.command](cfg)
    except ValidationError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except MathDomainError as exc:
        print(f"math domain error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
