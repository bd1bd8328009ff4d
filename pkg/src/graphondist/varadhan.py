"""Integer-valued shortest-path (Varadhan) distance on graphons.

The distance between two positive-measure sets U, V is the least power m of
the adjacency operator with mass between them, ``min { m : <1_U, W^m 1_V> >
0 }``; between two points it is the index of the first composition power
whose support contains the pair.  Both are computed combinatorially on the
block/cell support graph -- walk counting, never series summation.

The heat-trace route (slope of log <1_V, e^{tW} 1_U> against log t as t
shrinks) recovers the same integers and is provided as an independent
verification path; the short-time limit is ill-conditioned in floating
point, so it is never the source of truth.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .connectivity import UNREACHABLE, block_distance_matrix, support_graph
from .core import (
    GridGraphon,
    IntervalSet,
    MathDomainError,
    StepGraphon,
    ValidationError,
    _readonly,
    degree,
)
from .linalg import TaylorFamily, analytic_transform, expm


@dataclass(frozen=True, eq=False)
class DistanceField:
    """Pairwise walk distances of a graphon at block/cell resolution.

    ``matrix[i, j]`` is the distance between distinct points of blocks i and
    j; the diagonal holds the within-block distance for x != y (1 with a
    self-loop block, else 2 via a neighbour).  The zero distance of
    coincident points lives only in the pointwise API.
    """

    kind: str
    breakpoints: np.ndarray
    matrix: np.ndarray
    connected: bool

    def __post_init__(self):
        object.__setattr__(self, "breakpoints",
                           _readonly(np.asarray(self.breakpoints, float)))
        object.__setattr__(self, "matrix",
                           _readonly(np.asarray(self.matrix, float)))

    @property
    def size(self) -> int:
        return int(self.matrix.shape[0])

    @property
    def within_block(self) -> np.ndarray:
        return np.diag(self.matrix)

    @property
    def layer_count(self) -> int:
        """Number of distance layers = largest finite entry (the diameter
        for connected graphons)."""
        finite = self.matrix[np.isfinite(self.matrix)]
        return int(finite.max()) if finite.size else 0

    def _locate(self, x):
        xv = np.asarray(x, dtype=float)
        if xv.size and (float(xv.min()) < 0.0 or float(xv.max()) > 1.0):
            raise ValidationError("coordinates must lie in [0,1]")
        idx = np.searchsorted(self.breakpoints, xv, side="right") - 1
        return np.clip(idx, 0, self.size - 1)

    def pointwise(self, x, y):
        """Distance between points (scalars or broadcastable arrays);
        exactly 0 on coincident coordinates."""
        xi = self._locate(x)
        yi = self._locate(y)
        d = self.matrix[xi, yi]
        out = np.where(np.asarray(x, float) == np.asarray(y, float), 0.0, d)
        if np.ndim(out) == 0:
            val = float(out)
            return int(val) if math.isfinite(val) else UNREACHABLE
        return out


def distance_field(w, epsilon: float | None = None) -> DistanceField:
    """Build the full distance field of a graphon.

    The distance layers are the level sets of the matrix; their count equals
    the diameter.  For a disconnected graphon the field is still returned,
    with unreachable entries and ``connected=False``.
    """
    s = support_graph(w, epsilon)
    d = block_distance_matrix(s)
    kind = "grid" if isinstance(w, GridGraphon) else "step"
    return DistanceField(kind, w.breakpoints, d, bool(np.isfinite(d).all()))


def varadhan_distance(w, x, y, epsilon: float | None = None):
    """Pointwise Varadhan distance (scalars or arrays).

    0 iff x == y; otherwise the walk distance of the blocks containing the
    two points, with the within-block rule on the diagonal.
    """
    return distance_field(w, epsilon).pointwise(x, y)


def _block_masses(w, u: IntervalSet) -> np.ndarray:
    if isinstance(w, StepGraphon):
        return u.block_masses(w.partition)
    bp = w.breakpoints
    masses = np.zeros(w.size)
    for a, b in u.intervals:
        lo = np.maximum(bp[:-1], a)
        hi = np.minimum(bp[1:], b)
        masses += np.maximum(0.0, hi - lo)
    return masses


def set_distance(w, u: IntervalSet, v: IntervalSet, epsilon: float | None = None):
    """Least adjacency power with mass between two interval sets.

    0 when the sets overlap on positive measure; otherwise the minimum walk
    distance between any block touched by U and any block touched by V.
    ``UNREACHABLE`` when no power connects them (disconnected graphon).
    """
    if u.is_empty or v.is_empty:
        raise ValidationError("set distance requires nonempty interval sets")
    if u.intersection_measure(v) > 0.0:
        return 0
    ub = _block_masses(w, u) > 0.0
    vb = _block_masses(w, v) > 0.0
    d = block_distance_matrix(support_graph(w, epsilon))
    best = float(d[np.ix_(ub, vb)].min())
    return int(best) if math.isfinite(best) else UNREACHABLE


_SERIES_CAP = 400


def heat_content(w, u: IntervalSet, v: IntervalSet, t: float,
                 generator: str = "adjacency") -> float:
    """Heat mass <1_V, e^{tG} 1_U> for G the adjacency operator, or
    <1_V, e^{-tL} 1_U> for L the combinatorial Laplacian.

    Exact for step/grid carriers via the splitting of indicators into their
    block-average part plus an orthogonal remainder: the adjacency operator
    acts as a matrix on block averages and annihilates the remainder, while
    the Laplacian acts as multiplication by the degree values there.  The
    adjacency series has nonnegative terms only, so tiny leading orders
    (t^d at walk distance d) are summed without cancellation.
    """
    t = float(t)
    if t < 0.0:
        raise ValidationError("heat content requires t >= 0")
    if u.is_empty or v.is_empty:
        raise ValidationError("heat content requires nonempty interval sets")
    mu = w.block_measures
    a = w.block_values
    um = _block_masses(w, u)
    vm = _block_masses(w, v)
    overlap = u.intersection_measure(v)

    if generator == "adjacency":
        # mu(U&V) + sum_{m>=1} t^m/m! * u^T M^{m-1} A v,  M = A diag(mu).
        # All terms are nonnegative, so leading exact zeros (walk distance
        # d means the first d-1 terms vanish) cost no cancellation; stop
        # only after two negligible terms in a row once mass has appeared,
        # which rides out the zero/nonzero alternation of bipartite blocks.
        total = overlap
        n = mu.shape[0]
        # the first positive term sits at the walk distance (at most n+1)
        # and the terms peak near m = t, so this horizon always reaches
        # both the onset and the decaying tail
        cap = max(_SERIES_CAP, n + 50, int(3 * t) + 50)
        mm = a * mu[None, :]
        y = a @ vm
        coeff = t
        small_run = 0
        for m in range(1, cap + 1):
            contrib = coeff * float(um @ y)
            total += contrib
            if total > 0.0 and contrib <= 1e-18 * total:
                small_run += 1
                if small_run >= 2:
                    return total
            else:
                small_run = 0
            coeff *= t / (m + 1)
            y = mm @ y
        if total == 0.0 or coeff * float(um @ y) <= 1e-18 * total:
            return total
        raise MathDomainError(
            f"heat content series did not converge within {cap} terms "
            f"at t = {t:g}"
        )

    if generator == "laplacian":
        k = degree(w)
        kv = k.values if isinstance(w, StepGraphon) else k
        mmat = a * mu[None, :]
        lap = np.diag(kv) - mmat
        c = um / mu
        step_part = float(vm @ (expm(-t * lap) @ c))
        per_block_overlap = _block_masses(w, u.intersect(v))
        orth_part = float(np.sum(np.exp(-t * kv) *
                                 (per_block_overlap - um * vm / mu)))
        return step_part + orth_part

    raise ValidationError(f"unknown generator {generator!r}")


@dataclass(frozen=True, eq=False)
class SlopeEstimate:
    """Least-squares slope of log values against log t on a decreasing
    positive t-grid, with the RMS fit residual."""

    t_grid: np.ndarray
    log_values: np.ndarray
    slope: float
    residual: float

    def __post_init__(self):
        object.__setattr__(self, "t_grid",
                           _readonly(np.asarray(self.t_grid, float)))
        object.__setattr__(self, "log_values",
                           _readonly(np.asarray(self.log_values, float)))

    @property
    def estimated_distance(self) -> int:
        return int(round(self.slope))


def default_t_grid(lo: float = 1e-5, hi: float = 1e-3, k: int = 8) -> np.ndarray:
    """Decreasing log-spaced slope-fit grid; the default window balances the
    O(t) subleading bias at the top against log underflow at the bottom."""
    return np.logspace(math.log10(hi), math.log10(lo), int(k))


def _validate_t_grid(t_grid) -> np.ndarray:
    tg = np.asarray(t_grid, dtype=float).reshape(-1)
    if tg.size < 2:
        raise ValidationError("slope fit needs at least two t values")
    if float(tg.min()) < 1e-8:
        raise ValidationError("t values below 1e-8 underflow the log fit")
    if not np.all(np.diff(tg) < 0.0):
        raise ValidationError("t grid must be strictly decreasing")
    return tg


def _fit_slope(tg: np.ndarray, values: np.ndarray, what: str) -> SlopeEstimate:
    bad = values <= 0.0
    if bad.any():
        t_bad = float(tg[bad][0])
        raise MathDomainError(
            f"{what} is not positive at t = {t_bad:g}; no slope is defined"
        )
    logs = np.log(values)
    lt = np.log(tg)
    coeffs = np.polyfit(lt, logs, 1)
    fitted = np.polyval(coeffs, lt)
    residual = float(np.sqrt(np.mean((fitted - logs) ** 2)))
    return SlopeEstimate(tg, logs, float(coeffs[0]), residual)


def varadhan_slope(w, u: IntervalSet, v: IntervalSet,
                   t_grid=None) -> SlopeEstimate:
    """Slope of log heat content against log t: a numerical verification of
    the combinatorial set distance (the slope converges to it as t -> 0+)."""
    tg = default_t_grid() if t_grid is None else _validate_t_grid(t_grid)
    vals = np.array([heat_content(w, u, v, t) for t in tg])
    return _fit_slope(tg, vals, "heat content")


def general_varadhan_slope(adjacency, weights, diag, family: TaylorFamily,
                           i: int, j: int, t_grid=None) -> SlopeEstimate:
    """Slope of log |f(Lt)_{ij}| for L = M + D built from a 0/1 adjacency
    pattern.

    M must be nonnegative with exactly the adjacency's zero pattern and D is
    an arbitrary diagonal; for any analytic f with all-nonzero Taylor
    coefficients the slope recovers the shortest-path distance d(i,j).
    """
    a = np.asarray(adjacency, dtype=float)
    m = np.asarray(weights, dtype=float)
    if a.shape != m.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError("adjacency and weight matrices must be square "
                              "and of equal shape")
    if not np.array_equal(a, a.T):
        raise ValidationError("adjacency pattern must be symmetric")
    if not np.array_equal(a != 0.0, m != 0.0):
        raise ValidationError(
            "weight matrix zero pattern must equal the adjacency pattern"
        )
    if float(m.min()) < 0.0:
        raise ValidationError("weights must be nonnegative")
    d = np.asarray(diag, dtype=float).reshape(-1)
    if d.shape[0] != a.shape[0]:
        raise ValidationError("diagonal length does not match matrix size")
    n = a.shape[0]
    if not (0 <= i < n and 0 <= j < n):
        raise ValidationError(f"indices ({i}, {j}) out of range for n = {n}")
    lmat = m + np.diag(d)
    tg = default_t_grid() if t_grid is None else _validate_t_grid(t_grid)
    vals = np.empty(tg.shape[0])
    for idx, t in enumerate(tg):
        transformed, _ = analytic_transform(family, lmat, float(t))
        vals[idx] = abs(float(transformed[i, j]))
    return _fit_slope(tg, vals, f"|f(Lt)|[{i},{j}]")
