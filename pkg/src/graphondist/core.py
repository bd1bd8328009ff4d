"""Step/grid graphon representations and the block operator algebra.

A graphon is a symmetric measurable function W : [0,1]^2 -> [0,1].  Two
computable carriers are provided:

* :class:`StepGraphon` -- block-constant on a finite interval partition;
  represents a finite weighted graph exactly, and every operation on it is
  evaluated in closed form (no quadrature).
* :class:`GridGraphon` -- an n x n uniform-cell discretization of a general
  graphon, sampled at cell centers (midpoint rule).

The operator algebra (``lift``, ``step``, ``mat``, ``coarsen``,
``comp_power``, ``degree``, ``apply_adjacency``) follows the standard
graph-limit conventions; a step graphon with partition measures ``mu`` and
block matrix ``A`` has adjacency action ``f |-> A @ (mu * f)`` on
block-constant functions, with the orthogonal complement annihilated.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class ValidationError(ValueError):
    """Invalid input: shape/symmetry/range violations, bad coordinates."""


class MathDomainError(ValueError):
    """Mathematically out-of-domain request (overflow, divergent series, ...)."""


_SYM_TOL = 1e-12
_SUM_TOL = 1e-12
_RANGE_TOL = 1e-9


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


def _check_symmetric(a: np.ndarray, tol: float, what: str) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValidationError(f"{what} must be a square matrix, got shape {a.shape}")
    scale = max(1.0, float(np.max(np.abs(a))) if a.size else 1.0)
    if a.size and float(np.max(np.abs(a - a.T))) > tol * scale:
        raise ValidationError(f"{what} is not symmetric within {tol:g}")


def _check_unit_range(a: np.ndarray, what: str) -> np.ndarray:
    if a.size and (float(a.min()) < -_RANGE_TOL or float(a.max()) > 1.0 + _RANGE_TOL):
        raise ValidationError(
            f"{what} entries must lie in [0,1]; found range "
            f"[{float(a.min()):g}, {float(a.max()):g}]"
        )
    return np.clip(a, 0.0, 1.0)


@dataclass(frozen=True, eq=False)
class Partition:
    """Ordered interval partition of [0,1] given by positive block measures.

    Block i is the half-open interval [b_{i-1}, b_i); the last block is
    closed on the right so that every point of [0,1] belongs to exactly one
    block.
    """

    measures: np.ndarray
    breakpoints: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        mu = np.asarray(self.measures, dtype=float).reshape(-1)
        if mu.size == 0:
            raise ValidationError("partition needs at least one block")
        if float(mu.min()) <= 0.0:
            raise ValidationError("partition measures must all be positive")
        total = float(mu.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValidationError(
                f"partition measures must sum to 1 (got {total!r})"
            )
        bp = np.concatenate(([0.0], np.cumsum(mu)))
        bp[-1] = 1.0
        object.__setattr__(self, "measures", _readonly(mu))
        object.__setattr__(self, "breakpoints", _readonly(bp))

    @property
    def size(self) -> int:
        return int(self.measures.shape[0])

    @classmethod
    def uniform(cls, n: int) -> "Partition":
        if n < 1:
            raise ValidationError("uniform partition needs n >= 1")
        return cls(np.full(n, 1.0 / n))

    def locate(self, x):
        """Block index containing x (scalar or array); endpoints per the
        half-open convention, x = 1 falls in the last block."""
        xv = np.asarray(x, dtype=float)
        if xv.size and (float(xv.min()) < 0.0 or float(xv.max()) > 1.0):
            raise ValidationError("coordinates must lie in [0,1]")
        idx = np.searchsorted(self.breakpoints, xv, side="right") - 1
        idx = np.clip(idx, 0, self.size - 1)
        return int(idx) if np.ndim(x) == 0 else idx

    def is_homogeneous(self, tol: float = 1e-12) -> bool:
        mu = self.measures
        return bool(np.max(np.abs(mu - 1.0 / mu.size)) <= tol)


@dataclass(frozen=True, eq=False)
class IntervalSet:
    """Finite union of disjoint half-open intervals [a,b) in [0,1].

    Construction normalizes the input: intervals are sorted and
    overlapping/adjacent pieces are merged.  The empty set is allowed.
    """

    intervals: tuple

    def __post_init__(self):
        norm = []
        for pair in self.intervals:
            a, b = float(pair[0]), float(pair[1])
            if not (0.0 <= a < b <= 1.0):
                raise ValidationError(
                    f"interval [{a!r}, {b!r}) must satisfy 0 <= a < b <= 1"
                )
            norm.append((a, b))
        norm.sort()
        merged = []
        for a, b in norm:
            if merged and a <= merged[-1][1]:
                merged[-1] = (merged[-1][0], max(merged[-1][1], b))
            else:
                merged.append((a, b))
        object.__setattr__(self, "intervals", tuple(merged))

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def full(cls) -> "IntervalSet":
        return cls(((0.0, 1.0),))

    @property
    def measure(self) -> float:
        return float(sum(b - a for a, b in self.intervals))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        out = []
        for a, b in self.intervals:
            for c, d in other.intervals:
                lo, hi = max(a, c), min(b, d)
                if lo < hi:
                    out.append((lo, hi))
        return IntervalSet(tuple(out))

    def intersection_measure(self, other: "IntervalSet") -> float:
        total = 0.0
        for a, b in self.intervals:
            for c, d in other.intervals:
                total += max(0.0, min(b, d) - max(a, c))
        return total

    def block_masses(self, partition: Partition) -> np.ndarray:
        """Vector of overlap measures with each partition block."""
        bp = partition.breakpoints
        masses = np.zeros(partition.size)
        for a, b in self.intervals:
            lo = np.maximum(bp[:-1], a)
            hi = np.minimum(bp[1:], b)
            masses += np.maximum(0.0, hi - lo)
        return masses


@dataclass(frozen=True, eq=False)
class StepGraphon:
    """Block-constant graphon: an interval partition plus a symmetric block
    matrix with entries in [0,1]."""

    partition: Partition
    blocks: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.blocks, dtype=float)
        _check_symmetric(a, _SYM_TOL, "block matrix")
        if a.shape[0] != self.partition.size:
            raise ValidationError(
                f"block matrix size {a.shape[0]} does not match partition "
                f"size {self.partition.size}"
            )
        a = _check_unit_range((a + a.T) / 2.0, "block matrix")
        object.__setattr__(self, "blocks", _readonly(a))

    @property
    def size(self) -> int:
        return self.partition.size

    # shared representation accessors (mirrored by GridGraphon)
    @property
    def block_measures(self) -> np.ndarray:
        return self.partition.measures

    @property
    def block_values(self) -> np.ndarray:
        return self.blocks

    @property
    def breakpoints(self) -> np.ndarray:
        return self.partition.breakpoints

    def locate(self, x):
        return self.partition.locate(x)


@dataclass(frozen=True, eq=False)
class GridGraphon:
    """Uniform n x n cell discretization of a graphon, one value per cell
    pair (midpoint samples or cell averages, per the producer)."""

    resolution: int
    values: np.ndarray

    def __post_init__(self):
        n = int(self.resolution)
        if n < 1:
            raise ValidationError("grid resolution must be >= 1")
        v = np.asarray(self.values, dtype=float)
        _check_symmetric(v, _SYM_TOL, "grid values")
        if v.shape[0] != n:
            raise ValidationError(
                f"grid values shape {v.shape} does not match resolution {n}"
            )
        v = _check_unit_range((v + v.T) / 2.0, "grid values")
        object.__setattr__(self, "resolution", n)
        object.__setattr__(self, "values", _readonly(v))

    @property
    def size(self) -> int:
        return self.resolution

    @property
    def block_measures(self) -> np.ndarray:
        return np.full(self.resolution, 1.0 / self.resolution)

    @property
    def block_values(self) -> np.ndarray:
        return self.values

    @property
    def breakpoints(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.resolution + 1)

    def locate(self, x):
        xv = np.asarray(x, dtype=float)
        if xv.size and (float(xv.min()) < 0.0 or float(xv.max()) > 1.0):
            raise ValidationError("coordinates must lie in [0,1]")
        idx = np.minimum((xv * self.resolution).astype(int), self.resolution - 1)
        return int(idx) if np.ndim(x) == 0 else idx


Graphon = StepGraphon | GridGraphon


@dataclass(frozen=True, eq=False)
class BlockFunction:
    """Block-constant function on [0,1]: one value per partition block."""

    partition: Partition
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).reshape(-1)
        if v.shape[0] != self.partition.size:
            raise ValidationError(
                f"value vector length {v.shape[0]} does not match partition "
                f"size {self.partition.size}"
            )
        object.__setattr__(self, "values", _readonly(v))


# ---------------------------------------------------------------------------
# operator algebra
# ---------------------------------------------------------------------------

def lift(a) -> StepGraphon:
    """Embed a symmetric matrix as a step graphon on the uniform partition."""
    a = np.asarray(a, dtype=float)
    _check_symmetric(a, _SYM_TOL, "matrix")
    return StepGraphon(Partition.uniform(a.shape[0]), a)


def step(partition: Partition, a) -> StepGraphon:
    """Step graphon with the given partition and symmetric block matrix."""
    return StepGraphon(partition, np.asarray(a, dtype=float))


def _overlap_matrix(bp_rows: np.ndarray, bp_cols: np.ndarray) -> np.ndarray:
    """O[i,k] = length of block i of the row partition intersected with
    block k of the column partition (both given by breakpoints)."""
    lo = np.maximum(bp_rows[:-1, None], bp_cols[None, :-1])
    hi = np.minimum(bp_rows[1:, None], bp_cols[None, 1:])
    return np.maximum(0.0, hi - lo)


def mat(partition: Partition, w: Graphon) -> np.ndarray:
    """Block-average matrix of a graphon over a partition.

    Entry (i,j) is the mean of W over P_i x P_j.  For step and grid carriers
    this is evaluated by exact intersection of the two interval partitions,
    so no quadrature error is introduced.  When the partitions coincide the
    averages are the block values themselves; returning them directly keeps
    `mat . step = id` and coarsen idempotence exact to the bit.
    """
    if np.array_equal(partition.breakpoints, w.breakpoints):
        return w.block_values.copy()
    overlap = _overlap_matrix(partition.breakpoints, w.breakpoints)
    mass = overlap @ w.block_values @ overlap.T
    mu = partition.measures
    return mass / np.outer(mu, mu)


def coarsen(partition: Partition, w: Graphon) -> StepGraphon:
    """L2-orthogonal projection of a graphon onto P-step graphons."""
    return StepGraphon(partition, mat(partition, w))


def comp_power(w: Graphon, m: int) -> Graphon:
    """Kernel of the m-th power of the adjacency operator.

    For a step graphon with block matrix A and measures mu the result is the
    step graphon with blocks ``M^(m-1) @ A`` where ``M = A @ diag(mu)``; for
    a grid graphon the midpoint-rule analogue ``(V/n)^(m-1) @ V``.
    """
    m = int(m)
    if m < 1:
        raise ValidationError("composition power requires m >= 1 "
                              "(the identity operator has no integral kernel)")
    a = w.block_values
    mm = a * w.block_measures[None, :]
    out = a
    for _ in range(m - 1):
        out = mm @ out
    out = np.clip(out, 0.0, 1.0)
    if isinstance(w, StepGraphon):
        return StepGraphon(w.partition, out)
    return GridGraphon(w.resolution, out)


def degree(w: Graphon):
    """Degree function k(x) = integral of W(x, .).

    Returns a :class:`BlockFunction` for step graphons and a plain vector of
    per-cell values for grid graphons.
    """
    k = w.block_values @ w.block_measures
    if isinstance(w, StepGraphon):
        return BlockFunction(w.partition, k)
    return k


def apply_adjacency(w: Graphon, f):
    """Apply the adjacency operator to a block-constant function.

    The action on block values is ``A @ (mu * f)``; functions orthogonal to
    the step subspace are annihilated and are not representable here.
    """
    if isinstance(w, StepGraphon):
        if not isinstance(f, BlockFunction):
            raise ValidationError("step graphons act on BlockFunction inputs")
        if f.partition.size != w.size or np.max(
            np.abs(f.partition.measures - w.partition.measures)
        ) > _SUM_TOL:
            raise ValidationError("function partition does not match graphon")
        vals = w.blocks @ (w.partition.measures * f.values)
        return BlockFunction(w.partition, vals)
    fv = np.asarray(f, dtype=float).reshape(-1)
    if fv.shape[0] != w.resolution:
        raise ValidationError(
            f"vector length {fv.shape[0]} does not match grid resolution "
            f"{w.resolution}"
        )
    return w.values @ fv / w.resolution


def evaluate(w: Graphon, x, y):
    """Point value W(x,y) by block/cell lookup (scalars or arrays)."""
    xi = w.locate(x)
    yi = w.locate(y)
    out = w.block_values[xi, yi]
    return float(out) if np.ndim(out) == 0 else out


def permute_blocks(w: StepGraphon, sigma) -> StepGraphon:
    """Rearrange the blocks of a step graphon by a permutation.

    Models the measure-preserving point bijection that maps block i of the
    result onto block sigma[i] of the input; adjacency operators of the two
    graphons are unitarily equivalent.
    """
    if not isinstance(w, StepGraphon):
        raise ValidationError("permute_blocks applies to step graphons")
    perm = np.asarray(sigma, dtype=int).reshape(-1)
    if sorted(perm.tolist()) != list(range(w.size)):
        raise ValidationError(f"not a permutation of 0..{w.size - 1}: {sigma!r}")
    mu = w.partition.measures[perm]
    blocks = w.blocks[np.ix_(perm, perm)]
    return StepGraphon(Partition(mu), blocks)


def to_grid(w: Graphon, resolution: int) -> GridGraphon:
    """Render a graphon onto a uniform grid by cell-center sampling."""
    n = int(resolution)
    centers = (np.arange(n) + 0.5) / n
    idx = w.locate(centers)
    return GridGraphon(n, w.block_values[np.ix_(idx, idx)])
