"""Communicability distance and spectral embedding, neighbourhood and
similarity distances, twin-block merging, and the exact cut norm / cut
distance for step graphons.

The communicability distance between sets is the L2 norm of
``e^{W/2} (1_X - 1_Y)``.  On a step graphon this is evaluated exactly: the
indicator difference splits into its block-average part (on which the
adjacency operator acts as a matrix) plus an orthogonal remainder, which the
operator annihilates so the exponential fixes it.  The remainder's norm is
carried explicitly as the "kernel" component of embeddings, making the
embedding distance identity hold to rounding error.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .core import (
    IntervalSet,
    Partition,
    StepGraphon,
    ValidationError,
    _readonly,
    comp_power,
)
from .linalg import expm, sym_eig

_CUT_NORM_MAX_BLOCKS = 24
_CUT_DISTANCE_MAX_BLOCKS = 8


def _symmetrized_operator(w: StepGraphon) -> np.ndarray:
    """B = D^{1/2} A D^{1/2}: symmetric matrix unitarily equivalent to the
    action of the adjacency operator on block averages."""
    root = np.sqrt(w.partition.measures)
    return root[:, None] * w.blocks * root[None, :]


def _indicator_split(w: StepGraphon, x: IntervalSet, y: IntervalSet):
    """Masses, block-average coefficients and orthogonal-part norm of
    f = 1_X - 1_Y."""
    if not isinstance(w, StepGraphon):
        raise ValidationError(
            "communicability metrics need a step graphon; coarsen or load "
            "the kernel as one first"
        )
    mu = w.partition.measures
    xm = x.block_masses(w.partition)
    ym = y.block_masses(w.partition)
    coeffs = (xm - ym) / mu
    f_norm2 = x.measure + y.measure - 2.0 * x.intersection_measure(y)
    step_norm2 = float(np.sum(mu * coeffs * coeffs))
    orth2 = max(0.0, f_norm2 - step_norm2)
    return xm, ym, coeffs, orth2


def communicability_distance(w: StepGraphon, x: IntervalSet,
                             y: IntervalSet) -> float:
    """|| e^{W/2} (1_X - 1_Y) ||_2, exact for step graphons.

    Empty sets are allowed and stand for the zero function, so the distance
    to the empty set measures total communicability mass of a set.
    """
    _, _, coeffs, orth2 = _indicator_split(w, x, y)
    root = np.sqrt(w.partition.measures)
    half = expm(_symmetrized_operator(w) / 2.0)
    step_image = half @ (root * coeffs)
    return math.sqrt(float(step_image @ step_image) + orth2)


@dataclass(frozen=True, eq=False)
class Embedding:
    """Truncated communicability coordinates of a set.

    ``coordinates[k] = e^{lam_k/2} <1_X, phi_k>`` over the retained
    eigenpairs; ``kernel_norm`` is the mass of the indicator outside the
    eigenfunction span (the step-orthogonal remainder), carried so that the
    squared embedding distance plus the squared remainder of the indicator
    difference reproduces the communicability distance.
    """

    truncation: int
    coordinates: np.ndarray
    kernel_norm: float

    def __post_init__(self):
        object.__setattr__(self, "coordinates",
                           _readonly(np.asarray(self.coordinates, float)))


def communicability_embedding(w: StepGraphon, x: IntervalSet,
                              truncation: int) -> Embedding:
    """Spectral communicability coordinates of an interval set.

    Eigenfunctions are recovered from the symmetrized block operator as step
    functions with block values ``v_k[i] / sqrt(mu_i)``.
    """
    if not isinstance(w, StepGraphon):
        raise ValidationError(
            "communicability metrics need a step graphon; coarsen or load "
            "the kernel as one first"
        )
    k = int(truncation)
    if not (0 <= k <= w.size):
        raise ValidationError(
            f"truncation must lie in [0, {w.size}], got {truncation}"
        )
    spec = sym_eig(_symmetrized_operator(w))
    mu = w.partition.measures
    xm = x.block_masses(w.partition)
    projections = spec.eigenvectors[:, :k].T @ (xm / np.sqrt(mu))
    coords = np.exp(spec.eigenvalues[:k] / 2.0) * projections
    kernel2 = max(0.0, x.measure - float(np.sum(xm * xm / mu)))
    return Embedding(k, coords, math.sqrt(kernel2))


def neighbourhood_distance(w, x: float, y: float) -> float:
    """L1 distance between the kernel slices W(x, .) and W(y, .)."""
    a = w.block_values
    mu = w.block_measures
    xi = w.locate(float(x))
    yi = w.locate(float(y))
    return float(np.sum(np.abs(a[xi] - a[yi]) * mu))


def similarity_distance(w, x: float, y: float) -> float:
    """Neighbourhood distance taken on the two-step kernel W o W; never
    exceeds the plain neighbourhood distance."""
    return neighbourhood_distance(comp_power(w, 2), x, y)


def _row_distances(blocks: np.ndarray, mu: np.ndarray) -> np.ndarray:
    diff = np.abs(blocks[:, None, :] - blocks[None, :, :])
    return np.sum(diff * mu[None, None, :], axis=2)


def merge_twins(w: StepGraphon, tol: float = 1e-9) -> StepGraphon:
    """Merge blocks whose kernel rows agree within tol in measure-weighted
    L1; measures add and merged values are measure-weighted row averages.

    Repeats until no two blocks are within tol of each other, so the result
    has pairwise-distinct rows at the given tolerance.
    """
    if tol < 0.0:
        raise ValidationError("merge tolerance must be nonnegative")
    current = w
    while current.size > 1:
        mu = current.partition.measures
        rd = _row_distances(current.blocks, mu)
        close = rd < tol
        np.fill_diagonal(close, True)
        groups = _components(close)
        if len(groups) == current.size:
            return current
        n_new = len(groups)
        mu_new = np.array([mu[g].sum() for g in groups])
        blocks_new = np.empty((n_new, n_new))
        for gi, rows in enumerate(groups):
            for gj, cols in enumerate(groups):
                mass = mu[rows][:, None] * mu[cols][None, :]
                blocks_new[gi, gj] = float(
                    np.sum(current.blocks[np.ix_(rows, cols)] * mass)
                ) / float(mass.sum())
        current = StepGraphon(Partition(mu_new), blocks_new)
    return current


def _components(adj: np.ndarray) -> list[np.ndarray]:
    """Connected components of a boolean relation, ordered by first member."""
    n = adj.shape[0]
    seen = np.zeros(n, dtype=bool)
    groups = []
    for start in range(n):
        if seen[start]:
            continue
        comp = np.zeros(n, dtype=bool)
        comp[start] = True
        while True:
            grown = comp | adj[comp].any(axis=0)
            if (grown == comp).all():
                break
            comp = grown
        seen |= comp
        groups.append(np.flatnonzero(comp))
    return groups


def _masked_cut_norm(weighted: np.ndarray) -> float:
    """Exact sup_{S,T} |sum_{i in S, j in T} C_ij| over block subsets.

    The objective is bilinear in the per-block masses, so the optimum sits
    at a vertex (each block fully in or out).  One side is enumerated; the
    other side is then separable and picked per sign.
    """
    n = weighted.shape[0]
    best = 0.0
    chunk = 1 << 14
    total = 1 << n
    shifts = np.arange(n, dtype=np.uint64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.uint64)
        masks = ((idx[:, None] >> shifts[None, :]) & 1).astype(float)
        g = masks @ weighted
        pos = np.sum(np.where(g > 0.0, g, 0.0), axis=1)
        neg = np.sum(np.where(g < 0.0, -g, 0.0), axis=1)
        best = max(best, float(pos.max(initial=0.0)),
                   float(neg.max(initial=0.0)))
    return best


def cut_norm(w: StepGraphon) -> float:
    """Exact cut norm sup_{S,T} |integral of W over S x T| of a step
    graphon, by enumerating one side's block subsets (2^n cases)."""
    if w.size > _CUT_NORM_MAX_BLOCKS:
        raise ValidationError(
            f"exact cut norm enumerates 2^n block subsets: n = {w.size} "
            f"exceeds the limit of {_CUT_NORM_MAX_BLOCKS}; coarsen the "
            "graphon to fewer blocks first"
        )
    mu = w.partition.measures
    return _masked_cut_norm(mu[:, None] * w.blocks * mu[None, :])


def cut_distance_homogeneous(w1: StepGraphon, w2: StepGraphon) -> float:
    """Cut distance between two step graphons on equal homogeneous
    partitions, minimized over all block permutations.

    Block permutations are the measure-preserving rearrangements available
    at this resolution, so the value is an upper bound on the infimum over
    all measure-preserving bijections.
    """
    if w1.size != w2.size:
        raise ValidationError("cut distance requires equal block counts")
    if not (w1.partition.is_homogeneous() and w2.partition.is_homogeneous()):
        raise ValidationError(
            "cut distance requires homogeneous partitions on both sides"
        )
    n = w1.size
    if n > _CUT_DISTANCE_MAX_BLOCKS:
        raise ValidationError(
            f"cut distance enumerates n! permutations: n = {n} exceeds the "
            f"limit of {_CUT_DISTANCE_MAX_BLOCKS}"
        )
    mu = w1.partition.measures
    outer = mu[:, None] * mu[None, :]
    best = math.inf
    a1, a2 = w1.blocks, w2.blocks
    for perm in itertools.permutations(range(n)):
        p = np.asarray(perm)
        diff = a1 - a2[np.ix_(p, p)]
        best = min(best, _masked_cut_norm(outer * diff))
    return best
