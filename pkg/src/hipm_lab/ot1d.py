"""Exact one-dimensional optimal transport and a dense assignment solver."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import ParameterError, ShapeMismatchError
from .measures import DiscreteMeasure

__all__ = [
    "CostMatrix",
    "AssignmentResult",
    "wasserstein1_1d",
    "solve_assignment",
    "ot_uniform_1d_sorted",
]


@dataclass(frozen=True, eq=False)
class CostMatrix:
    """Square matrix of nonnegative finite transport costs."""

    entries: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.entries, dtype=np.float64)
        if c.ndim != 2 or c.shape[0] != c.shape[1]:
            raise ShapeMismatchError(f"cost matrix must be square, got shape {c.shape}")
        if c.shape[0] == 0:
            raise ParameterError("cost matrix is empty")
        if not np.all(np.isfinite(c)):
            raise ParameterError("cost matrix has non-finite entries")
        if np.any(c < 0):
            raise ParameterError("cost matrix has negative entries")
        c = np.ascontiguousarray(c)
        c.setflags(write=False)
        object.__setattr__(self, "entries", c)

    @property
    def n(self):
        return self.entries.shape[0]

    def to_csv(self):
        return "\n".join(",".join(format(x, ".17g") for x in row)
                         for row in self.entries) + "\n"


@dataclass(frozen=True, eq=False)
class AssignmentResult:
    """A permutation (``row i -> column permutation[i]``) and its average cost."""

    permutation: np.ndarray
    value: float


def _average_cost(entries, perm):
    return math.fsum(entries[np.arange(perm.size), perm]) / perm.size


def wasserstein1_1d(p1: DiscreteMeasure, p2: DiscreteMeasure) -> float:
    """Exact W1 between two discrete measures on the line, as the integral of |F1 - F2|."""
    if len(p1) == 0 or len(p2) == 0:
        raise ParameterError("empty measure")
    x1, w1 = p1.sorted
    x2, w2 = p2.sorted
    return _backend.kernels.w1_sorted(x1, w1, x2, w2)


def solve_assignment(cost) -> AssignmentResult:
    """Exact minimizer of ``(1/n) sum_i C[i, sigma(i)]`` over permutations."""
    if not isinstance(cost, CostMatrix):
        cost = CostMatrix(cost)
    perm = np.asarray(_backend.kernels.assignment(cost.entries), dtype=np.int64)
    return AssignmentResult(perm, _average_cost(cost.entries, perm))


def ot_uniform_1d_sorted(values1, values2) -> AssignmentResult:
    """Optimal matching of two equal-size point clouds with cost ``|x - y|``.

    The i-th smallest of ``values1`` goes to the i-th smallest of ``values2``;
    ties keep the original index order.
    """
    v1 = np.asarray(values1, dtype=np.float64).ravel()
    v2 = np.asarray(values2, dtype=np.float64).ravel()
    if v1.size != v2.size:
        raise ShapeMismatchError(f"lengths differ: {v1.size} vs {v2.size}")
    if v1.size == 0:
        raise ParameterError("empty input")
    o1 = np.argsort(v1, kind="stable")
    o2 = np.argsort(v2, kind="stable")
    perm = np.empty(v1.size, dtype=np.int64)
    perm[o1] = o2
    value = math.fsum(np.abs(v1 - v2[perm])) / v1.size
    return AssignmentResult(perm, value)
