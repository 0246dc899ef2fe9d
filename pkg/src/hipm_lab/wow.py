"""Wasserstein-over-Wasserstein distance between two empirical laws."""

from __future__ import annotations

from . import _backend
from .errors import ShapeMismatchError
from .measures import EmpiricalLaw
from .ot1d import CostMatrix, solve_assignment

__all__ = ["pairwise_wasserstein_matrix", "wow_distance"]


def _check_pair(q1: EmpiricalLaw, q2: EmpiricalLaw):
    if q1.n != q2.n:
        raise ShapeMismatchError(
            f"laws must have the same number of members, got {q1.n} and {q2.n}")


def pairwise_wasserstein_matrix(q1: EmpiricalLaw, q2: EmpiricalLaw) -> CostMatrix:
    """Matrix of W1 distances between every member of ``q1`` and every member of ``q2``."""
    _check_pair(q1, q2)
    x1, w1 = q1.packed
    x2, w2 = q2.packed
    return CostMatrix(_backend.kernels.pairwise_w1(x1, w1, x2, w2))


def wow_distance(q1: EmpiricalLaw, q2: EmpiricalLaw) -> float:
    """Exact W_W: the n x n assignment over pairwise member W1 costs."""
    return solve_assignment(pairwise_wasserstein_matrix(q1, q2)).value
