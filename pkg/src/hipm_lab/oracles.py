"""Closed-form reference values and analytic upper bounds on the line.

Everything reduces to one-dimensional integrals of a CDF, evaluated by a
composite midpoint rule, so any base measure with a CDF can be plugged in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ParameterError
from .measures import DiscreteMeasure, Uniform, UniformMixture

__all__ = [
    "Cdf",
    "DEFAULT_QUADRATURE_POINTS",
    "wasserstein1_from_cdfs",
    "species_sampling_wow",
    "dirmult_upper_bound",
    "stickbreaking_upper_bound",
    "hier_empirical_upper_bound",
    "FIG1_TRUE_VALUE",
]

DEFAULT_QUADRATURE_POINTS = 100_000

# W(Unif[-1/2, 1/2], 1/2 Unif[-1, -3/4] + 1/2 Unif[3/4, 1])
FIG1_TRUE_VALUE = 0.625


@dataclass(frozen=True)
class Cdf:
    """A distribution function ``F`` with ``F(a) = 0`` and ``F(b) = 1``."""

    evaluate: Callable
    a: float
    b: float

    def __post_init__(self):
        if not self.a <= self.b:
            raise ParameterError(f"invalid CDF interval [{self.a}, {self.b}]")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        out = np.clip(np.asarray(self.evaluate(x), dtype=float), 0.0, 1.0)
        out = np.where(x < self.a, 0.0, out)
        return np.where(x >= self.b, 1.0, out)

    @classmethod
    def from_base(cls, base):
        lo, hi = base.support
        return cls(base.cdf, lo, hi)

    @classmethod
    def uniform(cls, low, high):
        return cls.from_base(Uniform(low, high))

    @classmethod
    def mixture(cls, components, weights):
        return cls.from_base(UniformMixture(tuple(components), tuple(weights)))

    @classmethod
    def dirac(cls, x):
        return cls(lambda t: (t >= x).astype(float), float(x), float(x))

    @classmethod
    def from_measure(cls, p: DiscreteMeasure):
        return cls(p.cdf, float(p.atoms.min()), float(p.atoms.max()))


def _midpoints(a, b, points):
    if int(points) != points or points < 2:
        raise ParameterError(f"quadrature needs at least 2 points, got {points!r}")
    h = (b - a) / points
    return a + h * (np.arange(points) + 0.5), h


def _integrate(fn, a, b, points):
    if b <= a:
        return 0.0
    x, h = _midpoints(a, b, points)
    return math.fsum(fn(x)) * h


def wasserstein1_from_cdfs(F1: Cdf, F2: Cdf, quadrature_points=DEFAULT_QUADRATURE_POINTS) -> float:
    """Midpoint-rule value of ``int |F1 - F2|`` over the union of both intervals."""
    a = min(F1.a, F2.a)
    b = max(F1.b, F2.b)
    return _integrate(lambda x: np.abs(F1(x) - F2(x)), a, b, quadrature_points)


def species_sampling_wow(F1: Cdf, F2: Cdf, quadrature_points=DEFAULT_QUADRATURE_POINTS) -> float:
    """W_W (= d_Lip) between two species sampling laws with a common jump law.

    Only the base measures matter, through their W1 distance.
    """
    return wasserstein1_from_cdfs(F1, F2, quadrature_points)


def _check_alpha(alpha):
    if not (math.isfinite(alpha) and alpha > 0):
        raise ParameterError(f"alpha must be a positive real, got {alpha!r}")


def _check_n(N):
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N!r}")


def _sqrt_variance_integral(F0, points):
    return _integrate(lambda x: np.sqrt(np.maximum(F0(x) * (1.0 - F0(x)), 0.0)),
                      F0.a, F0.b, points)


def dirmult_upper_bound(N, F0: Cdf, quadrature_points=DEFAULT_QUADRATURE_POINTS) -> float:
    """Dirichlet-multinomial bound ``N^(-1/2) int sqrt(F0 (1 - F0))``."""
    _check_n(N)
    return _sqrt_variance_integral(F0, quadrature_points) / math.sqrt(N)


def stickbreaking_upper_bound(alpha, N, F0: Cdf, quadrature_points=DEFAULT_QUADRATURE_POINTS) -> float:
    """Truncated stick-breaking bound ``2 (alpha/(alpha+1))^N int F0 (1 - F0)``."""
    _check_alpha(alpha)
    _check_n(N)
    integral = _integrate(lambda x: F0(x) * (1.0 - F0(x)), F0.a, F0.b, quadrature_points)
    return 2.0 * (alpha / (alpha + 1.0)) ** N * integral


def hier_empirical_upper_bound(alpha, N, F0: Cdf, quadrature_points=DEFAULT_QUADRATURE_POINTS) -> float:
    """Hierarchical empirical bound ``sqrt(alpha/(N (alpha+1))) int sqrt(F0 (1 - F0))``."""
    _check_alpha(alpha)
    _check_n(N)
    return math.sqrt(alpha / (N * (alpha + 1.0))) * _sqrt_variance_integral(F0, quadrature_points)
