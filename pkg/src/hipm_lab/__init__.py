"""Distances between laws of random probability measures on the line."""

from ._backend import NAME as BACKEND
from .errors import (DomainError, HipmLabError, NumericalError, ParameterError,
                     ParseError, ShapeMismatchError)
from .hipm import (AscentConfig, LipschitzProfile, hipm_lip_distance,
                   mean_lower_bound, projected_gradient_ascent)
from .measures import (DiscreteMeasure, DPParams, EmpiricalLaw, Grid, GriddedLaw,
                       Uniform, UniformMixture, EmpiricalBase,
                       empirical_hierarchical_estimator, project_law, project_to_grid)
from .ot1d import ot_uniform_1d_sorted, solve_assignment, wasserstein1_1d
from .wow import pairwise_wasserstein_matrix, wow_distance

__version__ = "0.1.0"
