"""Finite-horizon stochastic dynamic programming: declarative models, forward and
backward recursion, sampled solves and policy simulation."""

from .distributions import (EmpiricalDiscrete, PoissonDiscrete, TruncatedDistribution,
                            cdf, pmf, point_mass, quantile, truncate)
from .errors import InfeasibleState, ModelError, NotSolved, OutOfGrid, PolicyGap, SDPError
from .model import Direction, ModelDefinition, State, StateGrid
from .recursion import (PolicyTable, Solution, SolveReport, ValueTable, backward_recursion,
                        forward_recursion, optimal_action, stage_value)
from .sampling import EXHAUSTIVE, SamplingPlan, Scheme, sample_support, stage_sample_size

__version__ = "0.1.0"
