"""Coalescence hidden-variable fractal interpolation."""

from ._backend import BACKEND
from .errors import *  # noqa: F401,F403
from .model import (
    AffineCoefficientPair,
    ChfifSystem,
    GeneralizedDataSet,
    IfsParameters,
    build_system,
    validate_data,
)
from .evaluator import (
    RefinedPointSet,
    SampledFunction,
    chaos_game,
    evaluate_at,
    evaluate_many,
    refine,
    sample_graph,
)
from .insertion import InsertionSpec, SplitParameters, classify_insertion, insert, make_spec
from .smoothness import compute_indices, dimension_bounds, lipschitz_of_affine

__version__ = "0.1.0"
