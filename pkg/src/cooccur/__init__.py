"""Cooccur - Exact finite probability with co-occurrence conditioning"""

__version__ = "0.1.0"

from loguru import logger

from .checks import CheckReport, run_checks
from .conditioning import CiSpec, Kernel, PointwiseConditional, check_cond_independence, cond_kernel
from .cooccurrence import Constraint, CoocQuery, cond_prob_objects, prob_cooc_objects
from .density import Density, density_wrt_base, density_wrt_marginals
from .eintegral import RandomVariable, cond_expectation_event, cond_expectation_object, e_integral
from .exceptions import (
    CooccurError,
    DecompositionMismatch,
    DomainError,
    ModelFileError,
    WitnessError,
)
from .modelfile import ModelFile
from .models import CheckConfig, EngineConfig
from .scm import Scm, intervene, observational_distribution, solve
from .space import (
    EngineModel,
    Event,
    FiniteSpace,
    Partition,
    RandomObject,
    RationalMeasure,
    bundle,
    pushforward,
)

# Library code stays silent until setup_logger is called
logger.disable("cooccur")

__all__ = [
    "__version__",
    "CooccurError",
    "ModelFileError",
    "DomainError",
    "WitnessError",
    "DecompositionMismatch",
    "FiniteSpace",
    "Partition",
    "Event",
    "RationalMeasure",
    "RandomObject",
    "EngineModel",
    "bundle",
    "pushforward",
    "Constraint",
    "CoocQuery",
    "prob_cooc_objects",
    "cond_prob_objects",
    "Kernel",
    "PointwiseConditional",
    "CiSpec",
    "cond_kernel",
    "check_cond_independence",
    "Density",
    "density_wrt_marginals",
    "density_wrt_base",
    "RandomVariable",
    "e_integral",
    "cond_expectation_event",
    "cond_expectation_object",
    "Scm",
    "solve",
    "observational_distribution",
    "intervene",
    "ModelFile",
    "EngineConfig",
    "CheckConfig",
    "CheckReport",
    "run_checks",
]
