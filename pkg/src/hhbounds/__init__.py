"""Error bounds for a two-parameter family of quadrature rules built from a
point value, a first-derivative correction and a weighted endpoint average."""

__version__ = "0.1.0"

from .bounds import (
    SLACK_TOL,
    THEOREMS,
    BoundReport,
    bound_t2,
    bound_t3,
    bound_t4,
    sarikaya_bounds,
    theorem_bound,
    verify_bound,
)
from .coeffs import CoefficientSet, Params, Regime, classify_regime, coefficient_set, defining_integrals
from .errors import (
    ConsistencyError,
    DomainError,
    HHBoundsError,
    HypothesisError,
    LookupFailure,
    OracleError,
    ParameterError,
    UnsupportedError,
)
from .funcspace import Interval, TestFunction, catalog_lookup, catalog_names, check_abs_f2_convex
from .identity import IdentityReport, identity_residual, kernel_k, lhs_functional, rhs_integral
from .means import MeansReport, mean_inequality, special_mean
from .numint import QuadResult, integrate, integrate_with_breakpoints
from .quadrules import CertifiedResult, RuleSpec, composite_certified, proposition_bound

__all__ = [name for name in dir() if not name.startswith("_")]
