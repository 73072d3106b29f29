"""Error bounds for the (alpha, lambda) rule family.

Three bounds, all driven by |f''(a)| and |f''(b)| only:

* ``T2`` -- |f''| convex; triangle inequality on the kernel.
* ``T3`` -- |f''|**q convex, q >= 1; power-mean inequality.
* ``T4`` -- |f''|**q convex, q > 1; Hoelder with the conjugate exponent p.

The ``sarikaya_*`` functions evaluate the earlier lambda-only bounds for the
alpha = 1/2 case, used to check that the general bounds reduce to them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .coeffs import CoefficientSet, Params, classify_regime, coefficient_set
from .errors import ParameterError, UnsupportedError
from .funcspace import Interval, TestFunction, check_abs_f2_convex
from .identity import lhs_functional
from .numint import IDENTITY_TOL

THEOREMS = ("T2", "T3", "T4")
SLACK_TOL = 1e-10


@dataclass(frozen=True)
class BoundReport:
    theorem: str
    function: str
    alpha: float
    lam: float
    q: float
    a: float
    b: float
    lhs_abs: float
    bound: float
    slack: float
    regime: str
    hypothesis_ok: bool

    @property
    def params(self) -> Params:
        return Params(self.alpha, self.lam, self.q)

    @property
    def interval(self) -> Interval:
        return Interval(self.a, self.b)

    @property
    def violated(self) -> bool:
        """Negative slack beyond tolerance while the hypothesis holds."""
        return self.hypothesis_ok and self.slack < -SLACK_TOL

    def to_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "function": self.function,
            "alpha": self.alpha,
            "lambda": self.lam,
            "q": self.q,
            "a": self.a,
            "b": self.b,
            "lhs_abs": self.lhs_abs,
            "bound": self.bound,
            "slack": self.slack,
            "regime": self.regime,
            "hypothesis_ok": self.hypothesis_ok,
        }


def _check_f2(f2_abs_a: float, f2_abs_b: float) -> None:
    if f2_abs_a < 0 or f2_abs_b < 0:
        raise ParameterError("pass |f''(a)| and |f''(b)|, which are non-negative")


def _coeffs(alpha, lam, q, coefficients: Optional[CoefficientSet]) -> CoefficientSet:
    return coefficients if coefficients is not None else coefficient_set(alpha, lam, q)


def bound_t2(
    f2_abs_a: float,
    f2_abs_b: float,
    iv: Interval,
    alpha: float,
    lam: float,
    coefficients: Optional[CoefficientSet] = None,
) -> float:
    """(b-a)**2/2 * ((gamma_b + mu_b)|f''(b)| + (gamma_a + mu_a)|f''(a)|), regime-selected."""
    _check_f2(f2_abs_a, f2_abs_b)
    cs = _coeffs(alpha, lam, 1.0, coefficients)
    g_b, g_a = cs.gamma_sel
    m_b, m_a = cs.mu_sel
    return iv.width**2 / 2.0 * ((g_b + m_b) * f2_abs_b + (g_a + m_a) * f2_abs_a)


def bound_t3(
    f2_abs_a: float,
    f2_abs_b: float,
    iv: Interval,
    alpha: float,
    lam: float,
    q: float,
    coefficients: Optional[CoefficientSet] = None,
) -> float:
    """Power-mean bound; identical to bound_t2 at q = 1."""
    _check_f2(f2_abs_a, f2_abs_b)
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    if q == 1:
        return bound_t2(f2_abs_a, f2_abs_b, iv, alpha, lam, coefficients)
    return _bound_t3_general(f2_abs_a, f2_abs_b, iv, alpha, lam, q, coefficients)


def _bound_t3_general(f2_abs_a, f2_abs_b, iv, alpha, lam, q, coefficients=None) -> float:
    cs = _coeffs(alpha, lam, 1.0, coefficients)
    g_b, g_a = cs.gamma_sel
    m_b, m_a = cs.mu_sel
    fa, fb = f2_abs_a**q, f2_abs_b**q
    # clamp tiny negative rounding in selected coefficients at regime edges
    lower = max(cs.tau_sel, 0.0) ** (1.0 - 1.0 / q) * max(g_b * fb + g_a * fa, 0.0) ** (1.0 / q)
    upper = max(cs.z_sel, 0.0) ** (1.0 - 1.0 / q) * max(m_b * fb + m_a * fa, 0.0) ** (1.0 / q)
    return iv.width**2 / 2.0 * (lower + upper)


def bound_t4(
    f2_abs_a: float,
    f2_abs_b: float,
    iv: Interval,
    alpha: float,
    lam: float,
    q: float,
    coefficients: Optional[CoefficientSet] = None,
) -> float:
    """Hoelder bound.

    All four cases share the inner brackets
    [eps1 |f''(b)|**q + beta(1-alpha; q+1, 2) |f''(a)|**q] and
    [beta(alpha; q+1, 2) |f''(b)|**q + eps2 |f''(a)|**q]; only the phi/psi
    prefactors change with the regime.
    """
    _check_f2(f2_abs_a, f2_abs_b)
    if q <= 1:
        raise UnsupportedError(f"the Hoelder bound needs q > 1, got {q}")
    cs = _coeffs(alpha, lam, q, coefficients)
    p = q / (q - 1.0)
    fa, fb = f2_abs_a**q, f2_abs_b**q
    eps1, eps2 = cs.eps
    lower = max(cs.phi_sel, 0.0) ** (1.0 / p) * (eps1 * fb + cs.beta_a * fa) ** (1.0 / q)
    upper = max(cs.psi_sel, 0.0) ** (1.0 / p) * (cs.beta_b * fb + eps2 * fa) ** (1.0 / q)
    return iv.width**2 / 2.0 * (lower + upper)


def theorem_bound(
    theorem: str,
    f2_abs_a: float,
    f2_abs_b: float,
    iv: Interval,
    params: Params,
    coefficients: Optional[CoefficientSet] = None,
) -> float:
    if theorem == "T2":
        return bound_t2(f2_abs_a, f2_abs_b, iv, params.alpha, params.lam, coefficients)
    if theorem == "T3":
        return bound_t3(f2_abs_a, f2_abs_b, iv, params.alpha, params.lam, params.q, coefficients)
    if theorem == "T4":
        return bound_t4(f2_abs_a, f2_abs_b, iv, params.alpha, params.lam, params.q, coefficients)
    raise ParameterError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")


def verify_bound(
    f: TestFunction,
    iv: Interval,
    params: Params,
    theorem: str,
    tol: float = IDENTITY_TOL,
    convexity_samples: int = 201,
    coefficients: Optional[CoefficientSet] = None,
) -> BoundReport:
    """Compare |rule - mean| against the chosen bound.

    The convexity hypothesis is sampled (q = 1 for T2, params.q otherwise).
    A failed hypothesis does not raise; the report carries hypothesis_ok=False.
    """
    if theorem not in THEOREMS:
        raise ParameterError(f"unknown theorem {theorem!r}; expected one of {THEOREMS}")
    f.require(iv)
    q_hyp = 1.0 if theorem == "T2" else params.q
    verdict = check_abs_f2_convex(f, iv, q_hyp, convexity_samples)
    lhs_abs = abs(lhs_functional(f, iv, params.alpha, params.lam, tol))
    fa, fb = f.abs_f2_endpoints(iv)
    bound = theorem_bound(theorem, fa, fb, iv, params, coefficients)
    return BoundReport(
        theorem=theorem,
        function=f.name,
        alpha=params.alpha,
        lam=params.lam,
        q=params.q,
        a=iv.a,
        b=iv.b,
        lhs_abs=lhs_abs,
        bound=bound,
        slack=bound - lhs_abs,
        regime=classify_regime(params.alpha, params.lam).case_id,
        hypothesis_ok=verdict.ok,
    )


# --- lambda-only bounds of the alpha = 1/2 case --------------------------------

def sarikaya_g2_branches(f2_abs_a: float, f2_abs_b: float, iv: Interval, lam: float) -> tuple[float, float]:
    """Both branches of the |f''|-convex bound, evaluated regardless of lambda."""
    _check_f2(f2_abs_a, f2_abs_b)
    l = float(lam)
    w2 = iv.width**2
    low = w2 / 12.0 * (
        (l**4 + (1.0 + l) * (1.0 - l) ** 3 + (5.0 * l - 3.0) / 4.0) * f2_abs_a
        + (l**4 + (2.0 - l) * l**3 + (1.0 - 3.0 * l) / 4.0) * f2_abs_b
    )
    high = w2 * (3.0 * l - 1.0) / 48.0 * (f2_abs_a + f2_abs_b)
    return low, high


def sarikaya_g3_branches(
    f2_abs_a: float, f2_abs_b: float, iv: Interval, lam: float, q: float
) -> tuple[float, float]:
    """Both branches of the |f''|**q-convex bound.

    A branch whose prefactor base is negative (the upper branch for
    lambda < 1/3) comes back as NaN.
    """
    _check_f2(f2_abs_a, f2_abs_b)
    l = float(lam)
    s = 1.0 - 1.0 / q
    fa, fb = f2_abs_a**q, f2_abs_b**q
    d = 3.0 * 2.0**6
    w = iv.width**2 / 2.0

    def root(x):
        return x ** (1.0 / q) if x >= 0 else math.nan

    def pre(x):
        if x < 0:
            return math.nan
        return x**s

    low = w * pre(l**3 / 3.0 + (1.0 - 3.0 * l) / 24.0) * (
        root((l**4 / 6.0 + (3.0 - 8.0 * l) / d) * fa + ((2.0 - l) * l**3 / 6.0 + (5.0 - 16.0 * l) / d) * fb)
        + root(
            ((1.0 + l) / 6.0 * (1.0 - l) ** 3 + (48.0 * l - 27.0) / d) * fa
            + (l**4 / 6.0 + (3.0 - 8.0 * l) / d) * fb
        )
    )
    high = w * pre((3.0 * l - 1.0) / 24.0) * (
        root((8.0 * l - 3.0) / d * fa + (16.0 * l - 5.0) / d * fb)
        + root((16.0 * l - 5.0) / d * fa + (8.0 * l - 3.0) / d * fb)
    )
    return low, high


def sarikaya_bounds(
    f2_abs_a: float, f2_abs_b: float, iv: Interval, lam: float, q: float
) -> tuple[float, float]:
    """(g2, g3): the two lambda-only bounds, each on the branch lambda selects."""
    if not 0.0 <= lam <= 1.0:
        raise ParameterError(f"lambda must lie in [0, 1], got {lam}")
    if q < 1:
        raise ParameterError(f"q must be >= 1, got {q}")
    pick = 0 if lam <= 0.5 else 1
    g2 = sarikaya_g2_branches(f2_abs_a, f2_abs_b, iv, lam)[pick]
    g3 = sarikaya_g3_branches(f2_abs_a, f2_abs_b, iv, lam, q)[pick]
    return g2, g3
