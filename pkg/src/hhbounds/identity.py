"""The integral identity behind the (alpha, lambda) rule family.

For a twice differentiable f on [a, b] and x_alpha = (1 - alpha) b + alpha a,

    (b-a)(alpha - 1/2) f'(x_alpha) - mean(f) + (1 - lambda) f(x_alpha)
        + lambda (alpha f(a) + (1 - alpha) f(b))
    = (b-a)**2 / 2 * integral_0^1 k(t) f''(t b + (1-t) a) dt

with the piecewise kernel of ``kernel_k``. Both sides are computed here
independently: the left from point values and the mean of f, the right by
quadrature of the kernel against f''.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .coeffs import Params, _unit
from .funcspace import Interval, TestFunction
from .numint import IDENTITY_TOL, QuadResult, composite_simpson, integrate, integrate_with_breakpoints
from .errors import ParameterError


@dataclass(frozen=True)
class IdentityReport:
    function: str
    alpha: float
    lam: float
    a: float
    b: float
    lhs: float
    rhs: float
    residual: float
    oracle_error: float

    @property
    def params(self) -> Params:
        return Params(self.alpha, self.lam)

    @property
    def interval(self) -> Interval:
        return Interval(self.a, self.b)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["lambda"] = d.pop("lam")
        return d


def kernel_k(t, alpha: float, lam: float):
    """k(t) = 2 alpha lambda t - t**2 on [0, 1-alpha], (1-t)(t - 1 + 2 lambda (1-alpha)) after.

    Works on scalars and numpy arrays. At t = 1 - alpha the first branch is used.
    """
    m = 1.0 - alpha
    t = np.asarray(t, dtype=float)
    first = 2.0 * alpha * lam * t - t * t
    second = (1.0 - t) * (t - 1.0 + 2.0 * lam * m)
    out = np.where(t <= m, first, second)
    return float(out) if out.ndim == 0 else out


def kernel_jump(alpha: float, lam: float) -> float:
    """Second branch minus first branch of k at t = 1 - alpha.

    Analytically this is 1 - 2 alpha, independent of lambda; it vanishes only
    at alpha = 1/2. The f' term of the identity absorbs it.
    """
    m = 1.0 - alpha
    first = 2.0 * alpha * lam * m - m * m
    second = (1.0 - m) * (m - 1.0 + 2.0 * lam * m)
    return second - first


def kernel_breakpoints(alpha: float, lam: float) -> list[float]:
    """Kinks and sign changes of k inside (0, 1)."""
    pts = {2.0 * alpha * lam, 1.0 - alpha, 1.0 - 2.0 * lam * (1.0 - alpha)}
    return sorted(x for x in pts if 0.0 < x < 1.0)


def mean_value(f: TestFunction, iv: Interval, tol: float = IDENTITY_TOL) -> tuple[float, float]:
    """(1/(b-a)) * integral of f over iv, with its error estimate.

    Uses the exact antiderivative when the function carries one.
    """
    if f.antiderivative is not None:
        F = f.antiderivative
        return (float(F(iv.b)) - float(F(iv.a))) / iv.width, 0.0
    r = integrate(f.f, iv.a, iv.b, tol * iv.width)
    return r.value / iv.width, r.error_estimate / iv.width


def rule_value(f: TestFunction, iv: Interval, alpha: float, lam: float) -> float:
    """(1-lambda) f(x_alpha) + lambda (alpha f(a) + (1-alpha) f(b)) + (b-a)(alpha-1/2) f'(x_alpha)."""
    alpha = _unit("alpha", alpha)
    lam = _unit("lambda", lam)
    x = (1.0 - alpha) * iv.b + alpha * iv.a
    value = (1.0 - lam) * float(f.f(x)) + lam * (alpha * float(f.f(iv.a)) + (1.0 - alpha) * float(f.f(iv.b)))
    if alpha != 0.5:
        value += iv.width * (alpha - 0.5) * float(f.f1(x))
    return value


def lhs_functional(f: TestFunction, iv: Interval, alpha: float, lam: float, tol: float = IDENTITY_TOL) -> float:
    return _lhs(f, iv, alpha, lam, tol)[0]


def _lhs(f, iv, alpha, lam, tol):
    f.require(iv)
    mean, err = mean_value(f, iv, tol)
    return rule_value(f, iv, alpha, lam) - mean, err


def _rhs(f: TestFunction, iv: Interval, alpha: float, lam: float, tol: float) -> QuadResult:
    f.require(iv)
    alpha = _unit("alpha", alpha)
    lam = _unit("lambda", lam)
    scale = iv.width**2 / 2.0

    def integrand(t):
        return kernel_k(t, alpha, lam) * f.f2(iv.point(t))

    # the scaled result must meet tol, so the raw integral gets tol / scale
    r = integrate_with_breakpoints(integrand, 0.0, 1.0, kernel_breakpoints(alpha, lam), tol / scale)
    return QuadResult(scale * r.value, scale * r.error_estimate, r.evaluations, r.converged)


def rhs_integral(f: TestFunction, iv: Interval, alpha: float, lam: float, tol: float = IDENTITY_TOL) -> float:
    return _rhs(f, iv, alpha, lam, tol).value


def identity_residual(
    f: TestFunction, iv: Interval, alpha: float, lam: float, tol: float = IDENTITY_TOL
) -> IdentityReport:
    lhs, lhs_err = _lhs(f, iv, alpha, lam, tol)
    rhs = _rhs(f, iv, alpha, lam, tol)
    return IdentityReport(
        function=f.name,
        alpha=float(alpha),
        lam=float(lam),
        a=iv.a,
        b=iv.b,
        lhs=lhs,
        rhs=rhs.value,
        residual=abs(lhs - rhs.value),
        oracle_error=lhs_err + rhs.error_estimate,
    )


def averaged_lhs_closed_form(f: TestFunction, iv: Interval, lam: float, tol: float = IDENTITY_TOL) -> float:
    """(lambda - 1) * ((f(a) + f(b))/2 - mean(f)): the alpha-average of the left side."""
    mean, _ = mean_value(f, iv, tol)
    return (lam - 1.0) * (0.5 * (float(f.f(iv.a)) + float(f.f(iv.b))) - mean)


def averaged_identity_residual(
    f: TestFunction, iv: Interval, lam: float, n_alpha: int = 129, tol: float = IDENTITY_TOL
) -> float:
    """|composite-Simpson average of lhs_functional over alpha in [0, 1] - closed form|."""
    if n_alpha < 3 or n_alpha % 2 == 0:
        raise ParameterError("n_alpha must be odd and >= 3")
    lam = _unit("lambda", lam)
    alphas = np.linspace(0.0, 1.0, n_alpha)
    values = [lhs_functional(f, iv, float(al), lam, tol) for al in alphas]
    average = composite_simpson(values, 1.0 / (n_alpha - 1))
    return abs(average - averaged_lhs_closed_form(f, iv, lam, tol))


# --- reference identity of the alpha = 1/2 special case -----------------------

def reference_kernel(t, lam: float):
    """t (t - lambda)/2 on [0, 1/2], (1-t)(1 - lambda - t)/2 on [1/2, 1]."""
    t = np.asarray(t, dtype=float)
    out = np.where(t <= 0.5, t * (t - lam) / 2.0, (1.0 - t) * (1.0 - lam - t) / 2.0)
    return float(out) if out.ndim == 0 else out


def reference_lhs(f: TestFunction, iv: Interval, lam: float, tol: float = IDENTITY_TOL) -> float:
    """(lambda - 1) f((a+b)/2) - lambda (f(a)+f(b))/2 + mean(f)."""
    f.require(iv)
    mean, _ = mean_value(f, iv, tol)
    mid = 0.5 * (iv.a + iv.b)
    return (lam - 1.0) * float(f.f(mid)) - lam * 0.5 * (float(f.f(iv.a)) + float(f.f(iv.b))) + mean


def reference_rhs(f: TestFunction, iv: Interval, lam: float, tol: float = IDENTITY_TOL) -> float:
    """(b-a)**2 * integral of the reference kernel against f''(t a + (1-t) b)."""
    f.require(iv)
    scale = iv.width**2

    def integrand(t):
        return reference_kernel(t, lam) * f.f2(t * iv.a + (1.0 - t) * iv.b)

    breaks = sorted({x for x in (0.5, lam, 1.0 - lam) if 0.0 < x < 1.0})
    return scale * integrate_with_breakpoints(integrand, 0.0, 1.0, breaks, tol / scale).value
