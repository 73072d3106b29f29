"""Regime classification and the closed-form coefficients of the three bounds.

Notation used throughout (``a`` = alpha, ``l`` = lambda):

    c_left  = 2 a l             sign change of |2 a l - t| on [0, 1-a]
    c_mid   = 1 - a             where the kernel switches branch
    c_right = 1 - 2 l (1 - a)   sign change of |1 - 2 l (1-a) - t| on [1-a, 1]

The coefficients are integrals over [0, 1-a] and [1-a, 1] of the kernel
pieces against t**2, t(1-t), (1-t)**2 and friends. Each has two closed forms,
one per side of the relevant sign change; every function here returns both
and the caller selects with the regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from scipy import special

from .errors import ParameterError, UnsupportedError
from .numint import DEFAULT_TOL, integrate_with_breakpoints

CASES = ("C1", "C2", "C3", "C4")


def _unit(name: str, value: float) -> float:
    value = float(value)
    if not (0.0 <= value <= 1.0):
        raise ParameterError(f"{name} must lie in [0, 1], got {value!r}")
    return value


@dataclass(frozen=True)
class Params:
    alpha: float
    lam: float
    q: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _unit("alpha", self.alpha))
        object.__setattr__(self, "lam", _unit("lambda", self.lam))
        q = float(self.q)
        if not (q >= 1.0 and math.isfinite(q)):
            raise ParameterError(f"q must be a finite number >= 1, got {self.q!r}")
        object.__setattr__(self, "q", q)

    @property
    def p(self) -> Optional[float]:
        """Hoelder conjugate of q; None at q = 1."""
        return conjugate(self.q) if self.q > 1 else None


def conjugate(q: float) -> float:
    if q <= 1:
        raise UnsupportedError(f"Hoelder conjugate needs q > 1, got {q}")
    return q / (q - 1.0)


@dataclass(frozen=True)
class Regime:
    case_id: str
    c_left: float
    c_mid: float
    c_right: float


def classify_regime(alpha: float, lam: float) -> Regime:
    """Which of the four parameter cases applies.

    Ties (boundary points) resolve with the precedence C1 > C2 > C3 > C4; the
    coefficients are continuous across every boundary so the choice does not
    change any bound value.
    """
    alpha = _unit("alpha", alpha)
    lam = _unit("lambda", lam)
    left = 2.0 * alpha * lam
    mid = 1.0 - alpha
    right = 1.0 - 2.0 * lam * (1.0 - alpha)
    if left <= mid <= right:
        case = "C1"
    elif mid >= max(left, right):
        case = "C2"
    elif mid <= min(left, right):
        case = "C3"
    else:
        # remaining ordering: right <= mid <= left
        case = "C4"
    return Regime(case, left, mid, right)


def gamma_coeffs(alpha: float, lam: float) -> tuple[float, float, float, float]:
    """gamma1..gamma4: weights of |f''(b)| and |f''(a)| over [0, 1-alpha].

    (gamma1, gamma2) apply when 2 alpha lambda <= 1 - alpha, else (gamma3, gamma4).
    """
    a = _unit("alpha", alpha)
    l = _unit("lambda", lam)
    m = 1.0 - a
    al = a * l
    g1 = 8.0 / 3.0 * al**4 + m**3 * (m / 4.0 - 2.0 * al / 3.0)
    g2 = 8.0 / 3.0 * al**3 * (1.0 - al) + m**2 * (
        m / 3.0 - al - m**2 / 4.0 + 2.0 * al * m / 3.0
    )
    g3 = 2.0 * al * m**3 / 3.0 - m**4 / 4.0
    g4 = m**2 * (al - m / 3.0 - 2.0 * al * m / 3.0 + m**2 / 4.0)
    return g1, g2, g3, g4


def mu_coeffs(alpha: float, lam: float) -> tuple[float, float, float, float]:
    """mu1..mu4: weights of |f''(b)| and |f''(a)| over [1-alpha, 1].

    (mu1, mu2) apply when 1 - alpha <= 1 - 2 lambda (1 - alpha), else (mu3, mu4).
    mu2 and mu4 use alpha**2 (4 lambda**2 - 4 lambda + 3) in the bracket, which is
    what the defining integral gives; see printed_mu_coeffs for the other form.
    """
    return _mu(alpha, lam, lam_power=2)


def printed_mu_coeffs(alpha: float, lam: float) -> tuple[float, float, float, float]:
    """mu1..mu4 with the bracket alpha**2 (4 lambda**4 - 4 lambda + 3) as typeset.

    Kept for comparison only: mu2 and mu4 here disagree with the defining
    integral by alpha**2 lambda**2 (1 - lambda**2) (alpha - 2 lambda (1-alpha))**2 / 3
    (zero only at lambda in {0, 1}, alpha = 0, or alpha = 2 lambda (1-alpha)).
    """
    return _mu(alpha, lam, lam_power=4)


def _mu(alpha, lam, lam_power):
    a = _unit("alpha", alpha)
    l = _unit("lambda", lam)
    m = 1.0 - a
    d = a - 2.0 * l * m
    head_odd = 4.0 / 3.0 * m**3 * l**3 * (1.0 - l * m)
    tail_odd = d**2 / 12.0 * (a * (3.0 * a - 4.0) - 4.0 * l * m**2 * (1.0 - l))
    head_even = 4.0 / 3.0 * m**4 * l**4
    tail_even = d**2 / 12.0 * (
        a**2 * (4.0 * l**lam_power - 4.0 * l + 3.0) + 4.0 * a * l * (1.0 - 2.0 * l) + 4.0 * l**2
    )
    return (
        head_odd - tail_odd,
        head_even + tail_even,
        head_odd + tail_odd,
        head_even - tail_even,
    )


def tau_z_coeffs(alpha: float, lam: float) -> tuple[float, float, float, float]:
    """tau1, tau2 (integral of t|2al - t| over [0, 1-a]) and z1, z2 (of (1-t)|1-2l(1-a)-t| over [1-a, 1])."""
    a = _unit("alpha", alpha)
    l = _unit("lambda", lam)
    m = 1.0 - a
    al = a * l
    d = a - 2.0 * l * m
    tau1 = 8.0 / 3.0 * al**3 + m**2 * (m / 3.0 - al)
    tau2 = m**2 * (al - m / 3.0)
    head = 4.0 / 3.0 * m**3 * l**3
    tail = d**2 / 3.0 * (a * (1.0 - l) + l)
    return tau1, tau2, head + tail, head - tail


def phi_psi_eps(alpha: float, lam: float, p: float, q: float) -> tuple[float, float, float, float, float, float]:
    """phi1, phi2, psi1, psi2, eps1, eps2 for conjugate exponents p, q > 1.

    phi = integral over [0, 1-a] of |2al - t|**p, psi = integral over [1-a, 1]
    of |1 - 2l(1-a) - t|**p. The "1" forms hold when the sign change lies inside
    the segment and the "2" forms when it does not; the "2" forms are written
    as ((outer)**(p+1) - (overshoot)**(p+1))/(p+1), which stays real for
    non-integer p. Bases are taken in absolute value so that the non-selected
    form is finite as well; it is only meaningful on its own side.
    """
    a = _unit("alpha", alpha)
    l = _unit("lambda", lam)
    q = float(q)
    p = float(p)
    if q <= 1.0:
        raise UnsupportedError(f"the Hoelder bound needs q > 1, got {q}")
    if abs(1.0 / p + 1.0 / q - 1.0) > 1e-12:
        raise ParameterError(f"p={p} and q={q} are not conjugate")
    m = 1.0 - a
    left = 2.0 * a * l
    gap_lo = abs(m - left)              # |1 - a(1 + 2l)|
    outer_hi = 2.0 * l * m              # 1 - c_right
    gap_hi = abs(a - outer_hi)          # |c_right - c_mid|
    e = p + 1.0
    try:
        phi1 = (left**e + gap_lo**e) / e
        phi2 = (left**e - gap_lo**e) / e
        psi1 = (outer_hi**e + gap_hi**e) / e
        psi2 = (outer_hi**e - gap_hi**e) / e
    except OverflowError as exc:
        raise ParameterError(f"p={p} overflows the power terms") from exc
    eps1 = m ** (q + 2.0) / (q + 2.0)
    eps2 = a ** (q + 2.0) / (q + 2.0)
    return phi1, phi2, psi1, psi2, eps1, eps2


def incomplete_beta(x: float, a: float, b: float) -> float:
    """Non-regularised incomplete beta: integral over [0, x] of t**(a-1) (1-t)**(b-1).

    b == 2 uses the closed form x**a/a - x**(a+1)/(a+1); other b go through
    scipy's regularised betainc.
    """
    x = float(x)
    if not (0.0 <= x <= 1.0):
        raise ParameterError(f"x must lie in [0, 1], got {x}")
    if a <= 0 or b <= 0:
        raise ParameterError("shape parameters must be positive")
    if x == 0.0:
        return 0.0
    if b == 2:
        return x**a / a - x ** (a + 1.0) / (a + 1.0)
    return float(special.betainc(a, b, x) * special.beta(a, b))


@dataclass(frozen=True)
class CoefficientSet:
    alpha: float
    lam: float
    q: float
    regime: str
    gamma: tuple[float, float, float, float]
    mu: tuple[float, float, float, float]
    tau: tuple[float, float]
    z: tuple[float, float]
    phi: Optional[tuple[float, float]] = None
    psi: Optional[tuple[float, float]] = None
    eps: Optional[tuple[float, float]] = None
    beta_a: Optional[float] = None
    beta_b: Optional[float] = None

    # -- regime-selected views --
    @property
    def gamma_sel(self) -> tuple[float, float]:
        return self.gamma[:2] if self.regime in ("C1", "C2") else self.gamma[2:]

    @property
    def mu_sel(self) -> tuple[float, float]:
        return self.mu[:2] if self.regime in ("C1", "C3") else self.mu[2:]

    @property
    def tau_sel(self) -> float:
        return self.tau[0] if self.regime in ("C1", "C2") else self.tau[1]

    @property
    def z_sel(self) -> float:
        return self.z[0] if self.regime in ("C1", "C3") else self.z[1]

    @property
    def phi_sel(self) -> float:
        return self.phi[0] if self.regime in ("C1", "C2") else self.phi[1]

    @property
    def psi_sel(self) -> float:
        return self.psi[0] if self.regime in ("C1", "C3") else self.psi[1]

    def to_dict(self) -> dict:
        """Flat mapping keyed by symbol name (gamma1 ... eps2, beta_a, beta_b)."""
        out: dict = {"alpha": self.alpha, "lambda": self.lam, "q": self.q, "regime": self.regime}
        for key, size in (("gamma", 4), ("mu", 4), ("tau", 2), ("z", 2), ("phi", 2), ("psi", 2), ("eps", 2)):
            values = getattr(self, key)
            for i in range(size):
                out[f"{key}{i + 1}"] = None if values is None else values[i]
        out["beta_a"] = self.beta_a
        out["beta_b"] = self.beta_b
        return out


def coefficient_set(alpha: float, lam: float, q: float = 1.0) -> CoefficientSet:
    """Every coefficient at (alpha, lambda, q); Hoelder entries stay None when q == 1."""
    params = Params(alpha, lam, q)
    regime = classify_regime(params.alpha, params.lam)
    tau1, tau2, z1, z2 = tau_z_coeffs(params.alpha, params.lam)
    extra = {}
    if params.q > 1:
        phi1, phi2, psi1, psi2, eps1, eps2 = phi_psi_eps(params.alpha, params.lam, params.p, params.q)
        extra = dict(
            phi=(phi1, phi2),
            psi=(psi1, psi2),
            eps=(eps1, eps2),
            beta_a=incomplete_beta(1.0 - params.alpha, params.q + 1.0, 2.0),
            beta_b=incomplete_beta(params.alpha, params.q + 1.0, 2.0),
        )
    return CoefficientSet(
        alpha=params.alpha,
        lam=params.lam,
        q=params.q,
        regime=regime.case_id,
        gamma=gamma_coeffs(params.alpha, params.lam),
        mu=mu_coeffs(params.alpha, params.lam),
        tau=(tau1, tau2),
        z=(z1, z2),
        **extra,
    )


def defining_integrals(alpha: float, lam: float, q: float = 1.0, tol: float = DEFAULT_TOL) -> dict[str, float]:
    """Regime-selected coefficients computed by direct quadrature of their integrands.

    Keys: gamma_b, gamma_a, mu_b, mu_a, tau, z and, for q > 1, phi, psi, eps1,
    eps2, beta_a, beta_b. Each integral is split at the sign change of its
    absolute-value factor.
    """
    a = _unit("alpha", alpha)
    l = _unit("lambda", lam)
    m = 1.0 - a
    c = 2.0 * a * l
    r = 1.0 - 2.0 * l * m

    def lower(w):
        return integrate_with_breakpoints(lambda t: abs(c - t) * w(t), 0.0, m, [c], tol).value

    def upper(w):
        return integrate_with_breakpoints(lambda t: abs(r - t) * w(t), m, 1.0, [r], tol).value

    out = {
        "gamma_b": lower(lambda t: t * t),
        "gamma_a": lower(lambda t: t * (1.0 - t)),
        "mu_b": upper(lambda t: t * (1.0 - t)),
        "mu_a": upper(lambda t: (1.0 - t) ** 2),
        "tau": lower(lambda t: t),
        "z": upper(lambda t: 1.0 - t),
    }
    if q > 1:
        p = conjugate(q)
        out["phi"] = integrate_with_breakpoints(lambda t: abs(c - t) ** p, 0.0, m, [c], tol).value
        out["psi"] = integrate_with_breakpoints(lambda t: abs(r - t) ** p, m, 1.0, [r], tol).value
        out["eps1"] = integrate_with_breakpoints(lambda t: t ** (q + 1.0), 0.0, m, [], tol).value
        out["eps2"] = integrate_with_breakpoints(lambda t: (1.0 - t) ** (q + 1.0), m, 1.0, [], tol).value
        out["beta_a"] = integrate_with_breakpoints(lambda t: t**q * (1.0 - t), 0.0, m, [], tol).value
        out["beta_b"] = integrate_with_breakpoints(lambda t: t * (1.0 - t) ** q, m, 1.0, [], tol).value
    return out


def selected_closed_forms(cs: CoefficientSet) -> dict[str, float]:
    """Closed-form counterparts of defining_integrals, keyed identically."""
    out = {
        "gamma_b": cs.gamma_sel[0],
        "gamma_a": cs.gamma_sel[1],
        "mu_b": cs.mu_sel[0],
        "mu_a": cs.mu_sel[1],
        "tau": cs.tau_sel,
        "z": cs.z_sel,
    }
    if cs.phi is not None:
        out.update(
            phi=cs.phi_sel,
            psi=cs.psi_sel,
            eps1=cs.eps[0],
            eps2=cs.eps[1],
            beta_a=cs.beta_a,
            beta_b=cs.beta_b,
        )
    return out
