"""Likelihood-type objective functions, their gradients, and estimating equations.

The estimator family maximizes sums of a transformed density Lambda(f(x_i))
over the Weibull parameters.  Lambda is the plain log for maximum likelihood
and one of several deformed logarithms otherwise; each choice induces a
weighted score equation sum_i w(x_i) Z(x_i) = 0, where Z is the gradient of
log f.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ._errors import DomainError
from .distributions import (
    WeibullParams,
    weibull_pdf,
    weighted_log_moment,
    weighted_moment,
)

PDF_FLOOR = 1e-300


class ObjectiveKind(Enum):
    LOG = "log"
    LOG_Q = "log_q"
    LOG_KAPPA = "log_kappa"
    LOG_SHIFT = "log_shift"
    DPD = "dpd"


@dataclass(frozen=True)
class ObjectiveSpec:
    """Objective selector: a transform kind plus its tuning constant.

    Tuning domains: q != 1 for LOG_Q, any real kappa for LOG_KAPPA,
    shift >= 0 for LOG_SHIFT, gamma > 0 for DPD.  LOG ignores tuning.
    """

    kind: ObjectiveKind
    tuning: float = 0.0

    def __post_init__(self):
        t = self.tuning
        if not np.isfinite(t):
            raise DomainError("tuning constant must be finite")
        if self.kind is ObjectiveKind.LOG_Q and t == 1.0:
            raise DomainError("LOG_Q requires q != 1; use LOG for the q -> 1 limit")
        if self.kind is ObjectiveKind.LOG_SHIFT and t < 0:
            raise DomainError("LOG_SHIFT requires shift >= 0")
        if self.kind is ObjectiveKind.DPD and t <= 0:
            raise DomainError("DPD requires gamma > 0")


@dataclass(frozen=True)
class ScoreVector:
    """Gradient with respect to (alpha, beta); fields may be scalars or arrays."""

    d_alpha: float
    d_beta: float

    def as_array(self) -> np.ndarray:
        return np.array([self.d_alpha, self.d_beta], dtype=float)


def deformed_log(z, spec: ObjectiveSpec):
    """Apply the selected transform Lambda to a density value z."""
    z = np.asarray(z, dtype=float)
    kind, t = spec.kind, spec.tuning
    if kind is ObjectiveKind.LOG_SHIFT:
        if np.any(z < 0) or (t == 0 and np.any(z == 0)):
            raise DomainError("LOG_SHIFT requires z >= 0 (z > 0 when shift = 0)")
        out = np.log(t + z)
    else:
        if np.any(z <= 0):
            raise DomainError(f"{kind.value} requires z > 0")
        if kind is ObjectiveKind.LOG:
            out = np.log(z)
        elif kind is ObjectiveKind.LOG_Q:
            out = (z ** (1.0 - t) - 1.0) / (1.0 - t)
        elif kind is ObjectiveKind.LOG_KAPPA:
            out = np.log(z) if t == 0.0 else (z**t - z**-t) / (2.0 * t)
        else:  # DPD: Box-Cox kernel; differentiates to the f^gamma-weighted score
            out = (z**t - 1.0) / t
    return out if out.ndim else float(out)


def _validate_data(data) -> np.ndarray:
    x = np.asarray(data, dtype=float)
    if x.ndim != 1 or x.size == 0:
        raise DomainError("data must be a non-empty 1-d sequence")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("all observations must be finite and > 0")
    return x


def loglik(theta: WeibullParams, data) -> float:
    """Log likelihood n log(alpha/beta) + sum[(alpha-1) log(x/beta) - (x/beta)^alpha]."""
    x = _validate_data(data)
    a, b = theta.alpha, theta.beta
    u = x / b
    return len(x) * math.log(a / b) + float(np.sum((a - 1.0) * np.log(u) - u**a))


def score_z(x, theta: WeibullParams) -> ScoreVector:
    """Gradient of log f at each point: Z = (d log f / d alpha, d log f / d beta)."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("score is defined for x > 0")
    a, b = theta.alpha, theta.beta
    u = x / b
    lu = np.log(u)
    ua = u**a
    za = 1.0 / a + (1.0 - ua) * lu
    zb = (a / b) * (ua - 1.0)
    if za.ndim:
        return ScoreVector(za, zb)
    return ScoreVector(float(za), float(zb))


def grad_loglik(theta: WeibullParams, data) -> ScoreVector:
    """Gradient of the log likelihood; both components vanish at an interior optimum."""
    x = _validate_data(data)
    sv = score_z(x, theta)
    return ScoreVector(float(np.sum(sv.d_alpha)), float(np.sum(sv.d_beta)))


def hessian_loglik(theta: WeibullParams, data) -> np.ndarray:
    """2x2 symmetric Hessian of the log likelihood."""
    x = _validate_data(data)
    a, b = theta.alpha, theta.beta
    n = len(x)
    u = x / b
    lu = np.log(u)
    ua = u**a
    h_aa = -n / a**2 - float(np.sum(ua * lu**2))
    h_bb = n * a / b**2 - (a * (a + 1.0) / b**2) * float(np.sum(ua))
    h_ab = -n / b + float(np.sum(ua)) / b + (a / b) * float(np.sum(ua * lu))
    return np.array([[h_aa, h_ab], [h_ab, h_bb]])


def logq_lik(theta: WeibullParams, data, q: float) -> float:
    """Sum of log_q densities, sum (f^(1-q) - 1)/(1-q); q != 1.

    Densities that underflow are clamped at 1e-300, which equals the exact
    limit contribution for q < 1 and acts as a steep penalty for q > 1.
    """
    if q == 1.0:
        raise DomainError("q = 1 is the plain likelihood; call loglik")
    x = _validate_data(data)
    f = np.maximum(np.asarray(weibull_pdf(x, theta)), PDF_FLOOR)
    return float(np.sum((f ** (1.0 - q) - 1.0) / (1.0 - q)))


def score_psi(x, theta: WeibullParams, q: float) -> ScoreVector:
    """q-weighted score of one observation: psi = f^(1-q) * Z componentwise."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("score is defined for x > 0")
    w = np.maximum(np.asarray(weibull_pdf(x, theta)), PDF_FLOOR) ** (1.0 - q)
    sv = score_z(x, theta)
    pa, pb = w * sv.d_alpha, w * sv.d_beta
    if np.ndim(pa):
        return ScoreVector(pa, pb)
    return ScoreVector(float(pa), float(pb))


def grad_logq_lik(theta: WeibullParams, data, q: float) -> ScoreVector:
    """Gradient of logq_lik: the summed q-weighted scores."""
    x = _validate_data(data)
    sv = score_psi(x, theta, q)
    return ScoreVector(float(np.sum(sv.d_alpha)), float(np.sum(sv.d_beta)))


def weight(x, theta: WeibullParams, spec: ObjectiveSpec):
    """Per-observation weight multiplying the score Z in the estimating equation."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("weights are defined for x > 0")
    kind, t = spec.kind, spec.tuning
    if kind is ObjectiveKind.LOG:
        out = np.ones_like(x)
    else:
        f = np.maximum(np.asarray(weibull_pdf(x, theta)), PDF_FLOOR)
        if kind is ObjectiveKind.LOG_Q:
            out = f ** (1.0 - t)
        elif kind is ObjectiveKind.LOG_KAPPA:
            out = (f**t + f**-t) / 2.0
        elif kind is ObjectiveKind.LOG_SHIFT:
            out = f / (t + f)
        else:  # DPD
            out = f**t
    return out if out.ndim else float(out)


def _dpd_score_integral(theta: WeibullParams, gamma_: float) -> ScoreVector:
    """I = integral of Z f^(1+gamma) dx, by closed-form weighted moments."""
    a, b = theta.alpha, theta.beta
    r = 1.0 + gamma_
    logb = math.log(b)
    wm0 = weighted_moment(0.0, r, theta)
    wm_a = weighted_moment(a, r, theta)
    wlm0 = weighted_log_moment(0.0, r, theta)
    wlm_a = weighted_log_moment(a, r, theta)
    i_alpha = wm0 / a + (wlm0 - logb * wm0) - b**-a * (wlm_a - logb * wm_a)
    i_beta = (a / b) * (b**-a * wm_a - wm0)
    return ScoreVector(i_alpha, i_beta)


def ee_residual(theta: WeibullParams, data, spec: ObjectiveSpec) -> ScoreVector:
    """Left-hand side of the estimating-equation system for the chosen transform.

    For LOG and LOG_Q this is exactly the objective gradient.  For DPD it is
    (1/n) sum Z f^gamma - I, which equals -grad(dpd_objective)/(1+gamma).
    """
    x = _validate_data(data)
    kind = spec.kind
    if kind is ObjectiveKind.LOG:
        return grad_loglik(theta, x)
    if kind is ObjectiveKind.LOG_Q:
        return grad_logq_lik(theta, x, spec.tuning)
    sv = score_z(x, theta)
    w = weight(x, theta, spec)
    if kind is ObjectiveKind.DPD:
        n = len(x)
        integral = _dpd_score_integral(theta, spec.tuning)
        return ScoreVector(
            float(np.sum(w * sv.d_alpha)) / n - integral.d_alpha,
            float(np.sum(w * sv.d_beta)) / n - integral.d_beta,
        )
    return ScoreVector(float(np.sum(w * sv.d_alpha)), float(np.sum(w * sv.d_beta)))


def dpd_objective(theta: WeibullParams, data, gamma_: float) -> float:
    """Density-power-divergence objective (to be minimized).

    integral of f^(1+gamma) - (1 + 1/gamma) (1/n) sum f^gamma(x_i); the
    integral exists iff gamma (alpha - 1) > -alpha and is evaluated in
    closed form.
    """
    if gamma_ <= 0:
        raise DomainError("DPD requires gamma > 0")
    x = _validate_data(data)
    integral = weighted_moment(0.0, 1.0 + gamma_, theta)
    f = np.maximum(np.asarray(weibull_pdf(x, theta)), PDF_FLOOR)
    return integral - (1.0 + 1.0 / gamma_) * float(np.mean(f**gamma_))


@dataclass(frozen=True)
class ScoreLimits:
    """Signed limits (or 0) of (psi_alpha, psi_beta) at the support edges."""

    at_zero: tuple[float, float]
    at_infinity: tuple[float, float]


def score_limit_class(theta: WeibullParams, q: float) -> ScoreLimits:
    """Classify the limits of the q-weighted score at x -> 0 and x -> infinity.

    Defined on the open cells alpha > 1 / alpha < 1 and q > 1 / 0 < q < 1;
    the alpha = 1 boundary mixes finite and infinite limits and is rejected.
    At infinity the score vanishes for q < 1 (bounded influence) and diverges
    as (-inf, +inf) for q > 1; at zero it diverges as (-inf, -inf) when the
    density exponent (alpha-1)(1-q) is negative and vanishes otherwise.
    """
    a = theta.alpha
    if q <= 0 or q == 1.0:
        raise DomainError("classification requires q > 0, q != 1")
    if a == 1.0:
        raise DomainError("alpha = 1 is a boundary case with mixed limit types")
    inf = math.inf
    at_inf = (-inf, inf) if q > 1 else (0.0, 0.0)
    diverges_at_zero = (a > 1) == (q > 1)
    at_zero = (-inf, -inf) if diverges_at_zero else (0.0, 0.0)
    return ScoreLimits(at_zero=at_zero, at_infinity=at_inf)


def dpd_logq_affine_diagnostic(data, q: float, theta_grid) -> dict:
    """Probe whether the DPD objective (gamma = 1-q) is an affine map of the log_q sum.

    Fits the best least-squares affine relation dpd = sigma * logq + mu over
    the supplied parameter grid and reports the residuals together with the
    spread of the theta-dependent offset term integral f^(2-q).  A large
    residual or offset spread shows the two objectives need not share optima.
    """
    if not (0 < q < 1):
        raise DomainError("the rewrite requires gamma = 1 - q > 0, i.e. 0 < q < 1")
    x = _validate_data(data)
    gam = 1.0 - q
    thetas = list(theta_grid)
    dpd = np.array([dpd_objective(th, x, gam) for th in thetas])
    lq = np.array([logq_lik(th, x, q) for th in thetas])
    offsets = np.array([weighted_moment(0.0, 2.0 - q, th) for th in thetas])
    design = np.column_stack([lq, np.ones_like(lq)])
    coef, *_ = np.linalg.lstsq(design, dpd, rcond=None)
    resid = dpd - design @ coef
    return {
        "sigma": float(coef[0]),
        "mu": float(coef[1]),
        "max_abs_residual": float(np.max(np.abs(resid))),
        "offset_spread": float(offsets.max() - offsets.min()),
        "dpd": dpd,
        "logq": lq,
    }
