"""Closed-form Weibull machinery plus the Uniform and BurrIII contaminant families.

Everything here is pure: samplers take an explicit numpy Generator and there
is no hidden state.  Scalar-or-array semantics follow numpy broadcasting.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import digamma, gamma, gammaincc, gammaln, polygamma

from ._errors import DomainError

EULER_GAMMA = 0.5772156649015329


@dataclass(frozen=True)
class WeibullParams:
    """Shape/scale pair for the two-parameter Weibull distribution."""

    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (np.isfinite(a) and np.isfinite(b) and a > 0 and b > 0):
            raise DomainError(f"Weibull parameters must be finite and positive, got ({a}, {b})")
        object.__setattr__(self, "alpha", float(a))
        object.__setattr__(self, "beta", float(b))


@dataclass(frozen=True)
class UniformParams:
    """Bounds of a Uniform[a, b] contaminant."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"Uniform bounds must be finite with a < b, got ({self.a}, {self.b})")


@dataclass(frozen=True)
class BurrIIIParams:
    """Two shape parameters of a BurrIII contaminant (cdf (1 + x^-c)^-k)."""

    c: float
    k: float

    def __post_init__(self):
        if not (np.isfinite(self.c) and np.isfinite(self.k) and self.c > 0 and self.k > 0):
            raise DomainError(f"BurrIII shapes must be finite and positive, got ({self.c}, {self.k})")


@dataclass(frozen=True)
class ShapeAnalysis:
    """Mode / inflection structure of a Weibull density.

    ``mode`` is present only for alpha > 1.  ``inflection_lower`` is present
    when the lower inflection point exists (alpha >= 2; it sits at 0 exactly
    for alpha = 2); for 1 < alpha < 2 only the upper inflection exists.
    """

    mode: float | None
    inflection_lower: float | None
    inflection_upper: float | None
    monotone_decreasing: bool


def _check_nonneg(x, name="x"):
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError(f"{name} must be non-negative")
    return x


def weibull_pdf(x, theta: WeibullParams):
    """Weibull density.

    At x = 0 the limiting value is returned: +inf for alpha < 1, 1/beta for
    alpha = 1, and 0 for alpha > 1.
    """
    x = _check_nonneg(x)
    a, b = theta.alpha, theta.beta
    u = x / b
    with np.errstate(divide="ignore", over="ignore"):
        out = (a / b) * u ** (a - 1.0) * np.exp(-(u**a))
    return out if out.ndim else float(out)


def weibull_cdf(x, theta: WeibullParams):
    """P(X <= x) = 1 - exp(-(x/beta)^alpha)."""
    x = _check_nonneg(x)
    u = x / theta.beta
    out = -np.expm1(-(u**theta.alpha))
    return out if out.ndim else float(out)


def weibull_quantile(u, theta: WeibullParams):
    """Inverse cdf: beta * (-log(1-u))^(1/alpha) for u in (0, 1)."""
    u = np.asarray(u, dtype=float)
    if np.any((u <= 0) | (u >= 1)):
        raise DomainError("quantile argument must lie in the open interval (0, 1)")
    out = theta.beta * (-np.log1p(-u)) ** (1.0 / theta.alpha)
    return out if out.ndim else float(out)


def weibull_sample(theta: WeibullParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws by inverse transform; never emits exactly 0."""
    if n < 0:
        raise DomainError("sample size must be >= 0")
    u = rng.random(n)
    u[u == 0.0] = np.finfo(float).tiny
    return theta.beta * (-np.log1p(-u)) ** (1.0 / theta.alpha)


def reliability(t, theta: WeibullParams):
    """Survival probability exp(-(t/beta)^alpha)."""
    t = _check_nonneg(t, "t")
    out = np.exp(-((t / theta.beta) ** theta.alpha))
    return out if out.ndim else float(out)


def hazard(t, theta: WeibullParams):
    """Instantaneous failure rate (alpha/beta)(t/beta)^(alpha-1).

    Increasing for alpha > 1, constant for alpha = 1, decreasing for
    alpha < 1 (for which t = 0 is a singularity and is rejected).
    """
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("t must be non-negative")
    if theta.alpha < 1 and np.any(t == 0):
        raise DomainError("hazard is singular at t = 0 for alpha < 1")
    a, b = theta.alpha, theta.beta
    out = (a / b) * (t / b) ** (a - 1.0)
    return out if out.ndim else float(out)


def shape_analysis(theta: WeibullParams) -> ShapeAnalysis:
    """Mode, inflection points and monotonicity of the density."""
    a, b = theta.alpha, theta.beta
    if a <= 1:
        return ShapeAnalysis(None, None, None, True)
    mode = b * ((a - 1.0) / a) ** (1.0 / a)
    # Inflections solve a^2 y^2 - 3a(a-1) y + (a-1)(a-2) = 0 in y = (x/beta)^alpha.
    disc = math.sqrt((a - 1.0) * (5.0 * a - 1.0))
    y_lo = (3.0 * (a - 1.0) - disc) / (2.0 * a)
    y_hi = (3.0 * (a - 1.0) + disc) / (2.0 * a)
    lower = b * y_lo ** (1.0 / a) if y_lo >= 0 else None
    upper = b * y_hi ** (1.0 / a)
    return ShapeAnalysis(mode, lower, upper, False)


def _upper_gamma(s: float, z: float) -> float:
    """Unregularized upper incomplete gamma for s > 0."""
    return float(gammaincc(s, z)) * float(gamma(s))


def _scaled_upper_gamma(s: float, z: float) -> float:
    """exp(z) * Gamma(s, z), computed without overflow in exp(z).

    Uses logs while the regularized tail is representable, and the large-z
    asymptotic expansion Gamma(s, z) e^z ~ z^(s-1) [1 + (s-1)/z + ...]
    once it underflows.
    """
    if z == 0.0:
        return float(gamma(s))
    reg = float(gammaincc(s, z))
    if reg > 0.0 and z < 650.0:
        return math.exp(z + float(gammaln(s)) + math.log(reg))
    term = 1.0
    total = 1.0
    for j in range(1, 40):
        term *= (s - j) / z
        total += term
        if abs(term) < 1e-16 * abs(total):
            break
    return z ** (s - 1.0) * total


def truncated_moment(s: float, t: float, theta: WeibullParams) -> float:
    """E[1{X >= t} X^s] for s >= 0, with the convention Gamma(0, .) = 0."""
    if s < 0 or t < 0:
        raise DomainError("truncated_moment requires s >= 0 and t >= 0")
    a, b = theta.alpha, theta.beta
    if s == 0.0:
        return reliability(t, theta)
    z = (t / b) ** a
    tail = t**s * math.exp(-z)
    return tail + (s * b**s / a) * _upper_gamma(s / a, z)


def residual_life_moment(order: int, t: float, theta: WeibullParams) -> float:
    """E[(X - t)^order | X >= t] for integer order >= 1 and t >= 0.

    Evaluated as (-t)^order + sum_k C(order,k) (-t)^(order-k) beta^k
    e^z Gamma(1 + k/alpha, z) with z = (t/beta)^alpha; the exp-scaled
    incomplete gamma is a single guarded evaluation, so large z is safe.
    """
    if order < 1 or int(order) != order:
        raise DomainError("order must be a positive integer")
    if t < 0:
        raise DomainError("t must be non-negative")
    a, b = theta.alpha, theta.beta
    z = (t / b) ** a
    total = (-t) ** order
    for k in range(1, order + 1):
        total += math.comb(order, k) * (-t) ** (order - k) * b**k * _scaled_upper_gamma(1.0 + k / a, z)
    return total


def _zeta(s: float, r: float, alpha: float) -> float:
    return s + (r - 1.0) * (alpha - 1.0)


def _check_weight_domain(s: float, r: float, alpha: float) -> float:
    if r <= 0:
        raise DomainError(f"weight exponent r must be positive, got {r}")
    z = _zeta(s, r, alpha)
    if z <= -alpha:
        raise DomainError(
            f"divergent integral: zeta = {z:.6g} <= -alpha = {-alpha:.6g} for (s={s}, r={r}, alpha={alpha})"
        )
    return z


def weighted_moment(s: float, r: float, theta: WeibullParams) -> float:
    """E[X^s f^(r-1)(X)] = alpha^(r-1) beta^(s-r+1) r^-(1+zeta/alpha) Gamma(1+zeta/alpha).

    zeta = s + (r-1)(alpha-1); requires zeta > -alpha and r > 0.
    """
    a, b = theta.alpha, theta.beta
    z = _check_weight_domain(s, r, a)
    return a ** (r - 1.0) * b ** (s - r + 1.0) * r ** (-(1.0 + z / a)) * float(gamma(1.0 + z / a))


def weighted_log_moment(s: float, r: float, theta: WeibullParams) -> float:
    """E[X^s log(X) f^(r-1)(X)] under the same domain condition as weighted_moment."""
    a, b = theta.alpha, theta.beta
    z = _check_weight_domain(s, r, a)
    g = 1.0 + z / a
    core = b ** (s - r + 1.0) * a ** (r - 1.0) * r ** (-g) * float(gamma(g))
    return core * (math.log(b) - math.log(r) / a + float(digamma(g)) / a)


def weighted_log2_moment(s: float, r: float, theta: WeibullParams) -> float:
    """E[X^s log^2(X) f^(r-1)(X)] under the same domain condition as weighted_moment."""
    a, b = theta.alpha, theta.beta
    z = _check_weight_domain(s, r, a)
    g = 1.0 + z / a
    big_l = math.log(b) - math.log(r) / a
    core = b ** (s - r + 1.0) * a ** (r - 1.0) * r ** (-g) * float(gamma(g))
    psi0 = float(digamma(g))
    psi1 = float(polygamma(1, g))
    return core * ((2.0 * big_l / a) * psi0 + big_l**2 + (psi0**2 + psi1) / a**2)


def raw_moment(s: float, theta: WeibullParams) -> float:
    """E[X^s] = beta^s Gamma(1 + s/alpha) for s > -alpha."""
    a, b = theta.alpha, theta.beta
    if s <= -a:
        raise DomainError(f"raw moment requires s > -alpha, got s={s}, alpha={a}")
    return b**s * float(gamma(1.0 + s / a))


def tsallis_entropy(q: float, theta: WeibullParams) -> float:
    """Order-q entropy (1/(q-1)) [1 - integral of f^q]; requires q > 0, q != 1, q(alpha-1) > -1."""
    a = theta.alpha
    if q == 1.0:
        raise DomainError("q = 1 is the Shannon limit; call shannon_entropy")
    if q <= 0 or q * (a - 1.0) <= -1.0:
        raise DomainError(f"Tsallis entropy needs q > 0 and q(alpha-1) > -1, got q={q}, alpha={a}")
    return (1.0 - weighted_moment(0.0, q, theta)) / (q - 1.0)


def quadratic_entropy(theta: WeibullParams) -> float:
    """-log integral of f^2; defined for alpha > 1/2."""
    a, b = theta.alpha, theta.beta
    if a <= 0.5:
        raise DomainError("quadratic entropy requires alpha > 1/2")
    return math.log(b) - math.log(a) + (2.0 - 1.0 / a) * math.log(2.0) - float(gammaln(2.0 - 1.0 / a))


def shannon_entropy(theta: WeibullParams) -> float:
    """Differential entropy 1 + log(beta/alpha) + (1 - 1/alpha) * euler_gamma."""
    a, b = theta.alpha, theta.beta
    return 1.0 + math.log(b / a) + (1.0 - 1.0 / a) * EULER_GAMMA


def mgf(t: float, theta: WeibullParams, terms: int = 60, return_bound: bool = False):
    """Moment generating function E[exp(tX)].

    Closed form 1/(1 - beta t) for alpha = 1 (|t| < 1/beta); truncated series
    sum over (beta t)^n Gamma(1 + n/alpha) / n! for alpha > 1.  The truncation
    remainder is bounded by the ratio test; the call raises when that bound
    exceeds 1e-10, and returns (value, bound) when ``return_bound`` is set.
    """
    a, b = theta.alpha, theta.beta
    if terms < 1:
        raise DomainError("terms must be >= 1")
    if a < 1:
        raise DomainError("mgf is implemented for alpha >= 1 only")
    if a == 1.0:
        if abs(t) >= 1.0 / b:
            raise DomainError("mgf of the exponential case requires |t| < 1/beta")
        val = 1.0 / (1.0 - b * t)
        return (val, 0.0) if return_bound else val
    if t == 0.0:
        return (1.0, 0.0) if return_bound else 1.0
    total = 0.0
    for n in range(terms + 1):
        total += (b * t) ** n * math.exp(float(gammaln(1.0 + n / a)) - float(gammaln(n + 1.0)))

    def term(n):
        return abs(b * t) ** n * math.exp(float(gammaln(1.0 + n / a)) - float(gammaln(n + 1.0)))

    t1, t2 = term(terms + 1), term(terms + 2)
    ratio = t2 / t1 if t1 > 0 else 0.0
    bound = t1 / (1.0 - ratio) if ratio < 1.0 else math.inf
    if bound > 1e-10:
        raise DomainError(f"mgf series remainder bound {bound:.3g} > 1e-10; increase terms")
    return (total, bound) if return_bound else total


def uniform_sample(params: UniformParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. draws from Uniform[a, b]."""
    if n < 0:
        raise DomainError("sample size must be >= 0")
    return params.a + (params.b - params.a) * rng.random(n)


def burr3_pdf(x, params: BurrIIIParams):
    """BurrIII density c k x^(-c-1) (1 + x^-c)^(-(k+1)) on x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("BurrIII support is x > 0")
    c, k = params.c, params.k
    out = c * k * x ** (-c - 1.0) * (1.0 + x**-c) ** (-(k + 1.0))
    return out if out.ndim else float(out)


def burr3_cdf(x, params: BurrIIIParams):
    """BurrIII cdf (1 + x^-c)^-k on x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("BurrIII support is x > 0")
    out = (1.0 + x**-params.c) ** (-params.k)
    return out if out.ndim else float(out)


def burr3_sample(params: BurrIIIParams, n: int, rng: np.random.Generator) -> np.ndarray:
    """n i.i.d. BurrIII draws by inverting the cdf; never emits exactly 0."""
    if n < 0:
        raise DomainError("sample size must be >= 0")
    u = rng.random(n)
    u[u == 0.0] = np.finfo(float).tiny
    return (u ** (-1.0 / params.k) - 1.0) ** (-1.0 / params.c)
