"""Expected-Hessian / Fisher matrices, the q-weighted information matrix, and
numeric checks of the conditions guaranteeing a consistent scale estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from ._errors import DomainError
from .distributions import (
    EULER_GAMMA,
    WeibullParams,
    raw_moment,
    weibull_pdf,
    weibull_quantile,
    weighted_log2_moment,
    weighted_log_moment,
    weighted_moment,
)
from .objectives import score_z

EXPECTED_HESSIAN = "EXPECTED_HESSIAN"
FISHER = "FISHER"


@dataclass(frozen=True)
class InfoMatrix:
    """Symmetric 2x2 information-type matrix, stored as its unique entries.

    ``convention`` records whether the entries are expectations of the
    log-likelihood Hessian (negative-definite) or their negation / a
    score-outer-product matrix (positive-definite).
    """

    e_aa: float
    e_ab: float
    e_bb: float
    n: int
    convention: str

    def __post_init__(self):
        if self.n < 1:
            raise DomainError("sample size n must be >= 1")
        if self.convention == FISHER:
            if not (self.e_aa > 0 and self.e_aa * self.e_bb - self.e_ab**2 > 0):
                raise DomainError("FISHER-tagged matrix must be positive-definite")

    def matrix(self) -> np.ndarray:
        return self.n * np.array([[self.e_aa, self.e_ab], [self.e_ab, self.e_bb]])


def expected_hessian(theta: WeibullParams, n: int = 1) -> InfoMatrix:
    """Expectation of the log-likelihood Hessian under theta, scaled by n.

    Entries (per observation):
      E_aa = -[pi^2/6 + (1-g)^2] / alpha^2
      E_bb = -alpha^2 / beta^2
      E_ab = (1-g) / beta
    with g the Euler-Mascheroni constant.  E_aa is beta-free because alpha is
    scale-invariant.
    """
    a, b = theta.alpha, theta.beta
    g = EULER_GAMMA
    e_aa = -(math.pi**2 / 6.0 + (1.0 - g) ** 2) / a**2
    e_bb = -(a**2) / b**2
    e_ab = (1.0 - g) / b
    return InfoMatrix(e_aa, e_ab, e_bb, n, EXPECTED_HESSIAN)


def fisher(theta: WeibullParams, n: int = 1) -> InfoMatrix:
    """Fisher information: the negated expected Hessian, checked positive-definite."""
    h = expected_hessian(theta, n)
    return InfoMatrix(-h.e_aa, -h.e_ab, -h.e_bb, n, FISHER)


def _q_coefficient_tables(theta: WeibullParams):
    """Coefficient lists (power of x, power of log x, coefficient) for each element.

    Expanding the exact score products Z_a^2, Z_a Z_b, Z_b^2 over the basis
    x^l log^m(x) with l in {0, alpha, 2 alpha} and m in {0, 1, 2}.  The
    log(beta) cross terms vanish at beta = 1, where the tables reduce to
    (aa): a0 = 2c, a_alpha = -2c/b^a, atilde = (1, -2/b^a, 1/b^2a);
    (bb): (a/b)^2, -2a^2/b^(a+2), a^2/b^(2a+2);
    (ab): c0 = -(a/b)c, c_alpha = (a/b^(a+1))c, d = (-a/b, 2a/b^(a+1), -a/b^(2a+1)).
    """
    a, b = theta.alpha, theta.beta
    big_b = b**-a
    lb = math.log(b)
    c = 1.0 / a - lb
    aa = [
        (0.0, 0, c**2),
        (0.0, 1, 2.0 * c),
        (0.0, 2, 1.0),
        (a, 0, 2.0 * c * big_b * lb),
        (a, 1, 2.0 * big_b * (lb - c)),
        (a, 2, -2.0 * big_b),
        (2 * a, 0, big_b**2 * lb**2),
        (2 * a, 1, -2.0 * big_b**2 * lb),
        (2 * a, 2, big_b**2),
    ]
    bb = [
        (0.0, 0, (a / b) ** 2),
        (a, 0, -2.0 * a**2 / b ** (a + 2.0)),
        (2 * a, 0, a**2 / b ** (2.0 * (a + 1.0))),
    ]
    ab = [
        (0.0, 0, -(a / b) * c),
        (a, 0, (a / b) * big_b * (c - lb)),
        (2 * a, 0, (a / b) * big_b**2 * lb),
        (0.0, 1, -(a / b)),
        (a, 1, 2.0 * (a / b) * big_b),
        (2 * a, 1, -(a / b) * big_b**2),
    ]
    return {"e_aa": aa, "e_ab": ab, "e_bb": bb}


def _q_element_closed(theta: WeibullParams, q: float, name: str, table) -> float:
    a = theta.alpha
    r = 2.0 - q
    if r <= 0:
        raise DomainError("q-information requires q < 2")
    tools = (weighted_moment, weighted_log_moment, weighted_log2_moment)
    total = 0.0
    for ell, m, coef in table:
        zeta = ell + (1.0 - q) * (a - 1.0)
        if 1.0 + zeta / a <= 0:
            raise DomainError(
                f"q_fisher element {name}: gamma argument 1 + zeta/alpha <= 0 at term l = {ell:g}"
            )
        total += coef * tools[m](ell, r, theta)
    return total


def _q_element_quadrature(theta: WeibullParams, q: float, which: str) -> float:
    """Direct adaptive quadrature of the q-weighted score-product integrand."""

    def integrand(x):
        sv = score_z(x, theta)
        f = weibull_pdf(x, theta)
        prod = {
            "e_aa": sv.d_alpha * sv.d_alpha,
            "e_ab": sv.d_alpha * sv.d_beta,
            "e_bb": sv.d_beta * sv.d_beta,
        }[which]
        return prod * f ** (2.0 - q)

    # f^(2-q) decays like exp(-(2-q) (x/beta)^alpha): cut where that tail
    # reaches 1e-14 so q > 1 keeps enough of the slower tail
    a, b = theta.alpha, theta.beta
    upper = b * (-math.log(1e-14) / (2.0 - q)) ** (1.0 / a)
    cut = weibull_quantile(0.5, theta)
    v1 = quad(integrand, 0.0, cut, limit=400)[0]
    v2 = quad(integrand, cut, upper, limit=400)[0]
    return v1 + v2


def q_fisher(theta: WeibullParams, q: float, n: int = 1, method: str = "closed") -> InfoMatrix:
    """Information matrix of the q-weighted score: integral of Z Z^T f^(2-q).

    ``method='closed'`` assembles each element from weighted-moment identities
    (power of the density in the moments fixed to r = 2 - q); the result is
    symmetric exactly.  ``method='quadrature'`` integrates the definition
    directly and serves as the independent cross-check route.  Domain errors
    name the offending element and term.
    """
    if q <= 0 or q == 1.0:
        raise DomainError("q_fisher requires q > 0 and q != 1")
    if method == "closed":
        tables = _q_coefficient_tables(theta)
        e_aa = _q_element_closed(theta, q, "e_aa", tables["e_aa"])
        e_ab = _q_element_closed(theta, q, "e_ab", tables["e_ab"])
        e_bb = _q_element_closed(theta, q, "e_bb", tables["e_bb"])
    elif method == "quadrature":
        e_aa = _q_element_quadrature(theta, q, "e_aa")
        e_ab = _q_element_quadrature(theta, q, "e_ab")
        e_bb = _q_element_quadrature(theta, q, "e_bb")
    else:
        raise ValueError(f"unknown method {method!r}")
    return InfoMatrix(e_aa, e_ab, e_bb, n, FISHER)


@dataclass(frozen=True)
class ConsistencyReport:
    """Numeric check of the three regularity conditions for the scale estimate
    (shape known, beta > 1): vanishing expected score, negative finite expected
    curvature, and a dominating integrable bound on the third derivative."""

    score_residual: float
    score_ok: bool
    curvature: float
    curvature_ok: bool
    dominating_bound: float
    domination_ok: bool

    @property
    def all_ok(self) -> bool:
        return self.score_ok and self.curvature_ok and self.domination_ok


def consistency_conditions(theta: WeibullParams, grid_size: int = 41) -> ConsistencyReport:
    """Verify the consistency conditions numerically for beta > 1.

    Condition 1 uses the closed moment E[X^alpha] = beta^alpha; condition 2 is
    the closed curvature -alpha^2/beta^2; condition 3 checks that
    M(beta) = 2 alpha + alpha(alpha+1)(alpha+2) beta^alpha is finite and that
    2 alpha + alpha(alpha+1)(alpha+2) x^alpha dominates |d^3 log f / d beta^3|
    across a quantile grid.
    """
    a, b = theta.alpha, theta.beta
    if b <= 1.0:
        raise DomainError("the consistency parameter space requires beta > 1")
    residual = -a / b + (a / b ** (a + 1.0)) * raw_moment(a, theta)
    curvature = -(a**2) / b**2
    m_beta = 2.0 * a + a * (a + 1.0) * (a + 2.0) * b**a
    xs = weibull_quantile(np.linspace(0.005, 0.995, grid_size), theta)
    third = np.abs(-2.0 * a / b**3 + a * (a + 1.0) * (a + 2.0) * xs**a / b ** (a + 3.0))
    bound = 2.0 * a + a * (a + 1.0) * (a + 2.0) * xs**a
    return ConsistencyReport(
        score_residual=float(residual),
        score_ok=abs(residual) < 1e-8,
        curvature=float(curvature),
        curvature_ok=-math.inf < curvature < 0.0,
        dominating_bound=float(m_beta),
        domination_ok=bool(np.isfinite(m_beta) and np.all(third < bound)),
    )
