"""One-sample Kolmogorov-Smirnov test against a fitted Weibull, and data-driven
selection of the tuning constant q by maximum KS p-value."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from ._errors import DomainError, FitError
from .distributions import WeibullParams, weibull_cdf
from .optimize import FitResult, GaConfig, fit_mlqe


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n: int

    def __post_init__(self):
        if not (0 <= self.statistic <= 1 and 0 <= self.p_value <= 1):
            raise DomainError("KS statistic and p-value must lie in [0, 1]")


def ks_statistic(data, cdf) -> float:
    """Sup distance between the empirical cdf and a model cdf.

    D = max over the sorted sample of max(i/n - F(x_(i)), F(x_(i)) - (i-1)/n).
    """
    x = np.sort(np.asarray(data, dtype=float))
    n = len(x)
    if n < 1:
        raise DomainError("need at least one observation")
    f = np.asarray(cdf(x), dtype=float)
    if not np.all(np.isfinite(f)) or np.any(f < 0) or np.any(f > 1):
        raise DomainError("cdf values must be finite and lie in [0, 1]")
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_pvalue(statistic: float, n: int) -> float:
    """Asymptotic two-sided p-value with the finite-n correction.

    lambda = (sqrt(n) + 0.12 + 0.11/sqrt(n)) * D and
    p = 2 sum_k (-1)^(k-1) exp(-2 k^2 lambda^2), truncated once terms drop
    below 1e-12, clamped to [0, 1].
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if statistic <= 0:
        return 1.0
    sqn = math.sqrt(n)
    lam = (sqn + 0.12 + 0.11 / sqn) * statistic
    total = 0.0
    for k in range(1, 200):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 == 1 else -term
        if term < 1e-12:
            break
    return min(max(2.0 * total, 0.0), 1.0)


def ks_test(data, theta: WeibullParams) -> KsResult:
    """KS statistic and p-value of the sample against the Weibull cdf at theta."""
    x = np.asarray(data, dtype=float)
    d = ks_statistic(x, lambda v: weibull_cdf(v, theta))
    return KsResult(statistic=d, p_value=ks_pvalue(d, len(x)), n=len(x))


@dataclass(frozen=True)
class QSelectionRow:
    q: float
    fit: FitResult | None
    ks: KsResult | None
    error: str | None = None


def select_q_by_ks(data, grid, config: GaConfig | None = None) -> tuple[float, list[QSelectionRow]]:
    """Fit MLqE for each q in the grid and pick the q with the highest p-value.

    A q whose fit fails is excluded from the argmax but kept in the table with
    its error message.  Exact p-value ties go to the q nearest 1 (the most
    efficient choice).
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise DomainError("q grid must be nonempty")
    rows: list[QSelectionRow] = []
    for q in grid:
        try:
            fit = fit_mlqe(data, q, config)
            rows.append(QSelectionRow(q, fit, ks_test(data, fit.theta_hat)))
        except (FitError, DomainError) as exc:
            rows.append(QSelectionRow(q, None, None, error=str(exc)))
    valid = [r for r in rows if r.ks is not None]
    if not valid:
        raise FitError("every q in the grid failed to fit")
    best_p = max(r.ks.p_value for r in valid)
    ties = [r for r in valid if r.ks.p_value == best_p]
    q_star = min(ties, key=lambda r: (abs(r.q - 1.0), r.q)).q
    return q_star, rows


def q_table_to_csv(rows) -> str:
    """Per-q selection table as CSV: q, alpha_hat, beta_hat, D, p_value."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(("q", "alpha_hat", "beta_hat", "D", "p_value"))
    for r in rows:
        if r.fit is None:
            writer.writerow((f"{r.q:.6g}", "failed", "failed", "", ""))
        else:
            writer.writerow(
                (
                    f"{r.q:.6g}",
                    f"{r.fit.theta_hat.alpha:.6g}",
                    f"{r.fit.theta_hat.beta:.6g}",
                    f"{r.ks.statistic:.6g}",
                    f"{r.ks.p_value:.6g}",
                )
            )
    return buf.getvalue()
