"""Contamination-mixture sampling, the Monte Carlo replication engine, and
q selection by minimum simulated mean squared error."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, replace

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from ._errors import DomainError, FitError
from .distributions import (
    BurrIIIParams,
    UniformParams,
    WeibullParams,
    burr3_sample,
    uniform_sample,
    weibull_sample,
)
from .optimize import FitResult, GaConfig, fit_mle, fit_mlqe

# Retried replicates get a seed far outside the base_seed + index range.
_RETRY_OFFSET = 1_000_000_007

# Lighter GA settings for replicated fits; the polish step recovers full
# precision, the GA only has to land in the right basin.
MC_GA_DEFAULTS = GaConfig(population_size=48, generations=64)

Contaminant = WeibullParams | UniformParams | BurrIIIParams


@dataclass(frozen=True)
class ContaminationDesign:
    """Mixture (1-epsilon) f0 + epsilon f1 sampled with a fixed split.

    n1 = round(epsilon * n) observations come from the contaminant f1 and the
    remaining n0 from the underlying Weibull f0.
    """

    f0: WeibullParams
    f1: Contaminant
    epsilon: float
    n: int

    def __post_init__(self):
        if not 0 <= self.epsilon < 1:
            raise DomainError("epsilon must lie in [0, 1)")
        if self.n < 2:
            raise DomainError("n must be >= 2")
        if isinstance(self.f1, UniformParams) and self.f1.a <= 0:
            raise DomainError("Uniform contaminant must have a > 0 (samples must be positive)")

    @property
    def n1(self) -> int:
        return int(math.floor(self.epsilon * self.n + 0.5))

    @property
    def n0(self) -> int:
        return self.n - self.n1


@dataclass(frozen=True)
class SimSummary:
    """Per-design Monte Carlo summary for one estimation method."""

    method: str
    mean_alpha: float
    mean_beta: float
    var_alpha: float
    var_beta: float
    mse_alpha: float
    mse_beta: float
    replications: int


def _sample_contaminant(f1: Contaminant, n: int, rng) -> np.ndarray:
    if isinstance(f1, WeibullParams):
        return weibull_sample(f1, n, rng)
    if isinstance(f1, UniformParams):
        return uniform_sample(f1, n, rng)
    if isinstance(f1, BurrIIIParams):
        return burr3_sample(f1, n, rng)
    raise DomainError(f"unsupported contaminant type {type(f1).__name__}")


def contaminated_sample(design: ContaminationDesign, rng: np.random.Generator) -> np.ndarray:
    """Draw n0 underlying + n1 contaminant observations and shuffle them."""
    base = weibull_sample(design.f0, design.n0, rng)
    cont = _sample_contaminant(design.f1, design.n1, rng)
    return rng.permutation(np.concatenate([base, cont]))


def _method_label(q: float | None) -> str:
    return "MLE" if q is None else f"MLqE(q={q:g})"


def summarize_estimates(estimates, theta0: WeibullParams, method: str) -> SimSummary:
    """Mean / variance / MSE summary of an (R, 2) array of (alpha, beta) estimates.

    Uses compensated summation; the MSE identity mse = var + bias^2 holds by
    construction.
    """
    est = np.asarray(estimates, dtype=float)
    if est.ndim != 2 or est.shape[1] != 2 or est.shape[0] < 1:
        raise DomainError("estimates must be an (R, 2) array with R >= 1")
    r = est.shape[0]
    out = {}
    for j, name in enumerate(("alpha", "beta")):
        mean = math.fsum(est[:, j]) / r
        var = math.fsum((v - mean) ** 2 for v in est[:, j]) / r
        bias = mean - (theta0.alpha if j == 0 else theta0.beta)
        out[name] = (mean, var, var + bias * bias)
    return SimSummary(
        method=method,
        mean_alpha=out["alpha"][0],
        mean_beta=out["beta"][0],
        var_alpha=out["alpha"][1],
        var_beta=out["beta"][1],
        mse_alpha=out["alpha"][2],
        mse_beta=out["beta"][2],
        replications=r,
    )


def _fit_once(sample: np.ndarray, q: float | None, cfg: GaConfig) -> FitResult:
    return fit_mle(sample, cfg) if q is None else fit_mlqe(sample, q, cfg)


def monte_carlo(
    design: ContaminationDesign,
    q: float | None,
    replications: int,
    base_seed: int,
    ga_config: GaConfig | None = None,
) -> SimSummary:
    """Replicate sample+fit and summarize against design.f0.

    q = None runs plain maximum likelihood.  Replicate i samples and fits
    with seed base_seed + i; a failed fit is retried once on a shifted seed,
    and more than 1% failures aborts the study.
    """
    if replications < 2:
        raise DomainError("replications must be >= 2")
    cfg = ga_config or MC_GA_DEFAULTS
    estimates = np.empty((replications, 2))
    failures = 0
    for i in range(replications):
        seed = base_seed + i
        try:
            est = _replicate(design, q, seed, cfg)
        except (FitError, DomainError):
            failures += 1
            est = _replicate(design, q, seed + _RETRY_OFFSET, cfg)
        estimates[i] = est
    if failures > 0.01 * replications:
        raise FitError(
            f"{failures}/{replications} replicates needed a retry; "
            f"design={design}, method={_method_label(q)}"
        )
    return summarize_estimates(estimates, design.f0, _method_label(q))


def _replicate(design, q, seed, cfg) -> tuple[float, float]:
    rng = np.random.default_rng(seed)
    sample = contaminated_sample(design, rng)
    fit = _fit_once(sample, q, replace(cfg, seed=seed))
    return fit.theta_hat.alpha, fit.theta_hat.beta


def q_grid_search(
    design: ContaminationDesign,
    grid,
    replications: int,
    base_seed: int,
    ga_config: GaConfig | None = None,
) -> tuple[float, list[SimSummary]]:
    """Run monte_carlo per q and return the q minimizing mse_alpha + mse_beta.

    The same base seed is reused across the grid, so every q sees identical
    samples and the comparison is paired.
    """
    grid = [float(g) for g in grid]
    if not grid:
        raise DomainError("q grid must be nonempty")
    if any(g <= 0 or g == 1.0 for g in grid):
        raise DomainError("q grid values must be positive and different from 1")
    table = [monte_carlo(design, g, replications, base_seed, ga_config) for g in grid]
    combined = [t.mse_alpha + t.mse_beta for t in table]
    q_star = grid[int(np.argmin(combined))]
    return q_star, table


def default_q_grid() -> np.ndarray:
    """The q values scanned by default: 0.60..0.98 and 1.02..1.15 in steps of 0.01."""
    low = np.round(np.arange(0.60, 0.9801, 0.01), 2)
    high = np.round(np.arange(1.02, 1.1501, 0.01), 2)
    return np.concatenate([low, high])


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise DomainError(f"design file is missing {key!r} in {where}")
    return mapping[key]


def load_design(path: str) -> tuple[ContaminationDesign, dict]:
    """Read a TOML design file.

    Layout::

        epsilon = 0.1
        n = 100
        [f0]
        alpha = 4.0
        beta = 2.0
        [f1]
        kind = "weibull"      # weibull | uniform | burr3
        alpha = 1.0
        beta = 5.0
        [method]              # optional
        q = 0.84              # omit (or set mle = true) for plain MLE
        replications = 1000
        seed = 1

    Returns (design, method_options) where method_options carries q (or None
    for MLE), replications and seed when present.
    """
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    f0_sec = _require(doc, "f0", "the document")
    f0 = WeibullParams(_require(f0_sec, "alpha", "[f0]"), _require(f0_sec, "beta", "[f0]"))
    eps = float(_require(doc, "epsilon", "the document"))
    n = int(_require(doc, "n", "the document"))
    if eps > 0:
        f1_sec = _require(doc, "f1", "the document")
        kind = str(f1_sec.get("kind", "weibull")).lower()
        if kind == "weibull":
            f1: Contaminant = WeibullParams(f1_sec["alpha"], f1_sec["beta"])
        elif kind == "uniform":
            f1 = UniformParams(f1_sec["a"], f1_sec["b"])
        elif kind == "burr3":
            f1 = BurrIIIParams(f1_sec["c"], f1_sec["k"])
        else:
            raise DomainError(f"unknown contaminant kind {kind!r}")
    else:
        f1 = WeibullParams(f0.alpha, f0.beta)
    design = ContaminationDesign(f0=f0, f1=f1, epsilon=eps, n=n)
    method = doc.get("method", {})
    opts = {
        "q": None if method.get("mle") else method.get("q"),
        "replications": method.get("replications"),
        "seed": method.get("seed"),
    }
    return design, opts


SUMMARY_COLUMNS = ("method", "alpha_hat", "beta_hat", "var_alpha", "var_beta", "mse_alpha", "mse_beta")


def summaries_to_csv(summaries) -> str:
    """Render SimSummary rows as CSV with the table columns of the study."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SUMMARY_COLUMNS)
    for s in summaries:
        writer.writerow(
            [s.method]
            + [f"{v:.6g}" for v in (s.mean_alpha, s.mean_beta, s.var_alpha, s.var_beta, s.mse_alpha, s.mse_beta)]
        )
    return buf.getvalue()
