"""Genetic-algorithm maximizer with a derivative-free local polish, plus the
maximum-likelihood and maximum log_q likelihood fit entry points.

The GA is a real-coded elitist scheme: tournament selection, single-point
crossover of the two genes, Gaussian mutation whose scale decays linearly
over the generations, and truncation to the feasible box.  A fixed seed makes
the whole run, including the polish, bit-reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields, replace

import numpy as np
from scipy.optimize import Bounds, minimize

from ._errors import DomainError, FitError
from ._kernels import loglik_batch, logq_batch
from .distributions import EULER_GAMMA, WeibullParams
from .objectives import ObjectiveKind, ObjectiveSpec, ee_residual

_PENALTY = -1e308
_TOURNAMENT_K = 3


@dataclass(frozen=True)
class GaConfig:
    """Hyperparameters of the GA search and its polish step.

    ``bounds_lo``/``bounds_hi`` delimit the feasible box per dimension.
    ``mutation_sigma_fraction`` scales the Gaussian mutation to the box width;
    the scale then decays linearly across generations.
    """

    population_size: int = 100
    generations: int = 200
    crossover: str = "SINGLE_POINT"
    crossover_rate: float = 0.8
    mutation_sigma_fraction: float = 0.05
    elite_count: int = 2
    bounds_lo: tuple[float, float] = (1e-8, 1e-8)
    bounds_hi: tuple[float, float] = (1e10, 1e10)
    seed: int = 0
    polish: bool = True
    polish_tolerance: float = 1e-10

    def __post_init__(self):
        if self.crossover != "SINGLE_POINT":
            raise DomainError(f"unsupported crossover kind {self.crossover!r}")
        if not 0 < self.crossover_rate <= 1:
            raise DomainError("crossover_rate must lie in (0, 1]")
        if self.elite_count >= self.population_size or self.elite_count < 0:
            raise DomainError("need 0 <= elite_count < population_size")
        if self.population_size < 2 or self.generations < 1:
            raise DomainError("population_size >= 2 and generations >= 1 required")
        lo, hi = np.asarray(self.bounds_lo, float), np.asarray(self.bounds_hi, float)
        if lo.shape != (2,) or hi.shape != (2,) or np.any(lo >= hi):
            raise DomainError("bounds must satisfy lo < hi per dimension")

    def to_text(self) -> str:
        """Serialize as a plain key=value block (one field per line)."""
        lines = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                v = ",".join(repr(c) for c in v)
            lines.append(f"{f.name}={v}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, text: str) -> "GaConfig":
        """Parse a key=value block produced by :meth:`to_text` (or hand-written)."""
        base = cls()
        return base.with_overrides(
            dict(
                line.split("=", 1)
                for line in (ln.strip() for ln in text.splitlines())
                if line and not line.startswith("#")
            )
        )

    def with_overrides(self, overrides: dict[str, str]) -> "GaConfig":
        """Apply string-valued overrides, coercing each to the field's type."""
        typed: dict[str, object] = {}
        by_name = {f.name: f for f in fields(self)}
        for key, raw in overrides.items():
            if key not in by_name:
                raise DomainError(f"unknown GA option {key!r}")
            current = getattr(self, key)
            if isinstance(current, bool):
                typed[key] = str(raw).strip().lower() in {"1", "true", "yes"}
            elif isinstance(current, int):
                typed[key] = int(raw)
            elif isinstance(current, float):
                typed[key] = float(raw)
            elif isinstance(current, tuple):
                parts = [float(p) for p in str(raw).split(",")]
                typed[key] = tuple(parts)
            else:
                typed[key] = str(raw)
        return replace(self, **typed)


@dataclass(frozen=True)
class GaResult:
    """Outcome of a generic 2-d maximization.

    ``best_history`` holds the incumbent value after the initial population
    and after each generation; with elitism it is non-decreasing.
    """

    x: np.ndarray
    value: float
    evaluations: int
    converged: bool
    polish_applied: bool
    best_history: tuple[float, ...]


@dataclass(frozen=True)
class FitResult:
    """Outcome of a Weibull parameter fit."""

    theta_hat: WeibullParams
    objective_value: float
    evaluations: int
    converged: bool
    polish_applied: bool
    ee_residual_inf: float


def _wrap_batch(objective, batch_objective):
    if batch_objective is not None:
        def batch(pop):
            vals, cliffed = batch_objective(pop)
            vals = np.asarray(vals, float)
            bad = ~np.isfinite(vals)
            return np.where(bad, _PENALTY, vals), np.asarray(cliffed, bool) | bad
        return batch

    def batch(pop):
        vals = np.array([float(objective(ind)) for ind in pop])
        bad = ~np.isfinite(vals)
        return np.where(bad, _PENALTY, vals), bad

    return batch


def _ranked(vals: np.ndarray, pop: np.ndarray) -> np.ndarray:
    """Indices sorted best-first; ties broken lexicographically on the point."""
    return np.lexsort((pop[:, 1], pop[:, 0], -vals))


def _is_better(val, x, best_val, best_x) -> bool:
    if val != best_val:
        return val > best_val
    return (x[0], x[1]) < (best_x[0], best_x[1])


def ga_maximize(objective, config: GaConfig, *, batch_objective=None, init_box=None) -> GaResult:
    """Maximize a function of a 2-vector over the configured box.

    Args:
        objective: callable mapping a length-2 array to a float (may return
            -inf/NaN for cliffed points, which are treated as penalties).
        config: GA hyperparameters, bounds and seed.
        batch_objective: optional vectorized form mapping a (P, 2) array to
            (values, cliffed_mask); used for every population evaluation.
        init_box: optional (lo, hi) pair concentrating most of the initial
            population; a quarter of it is still spread over the full bounds.

    Raises FitError if every candidate ever evaluated was cliffed.
    """
    rng = np.random.default_rng(config.seed)
    lo = np.asarray(config.bounds_lo, float)
    hi = np.asarray(config.bounds_hi, float)
    width = hi - lo
    psize, gens = config.population_size, config.generations
    batch = _wrap_batch(objective, batch_objective)

    if init_box is None:
        pop = lo + width * rng.random((psize, 2))
    else:
        ilo = np.maximum(np.asarray(init_box[0], float), lo)
        ihi = np.minimum(np.asarray(init_box[1], float), hi)
        pop = ilo + (ihi - ilo) * rng.random((psize, 2))
        n_wide = psize // 4
        pop[:n_wide] = lo + width * rng.random((n_wide, 2))
    vals, cliffed = batch(pop)
    evaluations = psize
    saw_valid = bool((~cliffed).any())

    order = _ranked(vals, pop)
    best_x = pop[order[0]].copy()
    best_val = float(vals[order[0]])
    best_cliffed = bool(cliffed[order[0]])
    stable_since = 0
    history = [best_val]

    n_children = psize - config.elite_count
    for gen in range(gens):
        order = _ranked(vals, pop)
        elite_idx = order[: config.elite_count]
        contenders = rng.integers(0, psize, size=(n_children, _TOURNAMENT_K))
        winners = contenders[np.arange(n_children), np.argmax(vals[contenders], axis=1)]
        children = pop[winners].copy()
        # Single-point crossover on a 2-gene genome: consecutive pairs swap the
        # second gene with probability crossover_rate.
        n_pairs = n_children // 2
        cross = rng.random(n_pairs) < config.crossover_rate
        a_idx = 2 * np.flatnonzero(cross)
        tmp = children[a_idx, 1].copy()
        children[a_idx, 1] = children[a_idx + 1, 1]
        children[a_idx + 1, 1] = tmp
        decay = max(1.0 - gen / gens, 0.01)
        sigma = config.mutation_sigma_fraction * width * decay
        children += rng.normal(0.0, 1.0, size=children.shape) * sigma
        np.clip(children, lo, hi, out=children)

        child_vals, child_cliffed = batch(children)
        evaluations += n_children
        saw_valid = saw_valid or bool((~child_cliffed).any())

        pop = np.concatenate([pop[elite_idx], children])
        vals = np.concatenate([vals[elite_idx], child_vals])
        cliffed = np.concatenate([cliffed[elite_idx], child_cliffed])

        gen_order = _ranked(vals, pop)
        top = gen_order[0]
        if _is_better(float(vals[top]), pop[top], best_val, best_x):
            best_val = float(vals[top])
            best_x = pop[top].copy()
            best_cliffed = bool(cliffed[top])
            stable_since = gen + 1
        history.append(best_val)

    if not saw_valid:
        raise FitError("every evaluated candidate was cliffed; check bounds and objective")

    polish_applied = False
    converged = (gens - stable_since) >= max(1, gens // 10)
    if config.polish and not best_cliffed:
        def neg(v):
            val, _ = batch(np.asarray(v, float)[None, :])
            return -float(val[0])

        res = minimize(
            neg,
            best_x,
            method="Nelder-Mead",
            bounds=Bounds(lo, hi),
            options={
                "xatol": config.polish_tolerance,
                "fatol": config.polish_tolerance,
                "maxiter": 600,
            },
        )
        evaluations += int(res.nfev)
        polish_applied = True
        if -res.fun >= best_val:
            best_val = float(-res.fun)
            best_x = np.clip(np.asarray(res.x, float), lo, hi)
        converged = bool(res.success) or converged
    return GaResult(best_x, best_val, evaluations, converged, polish_applied, tuple(history))


def _validate_fit_data(data) -> np.ndarray:
    x = np.asarray(data, dtype=float)
    if x.ndim != 1 or x.size < 2:
        raise DomainError("fitting needs at least two observations")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise DomainError("all observations must be finite and > 0")
    if np.all(x == x[0]):
        raise DomainError("degenerate data: all observations equal")
    return x


def _fit(data, q: float | None, config: GaConfig | None) -> FitResult:
    x = _validate_fit_data(data)
    cfg = config or GaConfig()
    lo = np.asarray(cfg.bounds_lo, float)
    hi = np.asarray(cfg.bounds_hi, float)
    if np.any(lo <= 0):
        raise DomainError("fit bounds must be strictly positive")
    logdata = np.log(x)
    # The search runs over (log alpha, log beta) so mutation steps stay
    # meaningful across the ten decades of the default box.
    vlo, vhi = np.log(lo), np.log(hi)
    # Moment-style initial box: Var[log X] = pi^2 / (6 alpha^2).
    s = float(np.std(logdata, ddof=1))
    a0 = float(np.clip(math.pi / (math.sqrt(6.0) * s), 1e-3, 1e6))
    b0 = math.exp(float(np.mean(logdata)) + EULER_GAMMA / a0)
    init_lo = np.maximum(vlo, [math.log(a0 / 8.0), math.log(b0 / 6.0)])
    init_hi = np.minimum(vhi, [math.log(a0 * 8.0), math.log(b0 * 6.0)])

    if q is None:
        def batch(pop):
            return loglik_batch(np.exp(pop[:, 0]), np.exp(pop[:, 1]), logdata)
    else:
        if q <= 0 or q == 1.0:
            raise DomainError("fit_mlqe requires q > 0 and q != 1")

        def batch(pop):
            return logq_batch(np.exp(pop[:, 0]), np.exp(pop[:, 1]), logdata, q)

    inner = replace(cfg, bounds_lo=tuple(vlo), bounds_hi=tuple(vhi))
    res = ga_maximize(lambda v: batch(v[None, :])[0][0], inner, batch_objective=batch,
                      init_box=(init_lo, init_hi))
    theta = WeibullParams(math.exp(res.x[0]), math.exp(res.x[1]))
    spec = ObjectiveSpec(ObjectiveKind.LOG) if q is None else ObjectiveSpec(ObjectiveKind.LOG_Q, q)
    resid = ee_residual(theta, x, spec).as_array()
    return FitResult(
        theta_hat=theta,
        objective_value=res.value,
        evaluations=res.evaluations,
        converged=res.converged,
        polish_applied=res.polish_applied,
        ee_residual_inf=float(np.max(np.abs(resid))),
    )


def fit_mle(data, config: GaConfig | None = None) -> FitResult:
    """Maximum-likelihood Weibull fit via GA search plus simplex polish."""
    return _fit(data, None, config)


def fit_mlqe(data, q: float, config: GaConfig | None = None) -> FitResult:
    """Maximum log_q likelihood Weibull fit (q != 1) via GA plus polish."""
    return _fit(data, float(q), config)
