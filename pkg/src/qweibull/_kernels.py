"""Hot numeric kernels: batched Weibull objective evaluation over a GA population.

Two interchangeable backends are provided.  The numba backend JIT-compiles
tight loops; the pure-numpy backend uses broadcasting.  Selection happens at
import time: numba is used when it imports cleanly, unless the environment
variable ``QWEIBULL_DISABLE_NUMBA`` is set to ``1``/``true``/``yes``.

Both backends evaluate log f in the log domain so that extreme candidate
parameters (the search box spans many decades) yield -inf rather than NaN.
Densities below 1e-300 are clamped there; a candidate is flagged "cliffed"
when that clamp changed the objective materially (plain log likelihood, or
q > 1 where the clamped density term explodes).  For q < 1 the clamped term
already equals the finite limit -1/(1-q), so no flag is raised.
"""

from __future__ import annotations

import os

import numpy as np

LOG_FLOOR = -690.7755278982137  # log(1e-300)

_env = os.environ.get("QWEIBULL_DISABLE_NUMBA", "").strip().lower()
_DISABLED = _env in {"1", "true", "yes"}

try:  # pragma: no cover - exercised indirectly via backend()
    if _DISABLED:
        raise ImportError("numba disabled by QWEIBULL_DISABLE_NUMBA")
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def _logq_batch_numpy(alphas, betas, logdata, q):
    """Sum of log_q densities for each (alpha, beta) candidate.

    Returns (values, cliffed) with shapes (P,), (P,).
    """
    la = np.log(alphas)[:, None]
    lb = np.log(betas)[:, None]
    lu = logdata[None, :] - lb
    with np.errstate(over="ignore"):
        t = alphas[:, None] * lu
        logf = la - lb + t - lu - np.exp(t)
    clamped = logf < LOG_FLOOR
    logf = np.maximum(logf, LOG_FLOOR)
    om1q = 1.0 - q
    with np.errstate(over="ignore"):
        vals = np.sum((np.exp(om1q * logf) - 1.0) / om1q, axis=1)
    cliffed = clamped.any(axis=1) if q > 1.0 else np.zeros(len(alphas), dtype=bool)
    return vals, cliffed


def _loglik_batch_numpy(alphas, betas, logdata):
    """Sum of log densities for each (alpha, beta) candidate."""
    la = np.log(alphas)[:, None]
    lb = np.log(betas)[:, None]
    lu = logdata[None, :] - lb
    with np.errstate(over="ignore"):
        t = alphas[:, None] * lu
        logf = la - lb + t - lu - np.exp(t)
    clamped = logf < LOG_FLOOR
    logf = np.maximum(logf, LOG_FLOOR)
    return np.sum(logf, axis=1), clamped.any(axis=1)


if _HAVE_NUMBA:

    @njit(cache=True)
    def _logq_batch_numba(alphas, betas, logdata, q):  # pragma: no cover - jitted
        npop = alphas.shape[0]
        n = logdata.shape[0]
        vals = np.empty(npop)
        cliffed = np.zeros(npop, np.bool_)
        om1q = 1.0 - q
        for p in range(npop):
            a = alphas[p]
            b = betas[p]
            la_lb = np.log(a) - np.log(b)
            lb = np.log(b)
            s = 0.0
            clamped = False
            for i in range(n):
                lu = logdata[i] - lb
                t = a * lu
                logf = la_lb + t - lu - np.exp(t)
                if logf < LOG_FLOOR:
                    logf = LOG_FLOOR
                    clamped = True
                s += (np.exp(om1q * logf) - 1.0) / om1q
            vals[p] = s
            if clamped and q > 1.0:
                cliffed[p] = True
        return vals, cliffed

    @njit(cache=True)
    def _loglik_batch_numba(alphas, betas, logdata):  # pragma: no cover - jitted
        npop = alphas.shape[0]
        n = logdata.shape[0]
        vals = np.empty(npop)
        cliffed = np.zeros(npop, np.bool_)
        for p in range(npop):
            a = alphas[p]
            b = betas[p]
            la_lb = np.log(a) - np.log(b)
            lb = np.log(b)
            s = 0.0
            for i in range(n):
                lu = logdata[i] - lb
                t = a * lu
                logf = la_lb + t - lu - np.exp(t)
                if logf < LOG_FLOOR:
                    logf = LOG_FLOOR
                    cliffed[p] = True
                s += logf
            vals[p] = s
        return vals, cliffed

    logq_batch = _logq_batch_numba
    loglik_batch = _loglik_batch_numba
else:
    logq_batch = _logq_batch_numpy
    loglik_batch = _loglik_batch_numpy


def backend() -> str:
    """Name of the active kernel backend: 'numba' or 'numpy'."""
    return "numba" if _HAVE_NUMBA else "numpy"


def warmup() -> None:
    """Trigger JIT compilation so timing-sensitive callers pay it up front."""
    a = np.array([2.0])
    b = np.array([1.0])
    ld = np.log(np.array([0.5, 1.5]))
    logq_batch(a, b, ld, 0.8)
    loglik_batch(a, b, ld)
