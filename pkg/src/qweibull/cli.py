"""Command-line front end: fit, simulate, select-q and inject subcommands.

Exit codes: 0 success, 2 usage error, 3 data error, 4 fit failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict, dataclass, replace

import numpy as np

from ._errors import DomainError, FitError
from .datasets import glass_fibre_path
from .distributions import WeibullParams, weibull_cdf, weibull_pdf
from .gof import ks_test, q_table_to_csv, select_q_by_ks
from .optimize import GaConfig, fit_mle, fit_mlqe
from .simulate import load_design, monte_carlo, q_grid_search, summaries_to_csv


def _round6(x: float) -> float:
    return float(f"{float(x):.6g}")


@dataclass(frozen=True)
class FitReport:
    """Flat fit record; numeric fields carry 6 significant digits so the JSON
    form round-trips losslessly."""

    method: str
    q: float | None
    alpha_hat: float
    beta_hat: float
    objective_value: float
    ks_statistic: float
    ks_p_value: float
    n: int
    seed: int
    timing_ms: float

    def __post_init__(self):
        for name in ("alpha_hat", "beta_hat", "objective_value", "ks_statistic", "ks_p_value", "timing_ms"):
            object.__setattr__(self, name, _round6(getattr(self, name)))
        if self.q is not None:
            object.__setattr__(self, "q", _round6(self.q))

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "FitReport":
        return cls(**json.loads(text))


def load_data(path: str, fmt: tuple[str, str | None] = ("lines", None)) -> np.ndarray:
    """Read positive reals from a text file: one value per line, or a CSV column.

    Parse failures and non-positive values are reported with their line number.
    """
    kind, column = fmt
    values: list[float] = []
    try:
        fh = open(path, "r", newline="")
    except OSError as exc:
        raise DomainError(f"cannot open data file {path}: {exc}") from exc
    with fh:
        if kind == "lines":
            for lineno, raw in enumerate(fh, start=1):
                text = raw.strip()
                if not text:
                    continue
                try:
                    v = float(text)
                except ValueError as exc:
                    raise DomainError(f"{path}: line {lineno}: cannot parse {text!r}") from exc
                _check_positive(v, path, lineno)
                values.append(v)
        else:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None or column not in reader.fieldnames:
                raise DomainError(f"{path}: CSV column {column!r} not found (header: {reader.fieldnames})")
            for row in reader:
                text = (row[column] or "").strip()
                if not text:
                    continue
                try:
                    v = float(text)
                except ValueError as exc:
                    raise DomainError(f"{path}: line {reader.line_num}: cannot parse {text!r}") from exc
                _check_positive(v, path, reader.line_num)
                values.append(v)
    if not values:
        raise DomainError(f"{path}: no data values found")
    return np.array(values)


def _check_positive(v: float, path: str, lineno: int):
    if not np.isfinite(v) or v <= 0:
        raise DomainError(f"{path}: line {lineno}: value {v} violates the positive support")


def inject_contamination(
    data,
    mode: str,
    inlier_range: tuple[float, float, int] | None = None,
    rng: np.random.Generator | None = None,
) -> np.ndarray:
    """Append synthetic contamination to a sample (the input is not modified).

    Modes: 'inliers' appends `count` Uniform[a, b] draws; 'outliers' appends
    2, 3, 4 and 5 times the original maximum; 'both' appends the outliers
    first (from the original maximum) and then the inliers.  The default
    inlier range is (min + 0.5, max - 0.5, 10).
    """
    x = np.asarray(data, dtype=float)
    if x.size == 0:
        raise DomainError("cannot contaminate an empty sample")
    if mode == "none":
        return x.copy()
    if mode not in {"inliers", "outliers", "both"}:
        raise DomainError(f"unknown contamination mode {mode!r}")
    out = [x]
    if mode in {"outliers", "both"}:
        m = float(x.max())
        out.append(np.array([2 * m, 3 * m, 4 * m, 5 * m]))
    if mode in {"inliers", "both"}:
        if inlier_range is None:
            inlier_range = (float(x.min()) + 0.5, float(x.max()) - 0.5, 10)
        a, b, count = inlier_range
        if not (a < b) or count < 1:
            raise DomainError("inlier range needs a < b and count >= 1")
        if a <= 0:
            raise DomainError("inlier range must be positive to stay in the Weibull support")
        if rng is None:
            rng = np.random.default_rng(0)
        out.append(a + (b - a) * rng.random(int(count)))
    return np.concatenate(out)


def write_plot_data(path: str, data, theta_mle: WeibullParams, theta_mlqe: WeibullParams) -> None:
    """Write CDF-overlay and histogram/PDF-overlay blocks to one CSV file.

    Block 1: x, empirical_cdf, fitted_cdf_mle, fitted_cdf_mlqe per sorted
    observation.  Block 2 (after a blank line): Freedman-Diaconis histogram
    bins with both fitted densities at the bin midpoints.
    """
    x = np.sort(np.asarray(data, dtype=float))
    n = len(x)
    ecdf = np.arange(1, n + 1) / n
    cdf_mle = weibull_cdf(x, theta_mle)
    cdf_mlqe = weibull_cdf(x, theta_mlqe)
    edges = np.histogram_bin_edges(x, bins="fd")
    counts, _ = np.histogram(x, bins=edges)
    density = counts / (n * np.diff(edges))
    mids = 0.5 * (edges[:-1] + edges[1:])
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(("x", "empirical_cdf", "fitted_cdf_mle", "fitted_cdf_mlqe"))
        for row in zip(x, ecdf, np.atleast_1d(cdf_mle), np.atleast_1d(cdf_mlqe)):
            w.writerow([f"{v:.10g}" for v in row])
        w.writerow(())
        w.writerow(("bin_left", "bin_right", "count", "density", "fitted_pdf_mle", "fitted_pdf_mlqe"))
        for i in range(len(counts)):
            w.writerow(
                [f"{edges[i]:.10g}", f"{edges[i + 1]:.10g}", str(int(counts[i])),
                 f"{density[i]:.10g}", f"{weibull_pdf(mids[i], theta_mle):.10g}",
                 f"{weibull_pdf(mids[i], theta_mlqe):.10g}"]
            )


def _parse_format(text: str):
    if text == "lines":
        return ("lines", None)
    if text.startswith("csv:") and len(text) > 4:
        return ("csv", text[4:])
    raise argparse.ArgumentTypeError(f"format must be 'lines' or 'csv:COLUMN', got {text!r}")


def _parse_inlier_range(text: str):
    try:
        a, b, count = text.split(",")
        return (float(a), float(b), int(count))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected A,B,COUNT, got {text!r}") from exc


def _parse_q_grid(text: str) -> list[float]:
    try:
        lo, hi, step = (float(p) for p in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected LO:HI:STEP, got {text!r}") from exc
    if step <= 0 or hi < lo:
        raise argparse.ArgumentTypeError("q grid needs step > 0 and hi >= lo")
    grid = np.round(np.arange(lo, hi + step / 2, step), 10)
    return [float(g) for g in grid if abs(g - 1.0) > 1e-12]


def _ga_config(args) -> GaConfig:
    cfg = GaConfig(seed=args.seed)
    if getattr(args, "ga", None):
        overrides = dict(part.split("=", 1) for part in args.ga.split(",") if part)
        cfg = cfg.with_overrides(overrides)
        cfg = replace(cfg, seed=args.seed) if "seed" not in overrides else cfg
    return cfg


def _emit(text: str, path: str | None):
    if not text.endswith("\n"):
        text += "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _prepared_data(args) -> np.ndarray:
    data = load_data(args.data, args.format)
    rng = np.random.default_rng(args.seed)
    return inject_contamination(data, args.contaminate, args.inlier_range, rng)


def run_fit(args) -> int:
    data = _prepared_data(args)
    cfg = _ga_config(args)
    t0 = time.perf_counter()
    if args.mle:
        fit = fit_mle(data, cfg)
        method, q = "MLE", None
    else:
        fit = fit_mlqe(data, args.q, cfg)
        method, q = "MLqE", args.q
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    ks = ks_test(data, fit.theta_hat)
    report = FitReport(
        method=method,
        q=q,
        alpha_hat=fit.theta_hat.alpha,
        beta_hat=fit.theta_hat.beta,
        objective_value=fit.objective_value,
        ks_statistic=ks.statistic,
        ks_p_value=ks.p_value,
        n=len(data),
        seed=args.seed,
        timing_ms=elapsed_ms,
    )
    _emit(report.to_json(), args.out)
    if args.plot_data:
        theta_mle = fit.theta_hat if args.mle else fit_mle(data, cfg).theta_hat
        q_plot = args.q if args.q is not None else 0.8
        theta_mlqe = fit.theta_hat if not args.mle else fit_mlqe(data, q_plot, cfg).theta_hat
        write_plot_data(args.plot_data, data, theta_mle, theta_mlqe)
    return 0


def run_simulate(args) -> int:
    design, opts = load_design(args.design)
    reps = args.reps or opts.get("replications") or 200
    seed = args.seed if args.seed is not None else (opts.get("seed") or 0)
    cfg = None
    if args.ga:
        overrides = dict(part.split("=", 1) for part in args.ga.split(",") if part)
        cfg = GaConfig(seed=seed).with_overrides(overrides)
    rows = []
    if args.q_grid:
        q_star, table = q_grid_search(design, args.q_grid, reps, seed, cfg)
        rows.extend(table)
        print(f"q_star={q_star:g}", file=sys.stderr)
    else:
        q = opts.get("q")
        if q is not None:
            rows.append(monte_carlo(design, float(q), reps, seed, cfg))
    rows.append(monte_carlo(design, None, reps, seed, cfg))
    _emit(summaries_to_csv(rows), args.out)
    return 0


def run_select_q(args) -> int:
    data = _prepared_data(args)
    cfg = _ga_config(args)
    grid = args.q_grid or _parse_q_grid("0.6:0.98:0.02")
    t0 = time.perf_counter()
    q_star, rows = select_q_by_ks(data, grid, cfg)
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    _emit(q_table_to_csv(rows), args.out)
    best = next(r for r in rows if r.q == q_star and r.fit is not None)
    report = FitReport(
        method="MLqE",
        q=q_star,
        alpha_hat=best.fit.theta_hat.alpha,
        beta_hat=best.fit.theta_hat.beta,
        objective_value=best.fit.objective_value,
        ks_statistic=best.ks.statistic,
        ks_p_value=best.ks.p_value,
        n=len(data),
        seed=args.seed,
        timing_ms=elapsed_ms,
    )
    sys.stdout.write(report.to_json() + "\n")
    return 0


def run_inject(args) -> int:
    data = load_data(args.data, args.format)
    rng = np.random.default_rng(args.seed)
    out = inject_contamination(data, args.contaminate, args.inlier_range, rng)
    _emit("\n".join(f"{v:.10g}" for v in out), args.out)
    return 0


def _add_common_data_flags(p: argparse.ArgumentParser):
    p.add_argument("--data", required=True, help="path to the data file")
    p.add_argument("--format", type=_parse_format, default=("lines", None),
                   help="'lines' (default) or 'csv:COLUMN'")
    p.add_argument("--contaminate", choices=("none", "inliers", "outliers", "both"), default="none")
    p.add_argument("--inlier-range", type=_parse_inlier_range, default=None, metavar="A,B,COUNT",
                   help="inlier block parameters; default min+0.5,max-0.5,10")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    p.add_argument("--ga", default=None, metavar="KEY=VAL,...", help="GA option overrides")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qweibull",
        description="Robust Weibull fitting by maximum log_q likelihood "
                    f"(bundled example data: {glass_fibre_path()})",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fit = sub.add_parser("fit", help="fit one model to a data file")
    _add_common_data_flags(p_fit)
    mode = p_fit.add_mutually_exclusive_group(required=True)
    mode.add_argument("--mle", action="store_true", help="plain maximum likelihood")
    mode.add_argument("--q", type=float, default=None, help="maximum log_q likelihood at this q")
    p_fit.add_argument("--plot-data", default=None,
                       help="write CDF/PDF overlay CSV (uses q=0.8 for the MLqE curve under --mle)")

    p_sim = sub.add_parser("simulate", help="run a Monte Carlo contamination study")
    p_sim.add_argument("--design", required=True, help="TOML design file")
    p_sim.add_argument("--reps", type=int, default=None)
    p_sim.add_argument("--seed", type=int, default=None)
    p_sim.add_argument("--q-grid", type=_parse_q_grid, default=None, metavar="LO:HI:STEP")
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--ga", default=None, metavar="KEY=VAL,...")

    p_sel = sub.add_parser("select-q", help="choose q by the highest KS p-value")
    _add_common_data_flags(p_sel)
    p_sel.add_argument("--q-grid", type=_parse_q_grid, default=None, metavar="LO:HI:STEP")

    p_inj = sub.add_parser("inject", help="write a contaminated copy of a data file")
    _add_common_data_flags(p_inj)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "fit": run_fit,
        "simulate": run_simulate,
        "select-q": run_select_q,
        "inject": run_inject,
    }
    if args.command == "inject" and args.contaminate == "none":
        parser.error("inject requires --contaminate inliers|outliers|both")
    try:
        return handlers[args.command](args)
    except (DomainError, OSError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 3
    except FitError as exc:
        print(f"fit failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
