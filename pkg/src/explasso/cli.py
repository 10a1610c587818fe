"""Command-line front end.

Subcommands: fit, cv, simulate, theory, bench.  Exit codes: 0 on success,
2 on usage, configuration, or input-file errors (unreadable or malformed
CSV/JSON counts as pointing the tool at the wrong file), 1 on runtime
failures inside the solver or harness.  Progress and diagnostics go to
stderr; results go to the requested output paths.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys

import numpy as np

from . import bench as bench_mod
from .core import (
    DEFAULT_TAU,
    Dataset,
    FitConfig,
    INVALID_CONFIG,
    IO_ERROR,
    PARSE_ERROR,
    SolverError,
    destandardize_coefficients,
    standardize,
    validate_dataset,
)
from .losses import ExponentialLoss
from .mm import fit_exponential_lasso
from .sim import load_scenario, run_scenario, write_results_csv
from .theory import make_report
from .tune import (
    DEFAULT_NLAMBDA,
    cross_validate,
    default_grid_ratio,
    fit_path,
    make_grid,
)


def _resolve_seed(seed: int | None) -> int:
    """CLI --seed wins; EXPLASSO_SEED is the fallback; default 0."""
    if seed is not None:
        return seed
    env = os.environ.get("EXPLASSO_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise SolverError(
            INVALID_CONFIG, f"EXPLASSO_SEED must be an integer, got {env!r}"
        ) from None


def _read_csv(path: str, response: str) -> Dataset:
    """Strict CSV reader: header row, comma-separated, '.' decimals.

    The named response column becomes y and every other column a feature.
    Any cell that does not parse as a float is a parse error; nothing is
    silently coerced or dropped.
    """
    try:
        fh = open(path, newline="", encoding="utf-8")
    except OSError as e:
        raise SolverError(IO_ERROR, f"cannot read {path}: {e}") from e
    with fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header:
            raise SolverError(PARSE_ERROR, f"{path} has no header row")
        if response not in header:
            raise SolverError(
                PARSE_ERROR,
                f"response column {response!r} not found in {path} "
                f"(columns: {', '.join(header)})",
            )
        if len(header) < 2:
            raise SolverError(PARSE_ERROR, f"{path} has no feature columns")
        y_col = header.index(response)
        rows: list[list[float]] = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(header):
                raise SolverError(
                    PARSE_ERROR,
                    f"{path}:{lineno} has {len(row)} cells, expected {len(header)}",
                )
            vals = []
            for name, cell in zip(header, row):
                try:
                    vals.append(float(cell))
                except ValueError:
                    raise SolverError(
                        PARSE_ERROR,
                        f"{path}:{lineno} column {name!r}: {cell!r} is not numeric",
                    ) from None
            rows.append(vals)
    if not rows:
        raise SolverError(PARSE_ERROR, f"{path} has no data rows")
    data = np.array(rows)
    mask = np.ones(len(header), dtype=bool)
    mask[y_col] = False
    names = [h for i, h in enumerate(header) if mask[i]]
    return validate_dataset(data[:, mask], data[:, y_col], names)


def _weights_summary(w: np.ndarray) -> dict:
    return {
        "min": float(w.min()),
        "max": float(w.max()),
        "mean": float(w.mean()),
        "frac_below_half": float(np.mean(w < 0.5)),
    }


def _write_json(path: str, obj: dict) -> None:
    try:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as e:
        raise SolverError(IO_ERROR, f"cannot write {path}: {e}") from e


def _fit_report(d: Dataset, info, res, lam: float, tau: float, standardized: bool) -> dict:
    if standardized:
        beta_orig, intercept = destandardize_coefficients(res.beta, info)
    else:
        beta_orig, intercept = res.beta, 0.0
    names = list(d.feature_names or (f"x{j}" for j in range(d.p)))
    report = {
        "features": names,
        "coefficients": dict(zip(names, map(float, beta_orig))),
        "intercept": float(intercept),
        "nnz": int(np.count_nonzero(res.beta)),
        "lambda": float(lam),
        "tau": float(tau),
        "standardized": standardized,
        "objective": float(res.objective_trace[-1]),
        "kkt_residual": float(res.kkt_residual),
        "status": res.status,
        "iterations": int(res.iterations),
        "weights_summary": _weights_summary(res.weights),
    }
    if standardized:
        report["coefficients_std"] = dict(zip(names, map(float, res.beta)))
    return report


def cmd_fit(args) -> int:
    d_raw = _read_csv(args.data, args.response)
    if args.no_standardize:
        d, info, standardized = d_raw, None, False
    else:
        d, info = standardize(d_raw)
        standardized = True

    if args.lam is not None:
        lam = args.lam
    else:
        # no explicit penalty: pick lambda_min by 5-fold CV (also the --cv path)
        grid = make_grid(d, m=DEFAULT_NLAMBDA)
        cfg = FitConfig(tau=args.tau, lam=float(grid.values[0]))
        cv = cross_validate(d, cfg, grid, k=5, seed=_resolve_seed(None))
        lam = cv.lambda_min
        print(f"cv selected lambda = {lam:.6g}", file=sys.stderr)

    res = fit_exponential_lasso(d, FitConfig(tau=args.tau, lam=lam))
    _write_json(args.out, _fit_report(d, info, res, lam, args.tau, standardized))
    print(
        f"fit: nnz={int(np.count_nonzero(res.beta))} lambda={lam:.6g} "
        f"status={res.status} kkt={res.kkt_residual:.3e} -> {args.out}"
    )
    return 0


def cmd_cv(args) -> int:
    d_raw = _read_csv(args.data, args.response)
    if args.no_standardize:
        d, info, standardized = d_raw, None, False
    else:
        d, info = standardize(d_raw)
        standardized = True
    ratio = args.lambda_ratio
    if ratio is None:
        ratio = default_grid_ratio(d.n, d.p)
    grid = make_grid(d, m=args.nlambda, ratio=ratio)
    cfg = FitConfig(tau=args.tau, lam=float(grid.values[0]))
    seed = _resolve_seed(args.seed)
    cv = cross_validate(d, cfg, grid, k=args.k, seed=seed)

    path = fit_path(d, grid, ExponentialLoss(args.tau), cfg)
    lines = ["lambda,cv_mean,cv_se,nnz"]
    for lam, mean, se, res in zip(grid.values, cv.cv_mean, cv.cv_se, path):
        lines.append(
            f"{lam:.10g},{mean:.10g},{se:.10g},{int(np.count_nonzero(res.beta))}"
        )
    try:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as e:
        raise SolverError(IO_ERROR, f"cannot write {args.out}: {e}") from e

    i = int(np.flatnonzero(grid.values == cv.lambda_min)[0])
    fit_out = args.out + ".fit.json"
    _write_json(
        fit_out, _fit_report(d, info, path[i], cv.lambda_min, args.tau, standardized)
    )
    print(
        f"cv: lambda_min={cv.lambda_min:.6g} lambda_1se={cv.lambda_1se:.6g} "
        f"-> {args.out}, fit -> {fit_out}"
    )
    return 0


def cmd_simulate(args) -> int:
    if os.path.exists(args.scenario):
        spec = load_scenario(args.scenario)
    else:
        spec = bench_mod.get_scenario(args.scenario)
    if args.seed is not None or os.environ.get("EXPLASSO_SEED"):
        from dataclasses import replace

        spec = replace(spec, seed=_resolve_seed(args.seed))

    def progress(done, total):
        print(f"{spec.id}: replication {done}/{total}", file=sys.stderr)

    result = run_scenario(spec, replications=args.reps, jobs=args.jobs, progress=progress)
    write_results_csv(args.out, [result])
    print(f"simulate: {spec.id} x {result.aggregates[0].replications} reps -> {args.out}")
    return 0


def cmd_theory(args) -> int:
    rep = make_report(
        tau=args.tau,
        c=args.c,
        p0=args.p0,
        phi_min=args.phi_min,
        s=args.s,
        n=args.n,
        p=args.p,
        delta=args.delta,
        K=args.K,
    )
    fields = [
        ("tau", rep.tau),
        ("c", rep.c),
        ("p0", rep.p0),
        ("phi_min", rep.phi_min),
        ("s", rep.s),
        ("n", rep.n),
        ("p", rep.p),
        ("delta", rep.delta),
        ("K", rep.K),
        ("influence_bound", rep.influence_bound),
        ("gamma_lower", rep.gamma_lower),
        ("kappa", rep.kappa),
        ("lambda", rep.lam),
        ("l2_bound", rep.l2_bound),
        ("l1_bound", rep.l1_bound),
        ("prob_bound", rep.prob_bound),
    ]
    print("theory report")
    for k, v in fields:
        print(f"  {k:<16} {v:.6g}" if isinstance(v, float) else f"  {k:<16} {v}")
    print()
    print("key,value")
    for k, v in fields:
        print(f"{k},{v:.10g}" if isinstance(v, float) else f"{k},{v}")
    return 0


def cmd_bench(args) -> int:
    seed = _resolve_seed(args.seed)
    scenarios = bench_mod.table_scenarios(args.table, reps=args.reps, seed=seed)
    os.makedirs(args.out, exist_ok=True)
    results = []
    for spec in scenarios:
        print(f"bench {args.table}: scenario {spec.id}", file=sys.stderr)

        def progress(done, total, _id=spec.id):
            print(f"  {_id}: replication {done}/{total}", file=sys.stderr)

        results.append(run_scenario(spec, jobs=args.jobs, progress=progress))
    csv_path = os.path.join(args.out, f"{args.table}.csv")
    txt_path = os.path.join(args.out, f"{args.table}.txt")
    write_results_csv(csv_path, results)
    text = bench_mod.render_table(args.table, results)
    try:
        with open(txt_path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as e:
        raise SolverError(IO_ERROR, f"cannot write {txt_path}: {e}") from e
    print(text, end="")
    print(f"bench: wrote {csv_path} and {txt_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="explasso",
        description="Robust sparse regression with an exponential-type loss.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit one model on a CSV file")
    p.add_argument("--data", required=True, help="CSV file with a header row")
    p.add_argument("--response", required=True, help="name of the response column")
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="penalty level; omit to select by CV")
    g.add_argument("--cv", action="store_true", help="select the penalty by 5-fold CV")
    p.add_argument("--no-standardize", action="store_true",
                   help="fit on the raw columns without centering/scaling")
    p.add_argument("--out", required=True, help="output JSON path")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("cv", help="cross-validate the penalty on a CSV file")
    p.add_argument("--data", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--tau", type=float, default=DEFAULT_TAU)
    p.add_argument("--k", type=int, default=5, help="number of folds")
    p.add_argument("--seed", type=int, default=None,
                   help="fold seed (default: EXPLASSO_SEED or 0)")
    p.add_argument("--nlambda", type=int, default=DEFAULT_NLAMBDA)
    p.add_argument("--lambda-ratio", type=float, default=None,
                   help="smallest/largest grid value (default 1e-3 if n<p else 1e-4)")
    p.add_argument("--no-standardize", action="store_true")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_cv)

    p = sub.add_parser("simulate", help="run one benchmark scenario")
    p.add_argument("--scenario", required=True,
                   help="scenario JSON file or bundled scenario name")
    p.add_argument("--reps", type=int, default=None,
                   help="override the scenario's replication count")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes for replications")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("theory", help="print finite-sample constants and bounds")
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--c", type=float, required=True,
                   help="central residual radius (must be < 1/sqrt(tau))")
    p.add_argument("--p0", type=float, required=True,
                   help="probability mass of residuals within c")
    p.add_argument("--phi-min", dest="phi_min", type=float, required=True,
                   help="restricted eigenvalue of the design")
    p.add_argument("--s", type=int, required=True, help="sparsity level")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--K", type=float, default=1.0,
                   help="bound on design column magnitudes")
    p.set_defaults(func=cmd_theory)

    p = sub.add_parser("bench", help="run one built-in benchmark table")
    p.add_argument("--table", required=True, choices=bench_mod.TABLE_IDS)
    p.add_argument("--reps", type=int, default=bench_mod.DEFAULT_REPS)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_bench)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SolverError as e:
        print(f"error ({e.kind}): {e.message}", file=sys.stderr)
        return 2 if e.kind in (INVALID_CONFIG, IO_ERROR, PARSE_ERROR) else 1


if __name__ == "__main__":
    sys.exit(main())
