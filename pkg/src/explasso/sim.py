"""Synthetic benchmark harness.

Generates sparse linear models with AR(1)-correlated designs and a menu of
noise distributions (including contaminated ones with gross outliers), runs
each competing loss with 5-fold CV penalty selection, and aggregates recovery
and prediction metrics over independent replications.  Everything is seeded:
replication r of a scenario uses base seed + r, so runs are reproducible
row for row.
"""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.stats

from .core import (
    Dataset,
    FitConfig,
    INVALID_CONFIG,
    IO_ERROR,
    PARSE_ERROR,
    SolverError,
    validate_dataset,
)
from .losses import (
    ExponentialLoss,
    HuberLoss,
    LossKind,
    SquaredLoss,
    method_label,
)
from .tune import cross_validate, default_grid_ratio, fit_path, make_grid

SUPPORT_TOL = 1e-8  # |beta_j| above this counts as selected
DEFAULT_N_TEST = 5000
METRIC_NAMES = ("l2_sq", "lin_pred", "mspe_test", "tpr", "fdr", "fpr", "model_size")


@dataclass(frozen=True)
class GaussNoise:
    sd: float = 1.0

    def __post_init__(self):
        if not (np.isfinite(self.sd) and self.sd > 0):
            raise SolverError(INVALID_CONFIG, f"sd must be positive, got {self.sd}")


@dataclass(frozen=True)
class StudentNoise:
    df: float = 3.0

    def __post_init__(self):
        if not (np.isfinite(self.df) and self.df > 0):
            raise SolverError(INVALID_CONFIG, f"df must be positive, got {self.df}")


@dataclass(frozen=True)
class CauchyNoise:
    pass


@dataclass(frozen=True)
class OutlierSpec:
    """Additive shift applied to contaminated observations.

    family 'normal' adds location + scale * z, 'constant' adds exactly the
    location.  sign 'symmetric' flips the shift's sign with probability 1/2
    per contaminated observation; 'positive'/'negative' fix it.
    """

    location: float = 10.0
    scale: float = 1.0
    sign: str = "symmetric"
    family: str = "normal"

    def __post_init__(self):
        if self.sign not in ("symmetric", "positive", "negative"):
            raise SolverError(INVALID_CONFIG, f"unknown sign policy {self.sign!r}")
        if self.family not in ("normal", "constant"):
            raise SolverError(INVALID_CONFIG, f"unknown outlier family {self.family!r}")
        if not (np.isfinite(self.location) and np.isfinite(self.scale)):
            raise SolverError(INVALID_CONFIG, "outlier location/scale must be finite")
        if self.scale < 0:
            raise SolverError(INVALID_CONFIG, f"scale must be >= 0, got {self.scale}")


@dataclass(frozen=True)
class ContaminatedNoise:
    base: "NoiseSpec"
    rate: float
    outlier: OutlierSpec = OutlierSpec()

    def __post_init__(self):
        if isinstance(self.base, ContaminatedNoise):
            raise SolverError(INVALID_CONFIG, "contamination cannot be nested")
        if not (0.0 <= self.rate < 1.0):
            raise SolverError(INVALID_CONFIG, f"rate must be in [0, 1), got {self.rate}")


NoiseSpec = GaussNoise | StudentNoise | CauchyNoise | ContaminatedNoise


def gen_design(n: int, p: int, rho: float, rng: np.random.Generator) -> np.ndarray:
    """AR(1) design: unit-variance columns with corr(col_i, col_j) = rho^|i-j|.

    Built by the first-order recursion col_j = rho*col_{j-1} +
    sqrt(1-rho^2)*fresh, so only O(np) normals are drawn.
    """
    if n < 1 or p < 1:
        raise SolverError(INVALID_CONFIG, f"need n, p >= 1, got n={n}, p={p}")
    if not (0.0 <= rho < 1.0):
        raise SolverError(INVALID_CONFIG, f"rho must be in [0, 1), got {rho}")
    z = rng.standard_normal((n, p))
    x = np.empty((n, p))
    x[:, 0] = z[:, 0]
    c = np.sqrt(1.0 - rho * rho)
    for j in range(1, p):
        x[:, j] = rho * x[:, j - 1] + c * z[:, j]
    return x


def gen_beta0(p: int, s_star: int) -> np.ndarray:
    """True coefficients: s*/2 ones, then s*/2 minus-ones, then zeros."""
    if s_star < 0 or s_star > p:
        raise SolverError(INVALID_CONFIG, f"s_star must be in [0, p], got {s_star}")
    if s_star % 2 != 0:
        raise SolverError(INVALID_CONFIG, f"s_star must be even, got {s_star}")
    beta = np.zeros(p)
    half = s_star // 2
    beta[:half] = 1.0
    beta[half:s_star] = -1.0
    return beta


def gen_noise(noise: NoiseSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n noise values; contamination adds shifts to a random subset.

    For ContaminatedNoise the draw order is fixed (base sample, index subset,
    shift magnitudes, then signs) so results are reproducible per seed.
    Exactly floor(rate * n) observations are contaminated.
    """
    if isinstance(noise, GaussNoise):
        return noise.sd * rng.standard_normal(n)
    if isinstance(noise, StudentNoise):
        return rng.standard_t(noise.df, n)
    if isinstance(noise, CauchyNoise):
        return rng.standard_cauchy(n)
    if isinstance(noise, ContaminatedNoise):
        eps = gen_noise(noise.base, n, rng)
        m = int(np.floor(noise.rate * n))
        if m == 0:
            return eps
        idx = rng.choice(n, size=m, replace=False)
        o = noise.outlier
        if o.family == "normal":
            shift = o.location + o.scale * rng.standard_normal(m)
        else:
            shift = np.full(m, o.location)
        if o.sign == "symmetric":
            shift = shift * rng.choice(np.array([-1.0, 1.0]), size=m)
        elif o.sign == "negative":
            shift = -shift
        eps[idx] += shift
        return eps
    raise SolverError(INVALID_CONFIG, f"unknown noise spec {noise!r}")


def noise_central_mass(
    noise: NoiseSpec, c: float, mc_samples: int = 200_000, seed: int = 0
) -> float:
    """P(|noise| <= c), analytically where scipy has the CDF, else Monte Carlo.

    Gaussian, Student-t, and Cauchy have closed forms; contaminated mixtures
    fall back to a seeded Monte-Carlo estimate.
    """
    if not (np.isfinite(c) and c > 0):
        raise SolverError(INVALID_CONFIG, f"c must be positive, got {c}")
    if isinstance(noise, GaussNoise):
        return float(2.0 * scipy.stats.norm.cdf(c / noise.sd) - 1.0)
    if isinstance(noise, StudentNoise):
        return float(2.0 * scipy.stats.t.cdf(c, noise.df) - 1.0)
    if isinstance(noise, CauchyNoise):
        return float(2.0 * scipy.stats.cauchy.cdf(c) - 1.0)
    draws = gen_noise(noise, mc_samples, np.random.default_rng(seed))
    return float(np.mean(np.abs(draws) <= c))


def _parse_noise(obj: dict) -> NoiseSpec:
    fam = obj.get("family")
    if fam == "gauss":
        return GaussNoise(sd=float(obj.get("sd", 1.0)))
    if fam == "student":
        return StudentNoise(df=float(obj.get("df", 3.0)))
    if fam == "cauchy":
        return CauchyNoise()
    if fam == "contaminated":
        out = obj.get("outlier", {})
        return ContaminatedNoise(
            base=_parse_noise(obj["base"]),
            rate=float(obj["rate"]),
            outlier=OutlierSpec(
                location=float(out.get("location", 10.0)),
                scale=float(out.get("scale", 1.0)),
                sign=str(out.get("sign", "symmetric")),
                family=str(out.get("family", "normal")),
            ),
        )
    raise SolverError(PARSE_ERROR, f"unknown noise family {fam!r}")


def _noise_dict(noise: NoiseSpec) -> dict:
    if isinstance(noise, GaussNoise):
        return {"family": "gauss", "sd": noise.sd}
    if isinstance(noise, StudentNoise):
        return {"family": "student", "df": noise.df}
    if isinstance(noise, CauchyNoise):
        return {"family": "cauchy"}
    o = noise.outlier
    return {
        "family": "contaminated",
        "base": _noise_dict(noise.base),
        "rate": noise.rate,
        "outlier": {
            "location": o.location,
            "scale": o.scale,
            "sign": o.sign,
            "family": o.family,
        },
    }


def _parse_method(obj: dict) -> LossKind:
    loss = obj.get("loss")
    if loss == "exponential":
        return ExponentialLoss(tau=float(obj.get("tau", 0.1)))
    if loss == "squared":
        return SquaredLoss()
    if loss == "huber":
        return HuberLoss(k=float(obj.get("k", 1.345)))
    raise SolverError(PARSE_ERROR, f"unknown method loss {loss!r}")


def _method_dict(kind: LossKind) -> dict:
    if isinstance(kind, ExponentialLoss):
        return {"loss": "exponential", "tau": kind.tau}
    if isinstance(kind, SquaredLoss):
        return {"loss": "squared"}
    return {"loss": "huber", "k": kind.k}


@dataclass(frozen=True)
class ScenarioSpec:
    """Complete description of one benchmark scenario."""

    id: str
    n: int
    p: int
    s_star: int
    rho_x: float
    noise: NoiseSpec
    methods: tuple[LossKind, ...]
    n_test: int = DEFAULT_N_TEST
    seed: int = 0
    cv_folds: int = 5
    nlambda: int = 100
    lambda_ratio: float | None = None
    replications: int = 100

    def __post_init__(self):
        if self.n < 2 or self.p < 1:
            raise SolverError(
                INVALID_CONFIG, f"need n >= 2 and p >= 1, got n={self.n}, p={self.p}"
            )
        gen_beta0(self.p, self.s_star)  # reuses its range checks
        if not (0.0 <= self.rho_x < 1.0):
            raise SolverError(
                INVALID_CONFIG, f"rho_x must be in [0, 1), got {self.rho_x}"
            )
        if not self.methods:
            raise SolverError(INVALID_CONFIG, "scenario needs at least one method")
        if self.n_test < 1:
            raise SolverError(INVALID_CONFIG, f"n_test must be >= 1, got {self.n_test}")
        if self.replications < 1:
            raise SolverError(
                INVALID_CONFIG, f"replications must be >= 1, got {self.replications}"
            )
        if not (2 <= self.cv_folds <= self.n):
            raise SolverError(
                INVALID_CONFIG, f"cv_folds must be in [2, n], got {self.cv_folds}"
            )


def scenario_to_dict(spec: ScenarioSpec) -> dict:
    d = {
        "id": spec.id,
        "n": spec.n,
        "p": spec.p,
        "s_star": spec.s_star,
        "rho_x": spec.rho_x,
        "noise": _noise_dict(spec.noise),
        "methods": [_method_dict(m) for m in spec.methods],
        "n_test": spec.n_test,
        "seed": spec.seed,
        "cv_folds": spec.cv_folds,
        "nlambda": spec.nlambda,
        "replications": spec.replications,
    }
    if spec.lambda_ratio is not None:
        d["lambda_ratio"] = spec.lambda_ratio
    return d


def scenario_from_dict(obj: dict) -> ScenarioSpec:
    try:
        return ScenarioSpec(
            id=str(obj.get("id", "scenario")),
            n=int(obj["n"]),
            p=int(obj["p"]),
            s_star=int(obj["s_star"]),
            rho_x=float(obj.get("rho_x", 0.0)),
            noise=_parse_noise(obj["noise"]),
            methods=tuple(_parse_method(m) for m in obj["methods"]),
            n_test=int(obj.get("n_test", DEFAULT_N_TEST)),
            seed=int(obj.get("seed", 0)),
            cv_folds=int(obj.get("cv_folds", 5)),
            nlambda=int(obj.get("nlambda", 100)),
            lambda_ratio=(
                float(obj["lambda_ratio"]) if "lambda_ratio" in obj else None
            ),
            replications=int(obj.get("replications", 100)),
        )
    except KeyError as e:
        raise SolverError(PARSE_ERROR, f"scenario is missing required key {e}") from e
    except (TypeError, ValueError) as e:
        raise SolverError(PARSE_ERROR, f"bad scenario value: {e}") from e


def load_scenario(path: str) -> ScenarioSpec:
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as e:
        raise SolverError(IO_ERROR, f"cannot read scenario file {path}: {e}") from e
    except json.JSONDecodeError as e:
        raise SolverError(PARSE_ERROR, f"scenario file {path} is not valid JSON: {e}") from e
    if not isinstance(obj, dict):
        raise SolverError(PARSE_ERROR, f"scenario file {path} must hold a JSON object")
    return scenario_from_dict(obj)


@dataclass(frozen=True)
class MetricsRow:
    """Recovery and prediction metrics for one fitted model."""

    l2_sq: float
    lin_pred: float
    mspe_test: float
    tpr: float
    fdr: float
    fpr: float
    model_size: int

    def value(self, name: str) -> float:
        return float(getattr(self, name))


def evaluate(
    beta_hat: np.ndarray,
    beta0: np.ndarray,
    d_train: Dataset,
    d_test: Dataset,
) -> MetricsRow:
    """Score one estimate against the truth.

    l2_sq is ||bhat - b0||_2^2; lin_pred the in-sample (1/n)||X(bhat-b0)||^2;
    mspe_test the out-of-sample mean squared prediction error.  Selection
    metrics threshold |bhat_j| at 1e-8; FDR divides by max(1, |selected|) and
    FPR by the number of true zeros.
    """
    beta_hat = np.asarray(beta_hat, dtype=np.float64)
    beta0 = np.asarray(beta0, dtype=np.float64)
    diff = beta_hat - beta0
    sel = np.abs(beta_hat) > SUPPORT_TOL
    true_sup = beta0 != 0.0
    s = int(true_sup.sum())
    tp = int((sel & true_sup).sum())
    fp = int((sel & ~true_sup).sum())
    xb = d_train.x @ diff
    rt = d_test.y - d_test.x @ beta_hat
    return MetricsRow(
        l2_sq=float(diff @ diff),
        lin_pred=float(xb @ xb) / d_train.n,
        mspe_test=float(rt @ rt) / d_test.n,
        tpr=tp / s if s else 1.0,
        fdr=fp / max(1, int(sel.sum())),
        fpr=fp / max(1, int((~true_sup).sum())),
        model_size=int(sel.sum()),
    )


def run_replication(spec: ScenarioSpec, rep: int) -> dict[str, MetricsRow]:
    """Run one replication: fresh data, then CV-tuned fit per method.

    The RNG stream for replication ``rep`` is seeded with spec.seed + rep and
    consumed in a fixed order: train design, train noise, test design, test
    noise.  Each method selects lambda_min by CV on the training data, then
    reports the full-data path fit at that penalty.
    """
    rng = np.random.default_rng(spec.seed + rep)
    beta0 = gen_beta0(spec.p, spec.s_star)
    x = gen_design(spec.n, spec.p, spec.rho_x, rng)
    y = x @ beta0 + gen_noise(spec.noise, spec.n, rng)
    x_test = gen_design(spec.n_test, spec.p, spec.rho_x, rng)
    y_test = x_test @ beta0 + gen_noise(spec.noise, spec.n_test, rng)
    d_train = validate_dataset(x, y)
    d_test = validate_dataset(x_test, y_test)

    ratio = spec.lambda_ratio
    if ratio is None:
        ratio = default_grid_ratio(spec.n, spec.p)
    grid = make_grid(d_train, m=spec.nlambda, ratio=ratio)

    out: dict[str, MetricsRow] = {}
    for kind in spec.methods:
        cfg = FitConfig(
            tau=kind.tau if isinstance(kind, ExponentialLoss) else 0.1,
            lam=float(grid.values[0]),
        )
        cv = cross_validate(
            d_train, cfg, grid, k=spec.cv_folds, seed=spec.seed + rep, kind=kind
        )
        path = fit_path(d_train, grid, kind, cfg)
        i = int(np.flatnonzero(grid.values == cv.lambda_min)[0])
        out[method_label(kind)] = evaluate(path[i].beta, beta0, d_train, d_test)
    return out


@dataclass(frozen=True)
class AggregateRow:
    """Mean and sd of each metric for one method within a scenario."""

    method: str
    means: dict[str, float]
    sds: dict[str, float]
    replications: int


@dataclass(frozen=True)
class ScenarioResult:
    spec: ScenarioSpec
    aggregates: list[AggregateRow] = field(default_factory=list)
    raw: dict[str, list[MetricsRow]] = field(default_factory=dict)


def _rep_worker(args: tuple) -> dict[str, MetricsRow]:
    spec_dict, rep = args
    return run_replication(scenario_from_dict(spec_dict), rep)


def run_scenario(
    spec: ScenarioSpec,
    replications: int | None = None,
    jobs: int = 1,
    progress=None,
) -> ScenarioResult:
    """Run all replications of a scenario and aggregate per method.

    ``jobs`` > 1 fans replications out to worker processes; results are
    always reduced in replication order, so parallel runs reproduce the
    sequential output exactly.  ``progress`` is an optional callback
    progress(done, total).
    """
    reps = spec.replications if replications is None else int(replications)
    if reps < 1:
        raise SolverError(INVALID_CONFIG, f"replications must be >= 1, got {reps}")
    if jobs < 1:
        raise SolverError(INVALID_CONFIG, f"jobs must be >= 1, got {jobs}")

    rows: list[dict[str, MetricsRow]] = []
    if jobs == 1:
        for r in range(reps):
            rows.append(run_replication(spec, r))
            if progress is not None:
                progress(r + 1, reps)
    else:
        sd = scenario_to_dict(spec)
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for r, row in enumerate(ex.map(_rep_worker, [(sd, r) for r in range(reps)])):
                rows.append(row)
                if progress is not None:
                    progress(r + 1, reps)

    aggregates = []
    raw: dict[str, list[MetricsRow]] = {}
    for kind in spec.methods:
        label = method_label(kind)
        per_rep = [row[label] for row in rows]
        raw[label] = per_rep
        means = {}
        sds = {}
        for name in METRIC_NAMES:
            vals = np.array([m.value(name) for m in per_rep])
            means[name] = float(vals.mean())
            sds[name] = float(vals.std(ddof=1)) if reps > 1 else 0.0
        aggregates.append(AggregateRow(label, means, sds, reps))
    return ScenarioResult(spec, aggregates, raw)


def write_results_csv(path: str, results: list[ScenarioResult]) -> None:
    """Write aggregated metrics as CSV with a fixed column order.

    Columns: scenario, method, metric, mean, sd, replications.  Row order
    follows the input lists, then METRIC_NAMES; floats use repr-style '%.10g'
    so identical runs produce byte-identical files.
    """
    lines = ["scenario,method,metric,mean,sd,replications"]
    for res in results:
        for agg in res.aggregates:
            for name in METRIC_NAMES:
                lines.append(
                    f"{res.spec.id},{agg.method},{name},"
                    f"{agg.means[name]:.10g},{agg.sds[name]:.10g},{agg.replications}"
                )
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as e:
        raise SolverError(IO_ERROR, f"cannot write results to {path}: {e}") from e
