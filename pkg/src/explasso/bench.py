"""Built-in benchmark tables.

Six standard tables cover two problem sizes with independent and AR(1)
designs, a contamination study, and a tau-sensitivity sweep.  Each table is a
list of scenarios sharing dimensions; scenarios are also addressable by name
(e.g. ``table3_gauss``) so single settings can be rerun in isolation.
"""

from __future__ import annotations

import numpy as np

from .core import INVALID_CONFIG, SolverError
from .losses import ExponentialLoss, HuberLoss, SquaredLoss
from .sim import (
    CauchyNoise,
    ContaminatedNoise,
    GaussNoise,
    NoiseSpec,
    OutlierSpec,
    ScenarioResult,
    ScenarioSpec,
    StudentNoise,
)

DEFAULT_METHODS = (ExponentialLoss(0.1), SquaredLoss(), HuberLoss())
TAU_SWEEP_METHODS = (
    ExponentialLoss(0.01),
    ExponentialLoss(0.1),
    ExponentialLoss(1.0),
    ExponentialLoss(10.0),
)

# Desk-scale default; the full protocol uses 100.
DEFAULT_REPS = 20

_CLEAN_NOISES: tuple[tuple[str, NoiseSpec], ...] = (
    ("gauss", GaussNoise(1.0)),
    ("gauss3", GaussNoise(3.0)),
    ("t3", StudentNoise(3.0)),
    ("cauchy", CauchyNoise()),
)

_SWEEP_NOISES: tuple[tuple[str, NoiseSpec], ...] = _CLEAN_NOISES[:1] + (
    ("gauss_outliers", ContaminatedNoise(GaussNoise(1.0), 0.2, OutlierSpec())),
) + _CLEAN_NOISES[1:]

_CONTAM_NOISES: tuple[tuple[str, NoiseSpec], ...] = tuple(
    (f"{tag}_{int(rate * 100)}pct", ContaminatedNoise(base, rate, OutlierSpec()))
    for tag, base in (("gauss", GaussNoise(1.0)), ("t3", StudentNoise(3.0)))
    for rate in (0.1, 0.2, 0.3)
)

# table id -> (n, p, s_star, rho_x, [(tag, noise)], methods)
_TABLES = {
    "t1": (100, 120, 10, 0.0, _CLEAN_NOISES, DEFAULT_METHODS),
    "t2": (100, 120, 10, 0.5, _CLEAN_NOISES, DEFAULT_METHODS),
    "t3": (300, 500, 10, 0.0, _CLEAN_NOISES, DEFAULT_METHODS),
    "t4": (300, 500, 10, 0.5, _CLEAN_NOISES, DEFAULT_METHODS),
    "t5": (300, 500, 10, 0.0, _CONTAM_NOISES, DEFAULT_METHODS),
    "t6": (100, 120, 10, 0.0, _SWEEP_NOISES, TAU_SWEEP_METHODS),
}

TABLE_IDS = tuple(sorted(_TABLES))


def table_scenarios(
    table_id: str, reps: int = DEFAULT_REPS, seed: int = 0
) -> list[ScenarioSpec]:
    """Scenario list for one benchmark table."""
    if table_id not in _TABLES:
        raise SolverError(
            INVALID_CONFIG,
            f"unknown table {table_id!r}; choose from {', '.join(TABLE_IDS)}",
        )
    n, p, s_star, rho, noises, methods = _TABLES[table_id]
    return [
        ScenarioSpec(
            id=f"table{table_id[1:]}_{tag}",
            n=n,
            p=p,
            s_star=s_star,
            rho_x=rho,
            noise=noise,
            methods=methods,
            seed=seed,
            replications=reps,
        )
        for tag, noise in noises
    ]


def bundled_scenario_names() -> list[str]:
    return [s.id for tid in TABLE_IDS for s in table_scenarios(tid)]


def get_scenario(name: str) -> ScenarioSpec:
    """Look up a bundled scenario by id, e.g. 'table3_gauss'."""
    for tid in TABLE_IDS:
        for s in table_scenarios(tid):
            if s.id == name:
                return s
    raise SolverError(
        INVALID_CONFIG,
        f"unknown scenario {name!r}; bundled names: {', '.join(bundled_scenario_names())}",
    )


def _noise_title(noise: NoiseSpec) -> str:
    if isinstance(noise, GaussNoise):
        return f"gaussian(sd={noise.sd:g})"
    if isinstance(noise, StudentNoise):
        return f"student-t(df={noise.df:g})"
    if isinstance(noise, CauchyNoise):
        return "cauchy"
    pct = 100.0 * noise.rate
    return f"{_noise_title(noise.base)} + {pct:g}% outliers"


def render_table(table_id: str, results: list[ScenarioResult]) -> str:
    """Plain-text summary of one table: a block per noise setting, one line
    per method, cells formatted mean (sd)."""
    if table_id not in _TABLES:
        raise SolverError(INVALID_CONFIG, f"unknown table {table_id!r}")
    n, p, _, rho, _, _ = _TABLES[table_id]
    cols = ("l2_sq", "lin_pred", "mspe_test", "tpr", "fdr", "model_size")
    width = max(len(a.method) for r in results for a in r.aggregates) + 2
    lines = [f"table {table_id}: n={n}, p={p}, rho_x={rho:g}"]
    header = "  " + "method".ljust(width) + "".join(c.rjust(16) for c in cols)
    for res in results:
        lines.append("")
        lines.append(f"noise: {_noise_title(res.spec.noise)}  "
                     f"[{res.aggregates[0].replications} replications]")
        lines.append(header)
        for agg in res.aggregates:
            cells = []
            for c in cols:
                m, s = agg.means[c], agg.sds[c]
                if not np.isfinite(m) or abs(m) >= 1e4:
                    cells.append(f"{m:.2e} ({s:.1e})".rjust(16))
                else:
                    cells.append(f"{m:.2f} ({s:.2f})".rjust(16))
            lines.append("  " + agg.method.ljust(width) + "".join(cells))
    return "\n".join(lines) + "\n"
