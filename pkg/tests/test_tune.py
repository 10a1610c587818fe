import numpy as np
import pytest

from explasso import (
    ExponentialLoss,
    FitConfig,
    LambdaGrid,
    SolverError,
    SquaredLoss,
    cross_validate,
    default_grid_ratio,
    empirical_loss,
    fit,
    fit_path,
    lambda_max,
    make_grid,
    theoretical_lambda,
    validate_dataset,
)
from explasso.core import INVALID_CONFIG
from conftest import make_problem

TAU = 0.1


def _small_grid(d, m=12, ratio=0.05):
    return make_grid(d, m=m, ratio=ratio)


def test_default_grid_ratio():
    assert default_grid_ratio(100, 200) == 1e-3
    assert default_grid_ratio(200, 200) == 1e-4
    assert default_grid_ratio(300, 200) == 1e-4


def test_make_grid_endpoints_and_spacing():
    d, _ = make_problem(0, n=40, p=10, s=3)
    top = lambda_max(d)
    g = make_grid(d, m=2, ratio=0.01)
    assert g.values[0] == pytest.approx(top, rel=1e-12)
    assert g.values[1] == pytest.approx(0.01 * top, rel=1e-12)
    g = make_grid(d, m=30, ratio=1e-3)
    assert g.m == 30
    ratios = g.values[1:] / g.values[:-1]
    np.testing.assert_allclose(ratios, ratios[0], rtol=1e-12)
    assert np.all(np.diff(g.values) < 0)


def test_make_grid_validation(rng):
    d, _ = make_problem(1, n=20, p=5, s=2)
    with pytest.raises(SolverError):
        make_grid(d, m=1)
    with pytest.raises(SolverError):
        make_grid(d, ratio=0.0)
    with pytest.raises(SolverError):
        make_grid(d, ratio=1.0)
    # y orthogonal to all columns: no usable grid top
    d0 = validate_dataset(np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]))
    with pytest.raises(SolverError) as e:
        make_grid(d0)
    assert e.value.kind == INVALID_CONFIG


def test_lambda_grid_validation():
    with pytest.raises(SolverError):
        LambdaGrid(np.array([1.0, 2.0]))  # increasing
    with pytest.raises(SolverError):
        LambdaGrid(np.array([1.0, 1.0]))  # not strict
    with pytest.raises(SolverError):
        LambdaGrid(np.array([1.0, 0.0]))  # nonpositive
    LambdaGrid(np.array([1.0, 0.5, 0.1]))


def test_path_top_fit_is_zero_for_squared():
    d, _ = make_problem(2, n=40, p=15, s=3)
    grid = _small_grid(d)
    fits = fit_path(d, grid, SquaredLoss(), FitConfig(lam=1.0))
    assert np.all(fits[0].beta == 0.0)
    # supports generally grow as the penalty shrinks
    nnz = [int(np.count_nonzero(f.beta)) for f in fits]
    assert nnz[-1] >= nnz[0]


def test_path_returns_one_fit_per_grid_value():
    d, _ = make_problem(3, n=30, p=8, s=2)
    grid = _small_grid(d, m=7)
    fits = fit_path(d, grid, ExponentialLoss(TAU), FitConfig(tau=TAU, lam=1.0))
    assert len(fits) == 7
    assert all(f.converged for f in fits)


def test_warm_path_matches_cold_fits():
    d, _ = make_problem(4, n=50, p=100, s=5)
    grid = _small_grid(d, m=10, ratio=0.05)
    cfg = FitConfig(tau=TAU, lam=1.0)
    warm = fit_path(d, grid, ExponentialLoss(TAU), cfg)
    for i in (0, 3, 6, 9):
        cold = fit(
            d,
            ExponentialLoss(TAU),
            FitConfig(tau=TAU, lam=float(grid.values[i]), init="ordinary_lasso"),
        )
        assert np.max(np.abs(warm[i].beta - cold.beta)) < 1e-5


def test_cv_result_structure():
    d, _ = make_problem(5, n=45, p=12, s=3)
    grid = _small_grid(d)
    cfg = FitConfig(tau=TAU, lam=1.0)
    cv = cross_validate(d, cfg, grid, k=5, seed=3)
    assert cv.cv_mean.shape == (grid.m,)
    assert cv.cv_se.shape == (grid.m,)
    assert cv.fold_losses.shape == (5, grid.m)
    assert cv.fold_assignments.shape == (d.n,)
    assert set(np.unique(cv.fold_assignments)) == set(range(5))
    sizes = np.bincount(cv.fold_assignments)
    assert sizes.max() - sizes.min() <= 1
    assert cv.lambda_min in grid.values
    assert cv.lambda_1se in grid.values
    assert cv.lambda_1se >= cv.lambda_min
    i_min = int(np.argmin(cv.cv_mean))
    assert cv.lambda_min == grid.values[i_min]


def test_cv_deterministic():
    d, _ = make_problem(6, n=40, p=10, s=3)
    grid = _small_grid(d, m=8)
    cfg = FitConfig(tau=TAU, lam=1.0)
    a = cross_validate(d, cfg, grid, k=4, seed=11)
    b = cross_validate(d, cfg, grid, k=4, seed=11)
    np.testing.assert_array_equal(a.cv_mean, b.cv_mean)
    np.testing.assert_array_equal(a.fold_assignments, b.fold_assignments)
    c = cross_validate(d, cfg, grid, k=4, seed=12)
    assert not np.array_equal(a.fold_assignments, c.fold_assignments)


def test_cv_loo_matches_brute_force():
    # k = n cross-validation against a hand-rolled leave-one-out loop
    d, _ = make_problem(7, n=24, p=6, s=2)
    grid = _small_grid(d, m=6, ratio=0.1)
    cfg = FitConfig(tau=TAU, lam=1.0)
    cv = cross_validate(d, cfg, grid, k=d.n, seed=0)
    # reconstruct each training set from the reported fold of each row
    brute = np.zeros((d.n, grid.m))
    for f in range(d.n):
        val = cv.fold_assignments == f
        d_tr = validate_dataset(d.x[~val], d.y[~val])
        fits = fit_path(d_tr, grid, ExponentialLoss(TAU), cfg)
        for i, res in enumerate(fits):
            r = d.y[val] - d.x[val] @ res.beta
            brute[f, i] = np.mean(r * r)
    np.testing.assert_allclose(cv.cv_mean, brute.mean(axis=0), atol=1e-10)


def test_cv_scores_recomputable():
    d, _ = make_problem(8, n=36, p=9, s=3)
    grid = _small_grid(d, m=5, ratio=0.1)
    cfg = FitConfig(tau=TAU, lam=1.0)
    cv = cross_validate(d, cfg, grid, k=3, seed=5)
    for f in range(3):
        val = cv.fold_assignments == f
        d_tr = validate_dataset(d.x[~val], d.y[~val])
        fits = fit_path(d_tr, grid, ExponentialLoss(TAU), cfg)
        for i, res in enumerate(fits):
            r = d.y[val] - d.x[val] @ res.beta
            assert cv.fold_losses[f, i] == pytest.approx(np.mean(r * r), abs=1e-12)


def test_cv_duplicated_rows_paired_folds():
    # duplicating every row and pairing the fold assignment leaves the mean
    # curve unchanged (each weighted subproblem just doubles every term)
    d, _ = make_problem(9, n=30, p=8, s=3)
    grid = _small_grid(d, m=5, ratio=0.1)
    cfg = FitConfig(tau=TAU, lam=1.0)
    folds = np.tile(np.arange(3), 10)
    cv1 = cross_validate(d, cfg, grid, folds=folds)
    d2 = validate_dataset(np.vstack([d.x, d.x]), np.concatenate([d.y, d.y]))
    cv2 = cross_validate(d2, cfg, grid, folds=np.concatenate([folds, folds]))
    np.testing.assert_allclose(cv1.cv_mean, cv2.cv_mean, atol=1e-8)


def test_cv_exp_loss_score():
    d, _ = make_problem(10, n=40, p=10, s=3, outliers=4)
    grid = _small_grid(d, m=6)
    cfg = FitConfig(tau=TAU, lam=1.0)
    cv = cross_validate(d, cfg, grid, k=4, seed=2, score="exp_loss")
    # exp_loss is bounded by 1/tau regardless of outliers
    assert np.all(cv.fold_losses <= 1.0 / TAU)
    with pytest.raises(SolverError):
        cross_validate(d, cfg, grid, k=4, score="r2")


def test_cv_validation_errors():
    d, _ = make_problem(11, n=20, p=5, s=2)
    grid = _small_grid(d, m=4)
    cfg = FitConfig(tau=TAU, lam=1.0)
    with pytest.raises(SolverError):
        cross_validate(d, cfg, grid, k=1)
    with pytest.raises(SolverError):
        cross_validate(d, cfg, grid, k=21)
    with pytest.raises(SolverError):
        cross_validate(d, cfg, grid, folds=np.zeros(d.n, dtype=int))  # one fold only


def test_theoretical_lambda_frozen_value():
    lam = theoretical_lambda(K=1.0, tau=0.1, n=100, p=120, delta=0.05)
    assert lam == pytest.approx(3.158877116483414, abs=1e-9)
    assert lam == pytest.approx(3.159, abs=1e-3)


def test_theoretical_lambda_scaling():
    base = theoretical_lambda(1.0, 0.1, 100, 120, 0.05)
    assert theoretical_lambda(2.0, 0.1, 100, 120, 0.05) == pytest.approx(2 * base)
    assert theoretical_lambda(1.0, 0.4, 100, 120, 0.05) == pytest.approx(base / 2)
    assert theoretical_lambda(1.0, 0.1, 400, 120, 0.05) == pytest.approx(base / 2)
    assert theoretical_lambda(1.0, 0.1, 100, 240, 0.05) > base  # more columns
    with pytest.raises(SolverError):
        theoretical_lambda(0.0, 0.1, 100, 120)
    with pytest.raises(SolverError):
        theoretical_lambda(1.0, 0.1, 100, 120, delta=1.5)
