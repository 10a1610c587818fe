import numpy as np
import pytest

from explasso import (
    ExponentialLoss,
    HuberLoss,
    SolverError,
    SquaredLoss,
    empirical_gradient,
    empirical_loss,
    huber_weight,
    influence,
    influence_bound,
    loss_value,
    method_label,
    mm_weight,
    validate_dataset,
)
from oracles import fd_gradient

GRID = np.concatenate([np.linspace(-10, 10, 801), [-57.3, 42.0, 123.0]])


def test_loss_value_frozen_points():
    assert loss_value(ExponentialLoss(0.5), 0.0) == 0.0
    # saturation: tau=0.1 caps the loss at 1/tau = 10
    assert loss_value(ExponentialLoss(0.1), 100.0) == pytest.approx(10.0, abs=1e-12)
    assert loss_value(ExponentialLoss(1.0), 1.0) == pytest.approx(
        0.3934693402873666, abs=1e-15
    )
    # near-quadratic regime
    assert loss_value(ExponentialLoss(1e-8), 2.0) == pytest.approx(2.0, abs=1e-7)
    assert loss_value(SquaredLoss(), 3.0) == 4.5
    k = 1.345
    assert loss_value(HuberLoss(k), 1.0) == 0.5
    assert loss_value(HuberLoss(k), 10.0) == pytest.approx(k * 10 - k * k / 2)


def test_loss_even_influence_odd():
    for kind in (ExponentialLoss(0.3), SquaredLoss(), HuberLoss()):
        np.testing.assert_array_equal(loss_value(kind, GRID), loss_value(kind, -GRID))
        np.testing.assert_array_equal(influence(kind, GRID), -influence(kind, -GRID))


def test_loss_saturation_bound():
    tau = 0.7
    vals = loss_value(ExponentialLoss(tau), GRID)
    assert np.all(vals >= 0.0)
    # the bound 1/tau is approached but never exceeded; strictness holds
    # wherever exp(-tau r^2/2) has not underflowed
    assert np.all(vals <= 1.0 / tau)
    moderate = np.abs(GRID) <= 10.0
    assert np.all(vals[moderate] < 1.0 / tau)


def test_influence_frozen_points():
    tau = 0.1
    r_star = 1.0 / np.sqrt(tau)
    assert influence(ExponentialLoss(tau), 0.0) == 0.0
    assert influence(ExponentialLoss(tau), r_star) == pytest.approx(
        1.9180183554164496, abs=1e-12
    )
    assert abs(influence(ExponentialLoss(tau), 100.0)) < 1e-200


def test_influence_is_loss_derivative():
    # finite differences of the loss must match the influence function
    h = 1e-6
    for kind in (ExponentialLoss(0.1), ExponentialLoss(2.0), SquaredLoss()):
        fd = (loss_value(kind, GRID + h) - loss_value(kind, GRID - h)) / (2 * h)
        np.testing.assert_allclose(influence(kind, GRID), fd, atol=2e-9)
    # Huber: avoid the kink at |r| = k
    k = 1.345
    g = GRID[np.abs(np.abs(GRID) - k) > 1e-3]
    fd = (loss_value(HuberLoss(k), g + h) - loss_value(HuberLoss(k), g - h)) / (2 * h)
    np.testing.assert_allclose(influence(HuberLoss(k), g), fd, atol=2e-9)


@pytest.mark.parametrize("tau", [0.01, 0.1, 1.0, 10.0])
def test_influence_bounded_and_redescending(tau):
    b = influence_bound(tau)
    psi = influence(ExponentialLoss(tau), GRID)
    assert np.max(np.abs(psi)) <= b + 1e-12
    r_star = 1.0 / np.sqrt(tau)
    assert influence(ExponentialLoss(tau), r_star) == pytest.approx(b, abs=1e-9)
    assert influence(ExponentialLoss(tau), -r_star) == pytest.approx(-b, abs=1e-9)
    # redescending: far past the peak the influence has collapsed
    assert abs(influence(ExponentialLoss(tau), 100.0 * r_star)) < 1e-12 * b


def test_weight_times_residual_is_influence():
    for tau in (0.05, 0.1, 3.0):
        w = mm_weight(tau, GRID)
        np.testing.assert_array_equal(w * GRID, influence(ExponentialLoss(tau), GRID))
        # weights live in [0, 1]; exact zeros only via underflow at extreme r
        assert np.all(w >= 0.0) and np.all(w <= 1.0)
        assert np.all(w[np.abs(GRID) <= 10.0] > 0.0)


def test_mm_weight_frozen_points():
    assert mm_weight(0.1, 2.0) == pytest.approx(0.8187307530779818, abs=1e-15)
    assert mm_weight(0.1, 0.0) == 1.0
    assert mm_weight(2.5, 2.0) == pytest.approx(0.006737946999085467, abs=1e-15)


def test_taylor_remainder_small_tau():
    # |loss - r^2/2| <= tau r^4 / 4 in the small-curvature regime
    tau = 1e-8
    r = np.linspace(-10, 10, 2001)
    err = np.abs(loss_value(ExponentialLoss(tau), r) - r * r / 2.0)
    assert np.all(err <= tau * r**4 / 4.0 + 1e-15)


def test_huber_weight_values():
    k = 1.345
    assert huber_weight(k, 0.0) == 1.0
    assert huber_weight(k, 1.0) == 1.0
    assert huber_weight(k, -k) == 1.0
    assert huber_weight(k, 2.69) == pytest.approx(0.5, abs=1e-15)
    assert huber_weight(k, -2.69) == pytest.approx(0.5, abs=1e-15)
    w = huber_weight(k, GRID)
    assert np.all((w > 0) & (w <= 1))
    np.testing.assert_allclose(w * GRID, influence(HuberLoss(k), GRID), rtol=1e-14)


def test_invalid_parameters():
    for bad in (0.0, -1.0, np.nan):
        with pytest.raises(SolverError):
            ExponentialLoss(bad)
        with pytest.raises(SolverError):
            mm_weight(bad, 1.0)
        with pytest.raises(SolverError):
            huber_weight(bad, 1.0)
        with pytest.raises(SolverError):
            influence_bound(bad)
    with pytest.raises(SolverError):
        HuberLoss(-0.5)


def test_empirical_loss_single_observation():
    d = validate_dataset(np.ones((1, 1)), np.array([1.0]))
    # residual 1 at beta=0: loss (1 - e^{-1/2}) for tau=1
    assert empirical_loss(ExponentialLoss(1.0), d, np.zeros(1)) == pytest.approx(
        0.3934693402873666, abs=1e-15
    )


def test_empirical_loss_matches_squared_for_tiny_tau(rng):
    d = validate_dataset(rng.standard_normal((20, 4)), rng.standard_normal(20))
    beta = rng.standard_normal(4)
    a = empirical_loss(ExponentialLoss(1e-8), d, beta)
    b = empirical_loss(SquaredLoss(), d, beta)
    assert a == pytest.approx(b, abs=1e-6)


def test_empirical_gradient_shapes_and_errors(rng):
    d = validate_dataset(rng.standard_normal((15, 6)), rng.standard_normal(15))
    g = empirical_gradient(ExponentialLoss(0.1), d, np.zeros(6))
    assert g.shape == (6,)
    with pytest.raises(SolverError):
        empirical_loss(ExponentialLoss(0.1), d, np.zeros(5))
    with pytest.raises(SolverError):
        empirical_gradient(SquaredLoss(), d, np.zeros(7))


@pytest.mark.parametrize("seed", range(8))
def test_empirical_gradient_vs_finite_differences(seed):
    rng = np.random.default_rng(seed)
    n, p = rng.integers(10, 60), rng.integers(2, 15)
    d = validate_dataset(rng.standard_normal((n, p)), 2 * rng.standard_normal(n))
    beta = rng.standard_normal(p)
    for kind in (ExponentialLoss(0.1), ExponentialLoss(1.0), SquaredLoss()):
        g = empirical_gradient(kind, d, beta)
        fd = fd_gradient(lambda b: empirical_loss(kind, d, b), beta)
        scale = max(np.max(np.abs(g)), 1e-12)
        assert np.max(np.abs(g - fd)) / scale < 1e-5


def test_squared_and_huber_gradient_forms(rng):
    d = validate_dataset(rng.standard_normal((25, 5)), 3 * rng.standard_normal(25))
    beta = rng.standard_normal(5)
    r = d.y - d.x @ beta
    np.testing.assert_allclose(
        empirical_gradient(SquaredLoss(), d, beta), -(d.x.T @ r) / d.n, atol=1e-14
    )
    k = 1.345
    np.testing.assert_allclose(
        empirical_gradient(HuberLoss(k), d, beta),
        -(d.x.T @ np.clip(r, -k, k)) / d.n,
        atol=1e-14,
    )


def test_method_labels():
    assert method_label(ExponentialLoss(0.1)) == "exponential(tau=0.1)"
    assert method_label(SquaredLoss()) == "squared"
    assert method_label(HuberLoss()) == "huber(k=1.345)"
