import numpy as np
import pytest

from gpfill import (DomainError, InfeasibleSparsity, KernelParams, Observations,
                    TimeGrid, TimeSeries, make_grid, sample_gp_prior, sparsify)

OU = KernelParams(sigma2=1.0, beta=1.0, lengthscales=(2.0,), exponents=(1.0,))


def test_grid_times():
    grid = make_grid(0.0, 0.02, 351)
    t = grid.times()
    assert t.shape == (351,)
    assert t[0] == 0.0
    assert t[1] == pytest.approx(0.02)
    assert t[-1] == pytest.approx(7.0)


def test_grid_validation():
    with pytest.raises(DomainError):
        TimeGrid(t0=0.0, dt=0.0, n=10)
    with pytest.raises(DomainError):
        TimeGrid(t0=0.0, dt=-0.1, n=10)
    with pytest.raises(DomainError):
        TimeGrid(t0=0.0, dt=0.1, n=1)


def test_series_length_must_match_grid():
    grid = make_grid(0.0, 0.1, 5)
    TimeSeries(grid, np.zeros(5))
    with pytest.raises(DomainError):
        TimeSeries(grid, np.zeros(4))
    with pytest.raises(DomainError):
        TimeSeries(grid, np.array([0.0, 1.0, np.nan, 0.0, 0.0]))


def test_observations_validation():
    Observations(indices=np.array([0, 4, 9]), times=np.array([0.0, 0.4, 0.9]),
                 values=np.zeros(3))
    with pytest.raises(DomainError):
        Observations(indices=np.array([4, 0]), times=np.array([0.4, 0.0]),
                     values=np.zeros(2))
    with pytest.raises(DomainError):
        Observations(indices=np.array([0, 4]), times=np.array([0.0]),
                     values=np.zeros(2))


def test_prior_draw_is_deterministic_given_seed():
    grid = make_grid(0.0, 0.02, 80)
    a = sample_gp_prior(OU, grid, 0.0, seed=42)[0]
    b = sample_gp_prior(OU, grid, 0.0, seed=42)[0]
    c = sample_gp_prior(OU, grid, 0.0, seed=43)[0]
    assert np.array_equal(a.values, b.values)
    assert not np.array_equal(a.values, c.values)


def test_prior_draw_count_and_shape():
    grid = make_grid(0.0, 0.02, 60)
    draws = sample_gp_prior(OU, grid, 0.0, seed=1, count=5)
    assert len(draws) == 5
    for d in draws:
        assert d.grid == grid
        assert d.values.shape == (60,)
    with pytest.raises(DomainError):
        sample_gp_prior(OU, grid, 0.0, seed=1, count=0)
    with pytest.raises(DomainError):
        sample_gp_prior(OU, grid, -0.5, seed=1)


def test_prior_noise_raises_marginal_variance():
    grid = make_grid(0.0, 0.02, 120)
    clean = sample_gp_prior(OU, grid, 0.0, seed=5, count=400)
    noisy = sample_gp_prior(OU, grid, 1.0, seed=5, count=400)
    var_clean = np.var(np.stack([d.values for d in clean]), axis=0).mean()
    var_noisy = np.var(np.stack([d.values for d in noisy]), axis=0).mean()
    # marginal variance should move from about sigma2 to about sigma2 + 1
    assert var_noisy - var_clean == pytest.approx(1.0, abs=0.25)


def test_prior_multidimensional_params_rejected():
    grid = make_grid(0.0, 0.02, 20)
    twod = KernelParams(sigma2=1.0, beta=1.0, lengthscales=(1.0, 1.0), exponents=(1.0, 1.0))
    with pytest.raises(DomainError):
        sample_gp_prior(twod, grid, 0.0, seed=1)


def simulate_series(n=351, seed=0):
    grid = make_grid(0.0, 0.02, n)
    return sample_gp_prior(OU, grid, 0.0, seed=seed)[0]


def test_sparsify_counts_round_half_up():
    series = simulate_series()
    assert len(sparsify(series, 0.03, 5, seed=1)) == 11
    assert len(sparsify(series, 0.05, 5, seed=1)) == 18
    assert len(sparsify(series, 0.07, 5, seed=1)) == 25


def test_sparsify_respects_min_gap_and_ordering():
    series = simulate_series()
    for seed in range(25):
        obs = sparsify(series, 0.07, 5, seed=seed)
        gaps = np.diff(obs.indices)
        assert gaps.min() >= 5
        assert np.all(gaps > 0)
        assert np.array_equal(obs.values, series.values[obs.indices])
        assert np.allclose(obs.times, series.grid.times()[obs.indices])


def test_sparsify_deterministic_given_seed():
    series = simulate_series()
    a = sparsify(series, 0.05, 5, seed=9)
    b = sparsify(series, 0.05, 5, seed=9)
    c = sparsify(series, 0.05, 5, seed=10)
    assert np.array_equal(a.indices, b.indices)
    assert not np.array_equal(a.indices, c.indices)


def test_sparsify_fraction_bounds():
    series = simulate_series(n=100)
    with pytest.raises(DomainError):
        sparsify(series, 0.0, 5, seed=1)
    with pytest.raises(DomainError):
        sparsify(series, 1.0, 5, seed=1)
    # a fraction keeping fewer than two points is unusable
    with pytest.raises(DomainError):
        sparsify(series, 0.004, 5, seed=1)


def test_sparsify_infeasible_gap():
    series = simulate_series(n=20)
    # 10 points with pairwise gaps of 5 need a span of 45 > 19
    with pytest.raises(InfeasibleSparsity):
        sparsify(series, 0.5, 5, seed=1)


def test_sparsify_tight_but_feasible():
    series = simulate_series(n=21)
    # 5 points, min_gap 5: only the exact arithmetic progression fits
    obs = sparsify(series, 0.215, 5, seed=3)
    assert np.array_equal(obs.indices, [0, 5, 10, 15, 20])


def test_sparsify_spreads_over_the_grid():
    series = simulate_series()
    firsts = set()
    lasts = set()
    for seed in range(40):
        obs = sparsify(series, 0.03, 5, seed=seed)
        firsts.add(int(obs.indices[0]))
        lasts.add(int(obs.indices[-1]))
    # uniform selection over valid sets should move the extremes around
    assert len(firsts) > 10
    assert len(lasts) > 10
