"""Payoffs, Monte Carlo estimator, and the NIG European closed form."""
import math

import numpy as np
import pytest

from levymc.levy_models import NigParams
from levymc.measures import ESSCHER, MarketData, risk_neutralize
from levymc.pricing import (
    ASIAN_CALL,
    EUROPEAN_CALL,
    McResult,
    Payoff,
    european_call_nig_closed,
    nig_tail_probability,
    payoff_asian_call,
    payoff_european_call,
    price_mc,
)
from levymc.sampling import PathGrid, simulate_paths

NIG_BENCH = NigParams(alpha=81.6, beta=3.69, mu=-0.000123, delta=0.0103)
MARKET = MarketData(s0=36.0, r=0.1, T=1.0 / 12.0)


def test_payoff_european_call_cases():
    assert payoff_european_call(np.array([38.0, 40.0]), 34.0) == 6.0
    assert payoff_european_call(np.array([38.0, 30.0]), 34.0) == 0.0
    assert payoff_european_call(np.array([30.0, 41.5]), 0.0) == 41.5


def test_payoff_asian_call_cases():
    flat = np.full(16, 36.0)
    assert payoff_asian_call(flat, 34.0) == 2.0
    assert payoff_asian_call(flat, 40.0) == 0.0
    assert payoff_asian_call(np.array([30.0, 42.0]), 34.0) == 2.0


def test_payoffs_vectorize_over_path_matrices():
    spots = np.array([[35.0, 37.0], [33.0, 30.0]])
    np.testing.assert_allclose(payoff_european_call(spots, 34.0), [3.0, 0.0])
    np.testing.assert_allclose(payoff_asian_call(spots, 34.0), [2.0, 0.0])


def test_payoff_validation():
    with pytest.raises(ValueError):
        Payoff("digital", 1.0)
    with pytest.raises(ValueError):
        Payoff(EUROPEAN_CALL, -1.0)


def test_price_mc_constant_payoff():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    result = price_mc(rnm, lambda spots: np.ones(len(spots)), PathGrid(MARKET.T, 2), 500, seed=5)
    assert result.estimate == pytest.approx(math.exp(-MARKET.r * MARKET.T), rel=1e-14)
    assert result.std_error == pytest.approx(0.0, abs=1e-14)


def test_price_mc_zero_strike_recovers_spot():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    result = price_mc(rnm, Payoff(EUROPEAN_CALL, 0.0), PathGrid(MARKET.T, 1), 100_000, seed=11)
    assert abs(result.estimate - MARKET.s0) <= 3.0 * result.std_error


def test_price_mc_single_path_degenerates():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    grid = PathGrid(MARKET.T, 4)
    result = price_mc(rnm, Payoff(EUROPEAN_CALL, 0.0), grid, 1, seed=23)
    expected = math.exp(-MARKET.r * MARKET.T) * simulate_paths(rnm, grid, 1, seed=23).terminal[0]
    assert result.estimate == pytest.approx(expected, rel=1e-15)
    assert result.std_error == 0.0
    assert result.ci_lo == result.ci_hi == result.estimate


def test_mc_result_confidence_interval_invariant():
    result = McResult.from_discounted_payoffs(np.array([1.0, 2.0, 4.0, 5.0]), seed=0)
    assert result.ci_lo == result.estimate - 1.96 * result.std_error
    assert result.ci_hi == result.estimate + 1.96 * result.std_error
    assert result.n_paths == 4


def test_price_mc_matches_published_estimate_band():
    # deep in-the-money European call; the coarse published band is 2.227 +- 0.07
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    result = price_mc(rnm, Payoff(EUROPEAN_CALL, 34.0), PathGrid(MARKET.T, 16), 10_000, seed=42)
    assert result.ci_lo <= 2.227 + 0.07
    assert result.ci_hi >= 2.227 - 0.07


def test_nig_tail_probability_limits():
    assert nig_tail_probability(NIG_BENCH, 1.0 / 12.0, -50.0) == pytest.approx(1.0, abs=1e-8)
    symmetric = NigParams(alpha=5.0, beta=0.0, mu=0.0, delta=1.0)
    assert nig_tail_probability(symmetric, 1.0, 0.0) == pytest.approx(0.5, abs=1e-8)


def test_closed_form_zero_strike_is_spot():
    assert european_call_nig_closed(NIG_BENCH, MARKET, 0.0) == MARKET.s0


def test_closed_form_benchmark_values():
    # frozen quadrature values for the benchmark market (regression pins)
    assert european_call_nig_closed(NIG_BENCH, MARKET, 34.0) == pytest.approx(2.2821592020585655, abs=1e-6)
    assert european_call_nig_closed(NIG_BENCH, MARKET, 35.0) == pytest.approx(1.2905236588941449, abs=1e-6)


def test_closed_form_strictly_decreasing_in_strike():
    prices = [european_call_nig_closed(NIG_BENCH, MARKET, k) for k in (34.0, 35.0, 36.0, 37.0)]
    assert all(a > b for a, b in zip(prices, prices[1:]))


def test_closed_form_agrees_with_mc():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    grid = PathGrid(MARKET.T, 1)
    for strike in (34.0, 36.0):
        closed = european_call_nig_closed(NIG_BENCH, MARKET, strike)
        mc = price_mc(rnm, Payoff(EUROPEAN_CALL, strike), grid, 200_000, seed=29)
        assert abs(closed - mc.estimate) <= 3.0 * mc.std_error


def test_mc_price_monotone_in_strike_with_common_paths():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    paths = simulate_paths(rnm, PathGrid(MARKET.T, 16), 20_000, seed=31)
    discount = math.exp(-MARKET.r * MARKET.T)
    prices = [discount * payoff_european_call(paths.spots, k).mean() for k in (34.0, 35.0, 36.0, 37.0)]
    assert all(a >= b for a, b in zip(prices, prices[1:]))


def test_call_lower_bound():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    grid = PathGrid(MARKET.T, 1)
    for strike in (34.0, 35.0, 36.0):
        mc = price_mc(rnm, Payoff(EUROPEAN_CALL, strike), grid, 100_000, seed=37)
        intrinsic = max(MARKET.s0 - strike * math.exp(-MARKET.r * MARKET.T), 0.0)
        assert mc.estimate >= intrinsic - 3.0 * mc.std_error


def test_asian_below_european_paired():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    paths = simulate_paths(rnm, PathGrid(MARKET.T, 16), 50_000, seed=41)
    diff = payoff_asian_call(paths.spots, 35.0) - payoff_european_call(paths.spots, 35.0)
    se = diff.std(ddof=1) / math.sqrt(len(diff))
    assert diff.mean() <= 3.0 * se


def test_mc_consistency_doubling_paths():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    grid = PathGrid(MARKET.T, 8)
    a = price_mc(rnm, Payoff(ASIAN_CALL, 35.0), grid, 50_000, seed=43)
    b = price_mc(rnm, Payoff(ASIAN_CALL, 35.0), grid, 100_000, seed=47)
    assert abs(a.estimate - b.estimate) <= 3.0 * math.hypot(a.std_error, b.std_error)


def test_price_mc_deterministic_across_workers():
    rnm = risk_neutralize(NIG_BENCH, MARKET, ESSCHER)
    grid = PathGrid(MARKET.T, 4)
    a = price_mc(rnm, Payoff(ASIAN_CALL, 35.0), grid, 40_000, seed=53, workers=1)
    b = price_mc(rnm, Payoff(ASIAN_CALL, 35.0), grid, 40_000, seed=53, workers=3)
    assert a == b
