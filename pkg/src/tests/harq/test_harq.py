import logging

import numpy as np
import pytest

from eharqsim.harq import (
    HarqParams,
    effective_bler,
    expected_retransmissions,
    monte_carlo_harq,
    retransmission_prob,
    retransmissions_at_target,
    sweep_operating_points,
)
from eharqsim.metrics import binormal_curve


class TestHarqParams:
    def test_probability(self):
        with pytest.raises(ValueError, match="'p_fn' must be a probability"):
            HarqParams(0.1, p_fn=1.5)

    def test_independent(self):
        assert HarqParams(0.1).independent
        assert not HarqParams(0.1, p_cond=0.4).independent

    def test_error_prob(self):
        params = HarqParams(0.1, p_cond=0.4, n=3)

        assert params.error_prob(0) == 0.1
        assert params.error_prob(2, (1, 1)) == 0.4
        assert params.error_prob(2, (1, 0)) == 0.1

    def test_replace_keeps_independence(self):
        params = HarqParams(0.1, n=2).replace(p_e=0.2)

        assert params.p_cond == 0.2
        assert params.n == 2


class TestEffectiveBler:
    def test_always_ack(self):
        assert effective_bler(HarqParams(0.01, p_fn=1.0)) == 0.01

    def test_single_retransmission(self):
        params = HarqParams(0.001604, p_fn=1e-3)

        assert effective_bler(params) == pytest.approx(4.1742e-6, rel=1e-4)

    def test_two_retransmissions(self):
        params = HarqParams(0.1, p_fn=0.05, n=2)

        assert effective_bler(params) == pytest.approx(0.0063775)

    def test_perfect_feedback(self):
        params = HarqParams(0.05, n=2)

        assert effective_bler(params) == pytest.approx(0.05**3)

    def test_no_budget(self):
        assert effective_bler(HarqParams(0.2, p_fn=0.5, n=0)) == 0.2

    def test_false_positives_irrelevant(self):
        params = HarqParams(0.1, p_fn=0.05, n=2)

        assert effective_bler(params.replace(p_fp=0.3)) == pytest.approx(
            effective_bler(params)
        )

    def test_order_of_magnitude(self):
        params = HarqParams(0.001604, p_fn=1e-2, n=2)

        assert 1e-5 < effective_bler(params) < 2e-5

    def test_order_of_magnitude_simulated(self):
        params = HarqParams(0.001604, p_fn=1e-2, n=2)
        trials = 2_000_000
        result = monte_carlo_harq(params, trials, seed=11, parallel=True)

        p = effective_bler(params)
        sigma = np.sqrt(p * (1 - p) / trials)
        assert result.failures > 0
        assert abs(result.p_hat - p) <= 3 * sigma

    def test_dependent(self):
        params = HarqParams(0.1, p_fn=0.05, p_cond=0.5, n=2)

        assert effective_bler(params) == pytest.approx(0.0299375)


class TestRetransmissions:
    def test_first(self):
        params = HarqParams(0.004742, p_fn=1e-3, p_fp=1e-2)

        assert retransmission_prob(params, 1) == pytest.approx(0.014689838)

    def test_no_trigger(self):
        params = HarqParams(0.0, p_fn=0.1, p_fp=0.0, n=3)

        assert all(retransmission_prob(params, k) == 0 for k in (1, 2, 3))

    def test_expected(self):
        params = HarqParams(0.1, n=2)

        assert expected_retransmissions(params) == pytest.approx(0.12)

    def test_expected_single(self):
        params = HarqParams(0.02, p_fn=0.1, p_fp=0.05)

        assert expected_retransmissions(params) == pytest.approx(
            retransmission_prob(params, 1)
        )

    def test_sum_matches_closed_form(self):
        params = HarqParams(0.1, p_fn=0.05, p_fp=0.02, n=3)
        as_dependent = HarqParams(
            0.1, p_fn=0.05, p_fp=0.02, n=3, error_prob=lambda j, h: 0.1
        )

        for k in (1, 2, 3):
            assert retransmission_prob(as_dependent, k) == pytest.approx(
                retransmission_prob(params, k)
            )

    def test_count(self):
        with pytest.raises(ValueError, match="at least 1"):
            retransmission_prob(HarqParams(0.1), 0)

    def test_beyond_budget(self, caplog):
        with caplog.at_level(logging.WARNING):
            retransmission_prob(HarqParams(0.1, n=1), 2)

        assert "exceeds the budget" in caplog.text


class TestMonteCarlo:
    @pytest.mark.parametrize("p_cond", [None, 0.5])
    def test_matches_analytic(self, p_cond):
        params = HarqParams(0.1, p_fn=0.05, p_fp=0.02, p_cond=p_cond, n=2)
        trials = 200_000
        result = monte_carlo_harq(params, trials, seed=3)

        p = effective_bler(params)
        sigma = np.sqrt(p * (1 - p) / trials)
        assert abs(result.p_hat - p) < 4 * sigma

        lo, hi = result.retrans_ci
        margin = 2 * (hi - lo)
        assert (
            lo - margin
            <= expected_retransmissions(params)
            <= hi + margin
        )

    def test_no_errors(self):
        result = monte_carlo_harq(HarqParams(0.0, n=2), 1000)

        assert result.failures == 0
        assert result.mean_retx == 0

    def test_reproducible(self):
        params = HarqParams(0.2, p_fn=0.1, p_fp=0.05, n=2)

        first = monte_carlo_harq(params, 5000, seed=9)
        second = monte_carlo_harq(params, 5000, seed=9)

        assert first == second

    def test_parallel_matches_serial(self):
        params = HarqParams(0.2, p_fn=0.1, p_fp=0.05, n=2)

        serial = monte_carlo_harq(params, 250_000, seed=1)
        parallel = monte_carlo_harq(params, 250_000, seed=1, parallel=True)

        assert serial.to_dict() == parallel.to_dict()

    def test_trials(self):
        with pytest.raises(ValueError, match="At least one trial"):
            monte_carlo_harq(HarqParams(0.1), 0)


class TestSweep:
    @pytest.fixture
    def table(self):
        curve = binormal_curve(np.logspace(-4, -1, 13), 3.0)
        return sweep_operating_points(curve, HarqParams(0.003, n=2))

    def test_columns(self, table):
        assert list(table.columns) == ["fnr", "fpr", "p_eff", "exp_retx"]
        assert len(table) == 13

    def test_monotone(self, table):
        assert (np.diff(table["fnr"]) > 0).all()
        assert (np.diff(table["p_eff"]) >= 0).all()
        assert (np.diff(table["exp_retx"]) <= 0).all()

    def test_cheapest_at_target(self, table):
        row = retransmissions_at_target(table, 1e-4)
        feasible = table[table["p_eff"] <= 1e-4]

        assert row["exp_retx"] == feasible["exp_retx"].min()

    def test_unreachable_target(self, table):
        assert retransmissions_at_target(table, 1e-12) is None
