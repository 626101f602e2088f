"""Desk-scale runs, enabled with EHARQ_SLOW=1."""

import os

import numpy as np
import pytest

from eharqsim.channel import (
    BlockFading,
    ChannelConfig,
    GenerationConfig,
    generate_dataset,
)
from eharqsim.classifier import (
    SaeTrainConfig,
    complete_rows,
    train_classifier,
    vnr_columns,
)
from eharqsim.features import history_feature_names, with_history
from eharqsim.harq import (
    HarqParams,
    effective_bler,
    expected_retransmissions,
    monte_carlo_harq,
)
from eharqsim.metrics import pr_curve_and_auc
from eharqsim.system import SystemConfig, analytic_failure, simulate_system
from eharqsim.utils.stats import z_value

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(
        not os.environ.get("EHARQ_SLOW"), reason="EHARQ_SLOW is not set"
    ),
]


def random_params(rng):
    p_e = rng.uniform(1e-3, 0.3)
    p_cond = None if rng.random() < 0.5 else rng.uniform(p_e, 0.8)
    return HarqParams(
        p_e,
        p_fn=rng.uniform(0, 0.2),
        p_fp=rng.uniform(0, 0.2),
        p_cond=p_cond,
        n=int(rng.integers(1, 4)),
    )


class TestOracle:
    @pytest.mark.parametrize("index", range(50))
    def test_random_parameters(self, index):
        rng = np.random.default_rng(100 + index)
        params = random_params(rng)
        trials = 1_000_000

        result = monte_carlo_harq(params, trials, seed=index, parallel=True)

        p = effective_bler(params)
        sigma = np.sqrt(p * (1 - p) / trials) + 1 / trials
        assert abs(result.p_hat - p) <= 3 * sigma

        lo, hi = result.retrans_ci
        retrans_sigma = (hi - lo) / (2 * z_value(0.95))
        retrans = expected_retransmissions(params)
        assert abs(result.retrans_hat - retrans) <= 3 * retrans_sigma


class TestSimulator:
    def test_perfect_feedback(self):
        config = SystemConfig(
            n_ue=4, p_arrival=0.5, n_res=16, t_c=3, t_rtt=1, p_e=0.05
        )

        result = simulate_system(config, 1_000_000, seed=11)

        p = 0.05**3
        sigma = np.sqrt(p * (1 - p) / result.packets)
        assert abs(result.p_pf - p) <= 3 * sigma
        assert result.deadline_drops == 0

    @pytest.mark.xfail(
        strict=False,
        reason=(
            "the product-form P1 underestimates the high-load failure "
            "rate, analytic 2.31e-5 against simulated 1.21e-4 "
            "(CI 1.17e-4 to 1.25e-4)"
        ),
    )
    def test_high_load_analytic(self):
        config = SystemConfig(p_arrival=0.36, p_e=3e-3, fnr=1e-3, fpr=1e-2)
        p_pf, diverged = analytic_failure(config)

        result = simulate_system(
            config, 250_000, seed=23, replications=4, parallel=True
        )

        lo, _ = result.ci
        assert not diverged
        assert lo <= p_pf
        assert result.p_pf / 3 <= p_pf <= 3 * result.p_pf


def _records(snr_db, seed, n_records=20_000, fading=None):
    cfg = GenerationConfig(
        ChannelConfig(snr_db, fading=fading, seed=seed), n_records=n_records
    )
    records, _ = generate_dataset(cfg)
    return records


def _auc_pr(classifier, records):
    labels = records["label"].to_numpy()
    return pr_curve_and_auc(classifier.score(records), labels).auc_pr


class TestClassifiers:
    def test_lr_not_worse_than_threshold(self):
        train = _records(2.0, seed=31)
        test = _records(2.0, seed=32)

        lr = train_classifier("LR", train)
        ht0 = train_classifier("HT0", train)

        assert _auc_pr(lr, test) >= _auc_pr(ht0, test)

    def test_history_on_fading(self):
        records = _records(2.0, seed=41, fading=BlockFading(0.99))
        vnr = vnr_columns(records)
        history = [*vnr, *history_feature_names([*vnr, "eucd"])]
        records = complete_rows(with_history(records, history), history)
        sae_config = SaeTrainConfig(epochs=10, oversampling=10, seed=3)

        plain = train_classifier(
            "SAE", records, features=vnr, sae_config=sae_config
        )
        with_past = train_classifier(
            "SAE", records, features=history, sae_config=sae_config
        )

        assert _auc_pr(with_past, records) >= _auc_pr(plain, records)
