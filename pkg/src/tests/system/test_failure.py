import pytest

from eharqsim.harq import HarqParams, effective_bler
from eharqsim.system import SystemConfig, packet_failure_prob


class TestPacketFailureProb:
    @pytest.mark.parametrize(
        ("fnr", "n_retx"), [(0.0, 2), (0.05, 2), (0.3, 1)]
    )
    def test_reduces_to_effective_bler(self, fnr, n_retx):
        config = SystemConfig(p_e=0.1, fnr=fnr, n_retx=n_retx)
        params = HarqParams(0.1, p_fn=fnr, n=n_retx)

        assert packet_failure_prob(
            config, ps=[1.0] * (n_retx + 1)
        ) == pytest.approx(effective_bler(params), rel=1e-14)

    def test_never_scheduled(self):
        assert packet_failure_prob(SystemConfig(), ps=[0.0, 0.0, 0.0]) == 1.0

    def test_by_hand(self):
        config = SystemConfig(p_e=0.1)

        assert packet_failure_prob(
            config, ps=[1.0, 0.5, 0.25]
        ) == pytest.approx(0.05275)

    def test_unscheduled_stage(self):
        config = SystemConfig(p_e=0.1)

        assert packet_failure_prob(
            config, ps=[1.0, 0.0, 0.0]
        ) == pytest.approx(0.1)

    def test_regular_floor(self):
        config = SystemConfig(t_rtt=2, p_e=0.01)

        assert packet_failure_prob(config) >= 0.01 ** (config.n_retx + 1)

    def test_size(self):
        with pytest.raises(ValueError, match="2 scheduling probabilities"):
            packet_failure_prob(SystemConfig(), ps=[1.0, 1.0])
