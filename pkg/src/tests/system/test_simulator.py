import numpy as np
import pytest

from eharqsim.system import SystemConfig, simulate_system


@pytest.fixture
def ample():
    """A system that never runs short of resources."""
    return SystemConfig(n_ue=4, p_arrival=0.5, n_res=16, t_c=3, t_rtt=1)


class TestSimulateSystem:
    def test_no_errors(self, ample):
        result = simulate_system(ample.replace(p_e=0.0), 2000, seed=1)

        assert result.failures == 0
        assert result.redundant == 0
        assert result.packets > 0

    def test_infinite_resources(self, ample):
        config = ample.replace(p_e=0.2)
        result = simulate_system(config, 20_000, seed=2)

        p = 0.2**3
        sigma = np.sqrt(p * (1 - p) / result.packets)
        assert abs(result.p_pf - p) < 4 * sigma
        assert result.deadline_drops == 0
        assert result.initial_delays.tolist() == [result.packets, 0, 0]

    def test_false_positives(self, ample):
        result = simulate_system(ample.replace(fpr=0.5), 2000, seed=3)

        assert result.redundant > 0
        assert result.failures == 0

    def test_always_ack(self, ample):
        config = ample.replace(p_e=0.3, fnr=1.0)
        result = simulate_system(config, 5000, seed=4)

        sigma = np.sqrt(0.3 * 0.7 / result.packets)
        assert abs(result.p_pf - 0.3) < 4 * sigma

    def test_overload_drops(self):
        config = SystemConfig(n_ue=20, p_arrival=0.9, n_res=5, t_c=2)
        result = simulate_system(config, 500, seed=5)

        assert result.deadline_drops > 0
        assert result.failures >= result.deadline_drops

    def test_reproducible(self, ample):
        config = ample.replace(p_e=0.2)
        first = simulate_system(config, 1000, seed=6)
        second = simulate_system(config, 1000, seed=6)

        assert first.to_dict() == second.to_dict()

    def test_replications(self, ample):
        config = ample.replace(p_e=0.2)
        serial = simulate_system(config, 500, seed=7, replications=3)
        parallel = simulate_system(
            config, 500, seed=7, replications=3, parallel=True
        )

        assert serial.slots == 1500
        assert serial.to_dict() == parallel.to_dict()

    def test_slots(self, ample):
        with pytest.raises(ValueError, match="at least one slot"):
            simulate_system(ample, 0)
