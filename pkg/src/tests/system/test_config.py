import pytest

from eharqsim.system import SystemConfig


class TestSystemConfig:
    @pytest.mark.parametrize(
        ("t_c", "t_rtt", "n_retx"),
        [(3, 1, 2), (3, 2, 1), (11, 5, 2), (4, 1, 3)],
    )
    def test_default_budget(self, t_c, t_rtt, n_retx):
        assert SystemConfig(t_c=t_c, t_rtt=t_rtt).n_retx == n_retx

    def test_repeat_probability(self):
        config = SystemConfig(p_e=0.01, fnr=0.1, fpr=0.02)

        assert config.p_r == pytest.approx(0.9 * 0.01 + 0.02 * 0.99)

    def test_replace_resets_default_budget(self):
        config = SystemConfig(t_c=3, t_rtt=1).replace(t_rtt=2)

        assert config.n_retx == 1

    def test_replace_keeps_given_budget(self):
        config = SystemConfig(t_c=3, t_rtt=1, n_retx=1).replace(p_e=0.1)

        assert config.n_retx == 1
        assert config.p_e == 0.1

    def test_key(self):
        assert SystemConfig().key() == SystemConfig().key()
        assert SystemConfig().key() != SystemConfig(fnr=0.1).key()

    def test_invalid(self):
        with pytest.raises(ValueError, match="'n_res' must be positive"):
            SystemConfig(n_res=0)

        with pytest.raises(ValueError, match="'p_arrival'"):
            SystemConfig(p_arrival=1.2)
