import numpy as np
import pytest

from eharqsim.utils.stats import mean_interval, wilson_interval, z_value


class TestZValue:
    def test_95(self):
        assert z_value(0.95) == pytest.approx(1.959964, abs=1e-6)

    def test_invalid(self):
        with pytest.raises(ValueError, match="confidence level"):
            z_value(1.0)


class TestWilsonInterval:
    def test_contains_estimate(self):
        lo, hi = wilson_interval(30, 1000)

        assert lo < 0.03 < hi

    def test_no_event(self):
        lo, hi = wilson_interval(0, 100)

        assert lo == pytest.approx(0, abs=1e-12)
        assert 0 < hi < 0.05

    def test_no_trial(self):
        assert wilson_interval(0, 0) == (0.0, 1.0)

    def test_vectorised(self):
        lo, hi = wilson_interval([1, 5], [10, 10])

        assert lo.shape == (2,)
        assert (lo < hi).all()


class TestMeanInterval:
    def test_symmetric(self):
        mean, lo, hi = mean_interval(np.arange(10))

        assert mean == 4.5
        assert mean - lo == pytest.approx(hi - mean)

    def test_single_sample(self):
        assert mean_interval([2.0]) == (2.0, 2.0, 2.0)
