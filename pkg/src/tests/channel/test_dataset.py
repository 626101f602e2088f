import pytest

from eharqsim.channel import (
    ChannelConfig,
    GenerationConfig,
    calibrate_snr,
    estimate_bler,
    generate_dataset,
    load_code,
)
from eharqsim.channel.dataset import summary_path
from eharqsim.ldpc import regular_code, write_alist
from eharqsim.utils.io import read_mapping


@pytest.fixture(scope="module")
def small_code():
    return regular_code(n_vars=48, seed=4)


def _config(code, snr_db, n_records=60, seed=3, fading=None):
    channel = ChannelConfig(snr_db, fading=fading, seed=seed)
    return GenerationConfig(channel, code=code, n_records=n_records)


class TestLoadCode:
    def test_default(self):
        h = load_code()

        assert h.n_vars == 360
        assert h.n_checks == 180

    def test_alist_file(self, tmp_path, small_code):
        alist_file = tmp_path / "small.alist"
        write_alist(small_code, alist_file)

        assert load_code(alist_file) == small_code
        assert load_code(str(alist_file)) == small_code

    def test_matrix(self, small_code):
        assert load_code(small_code) is small_code

    def test_unknown_source(self):
        with pytest.raises(ValueError, match="Cannot make a code"):
            load_code(42)


class TestGenerationConfig:
    def test_vnr_columns(self, small_code):
        cfg = _config(small_code, 3.0)

        assert cfg.vnr_columns == [f"vnr_{j}" for j in range(6)]

    def test_traced_beyond_decoding(self, small_code):
        channel = ChannelConfig(3.0)

        with pytest.raises(ValueError, match="exceed the decoding"):
            GenerationConfig(
                channel, code=small_code, vnr_iters=10, full_decode_iters=5
            )

    def test_seed_from_channel(self, small_code):
        assert _config(small_code, 3.0, seed=9).seed == 9


class TestGenerateDataset:
    def test_noiseless(self, small_code):
        records, summary = generate_dataset(
            _config(small_code, 50.0), parallel=False
        )

        assert (records["label"] == 0).all()
        assert summary["bler"] == 0

    def test_pure_noise(self, small_code):
        _, summary = generate_dataset(
            _config(small_code, -50.0), parallel=False
        )

        assert summary["bler"] > 0.95

    def test_layout(self, tmp_path, small_code):
        out_file = tmp_path / "train.csv"
        records, summary = generate_dataset(
            _config(small_code, 2.0), out_file, parallel=False
        )
        header = out_file.read_text().splitlines()[0]

        assert header == (
            "idx,label,vnr_0,vnr_1,vnr_2,vnr_3,vnr_4,vnr_5,eucd,gain"
        )
        assert records["idx"].tolist() == list(range(60))
        assert read_mapping(summary_path(out_file))["n_records"] == 60
        lo, hi = summary["bler_ci_lo"], summary["bler_ci_hi"]
        assert lo <= summary["bler"] <= hi

    def test_reproducible(self, tmp_path, small_code):
        cfg = _config(small_code, 1.0, fading=0.99)
        generate_dataset(cfg, tmp_path / "a.csv", parallel=False)
        generate_dataset(cfg, tmp_path / "b.csv", parallel=False)

        assert (tmp_path / "a.csv").read_bytes() == (
            tmp_path / "b.csv"
        ).read_bytes()

    def test_parallel_matches_serial(self, small_code):
        cfg = _config(small_code, 1.0, n_records=24)
        serial, _ = generate_dataset(cfg, parallel=False)
        parallel, _ = generate_dataset(cfg, parallel=True)

        assert serial.equals(parallel)

    def test_vnr_bounds(self, small_code):
        records, _ = generate_dataset(_config(small_code, 0.0), parallel=False)
        vnr = records[[f"vnr_{j}" for j in range(6)]].to_numpy()

        assert ((vnr > 0) & (vnr <= 1)).all()


class TestEstimateBler:
    def test_monotone_in_snr(self, small_code):
        errors = [
            estimate_bler(small_code, ChannelConfig(snr), 200, seed=1)[0]
            for snr in (-4.0, 0.0, 4.0, 8.0)
        ]

        assert errors == sorted(errors, reverse=True)
        assert errors[0] > errors[-1]


class TestCalibrateSnr:
    def test_insufficient_trials(self, small_code):
        with pytest.raises(RuntimeError, match="Insufficient trials"):
            calibrate_snr(small_code, 1e-9, max_trials=100_000)

    def test_not_bracketing(self, small_code):
        with pytest.raises(ValueError, match="does not bracket"):
            calibrate_snr(
                small_code,
                0.1,
                snr_range=(30.0, 40.0),
                max_trials=1000,
                min_errors=20,
            )

    def test_target_out_of_range(self, small_code):
        with pytest.raises(ValueError, match=r"\(0, 0.5\]"):
            calibrate_snr(small_code, 0.7)

    def test_ordering(self, small_code):
        kwargs = {"max_trials": 2000, "min_errors": 20, "tolerance": 0.1}
        high = calibrate_snr(small_code, 0.2, **kwargs)
        low = calibrate_snr(small_code, 0.02, **kwargs)

        assert high < low

