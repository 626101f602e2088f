import json

import pytest

from eharqsim.stage import ExperimentConfig


class TestExperimentConfig:
    def test_defaults(self, tmp_path):
        experiment = ExperimentConfig(out_dir=tmp_path / "new")

        assert experiment.seed == 0
        assert experiment.out_dir.is_dir()
        assert experiment.section("train") == {}

    def test_from_file(self, tmp_path):
        file_path = tmp_path / "experiment.json"
        file_path.write_text(
            json.dumps({"seed": 5, "generate": {"n": 10, "snr_db": 2.0}})
        )

        experiment = ExperimentConfig.from_file(
            file_path, seed=7, out_dir=tmp_path, n=20, simulate=False
        )

        assert experiment.seed == 7
        assert experiment.section("generate") == {"n": 20, "snr_db": 2.0}
        assert "simulate" not in experiment.section("system")

    def test_flags(self, tmp_path):
        experiment = ExperimentConfig.from_file(
            out_dir=tmp_path, gradcheck=True, simulate=True
        )

        assert experiment.section("train") == {"gradcheck": True}
        assert experiment.section("system") == {"simulate": True}

    def test_section_is_copy(self, tmp_path):
        experiment = ExperimentConfig(out_dir=tmp_path, eval={"name": "a"})
        experiment.section("eval")["name"] = "b"

        assert experiment.section("eval") == {"name": "a"}

    def test_unknown_section(self, tmp_path):
        with pytest.raises(ValueError, match="'plot'"):
            ExperimentConfig(out_dir=tmp_path, plot={})

    def test_not_a_mapping(self, tmp_path):
        with pytest.raises(ValueError, match="'train' is not a mapping"):
            ExperimentConfig(out_dir=tmp_path, train=[1, 2])

    def test_format_version(self, tmp_path):
        with pytest.raises(ValueError, match="format version 2"):
            ExperimentConfig(out_dir=tmp_path, format_version=2)

    def test_unknown_flag(self, tmp_path):
        with pytest.raises(ValueError, match="'slots' does not belong"):
            ExperimentConfig.from_file(out_dir=tmp_path, slots=10)

    def test_unknown_stage(self, tmp_path):
        with pytest.raises(ValueError, match="no configuration section"):
            ExperimentConfig(out_dir=tmp_path).section("plot")

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="cannot be found"):
            ExperimentConfig.from_file(tmp_path / "absent.yaml")

    def test_to_dict(self, tmp_path):
        content = ExperimentConfig(seed=2, out_dir=tmp_path).to_dict()

        assert content["seed"] == 2
        assert content["out_dir"] == str(tmp_path.resolve())
        assert set(content) == {
            "format_version",
            "seed",
            "out_dir",
            "generate",
            "train",
            "eval",
            "system",
        }
