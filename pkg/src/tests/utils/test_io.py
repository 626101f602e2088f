import numpy as np
import pandas as pd
import pytest

from eharqsim.utils.io import (
    read_mapping,
    read_table,
    write_json,
    write_table,
)


class TestTable:
    def test_float_precision(self, tmp_path):
        frame = pd.DataFrame({"x": [0.1 + 0.2, 1 / 3], "n": [1, 2]})
        out_file = write_table(frame, tmp_path / "sub" / "table.csv")
        read = read_table(out_file)

        assert read["x"].tolist() == frame["x"].tolist()
        assert read["n"].tolist() == [1, 2]

    def test_missing_as_empty_field(self, tmp_path):
        frame = pd.DataFrame({"x": [1.0, np.nan], "n": [1, 2]})
        out_file = write_table(frame, tmp_path / "table.csv")

        assert out_file.read_text() == "x,n\n1,1\n,2\n"
        assert np.isnan(read_table(out_file)["x"].iloc[1])

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="does not exist"):
            read_table(tmp_path / "absent.csv")


class TestMapping:
    def test_json_sorted(self, tmp_path):
        out_file = write_json({"b": 1, "a": [1, 2]}, tmp_path / "a.json")

        text = out_file.read_text()

        assert text.index('"a"') < text.index('"b"')
        assert read_mapping(out_file) == {"a": [1, 2], "b": 1}

    def test_yaml(self, tmp_path):
        config = tmp_path / "config.yaml"
        config.write_text("seed: 7\ngenerate:\n  n: 100\n")

        assert read_mapping(config) == {"seed": 7, "generate": {"n": 100}}

    def test_empty_file(self, tmp_path):
        config = tmp_path / "empty.yaml"
        config.write_text("")

        assert read_mapping(config) == {}

    def test_not_a_mapping(self, tmp_path):
        config = tmp_path / "list.yaml"
        config.write_text("- 1\n- 2\n")

        with pytest.raises(ValueError, match="does not hold a mapping"):
            read_mapping(config)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError, match="absent.yaml"):
            read_mapping(tmp_path / "absent.yaml")
