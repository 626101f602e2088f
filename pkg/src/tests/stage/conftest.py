import numpy as np
import pandas as pd
import pytest
import yaml

from eharqsim.ldpc import regular_code, write_alist
from eharqsim.stage import ExperimentConfig
from eharqsim.utils.io import write_table


@pytest.fixture
def config_file(tmp_path):
    """A configuration for a fast run on a short code."""
    code_file = tmp_path / "small.alist"
    write_alist(regular_code(n_vars=48, seed=4), code_file)
    content = {
        "seed": 3,
        "generate": {
            "code": str(code_file),
            "snr_db": 1.5,
            "n": 200,
            "parallel": False,
        },
        "system": {
            "scenarios": ["medium-long"],
            "max_points": 12,
            "parallel": False,
            "trajectories": False,
        },
    }
    file_path = tmp_path / "experiment.yaml"
    file_path.write_text(yaml.safe_dump(content))
    return file_path


@pytest.fixture
def experiment(tmp_path):
    return ExperimentConfig(seed=1, out_dir=tmp_path / "out")


@pytest.fixture
def separable(tmp_path):
    """Records whose label is 1 exactly when VNR_5 exceeds 0.2."""
    rng = np.random.default_rng(8)
    n = 300
    columns = {"idx": np.arange(n)}
    for j in range(6):
        columns[f"vnr_{j}"] = rng.uniform(0.05, 0.35, n)
    columns["label"] = (columns["vnr_5"] > 0.2).astype(np.int64)
    columns["eucd"] = rng.uniform(3, 6, n)
    columns["gain"] = np.ones(n)
    return write_table(pd.DataFrame(columns), tmp_path / "separable.csv")
