import numpy as np
import pandas as pd
import pytest


@pytest.fixture(scope="package")
def records():
    """Records whose errors grow more likely with the VNR values."""
    rng = np.random.default_rng(7)
    n = 400
    labels = (rng.random(n) < 0.2).astype(np.int64)
    shift = 0.15 * labels
    columns = {"idx": np.arange(n), "label": labels}
    for j in range(6):
        columns[f"vnr_{j}"] = 0.3 - 0.02 * j + shift + 0.05 * rng.random(n)
    columns["eucd"] = 5.0 + rng.normal(size=n)
    return pd.DataFrame(columns)
