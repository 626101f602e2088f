"""Input features of decodability prediction.

This module provides:
- ber_estimate: the mean bit unreliability of a vector of LLRs.
- vnr_sequence: the unreliability after every traced iteration.
- euclidean_distance: distance between received and reference symbols.
- history_features: means of features over strictly past records.
- with_history: add the history columns a feature list asks for.
"""

import numpy as np
import pandas as pd

from eharqsim.utils.parse import as_finite_vector

HISTORY_WINDOWS = (1, 2, 5, 9)


def ber_estimate(llrs):
    """Estimate the bit error rate from LLRs.

    Parameters
    ----------
    llrs : array-like
        the LLRs of a received word

    Returns
    -------
    float
        the mean of 1/(1+|L|), in (0, 1]

    """
    llrs = as_finite_vector(llrs, label="LLR vector")
    if llrs.size == 0:
        msg = "The LLR vector is empty."
        raise ValueError(msg)

    return float(np.mean(1.0 / (1.0 + np.abs(llrs))))


def vnr_sequence(trace):
    """Compute the variable node unreliability of every traced iteration.

    Parameters
    ----------
    trace : DecoderTrace or array-like
        the decoder trace, or its app_llrs of shape (J+1, M)

    Returns
    -------
    numpy.ndarray
        VNR_0 ... VNR_J

    """
    app = np.asarray(getattr(trace, "app_llrs", trace), dtype=np.float64)
    if app.ndim != 2 or app.shape[0] == 0 or app.shape[1] == 0:
        msg = "The decoder trace holds no LLR vector."
        raise ValueError(msg)

    return np.mean(1.0 / (1.0 + np.abs(app)), axis=1)


def euclidean_distance(rx_symbols, ref_symbols):
    """Return the Euclidean distance between two symbol vectors."""
    rx = np.asarray(rx_symbols)
    ref = np.asarray(ref_symbols)
    if rx.shape != ref.shape:
        msg = (
            f"The symbol vectors differ in length ({rx.size} and "
            f"{ref.size})."
        )
        raise ValueError(msg)

    return float(np.linalg.norm(rx - ref))


def history_column(window, column):
    """Name the history column of a base column, e.g. h2_vnr5."""
    return f"h{window}_{column.replace('_', '')}"


def history_features(records, base_columns, windows=HISTORY_WINDOWS):
    """Append the means of features over strictly past records.

    Records are taken in their row order. The history of record t over
    window w is the mean of records t-w ... t-1, and it is missing (NaN)
    for t < w.

    Parameters
    ----------
    records : pandas.DataFrame
        the records in temporal order
    base_columns : sequence of str
        the feature columns to be averaged
    windows : iterable of int, optional
        the window lengths. Default to (1, 2, 5, 9).

    Returns
    -------
    pandas.DataFrame
        a copy of records with columns h{w}_{feature} appended

    """
    missing = [c for c in base_columns if c not in records.columns]
    if missing:
        msg = f"The records have no column {missing[0]}."
        raise ValueError(msg)

    past = records[list(base_columns)].shift(1)
    history = {}
    for w in windows:
        if int(w) < 1:
            msg = f"A history window must be positive ({w})."
            raise ValueError(msg)

        means = past.rolling(int(w), min_periods=int(w)).mean()
        for column in base_columns:
            history[history_column(w, column)] = means[column]

    return pd.concat(
        [records, pd.DataFrame(history, index=records.index)], axis=1
    )


def history_feature_names(base_columns, windows=HISTORY_WINDOWS):
    """Return the names of the history columns, in generation order."""
    return [history_column(w, c) for w in windows for c in base_columns]


def with_history(records, features, windows=HISTORY_WINDOWS):
    """Append the history columns among features that records lack.

    The history is taken over the VNR columns and eucd. Records are
    returned unchanged when nothing is missing or when a missing
    feature is not a history column.
    """
    missing = {f for f in features if f not in records.columns}
    if not missing:
        return records

    base = [
        c for c in records.columns if c.startswith("vnr_") or c == "eucd"
    ]
    if not missing <= set(history_feature_names(base, windows)):
        return records

    return history_features(records, base, windows)
