import numpy as np

HARD_THRESHOLD_FEATURES = {"HT0": "vnr_0", "HT5": "vnr_5"}


def hard_threshold_score(records, which="HT5"):
    """Score records with a raw VNR value.

    A larger VNR means a less reliable word, so the score orders records
    by their likelihood of a block error.

    Parameters
    ----------
    records : pandas.DataFrame or mapping
        the records, or a single record
    which : str, optional
        "HT0" for VNR_0 or "HT5" for VNR_5. Default to "HT5".

    Returns
    -------
    numpy.ndarray or float
        the scores, a float for a single record

    """
    try:
        feature = HARD_THRESHOLD_FEATURES[which.upper()]
    except KeyError:
        msg = f"The hard threshold '{which}' is not supported."
        raise ValueError(msg) from None

    try:
        values = records[feature]
    except KeyError:
        msg = f"The record has no feature '{feature}' needed by {which}."
        raise ValueError(msg) from None

    if np.ndim(values) == 0:
        return float(values)
    return np.asarray(values, dtype=np.float64)
