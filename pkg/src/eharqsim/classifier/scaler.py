import logging

import numpy as np
from sklearn.preprocessing import StandardScaler

from eharqsim.utils.parse import quote_iterable

logger = logging.getLogger(__name__)


class FeatureScaler:
    """Standard-scale features with statistics of the training split.

    A feature without variance is only centred.
    """

    def __init__(self, features, mean, scale):
        """Initialise the scaler from its statistics.

        Parameters
        ----------
        features : sequence of str
            the feature names, in column order
        mean : array-like
            the training mean of every feature
        scale : array-like
            the training standard deviation, 1 for constant features

        """
        self.features = tuple(features)
        self.mean = np.asarray(mean, dtype=np.float64)
        self.scale = np.asarray(scale, dtype=np.float64)

        if not (len(self.features) == self.mean.size == self.scale.size):
            msg = "The scaler statistics do not match the feature names."
            raise ValueError(msg)

    def transform(self, x):
        """Scale a matrix of shape (n, d)."""
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 2 or x.shape[1] != self.mean.size:
            msg = (
                f"The features have shape {x.shape}, expected (n, "
                f"{self.mean.size})."
            )
            raise ValueError(msg)
        return (x - self.mean) / self.scale

    def to_dict(self):
        """Return the statistics as a plain mapping."""
        return {
            "features": list(self.features),
            "mean": self.mean.tolist(),
            "scale": self.scale.tolist(),
        }

    @classmethod
    def from_dict(cls, content):
        """Create the scaler from to_dict output."""
        return cls(content["features"], content["mean"], content["scale"])

    def __repr__(self):
        return f"{type(self).__name__}(features={list(self.features)})"


def fit_scaler(train, features=None):
    """Fit a scaler on the training features.

    Parameters
    ----------
    train : pandas.DataFrame or array-like
        the training features, shape (n, d)
    features : sequence of str, optional
        the columns to be used. Default to None, every column of a
        DataFrame, or x0, x1, ... for an array.

    Returns
    -------
    FeatureScaler
        the fitted scaler

    """
    if hasattr(train, "columns"):
        features = list(train.columns) if features is None else features
        x = train[list(features)].to_numpy(dtype=np.float64)
    else:
        x = np.asarray(train, dtype=np.float64)
        if x.ndim != 2:
            msg = "The training features must be two-dimensional."
            raise ValueError(msg)
        if features is None:
            features = [f"x{k}" for k in range(x.shape[1])]

    if x.shape[0] < 2:
        msg = f"At least 2 training rows are needed, got {x.shape[0]}."
        raise ValueError(msg)

    if not np.isfinite(x).all():
        msg = "The training features contain non-finite values."
        raise ValueError(msg)

    sk = StandardScaler().fit(x)

    # sklearn already uses a unit scale for (near) zero variance
    is_constant = (sk.scale_ == 1.0) & (sk.var_ < 0.25)
    constant = [
        f for f, flag in zip(features, is_constant, strict=True) if flag
    ]
    if constant:
        logger.warning(
            f"The feature(s) {quote_iterable(constant)} have no variance in "
            "the training split and are only centred."
        )

    return FeatureScaler(features, sk.mean_, sk.scale_)


def apply_scaler(scaler, features):
    """Scale features with a fitted scaler.

    Parameters
    ----------
    scaler : FeatureScaler
        the scaler
    features : pandas.DataFrame or array-like
        the features, a DataFrame is reduced to the scaler's columns

    Returns
    -------
    numpy.ndarray
        the scaled features

    """
    if hasattr(features, "columns"):
        missing = [f for f in scaler.features if f not in features.columns]
        if missing:
            msg = f"The features lack the column(s) {quote_iterable(missing)}."
            raise ValueError(msg)
        features = features[list(scaler.features)].to_numpy(dtype=np.float64)

    return scaler.transform(features)
