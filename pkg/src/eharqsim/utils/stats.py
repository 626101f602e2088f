import numpy as np
from scipy.stats import norm


def z_value(confidence=0.95):
    """Return the two-sided normal quantile of a confidence level."""
    if not 0 < confidence < 1:
        msg = f"The confidence level must be in (0, 1) ({confidence})."
        raise ValueError(msg)
    return float(norm.ppf(0.5 + confidence / 2))


def wilson_interval(successes, trials, confidence=0.95):
    """Compute the Wilson score interval of a binomial proportion.

    Parameters
    ----------
    successes : int or array-like
        the number of events
    trials : int or array-like
        the number of trials, zero trials give the interval (0, 1)
    confidence : float, optional
        the confidence level. Default to 0.95.

    Returns
    -------
    lo, hi : float or numpy.ndarray
        the bounds of the interval

    """
    z = z_value(confidence)
    k = np.asarray(successes, dtype=np.float64)
    n = np.asarray(trials, dtype=np.float64)

    with np.errstate(divide="ignore", invalid="ignore"):
        p = np.where(n > 0, k / n, 0.0)
        denom = 1 + z**2 / n
        centre = (p + z**2 / (2 * n)) / denom
        half = z * np.sqrt(p * (1 - p) / n + z**2 / (4 * n**2)) / denom
        lo = np.where(n > 0, np.clip(centre - half, 0, 1), 0.0)
        hi = np.where(n > 0, np.clip(centre + half, 0, 1), 1.0)

    if lo.ndim == 0:
        return float(lo), float(hi)
    return lo, hi


def mean_interval(samples, confidence=0.95):
    """Compute a normal-approximation interval of a sample mean.

    Returns
    -------
    mean, lo, hi : float
        the sample mean and the bounds of its interval

    """
    samples = np.asarray(samples, dtype=np.float64)
    mean = float(samples.mean())
    if samples.size < 2:
        return mean, mean, mean

    half = z_value(confidence) * samples.std(ddof=1) / np.sqrt(samples.size)
    return mean, mean - float(half), mean + float(half)
