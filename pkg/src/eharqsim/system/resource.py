"""Propagation of the resource distribution over time slots.

The number of transmissions demanding service in slot t is the sum of
new arrivals, HARQ retransmissions of the transmissions served T_RTT
slots earlier and the overload left over from slot t - 1. The three
parts are treated as independent and their distributions convolved.
"""

import logging
from collections import deque
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.stats import binom

logger = logging.getLogger(__name__)

TAIL_EPS = 1e-12
WARMUP_SLOTS = 200
DRIFT_WINDOW = 100
MIN_DRIFT = 0.1
MAX_SUPPORT = 4096
SUPPORT_EPS = 1e-9


@dataclass(frozen=True)
class ResourceDistribution:
    """A distribution of the resource demand of a slot.

    Attributes
    ----------
    probs : numpy.ndarray
        the probability of 0, 1, ... transmissions
    t : int or str
        the slot index, or "stationary"
    status : str
        "converged", "diverged" or "max-iter"
    residual : float
        the ℓ¹ change of the last propagation step
    slots : int
        the number of propagated slots
    trajectory : pandas.DataFrame or None
        the mean and ℓ¹ change of every slot

    """

    probs: np.ndarray
    t: object = "stationary"
    status: str = "converged"
    residual: float = 0.0
    slots: int = 0
    trajectory: pd.DataFrame | None = None

    @property
    def converged(self):
        return self.status == "converged"

    @property
    def diverged(self):
        return self.status == "diverged"

    @property
    def mean(self):
        return float(np.arange(self.probs.size) @ self.probs)

    def support_bounds(self, eps=SUPPORT_EPS):
        """Return the smallest and largest demand of non-negligible mass.

        Parameters
        ----------
        eps : float, optional
            the mass neglected at each end. Default to 1e-9.

        Returns
        -------
        n_min, n_max : int
            the bounds

        """
        cdf = np.cumsum(self.probs)
        tail = cdf[-1] - cdf + self.probs
        n_min = int(np.argmax(cdf > eps))
        n_max = int(np.flatnonzero(tail > eps)[-1])
        return n_min, n_max

    def lemma_support_ok(self, n_res, eps=SUPPORT_EPS):
        """Check N_min > N_max - N_res for the moderate-load approximation."""
        n_min, n_max = self.support_bounds(eps)
        return n_min > n_max - n_res

    def require_stationary(self):
        """Refuse analytic use of a diverged distribution."""
        if self.diverged:
            msg = (
                "The resource distribution diverges (mean demand "
                f"{self.mean:.1f} after {self.slots} slots), scheduling "
                "probabilities are undefined."
            )
            raise RuntimeError(msg)

        if self.status == "max-iter":
            logger.warning(
                f"The resource distribution has not converged after "
                f"{self.slots} slots (ℓ¹ change {self.residual:.2e}), the "
                "last slot is used as stationary."
            )


def _probs(distribution):
    probs = getattr(distribution, "probs", distribution)
    return np.asarray(probs, dtype=np.float64)


def _trim(probs, eps=TAIL_EPS):
    tail = np.cumsum(probs[::-1])[::-1]
    keep = np.flatnonzero(tail >= eps)
    n_keep = int(keep[-1]) + 1 if keep.size else 1
    trimmed = probs[:n_keep]
    return trimmed / trimmed.sum()


def _l1_change(a, b):
    size = max(a.size, b.size)
    a = np.pad(a, (0, size - a.size))
    b = np.pad(b, (0, size - b.size))
    return float(np.abs(a - b).sum())


def arrival_distribution(n_ue, p_arrival):
    """Return the binomial distribution of new arrivals in a slot."""
    return binom.pmf(np.arange(n_ue + 1), n_ue, p_arrival)


def thinning_matrix(n_res, p_r):
    """Return B[k, m], the probability of m repeats of k served words."""
    k = np.arange(n_res + 1)
    return binom.pmf(k[None, :], k[:, None], p_r)


def retransmission_load_distribution(prev, config, matrix=None):
    """Return the distribution of retransmissions caused by a slot.

    min(k, N_res) of the k transmissions of the slot are served, and
    each of them is repeated with the probability P_r of the
    configuration. The demand beyond N_res enters through its total mass
    as if exactly N_res were served.

    Parameters
    ----------
    prev : ResourceDistribution or array-like
        the normalised demand distribution of the slot
    config : SystemConfig
        the system
    matrix : numpy.ndarray, optional
        a precomputed thinning_matrix. Default to None.

    Returns
    -------
    numpy.ndarray
        the probability of 0 ... N_res retransmissions

    """
    probs = _probs(prev)
    n_res = config.n_res
    if matrix is None:
        matrix = thinning_matrix(n_res, config.p_r)

    head = np.zeros(n_res + 1)
    n_head = min(probs.size, n_res + 1)
    head[:n_head] = probs[:n_head]
    beyond = max(1.0 - head.sum(), 0.0)

    return head @ matrix + beyond * matrix[n_res]


def overload_distribution(prev, n_res):
    """Return the distribution of demand left over by a slot."""
    probs = _probs(prev)
    overload = np.zeros(max(probs.size - n_res, 1))
    overload[0] = probs[: n_res + 1].sum()
    overload[1:] = probs[n_res + 1 :]
    return overload


def propagate_resource_distribution(
    config, max_slots=10000, tol=1e-10, *, record_trajectory=True
):
    """Propagate the demand distribution from an empty system.

    Before slot 0 there is neither retransmission nor overload. The
    propagation stops when the ℓ¹ change of a slot is below tol, or
    reports divergence when, after a warm-up of 200 slots, the mean
    demand rose in each of the last 100 slots by at least 0.1 in total,
    or when the support exceeds 4096 entries.

    Parameters
    ----------
    config : SystemConfig
        the system
    max_slots : int, optional
        the maximum number of slots. Default to 10000.
    tol : float, optional
        the ℓ¹ change of convergence. Default to 1e-10.
    record_trajectory : bool, optional
        whether to keep the mean and ℓ¹ change of every slot. Default
        to True.

    Returns
    -------
    ResourceDistribution
        the last distribution with its status

    """
    p_a = arrival_distribution(config.n_ue, config.p_arrival)
    matrix = thinning_matrix(config.n_res, config.p_r)
    window = deque(maxlen=config.t_rtt)
    current = np.ones(1)
    means = []
    changes = []
    status = "max-iter"
    change = np.inf

    for t in range(max_slots):
        if len(window) == config.t_rtt:
            p_h = retransmission_load_distribution(window[0], config, matrix)
        else:
            p_h = np.ones(1)

        p_ol = overload_distribution(current, config.n_res)
        new = _trim(np.convolve(np.convolve(p_a, p_h), p_ol))

        change = _l1_change(new, current)
        current = new
        window.append(current)
        means.append(float(np.arange(current.size) @ current))
        changes.append(change)

        if change < tol:
            status = "converged"
            break

        if current.size > MAX_SUPPORT or _drifting(means, t):
            status = "diverged"
            logger.debug(
                f"The resource distribution diverges at slot {t}, mean "
                f"demand {means[-1]:.2f}."
            )
            break

    trajectory = None
    if record_trajectory:
        trajectory = pd.DataFrame(
            {
                "slot": np.arange(len(means)),
                "mean": means,
                "l1_change": changes,
            }
        )

    return ResourceDistribution(
        probs=current,
        t="stationary" if status == "converged" else len(means) - 1,
        status=status,
        residual=change,
        slots=len(means),
        trajectory=trajectory,
    )


def _drifting(means, t):
    if t + 1 < WARMUP_SLOTS + DRIFT_WINDOW:
        return False

    recent = np.asarray(means[-(DRIFT_WINDOW + 1) :])
    return bool(
        (np.diff(recent) > 0).all() and recent[-1] - recent[0] >= MIN_DRIFT
    )


def conditional_resource_distribution(n_prev, config, *, approximate=False):
    """Return the demand distribution given the demand of the last slot.

    Of n_prev transmissions min(n_prev, N_res) are served and may be
    repeated, the rest is carried over. The approximation for moderate
    load treats any n_prev above N_res as N_res, without carry-over.

    Parameters
    ----------
    n_prev : int
        the demand of the previous slot
    config : SystemConfig
        the system, with T_RTT read as one slot
    approximate : bool, optional
        whether to use the moderate-load approximation. Default to
        False.

    Returns
    -------
    numpy.ndarray
        the conditional distribution

    """
    n_prev = int(n_prev)
    if n_prev < 0:
        msg = f"The previous demand cannot be negative ({n_prev})."
        raise ValueError(msg)

    served = min(n_prev, config.n_res)
    carried = 0 if approximate else max(n_prev - config.n_res, 0)

    p_a = arrival_distribution(config.n_ue, config.p_arrival)
    p_h = binom.pmf(np.arange(served + 1), served, config.p_r)
    return np.concatenate([np.zeros(carried), np.convolve(p_a, p_h)])
