"""Probabilities of serving the transmissions of a packet in time.

A random scheduler serves N_res of the k pending transmissions of a
slot, so a given one is served with probability min(1, N_res/(k+1))
when k others compete with it.
"""

import logging
from dataclasses import dataclass

import numpy as np

from eharqsim.system.resource import conditional_resource_distribution

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SchedulingProbs:
    """Scheduling probabilities of a system.

    Attributes
    ----------
    p1 : numpy.ndarray
        P₁(Δt) for Δt = 0 ... T_c - 1, the probability that a
        transmission pending since Δt slots is served now
    ps : numpy.ndarray
        P_S,j = P(T_j ≤ T_c) for j = 0 ... n

    """

    p1: np.ndarray
    ps: np.ndarray


def _service_prob(n_res, size):
    k = np.arange(size)
    return np.minimum(1.0, n_res / (k + 1))


def scheduling_p1(stationary, config, dt):
    """Compute the probability of being served after dt slots of waiting.

    The first slot is drawn from the stationary demand. Every further
    slot is approximated by the demand after a fully loaded slot, which
    is valid for moderate load.

    Parameters
    ----------
    stationary : ResourceDistribution
        the stationary demand, not diverged
    config : SystemConfig
        the system
    dt : int
        the waiting time in slots

    Returns
    -------
    float
        P₁(dt)

    """
    dt = int(dt)
    if dt < 0:
        msg = f"The waiting time cannot be negative ({dt})."
        raise ValueError(msg)

    stationary.require_stationary()
    return float(_p1_values(stationary, config, dt + 1)[dt])


def _p1_values(stationary, config, size):
    n_res = config.n_res
    res = stationary.probs
    serve = _service_prob(n_res, res.size)
    immediate = float(res @ serve)
    if size == 1:
        return np.array([immediate])

    # waiting after the first slot needs k >= N_res
    full = np.arange(res.size) >= n_res
    first = float(res[full] @ (1 - serve[full]))

    cond = conditional_resource_distribution(n_res, config)
    serve_c = _service_prob(n_res, cond.size)
    full_c = np.arange(cond.size) >= n_res
    stay = float(cond[full_c] @ (1 - serve_c[full_c]))
    leave = float(cond @ serve_c)

    later = first * stay ** np.arange(size - 1) * leave
    return np.concatenate([[immediate], later])


def schedule_within_constraint(config, p1):
    """Compute P(T_j ≤ T_c) for every stage j = 0 ... n.

    Stage j is served at offset k_j ≤ T_c - 1 from the arrival, with
    k_j ≥ k_{j-1} + T_RTT. The sum over all admissible offset tuples of
    Π P₁(k_i - k_{i-1} - T_RTT) is evaluated by a forward recursion.

    Parameters
    ----------
    config : SystemConfig
        the system
    p1 : ResourceDistribution or callable
        the stationary demand, or P₁ as a function of the waiting time

    Returns
    -------
    SchedulingProbs
        P₁ over the window and P_S,0 ... P_S,n

    """
    t_c = config.t_c
    if callable(p1):
        p1_values = np.array([float(p1(dt)) for dt in range(t_c)])
    else:
        p1.require_stationary()
        if not p1.lemma_support_ok(config.n_res):
            logger.debug(
                "The demand support is wider than N_res, the moderate "
                "load approximation of P₁ is coarse."
            )
        p1_values = _p1_values(p1, config, t_c)

    # f[k] is the probability that the current stage is served at k
    f = p1_values.copy()
    ps = [f.sum()]
    for _ in range(config.n_retx):
        g = np.zeros(t_c)
        for k in np.flatnonzero(f):
            start = k + config.t_rtt
            if start < t_c:
                g[start:] += f[k] * p1_values[: t_c - start]
        f = g
        ps.append(f.sum())

    return SchedulingProbs(p1=p1_values, ps=np.clip(ps, 0.0, 1.0))
