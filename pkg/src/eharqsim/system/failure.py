import logging

import numpy as np

from eharqsim.system.resource import propagate_resource_distribution
from eharqsim.system.scheduling import schedule_within_constraint

logger = logging.getLogger(__name__)


def packet_failure_prob(config, ps=None, stationary=None):
    """Compute the probability that a packet is not delivered in time.

    The packet fails if its initial transmission is not served in time,
    probability 1 - P_S,0, or if it errs and no later stage recovers it:
    P_pf = (1 - P_S,0) + P_S,0·P_e·P_H,1 with
    P_H,j = P_fn + (1 - P_fn)·[(1 - r_j) + r_j·P_e·P_H,j+1],
    r_j = P_S,j/P_S,j-1 and P_H,j = 1 for j > n.

    Parameters
    ----------
    config : SystemConfig
        the system and its operating point
    ps : array-like, optional
        P_S,0 ... P_S,n. Default to None, computed from the stationary
        demand.
    stationary : ResourceDistribution, optional
        the stationary demand. Default to None, propagated from config.

    Returns
    -------
    float
        P_pf

    """
    if ps is None:
        if stationary is None:
            stationary = propagate_resource_distribution(
                config, record_trajectory=False
            )
        ps = schedule_within_constraint(config, stationary).ps

    ps = np.asarray(ps, dtype=np.float64)
    if ps.size != config.n_retx + 1:
        msg = (
            f"{ps.size} scheduling probabilities are given for "
            f"{config.n_retx} retransmissions."
        )
        raise ValueError(msg)

    if ps[0] == 0:
        return 1.0

    p_fn = config.fnr
    p_e = config.p_e
    p_h = 1.0
    for j in range(config.n_retx, 0, -1):
        if ps[j - 1] == 0:
            # P_S,j <= P_S,j-1 leaves nothing to schedule
            assert ps[j] == 0, "scheduling probabilities must not increase"
            ratio = 0.0
        else:
            ratio = ps[j] / ps[j - 1]
        p_h = p_fn + (1 - p_fn) * ((1 - ratio) + ratio * (p_e * p_h))

    return float((1 - ps[0]) + ps[0] * (p_e * p_h))
