"""Infinite-resource E-HARQ model and its Monte Carlo oracle.

Every transmission stage j = 0 ... n errs with a probability that may
depend on the errors of the previous stages. A predicted NACK triggers
the next stage while the retransmission budget lasts. The packet is lost
if no stage decodes it, that is if an error is met with an ACK (false
negative) or the last stage errs.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool

import numpy as np
import pandas as pd

from eharqsim.utils.model import PositiveNumber, Probability
from eharqsim.utils.resource import num_workers
from eharqsim.utils.rng import Purpose, substream
from eharqsim.utils.stats import mean_interval, wilson_interval

logger = logging.getLogger(__name__)

MC_BLOCK_SIZE = 100_000
SWEEP_COLUMNS = ("fnr", "fpr", "p_eff", "exp_retx")


class HarqParams:
    """Hold the probabilities of the E-HARQ decision tree."""

    p_e = Probability()
    p_fn = Probability()
    p_fp = Probability()
    p_cond = Probability()
    n = PositiveNumber(int)

    def __init__(
        self, p_e, p_fn=0.0, p_fp=0.0, p_cond=None, n=1, error_prob=None
    ):
        """Initialise the parameters.

        Parameters
        ----------
        p_e : float
            the block error probability of the initial transmission
        p_fn : float, optional
            the false negative rate of the predictor. Default to 0.
        p_fp : float, optional
            the false positive rate of the predictor. Default to 0.
        p_cond : float, optional
            the error probability of a retransmission after errors in
            all previous stages. Default to None, the same as p_e
            (independent retransmissions).
        n : int, optional
            the retransmission budget. Default to 1.
        error_prob : callable, optional
            error_prob(j, history) -> probability of an error in stage j
            given the error flags of stages 0 ... j-1. Default to None,
            p_e for the initial transmission, p_cond after errors only,
            and p_e otherwise.

        """
        self.p_e = p_e
        self.p_fn = p_fn
        self.p_fp = p_fp
        self.p_cond = p_e if p_cond is None else p_cond
        self.n = n
        self._error_prob = error_prob

    def error_prob(self, stage, history=()):
        """Return the error probability of a stage given its history."""
        if self._error_prob is not None:
            return float(self._error_prob(stage, tuple(history)))

        if stage == 0:
            return self.p_e
        if all(history):
            return self.p_cond
        return self.p_e

    @property
    def independent(self):
        """Whether every stage errs with p_e regardless of history."""
        return self._error_prob is None and self.p_cond == self.p_e

    def replace(self, **changes):
        """Return a copy with some parameters changed."""
        content = {
            "p_e": self.p_e,
            "p_fn": self.p_fn,
            "p_fp": self.p_fp,
            "p_cond": self.p_cond,
            "n": self.n,
            "error_prob": self._error_prob,
        }
        content.update(changes)
        if "p_e" in changes and "p_cond" not in changes and self.independent:
            content["p_cond"] = None
        return type(self)(**content)

    def to_dict(self):
        """Return the parameters as a plain mapping."""
        return {
            "p_e": self.p_e,
            "p_fn": self.p_fn,
            "p_fp": self.p_fp,
            "p_cond": self.p_cond,
            "n": self.n,
        }

    def __repr__(self):
        args = ", ".join(f"{k}={v!r}" for k, v in self.to_dict().items())
        return f"{type(self).__name__}({args})"


def effective_bler(params):
    """Compute the residual block error probability after n stages.

    The probability is P_e·P_H,1 with
    P_H,j = P_fn + (1 − P_fn)·P_j·P_H,j+1 and P_H,j = 1 for j > n, where
    P_j is the error probability of stage j after errors in all earlier
    stages.

    Parameters
    ----------
    params : HarqParams
        the parameters

    Returns
    -------
    float
        the effective block error probability

    """
    p_h = 1.0
    for stage in range(params.n, 0, -1):
        p_j = params.error_prob(stage, (1,) * stage)
        p_h = params.p_fn + (1 - params.p_fn) * (p_j * p_h)

    return params.error_prob(0) * p_h


def retransmission_prob(params, k):
    """Compute the probability of a k-th retransmission.

    A retransmission follows an error with a correct NACK, probability
    1 − P_fn, or a success with a false positive, probability P_fp. For
    independent stages the probability is
    (P_e·(1 − P_fn) + (1 − P_e)·P_fp)^k, otherwise it is summed over
    every sequence of error flags of the k preceding stages.

    Parameters
    ----------
    params : HarqParams
        the parameters
    k : int
        the retransmission count, at least 1. A count beyond the budget
        is evaluated as if the budget were unlimited.

    Returns
    -------
    float
        the probability

    """
    k = int(k)
    if k < 1:
        msg = f"The retransmission count must be at least 1 ({k})."
        raise ValueError(msg)

    if k > params.n:
        logger.warning(
            f"The retransmission count {k} exceeds the budget "
            f"{params.n}, the budget is ignored for this probability."
        )

    if params.independent:
        q = params.p_e * (1 - params.p_fn) + (1 - params.p_e) * params.p_fp
        return q**k

    return _retransmission_prob_sum(params, k)


def _retransmission_prob_sum(params, k):
    total = 0.0
    for flags in itertools.product((0, 1), repeat=k):
        prob = 1.0
        for stage, err in enumerate(flags):
            p_err = params.error_prob(stage, flags[:stage])
            if err:
                prob *= p_err * (1 - params.p_fn)
            else:
                prob *= (1 - p_err) * params.p_fp
            if prob == 0:
                break
        total += prob
    return total


def expected_retransmissions(params):
    """Compute Σ i·P_r,i over i = 1 ... n."""
    return sum(
        i * retransmission_prob(params, i) for i in range(1, params.n + 1)
    )


@dataclass(frozen=True)
class MonteCarloResult:
    """Estimates of the Monte Carlo oracle with their intervals."""

    trials: int
    failures: int
    p_hat: float
    p_ci: tuple
    retrans_hat: float
    retrans_ci: tuple
    mean_retx: float

    def to_dict(self):
        return {
            "trials": self.trials,
            "failures": self.failures,
            "p_hat": self.p_hat,
            "p_ci_lo": self.p_ci[0],
            "p_ci_hi": self.p_ci[1],
            "retrans_hat": self.retrans_hat,
            "retrans_ci_lo": self.retrans_ci[0],
            "retrans_ci_hi": self.retrans_ci[1],
            "mean_retx": self.mean_retx,
        }


def _simulate_block(block, params, seed, size):
    rng = substream(seed, Purpose.HARQ, block)
    alive = np.ones(size, dtype=bool)
    decoded = np.zeros(size, dtype=bool)
    history = np.zeros(size, dtype=np.int64)
    retx = np.zeros(size, dtype=np.int64)

    for stage in range(params.n + 1):
        # draws for every trial keep the stream layout fixed
        u_err, u_fb = rng.random((2, size))

        p_err = np.zeros(size)
        for code in np.unique(history[alive]):
            flags = tuple((int(code) >> j) & 1 for j in range(stage))
            p_err[alive & (history == code)] = params.error_prob(stage, flags)

        err = alive & (u_err < p_err)
        decoded |= alive & ~err
        history |= err.astype(np.int64) << stage

        nack = np.where(err, u_fb >= params.p_fn, u_fb < params.p_fp)
        alive &= nack
        if stage < params.n:
            retx += alive
        else:
            alive[:] = False

    return int(np.count_nonzero(~decoded)), retx


def monte_carlo_harq(params, trials, seed=0, *, parallel=False):
    """Simulate the E-HARQ decision tree.

    Trials run in blocks, each on its own substream, so the estimates do
    not depend on the number of workers.

    Parameters
    ----------
    params : HarqParams
        the parameters, error_prob must be picklable for parallel runs
    trials : int
        the number of packets
    seed : int, optional
        the global seed. Default to 0.
    parallel : bool, optional
        whether to use a pool of workers. Default to False.

    Returns
    -------
    MonteCarloResult
        the failure probability estimate p_hat and the estimate
        retrans_hat of Σ i·P_r,i, the mean of r(r+1)/2 for r
        retransmissions of a packet

    """
    trials = int(trials)
    if trials < 1:
        msg = f"At least one trial is needed ({trials})."
        raise ValueError(msg)

    sizes = [
        min(MC_BLOCK_SIZE, trials - start)
        for start in range(0, trials, MC_BLOCK_SIZE)
    ]
    tasks = list(enumerate(sizes))

    worker = partial(_simulate_task, params=params, seed=seed)
    if parallel and len(tasks) > 1:
        with Pool(processes=num_workers()) as pool:
            parts = list(pool.imap(worker, tasks))
    else:
        parts = [worker(task) for task in tasks]

    failures = sum(p[0] for p in parts)
    retx = np.concatenate([p[1] for p in parts])
    weighted = retx * (retx + 1) / 2

    retrans_hat, lo, hi = mean_interval(weighted)
    return MonteCarloResult(
        trials=trials,
        failures=failures,
        p_hat=failures / trials,
        p_ci=wilson_interval(failures, trials),
        retrans_hat=retrans_hat,
        retrans_ci=(lo, hi),
        mean_retx=float(retx.mean()),
    )


def _simulate_task(task, params, seed):
    block, size = task
    return _simulate_block(block, params, seed, size)


def sweep_operating_points(curve, params):
    """Map every operating point of a curve through the HARQ model.

    Parameters
    ----------
    curve : CurveSet
        the curve
    params : HarqParams
        the skeleton providing p_e, p_cond and n

    Returns
    -------
    pandas.DataFrame
        columns fnr, fpr, p_eff, exp_retx, sorted by fnr

    """
    rows = []
    for point in curve.points:
        point_params = params.replace(p_fn=point.fnr, p_fp=point.fpr)
        rows.append(
            {
                "fnr": point.fnr,
                "fpr": point.fpr,
                "p_eff": effective_bler(point_params),
                "exp_retx": expected_retransmissions(point_params),
            }
        )

    table = pd.DataFrame(rows, columns=list(SWEEP_COLUMNS))
    return table.sort_values(["fnr", "fpr"], kind="stable").reset_index(
        drop=True
    )


def retransmissions_at_target(table, p_target):
    """Find the cheapest operating point reaching a target BLER.

    Parameters
    ----------
    table : pandas.DataFrame
        the output of sweep_operating_points
    p_target : float
        the largest acceptable effective BLER

    Returns
    -------
    pandas.Series or None
        the row with the fewest expected retransmissions among those
        with p_eff at most p_target, None if no row qualifies

    """
    feasible = table[table["p_eff"] <= p_target]
    if feasible.empty:
        logger.warning(
            f"No operating point reaches the effective BLER {p_target:.3g}."
        )
        return None

    return feasible.loc[feasible["exp_retx"].idxmin()]
