import logging
from functools import lru_cache, partial
from multiprocessing import Pool

import numpy as np
import pandas as pd

from eharqsim.metrics import CurveSet
from eharqsim.system.config import SystemConfig
from eharqsim.system.failure import packet_failure_prob
from eharqsim.system.resource import propagate_resource_distribution
from eharqsim.system.simulator import simulate_system
from eharqsim.utils.resource import num_workers

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = (
    "fnr",
    "fpr",
    "p_pf_analytic",
    "p_pf_sim",
    "p_pf_sim_ci_lo",
    "p_pf_sim_ci_hi",
    "diverged",
)
FNR_EVAL = 8e-4


@lru_cache(maxsize=4096)
def _analytic_by_key(key):
    config = SystemConfig(*key)
    stationary = propagate_resource_distribution(
        config, record_trajectory=False
    )
    if stationary.diverged:
        return np.nan, True

    return packet_failure_prob(config, stationary=stationary), False


def analytic_failure(config):
    """Return the analytic P_pf and whether the demand diverges.

    Results are cached by the parameters of the configuration.
    """
    return _analytic_by_key(config.key())


def thin_curve(curve, max_points=200):
    """Reduce a curve to points spread evenly in log(FNR).

    Among points of equal FNR the one with the smallest FPR is kept.

    Parameters
    ----------
    curve : CurveSet
        the curve
    max_points : int, optional
        the largest number of points kept. Default to 200.

    Returns
    -------
    CurveSet
        the reduced curve

    """
    if len(curve) <= max_points:
        return curve

    fnr = curve.fnr
    order = np.lexsort((-curve.fpr, fnr))
    sorted_fnr = fnr[order]

    positive = sorted_fnr[sorted_fnr > 0]
    grid = np.logspace(
        np.log10(positive.min()), np.log10(positive.max()), max_points - 1
    )
    picks = np.searchsorted(sorted_fnr, grid, side="right") - 1
    if (sorted_fnr == 0).any():
        picks = np.append(picks, np.flatnonzero(sorted_fnr == 0)[-1])

    picks = np.unique(picks[picks >= 0])
    points = [curve[int(i)] for i in order[picks]]
    return CurveSet(points=tuple(points), auc_pr=curve.auc_pr)


def _sweep_point(rates, config, simulate, slots, seed):
    fnr, fpr = rates
    point_config = config.replace(fnr=fnr, fpr=fpr)
    p_pf, diverged = analytic_failure(point_config)
    row = {
        "fnr": fnr,
        "fpr": fpr,
        "p_pf_analytic": p_pf,
        "p_pf_sim": np.nan,
        "p_pf_sim_ci_lo": np.nan,
        "p_pf_sim_ci_hi": np.nan,
        "diverged": diverged,
    }

    if simulate:
        result = simulate_system(point_config, slots, seed=seed)
        lo, hi = result.ci
        row |= {
            "p_pf_sim": result.p_pf,
            "p_pf_sim_ci_lo": lo,
            "p_pf_sim_ci_hi": hi,
        }

    return row


def fnr_sweep_system(
    config,
    curve,
    *,
    simulate=False,
    slots=100000,
    seed=0,
    max_points=200,
    parallel=True,
):
    """Evaluate P_pf at every operating point of a curve.

    The stationary demand is recomputed per point since the repeat
    probability depends on FNR and FPR. Diverging points have no
    analytic value and are flagged.

    Parameters
    ----------
    config : SystemConfig
        the system, its fnr and fpr are replaced per point
    curve : CurveSet
        the operating points
    simulate : bool, optional
        whether to add simulated P_pf with intervals. Default to False.
    slots : int, optional
        the measured slots per simulated point. Default to 100000.
    seed : int, optional
        the simulation seed. Default to 0.
    max_points : int, optional
        the largest number of evaluated points. Default to 200.
    parallel : bool, optional
        whether to use a pool of workers. Default to True.

    Returns
    -------
    pandas.DataFrame
        the sweep columns, sorted by FNR

    """
    curve = thin_curve(curve, max_points)
    rates = sorted(
        {(float(p.fnr), float(p.fpr)) for p in curve.points},
        key=lambda r: (r[0], -r[1]),
    )

    worker = partial(
        _sweep_point, config=config, simulate=simulate, slots=slots, seed=seed
    )
    if parallel and len(rates) > 1:
        with Pool(processes=num_workers()) as pool:
            rows = list(pool.imap(worker, rates))
    else:
        rows = [worker(r) for r in rates]

    table = pd.DataFrame(rows, columns=list(SWEEP_COLUMNS))
    n_diverged = int(table["diverged"].sum())
    if n_diverged:
        logger.warning(
            f"The demand diverges at {n_diverged} of {len(table)} "
            "operating point(s), they have no analytic P_pf."
        )
    return table


def optimal_operating_point(table, fnr_eval=FNR_EVAL):
    """Select the operating point of minimal analytic P_pf.

    When the minimum sits at the smallest evaluated FNR the optimum is
    not resolved by the data, and the point with the largest FNR not
    above fnr_eval is reported instead, marked "<".

    Parameters
    ----------
    table : pandas.DataFrame
        the output of fnr_sweep_system
    fnr_eval : float or None, optional
        the fallback FNR. Default to 8e-4, None keeps the minimum.

    Returns
    -------
    dict or None
        the row with a "marker" entry, None if every point diverges

    """
    finite = table[~table["diverged"] & table["p_pf_analytic"].notna()]
    if finite.empty:
        return None

    best = finite.loc[finite["p_pf_analytic"].idxmin()].to_dict()
    best["marker"] = ""

    unresolved = len(finite) > 1 and best["fnr"] <= finite["fnr"].min()
    if not unresolved:
        return best

    if fnr_eval is not None:
        fallback = finite[finite["fnr"] <= fnr_eval]
        if not fallback.empty:
            best = fallback.loc[fallback["fnr"].idxmax()].to_dict()
    best["marker"] = "<"

    return best


def total_score(p_pf_table):
    """Score every scheme against the best scheme of each scenario.

    Parameters
    ----------
    p_pf_table : pandas.DataFrame
        P_pf with one row per scenario and one column per scheme

    Returns
    -------
    pandas.Series
        Σ over scenarios of log10(P_pf / min over schemes), 0 for a
        scheme that is best everywhere

    """
    values = p_pf_table.to_numpy(dtype=np.float64)
    if values.size == 0:
        msg = "The packet failure table is empty."
        raise ValueError(msg)

    if not (np.isfinite(values) & (values > 0)).all():
        msg = "Every packet failure probability must be positive and finite."
        raise ValueError(msg)

    ratios = np.log10(values / values.min(axis=1, keepdims=True))
    return pd.Series(
        ratios.sum(axis=0), index=p_pf_table.columns, name="total_score"
    )
