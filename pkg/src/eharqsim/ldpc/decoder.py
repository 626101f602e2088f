"""Min-sum belief propagation with per-iteration LLR traces.

LLRs follow the convention log P(b=1)/P(b=0): a positive LLR favours
bit 1. Messages are updated with the flooding schedule.
"""

from dataclasses import dataclass

import numpy as np

from eharqsim.ldpc.matrix import ParityCheckMatrix, SubcodeView
from eharqsim.utils.parse import as_finite_vector

MESSAGE_CAP = 1e6


@dataclass(frozen=True)
class DecoderTrace:
    """Hold the outcome of one decoding run.

    Attributes
    ----------
    app_llrs : numpy.ndarray
        the a-posteriori LLRs after iterations 0..trace_iters, shape
        (trace_iters + 1, n_vars); row 0 holds the channel LLRs
    final_llrs : numpy.ndarray
        the a-posteriori LLRs after the last iteration performed
    messages : numpy.ndarray
        the last check-to-variable messages, one per edge in the edge
        order of the matrix
    hard_decision : numpy.ndarray
        the decided bits, 1 where the final LLR is positive
    syndrome_ok : bool
        whether the hard decision satisfies every check
    iterations_used : int
        the number of iterations performed

    """

    app_llrs: np.ndarray
    final_llrs: np.ndarray
    messages: np.ndarray
    hard_decision: np.ndarray
    syndrome_ok: bool
    iterations_used: int


def _as_matrix(h):
    match h:
        case SubcodeView():
            return h.local
        case ParityCheckMatrix():
            return h
        case _:
            msg = f"Cannot decode with an object of type {type(h).__name__}."
            raise TypeError(msg)


def check_node_update(h, to_checks, scaling=1.0):
    """Compute min-sum check-to-variable messages.

    Parameters
    ----------
    h : ParityCheckMatrix
        the code
    to_checks : numpy.ndarray
        the variable-to-check messages, one per edge
    scaling : float, optional
        the factor applied to every outgoing magnitude. Default to 1.0.

    Returns
    -------
    the check-to-variable messages, one per edge

    """
    ec = h.edge_checks
    starts = h.check_starts

    # a parity check favours bit 1 on one edge when an odd number of
    # the other edges favour bit 1
    magnitude = np.abs(to_checks)
    ones = (to_checks > 0).astype(np.int64)
    odd_total = np.add.reduceat(ones, starts) % 2
    odd_others = (odd_total[ec] + ones) % 2

    min1 = np.minimum.reduceat(magnitude, starts)
    at_min = np.flatnonzero(magnitude == min1[ec])
    _, first = np.unique(ec[at_min], return_index=True)
    argmin_edge = at_min[first]

    without_min = magnitude.copy()
    without_min[argmin_edge] = np.inf
    min2 = np.minimum.reduceat(without_min, starts)

    out_magnitude = min1[ec]
    out_magnitude[argmin_edge] = min2

    # a degree-1 check forces its variable to 0
    out_magnitude = np.minimum(out_magnitude, MESSAGE_CAP)

    sign = np.where(odd_others == 1, 1.0, -1.0)
    return scaling * sign * out_magnitude


def min_sum_decode(h, channel_llrs, max_iter=50, trace_iters=0, scaling=1.0):
    """Decode with the min-sum algorithm.

    Decoding stops at the first iteration j >= trace_iters whose hard
    decision satisfies every check, so the trace is always complete.

    Parameters
    ----------
    h : ParityCheckMatrix or SubcodeView
        the code, a subcode is decoded on its own variables
    channel_llrs : array-like
        the channel LLRs of the decoded variables
    max_iter : int, optional
        the maximum number of iterations. Default to 50.
    trace_iters : int, optional
        the number of iterations whose LLRs are recorded. Default to 0.
    scaling : float, optional
        the min-sum scaling factor. Default to 1.0, plain min-sum.

    Returns
    -------
    DecoderTrace
        the trace

    """
    matrix = _as_matrix(h)
    llrs = as_finite_vector(
        channel_llrs, length=matrix.n_vars, label="channel LLR vector"
    )

    if not 0 <= trace_iters <= max_iter:
        msg = (
            f"Need 0 <= trace_iters <= max_iter, got trace_iters="
            f"{trace_iters} and max_iter={max_iter}."
        )
        raise ValueError(msg)

    ev = matrix.edge_vars
    to_vars = np.zeros(matrix.n_edges)
    app = llrs.copy()
    trace = [llrs.copy()]

    hard = (app > 0).astype(np.uint8)
    ok = matrix.is_codeword(hard)
    iteration = 0

    while iteration < max_iter and not (ok and iteration >= trace_iters):
        iteration += 1
        to_checks = app[ev] - to_vars
        to_vars = check_node_update(matrix, to_checks, scaling)
        app = llrs + np.bincount(ev, weights=to_vars, minlength=matrix.n_vars)

        if iteration <= trace_iters:
            trace.append(app.copy())

        hard = (app > 0).astype(np.uint8)
        ok = matrix.is_codeword(hard)

    return DecoderTrace(
        app_llrs=np.vstack(trace),
        final_llrs=app,
        messages=to_vars,
        hard_decision=hard,
        syndrome_ok=bool(ok),
        iterations_used=iteration,
    )
