"""Labelled transmission records and BLER calibration.

This module provides:
- GenerationConfig: the settings of a dataset.
- generate_dataset: simulate records of subcode features and labels.
- estimate_bler: Monte Carlo block error rate of the full code.
- calibrate_snr: find the SNR at which the BLER meets a target.
"""

import logging
import math
from functools import partial
from multiprocessing import Pool
from pathlib import Path

import numpy as np
import pandas as pd

from eharqsim.channel.awgn import ChannelConfig, transmit
from eharqsim.features import euclidean_distance, vnr_sequence
from eharqsim.ldpc import (
    ParityCheckMatrix,
    derive_generator,
    encode,
    extract_subcode,
    min_sum_decode,
    read_alist,
    regular_code,
)
from eharqsim.utils.io import get_version, write_json, write_table
from eharqsim.utils.model import FixedValue, PositiveNumber
from eharqsim.utils.resource import chunk_ranges, num_workers
from eharqsim.utils.rng import Purpose, substream
from eharqsim.utils.stats import wilson_interval

logger = logging.getLogger(__name__)


def load_code(source=None):
    """Return a parity-check matrix from a source.

    Parameters
    ----------
    source : ParityCheckMatrix, str, pathlib.Path or None, optional
        the matrix itself, an alist file, or None for the default
        regular (3,6) code of length 360. Default to None.

    Returns
    -------
    ParityCheckMatrix
        the matrix

    """
    match source:
        case None:
            return regular_code()
        case ParityCheckMatrix():
            return source
        case str() | Path():
            return read_alist(source)
        case _:
            msg = f"Cannot make a code from {type(source).__name__}."
            raise ValueError(msg)


class GenerationConfig:
    """Hold the settings of dataset generation."""

    channel = FixedValue()
    code = FixedValue()
    subcode_fraction = FixedValue()
    vnr_iters = PositiveNumber(int)
    full_decode_iters = PositiveNumber(int, strict=True)
    n_records = PositiveNumber(int, strict=True)
    seed = PositiveNumber(int)
    scaling = PositiveNumber(float, strict=True)

    def __init__(
        self,
        channel,
        code=None,
        subcode_fraction=5 / 6,
        vnr_iters=5,
        full_decode_iters=50,
        n_records=100_000,
        seed=None,
        scaling=1.0,
    ):
        """Initialise the generation settings.

        Parameters
        ----------
        channel : ChannelConfig
            the channel
        code : ParityCheckMatrix, str, pathlib.Path or None, optional
            the code or its alist file. Default to None, the default
            regular code.
        subcode_fraction : float, optional
            the fraction of checks forming the subcode. Default to 5/6.
        vnr_iters : int, optional
            the number of subcode iterations traced. Default to 5.
        full_decode_iters : int, optional
            the iterations of the full decoder. Default to 50.
        n_records : int, optional
            the number of records. Default to 100000.
        seed : int, optional
            the global seed. Default to None, the channel seed.
        scaling : float, optional
            the min-sum scaling factor. Default to 1.0.

        """
        if not isinstance(channel, ChannelConfig):
            msg = "The channel must be a ChannelConfig."
            raise TypeError(msg)

        self.channel = channel
        self.code = load_code(code)
        self.subcode_fraction = float(subcode_fraction)
        self.vnr_iters = vnr_iters
        self.full_decode_iters = full_decode_iters
        self.n_records = n_records
        self.seed = channel.seed if seed is None else seed
        self.scaling = scaling

        if self.vnr_iters > self.full_decode_iters:
            msg = (
                f"The traced iterations ({self.vnr_iters}) exceed the "
                f"decoding iterations ({self.full_decode_iters})."
            )
            raise ValueError(msg)

    @property
    def vnr_columns(self):
        """Return the names of the VNR columns."""
        return [f"vnr_{j}" for j in range(self.vnr_iters + 1)]

    def to_dict(self):
        """Return the settings as a plain mapping."""
        return {
            "channel": self.channel.to_dict(),
            "n_vars": self.code.n_vars,
            "n_checks": self.code.n_checks,
            "subcode_fraction": self.subcode_fraction,
            "vnr_iters": self.vnr_iters,
            "full_decode_iters": self.full_decode_iters,
            "n_records": self.n_records,
            "seed": self.seed,
            "scaling": self.scaling,
        }


class _Link:
    """Everything a worker needs to simulate records."""

    def __init__(self, cfg, gains):
        self.cfg = cfg
        self.subcode = extract_subcode(cfg.code, cfg.subcode_fraction)
        self.generator = derive_generator(cfg.code)
        self.gains = gains

    def record(self, idx):
        cfg = self.cfg
        rng = substream(cfg.seed, Purpose.RECORD, idx)

        info = rng.integers(0, 2, size=self.generator.n_info)
        codeword = encode(self.generator, info)
        gain = None if self.gains is None else self.gains[idx]
        rx = transmit(codeword, cfg.channel, rng, gain=gain)

        sub_trace = min_sum_decode(
            self.subcode,
            self.subcode.restrict(rx.channel_llrs),
            max_iter=cfg.vnr_iters,
            trace_iters=cfg.vnr_iters,
            scaling=cfg.scaling,
        )
        full_trace = min_sum_decode(
            cfg.code,
            rx.channel_llrs,
            max_iter=cfg.full_decode_iters,
            scaling=cfg.scaling,
        )
        label = int(np.any(full_trace.hard_decision != codeword))

        return (
            idx,
            label,
            *vnr_sequence(sub_trace),
            euclidean_distance(rx.rx_symbols, rx.tx_symbols),
            rx.block_gain,
        )

    def records(self, bounds):
        start, stop = bounds
        return [self.record(idx) for idx in range(start, stop)]


def _run_chunks(func, n_items, *, parallel):
    if parallel and n_items > 1:
        n_proc = num_workers()
        chunks = chunk_ranges(n_items, 4 * n_proc)
        with Pool(processes=n_proc) as pool:
            parts = pool.imap(func, chunks)
            return [row for part in parts for row in part]

    return func((0, n_items))


def generate_dataset(cfg, out_file=None, *, parallel=True):
    """Generate labelled transmission records.

    Each record encodes a random information word, transmits it, traces
    the subcode decoder for the VNR features and labels the record 1 if
    the full decoder does not recover the codeword.

    Parameters
    ----------
    cfg : GenerationConfig
        the settings
    out_file : str or pathlib.Path, optional
        the CSV file to be written, the summary goes next to it with a
        "_summary.json" suffix. Default to None, nothing is written.
    parallel : bool, optional
        whether to use a pool of workers. Default to True.

    Returns
    -------
    records : pandas.DataFrame
        the records, ordered by index
    summary : dict
        the empirical BLER and its confidence interval

    """
    gains = None
    if cfg.channel.fading is not None:
        gains = cfg.channel.fading.gains(
            cfg.n_records, substream(cfg.seed, Purpose.FADING)
        )

    link = _Link(cfg, gains)
    rows = _run_chunks(link.records, cfg.n_records, parallel=parallel)

    columns = ["idx", "label", *cfg.vnr_columns, "eucd", "gain"]
    records = pd.DataFrame(rows, columns=columns)
    records = records.astype({"idx": np.int64, "label": np.int64})

    n_errors = int(records["label"].sum())
    lo, hi = wilson_interval(n_errors, cfg.n_records)
    summary = {
        "version": get_version(),
        "config": cfg.to_dict(),
        "n_records": cfg.n_records,
        "n_errors": n_errors,
        "bler": n_errors / cfg.n_records,
        "bler_ci_lo": lo,
        "bler_ci_hi": hi,
    }

    if out_file is not None:
        out_file = Path(out_file)
        write_table(records, out_file)
        write_json(summary, summary_path(out_file))

    return records, summary


def summary_path(dataset_file):
    """Return the summary file of a dataset file."""
    dataset_file = Path(dataset_file)
    return dataset_file.with_name(f"{dataset_file.stem}_summary.json")


class _BlerCounter:
    """Count full-code block errors over a range of trials."""

    def __init__(self, h, channel, seed, max_iter, scaling):
        self.h = h
        self.generator = derive_generator(h)
        self.channel = channel
        self.seed = seed
        self.max_iter = max_iter
        self.scaling = scaling

    def errors(self, bounds):
        start, stop = bounds
        count = 0
        for idx in range(start, stop):
            rng = substream(self.seed, Purpose.BLER, idx)
            info = rng.integers(0, 2, size=self.generator.n_info)
            codeword = encode(self.generator, info)
            rx = transmit(codeword, self.channel, rng)
            trace = min_sum_decode(
                self.h,
                rx.channel_llrs,
                max_iter=self.max_iter,
                scaling=self.scaling,
            )
            count += int(np.any(trace.hard_decision != codeword))
        return [count]


def estimate_bler(
    h,
    channel,
    trials,
    seed=0,
    max_iter=50,
    scaling=1.0,
    *,
    parallel=False,
):
    """Estimate the block error rate of a code by Monte Carlo.

    The same seed gives the same information words and unit noise at
    every SNR, so estimates over an SNR grid use common random numbers.

    Parameters
    ----------
    h : ParityCheckMatrix
        the code
    channel : ChannelConfig
        the channel, fading is drawn independently per trial
    trials : int
        the number of codewords
    seed : int, optional
        the seed. Default to 0.
    max_iter : int, optional
        the decoding iterations. Default to 50.
    scaling : float, optional
        the min-sum scaling factor. Default to 1.0.
    parallel : bool, optional
        whether to use a pool of workers. Default to False.

    Returns
    -------
    errors : int
        the number of block errors
    trials : int
        the number of trials

    """
    counter = _BlerCounter(h, channel, seed, max_iter, scaling)
    counts = _run_chunks(counter.errors, int(trials), parallel=parallel)
    return int(sum(counts)), int(trials)


def calibrate_snr(
    h,
    target_bler,
    tolerance=0.02,
    snr_range=(-2.0, 8.0),
    modulation="QPSK",
    max_trials=100_000,
    min_errors=50,
    confidence=0.95,
    max_steps=40,
    seed=0,
    *,
    parallel=False,
):
    """Find the SNR at which the full-code BLER meets a target.

    Bisection stops as soon as the confidence interval of the estimate
    contains the target, or when the bracket is narrower than the
    tolerance.

    Parameters
    ----------
    h : ParityCheckMatrix
        the code
    target_bler : float
        the target BLER, in (0, 0.5]
    tolerance : float, optional
        the smallest SNR bracket, in dB. Default to 0.02.
    snr_range : tuple of float, optional
        the initial bracket in dB. Default to (-2, 8).
    modulation : str, optional
        the modulation. Default to "QPSK".
    max_trials : int, optional
        the largest number of trials per SNR point. Default to 100000.
    min_errors : int, optional
        the number of errors the target must produce within max_trials.
        Default to 50.
    confidence : float, optional
        the confidence level of the intervals. Default to 0.95.
    max_steps : int, optional
        the maximum number of bisection steps. Default to 40.
    seed : int, optional
        the seed shared by all SNR points. Default to 0.
    parallel : bool, optional
        whether to use a pool of workers. Default to False.

    Returns
    -------
    snr_db : float
        the calibrated SNR

    """
    if not 0 < target_bler <= 0.5:
        msg = f"The target BLER must be in (0, 0.5] ({target_bler})."
        raise ValueError(msg)

    if target_bler * max_trials < min_errors:
        msg = (
            f"Insufficient trials: a BLER of {target_bler:.3e} needs at "
            f"least {math.ceil(min_errors / target_bler)} trials per "
            f"point, but at most {max_trials} are allowed."
        )
        raise RuntimeError(msg)

    trials = min(max_trials, math.ceil(4 * min_errors / target_bler))

    def bler_interval(snr_db):
        channel = ChannelConfig(snr_db, modulation=modulation, seed=seed)
        errors, n = estimate_bler(
            h, channel, trials, seed=seed, parallel=parallel
        )
        lo, hi = wilson_interval(errors, n, confidence)
        logger.info(
            f"BLER at {snr_db:.3f} dB: {errors / n:.3e} "
            f"[{lo:.3e}, {hi:.3e}] over {n} trials."
        )
        return lo, hi

    lo_snr, hi_snr = sorted(snr_range)
    _, upper_at_lo = bler_interval(lo_snr)
    lower_at_hi, _ = bler_interval(hi_snr)
    if upper_at_lo < target_bler or lower_at_hi > target_bler:
        msg = (
            f"The SNR range [{lo_snr}, {hi_snr}] dB does not bracket the "
            f"target BLER {target_bler:.3e}."
        )
        raise ValueError(msg)

    mid = (lo_snr + hi_snr) / 2
    for _ in range(max_steps):
        mid = (lo_snr + hi_snr) / 2
        ci_lo, ci_hi = bler_interval(mid)
        if ci_lo <= target_bler <= ci_hi:
            return mid

        if ci_lo > target_bler:
            lo_snr = mid
        else:
            hi_snr = mid

        if hi_snr - lo_snr < tolerance:
            break

    logger.warning(
        f"The calibration stopped at {mid:.3f} dB without the interval "
        f"containing the target BLER {target_bler:.3e}."
    )
    return mid
