"""Discrete-event simulation of the scheduled E-HARQ system.

Per slot every UE gets a new packet with probability P_A,UE. Pending
transmissions whose packet has passed its deadline are dropped, then
N_res of the eligible ones are served uniformly at random. A served
transmission errs with probability P_e and its feedback is a NACK with
probability 1 - FNR after an error and FPR after a success. A NACK makes
the packet eligible again T_RTT slots later while the budget lasts. A
false positive on a decoded packet only queues a redundant copy, which
takes a resource when served.
"""

import logging
from dataclasses import dataclass
from functools import partial
from multiprocessing import Pool

import numpy as np

from eharqsim.utils.resource import num_workers
from eharqsim.utils.rng import Purpose, substream
from eharqsim.utils.stats import wilson_interval

logger = logging.getLogger(__name__)


@dataclass(slots=True)
class _Transmission:
    arrival: int
    stage: int
    eligible: int
    counted: bool
    redundant: bool = False


@dataclass(frozen=True)
class SimulationResult:
    """Counts and estimates of a simulation run.

    Attributes
    ----------
    slots : int
        the number of measured slots over all replications
    packets : int
        the number of packets arrived in measured slots
    failures : int
        the packets not delivered within the deadline
    deadline_drops : int
        the failures caused by missing the deadline
    redundant : int
        the served copies caused by false positives
    initial_delays : numpy.ndarray
        how many initial transmissions waited 0, 1, ... slots

    """

    slots: int
    packets: int
    failures: int
    deadline_drops: int
    redundant: int
    initial_delays: np.ndarray

    @property
    def p_pf(self):
        return self.failures / self.packets if self.packets else np.nan

    @property
    def ci(self):
        return wilson_interval(self.failures, self.packets)

    def __add__(self, other):
        return SimulationResult(
            slots=self.slots + other.slots,
            packets=self.packets + other.packets,
            failures=self.failures + other.failures,
            deadline_drops=self.deadline_drops + other.deadline_drops,
            redundant=self.redundant + other.redundant,
            initial_delays=self.initial_delays + other.initial_delays,
        )

    def to_dict(self):
        lo, hi = self.ci
        return {
            "slots": self.slots,
            "packets": self.packets,
            "failures": self.failures,
            "deadline_drops": self.deadline_drops,
            "redundant": self.redundant,
            "p_pf": self.p_pf,
            "p_pf_ci_lo": lo,
            "p_pf_ci_hi": hi,
        }


def _simulate_replication(replication, config, slots, seed, warmup):
    rng = substream(seed, Purpose.SYSTEM, replication)
    pending = []
    packets = failures = drops = redundant = 0
    delays = np.zeros(config.t_c, dtype=np.int64)
    last_arrival = warmup + slots

    for t in range(last_arrival + config.t_c + 1):
        if t < last_arrival:
            counted = t >= warmup
            new = np.count_nonzero(rng.random(config.n_ue) < config.p_arrival)
            pending.extend(
                _Transmission(arrival=t, stage=0, eligible=t, counted=counted)
                for _ in range(new)
            )
            if counted:
                packets += new

        alive = []
        for tx in pending:
            if t - tx.arrival < config.t_c:
                alive.append(tx)
            elif tx.counted and not tx.redundant:
                failures += 1
                drops += 1
        pending = alive

        eligible = [i for i, tx in enumerate(pending) if tx.eligible <= t]
        if len(eligible) > config.n_res:
            chosen = rng.choice(eligible, size=config.n_res, replace=False)
        else:
            chosen = eligible

        chosen = set(int(i) for i in chosen)
        served = [pending[i] for i in sorted(chosen)]
        pending = [tx for i, tx in enumerate(pending) if i not in chosen]

        for tx in served:
            u_err, u_fb = rng.random(2)
            if tx.redundant:
                redundant += 1
                continue

            if tx.stage == 0 and tx.counted:
                delays[t - tx.arrival] += 1

            can_repeat = tx.stage < config.n_retx
            if u_err < config.p_e:
                if u_fb >= config.fnr and can_repeat:
                    pending.append(
                        _Transmission(
                            arrival=tx.arrival,
                            stage=tx.stage + 1,
                            eligible=t + config.t_rtt,
                            counted=tx.counted,
                        )
                    )
                elif tx.counted:
                    failures += 1
            elif u_fb < config.fpr and can_repeat:
                pending.append(
                    _Transmission(
                        arrival=tx.arrival,
                        stage=tx.stage + 1,
                        eligible=t + config.t_rtt,
                        counted=tx.counted,
                        redundant=True,
                    )
                )

    return SimulationResult(
        slots=slots,
        packets=packets,
        failures=failures,
        deadline_drops=drops,
        redundant=redundant,
        initial_delays=delays,
    )


def simulate_system(
    config, slots, seed=0, replications=1, warmup=100, *, parallel=False
):
    """Estimate the packet failure probability by simulation.

    Parameters
    ----------
    config : SystemConfig
        the system and its operating point
    slots : int
        the measured slots of each replication
    seed : int, optional
        the global seed. Default to 0.
    replications : int, optional
        the number of independent replications. Default to 1.
    warmup : int, optional
        the slots simulated before packets are counted. Default to 100.
    parallel : bool, optional
        whether to run the replications on a pool of workers. Default
        to False.

    Returns
    -------
    SimulationResult
        the pooled counts, with p_pf and its Wilson interval ci

    """
    slots = int(slots)
    if slots < 1 or replications < 1:
        msg = (
            f"The simulation needs at least one slot and one replication "
            f"({slots} slots, {replications} replications)."
        )
        raise ValueError(msg)

    worker = partial(
        _simulate_replication,
        config=config,
        slots=slots,
        seed=seed,
        warmup=int(warmup),
    )
    if parallel and replications > 1:
        with Pool(processes=min(num_workers(), replications)) as pool:
            parts = list(pool.imap(worker, range(replications)))
    else:
        parts = [worker(r) for r in range(replications)]

    result = parts[0]
    for part in parts[1:]:
        result += part

    logger.debug(
        f"Simulated {result.packets} packets, {result.failures} failed "
        f"({result.deadline_drops} past the deadline)."
    )
    return result
