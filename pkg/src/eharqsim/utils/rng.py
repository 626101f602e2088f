"""Reproducible random substreams.

Every consumer of randomness asks for a stream keyed by its purpose and
an index, so results never depend on how work is split across
processes.
"""

from enum import IntEnum

import numpy as np


class Purpose(IntEnum):
    """Namespaces of the substream keys."""

    RECORD = 1
    FADING = 2
    BLER = 3
    HARQ = 4
    SYSTEM = 5
    TRAINING = 6
    SPLIT = 7
    CODE = 8


def substream(seed, purpose, *index):
    """Return an independent generator for a purpose and an index.

    Parameters
    ----------
    seed : int
        the global 64-bit seed
    purpose : Purpose
        the namespace of the stream
    index : int
        further key components, e.g. the record index

    Returns
    -------
    numpy.random.Generator
        the generator, identical for identical arguments

    """
    key = (int(purpose), *(int(k) for k in index))
    ss = np.random.SeedSequence(int(seed), spawn_key=key)
    return np.random.default_rng(ss)


def derive_seed(seed, purpose, *index):
    """Derive a 63-bit integer seed for libraries taking plain ints."""
    key = (int(purpose), *(int(k) for k in index))
    ss = np.random.SeedSequence(int(seed), spawn_key=key)
    return int(ss.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))
