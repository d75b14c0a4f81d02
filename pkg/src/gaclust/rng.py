"""Deterministic random-stream derivation.

All randomness in the package flows from integer key tuples through
``numpy.random.SeedSequence``. A stream is identified by its key alone,
so any part of a run can be reproduced in isolation and work can be
scheduled across threads without perturbing the draw sequence.
"""

import numpy as np

# Engine phase tags; part of the persisted stream-naming scheme, do not renumber.
PHASE_INIT = 0
PHASE_XOVER = 1
PHASE_FLIP = 2
PHASE_BISECT = 3
PHASE_RANDOM = 4


def substream(*key: int) -> np.random.Generator:
    """Return a Generator uniquely determined by the integer key tuple."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(key)))


def derive_seed(*key: int) -> int:
    """Collapse a key tuple to a single non-negative 64-bit seed."""
    state = np.random.SeedSequence(key).generate_state(1, np.uint64)
    return int(state[0])
