"""Reproducible random streams and outcome sampling.

Every round of a simulation draws from its own generator, derived from
(master_seed, round_index).  The derivation is position-based rather than
sequential, so results are identical no matter how rounds are scheduled
across workers.
"""

from __future__ import annotations

import numpy as np

#: probabilities below this are treated as floating-point dust and clamped
PROB_FLOOR = 1e-12

#: documented default master seed; reproducibility-first, never wall-clock
DEFAULT_SEED = 1729


def round_rng(master_seed: int, round_index: int, lane: int = 0) -> np.random.Generator:
    """Independent generator for one round (lane 0: quantum outcomes and
    coins; lane 1: side draws such as blind key guesses; lane 2: testing-round
    selection)."""
    seq = np.random.SeedSequence(entropy=master_seed, spawn_key=(round_index, lane))
    return np.random.Generator(np.random.PCG64(seq))


def clean_probabilities(probs: np.ndarray) -> np.ndarray:
    """Clamp sub-floor probabilities to zero and renormalize."""
    p = np.asarray(probs, dtype=np.float64).copy()
    p[p < PROB_FLOOR] = 0.0
    total = p.sum()
    if total <= 0.0:
        raise ValueError("all outcome probabilities vanished")
    return p / total


class RandomSampler:
    """Inverse-CDF sampling over a fixed outcome ordering."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def choose(self, probs: np.ndarray) -> int:
        u = self.rng.random()
        acc = 0.0
        last = 0
        for i, p in enumerate(probs):
            if p <= 0.0:
                continue
            acc += p
            last = i
            if u < acc:
                return i
        return last


class BranchPoint(Exception):
    """Signals an undetermined outcome during branch enumeration."""

    def __init__(self, probs: np.ndarray):
        super().__init__("enumeration branch point")
        self.probs = np.asarray(probs, dtype=np.float64)


class ReplaySampler:
    """Replays a forced prefix of choices, then raises ``BranchPoint``.

    Used by exact detection-probability enumeration: a round is re-run with
    ever longer forced prefixes until it completes, visiting every branch of
    the outcome tree exactly once.
    """

    def __init__(self, forced: list[int]):
        self.forced = list(forced)
        self.pos = 0

    def choose(self, probs: np.ndarray) -> int:
        if self.pos < len(self.forced):
            idx = self.forced[self.pos]
            self.pos += 1
            return idx
        raise BranchPoint(probs)
