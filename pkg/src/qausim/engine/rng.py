"""Seeded random streams.

Each sampling entity owns one stream. Streams are numpy PCG64 generators
seeded from `SeedSequence(master_seed, spawn_key=(stable_int(name),))`, so a
stream depends only on the master seed and the entity's name: adding a flow
or a port never shifts another entity's draws. PCG64 output is
platform-independent.
"""
import numpy as np

from qausim.core.constants import RNG_BATCH
from qausim.core.receipt import stable_int


class RngStream:
    """Uniform draws in [0, 1) served from pre-generated batches."""

    def __init__(self, seed: int, name: str, batch: int = RNG_BATCH):
        self.seed = int(seed)
        self.name = name
        seq = np.random.SeedSequence(self.seed & (2**64 - 1), spawn_key=(stable_int(name),))
        self._gen = np.random.Generator(np.random.PCG64(seq))
        self._batch = batch
        self._buf = self._gen.random(batch)
        self._pos = 0
        self.draws = 0

    def uniform(self) -> float:
        if self._pos == self._batch:
            self._buf = self._gen.random(self._batch)
            self._pos = 0
        value = float(self._buf[self._pos])
        self._pos += 1
        self.draws += 1
        return value

    def bernoulli(self, p: float) -> bool:
        """True with probability p. Always consumes exactly one draw."""
        return self.uniform() < p

    def uniform_between(self, low: float, high: float) -> float:
        return low + (high - low) * self.uniform()
