"""Deterministic, seedable sampling of Haar-random unitaries.

Randomness comes from numpy's counter-based Philox generator (algorithm
identifier "philox4x64"), keyed by the pair (master_seed, stream_index).
Identical keys reproduce identical byte streams on any machine and for any
worker layout; distinct stream indices give statistically independent streams.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .gaussian import PassiveUnitary

__all__ = ["RNG_ALGORITHM", "SeededStream", "derive_substream", "sample_haar_unitary"]

RNG_ALGORITHM = "philox4x64"

_U64 = 2**64


@dataclass(frozen=True)
class SeededStream:
    """Value-like handle for one reproducible random stream."""

    master_seed: int
    stream_index: int = 0

    def __post_init__(self):
        if not (0 <= self.master_seed < _U64):
            raise InputError(f"master_seed must fit in 64 bits, got {self.master_seed}")
        if not (0 <= self.stream_index < _U64):
            raise InputError(f"stream_index must fit in 64 bits, got {self.stream_index}")

    def generator(self) -> np.random.Generator:
        key = np.array([self.master_seed, self.stream_index], dtype=np.uint64)
        return np.random.Generator(np.random.Philox(key=key))


def derive_substream(stream: SeededStream, worker: int) -> SeededStream:
    """Worker substream via the fixed mixing index' = index * 2^32 + worker (mod 2^64).

    For a fixed parent stream the mapping is injective over workers < 2^32.
    """
    if worker < 0:
        raise InputError(f"worker must be nonnegative, got {worker}")
    mixed = (stream.stream_index * 2**32 + worker) % _U64
    return SeededStream(stream.master_seed, mixed)


def ginibre_matrix(n: int, generator: np.random.Generator) -> np.ndarray:
    """n x n matrix of independent standard complex Gaussians."""
    re = generator.standard_normal((n, n))
    im = generator.standard_normal((n, n))
    return (re + 1j * im) / np.sqrt(2.0)


def sample_haar_unitary(n: int, stream: SeededStream, phase_fix: bool = True) -> PassiveUnitary:
    """Draw an exactly Haar-distributed n x n unitary.

    QR-orthonormalizes a Ginibre matrix and rescales each column by the unit
    phase of the corresponding diagonal entry of R.  Without the phase fix the
    QR convention biases the distribution (diagnostic switch only).
    """
    if n < 1:
        raise InputError(f"n must be >= 1, got {n}")
    z = ginibre_matrix(n, stream.generator())
    q, r = np.linalg.qr(z)
    if phase_fix:
        d = np.diagonal(r).copy()
        d[d == 0] = 1.0
        q = q * (d / np.abs(d))
    return PassiveUnitary(q)


def _raw_haar_matrix(n: int, generator: np.random.Generator) -> np.ndarray:
    """Haar matrix without the PassiveUnitary validation (hot path)."""
    z = ginibre_matrix(n, generator)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r).copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))
