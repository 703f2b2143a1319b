"""Counter-based uniform draws.

Every random number in the library is a pure function of an integer key
tuple (seed, stream, trial, round, vertex).  Draws therefore do not depend
on evaluation order, batching, or the number of worker threads.

The mixer is the SplitMix64 finalizer applied once per key component.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)
_S11 = np.uint64(11)
_INV53 = 1.0 / (1 << 53)

# stream tags
STREAM_TRIAL = 1
STREAM_GNP = 2


def mix64(x):
    """SplitMix64 step on a uint64 scalar or array (wrapping arithmetic)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = x + _GOLDEN
        z = (z ^ (z >> _S30)) * _M1
        z = (z ^ (z >> _S27)) * _M2
        return z ^ (z >> _S31)


def _u64(v) -> np.ndarray:
    return np.asarray(v, dtype=np.int64).astype(np.uint64) if np.ndim(v) else np.uint64(int(v) & 0xFFFFFFFFFFFFFFFF)


def key(seed: int, stream: int):
    """Root key for a (seed, stream) pair."""
    return mix64(mix64(np.uint64(seed & 0xFFFFFFFFFFFFFFFF)) ^ np.uint64(stream))


def fold(k, component):
    """Fold one more key component (scalar or array) into ``k``."""
    return mix64(np.asarray(k, dtype=np.uint64) ^ _u64(component))


def to_unit(h) -> np.ndarray:
    """Map uint64 hashes to floats uniform on [0, 1) with 53-bit resolution."""
    return (np.asarray(h, dtype=np.uint64) >> _S11).astype(np.float64) * _INV53


def uniforms(seed: int, stream: int, *components) -> np.ndarray:
    """Uniform draws keyed by ``(seed, stream, *components)``.

    Components broadcast against each other like numpy arrays.
    """
    h = key(seed, stream)
    for c in components:
        h = fold(h, c)
    return to_unit(h)
