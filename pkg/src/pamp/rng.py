"""Seeded randomness and the uniform-stream contract.

Every stochastic routine in this package consumes randomness as a stream of
float64 uniforms in [0, 1) drawn from a PCG64 bit generator, one
``next_double`` per variate (``Generator.random`` uses the same path, so the
pure-numpy and compiled kernels see the identical stream).  Integer draws in
[0, n) are always derived from a uniform u as ``min(floor(u * n), n - 1)``;
the clamp guards against u * n == n under rounding.  Given the same seed and
the same sequence of operations, results are bit-identical across backends.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = ["make_generator", "stable_seed", "uniform_index"]


def make_generator(seed: int) -> np.random.Generator:
    """PCG64 generator for a 64-bit seed (the only RNG this package uses)."""
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)):
        raise ValueError(f"seed must be an integer, got {seed!r}")
    if not 0 <= int(seed) < 2**64:
        raise ValueError(f"seed must be a uint64, got {seed!r}")
    return np.random.Generator(np.random.PCG64(int(seed)))


def stable_seed(*parts) -> int:
    """Derive a uint64 seed from a tuple of ints/floats/strings.

    Hash-based (blake2b) rather than Python ``hash`` so values are stable
    across processes and interpreter versions; floats are keyed by repr,
    which round-trips exactly.
    """
    text = "|".join(_canon(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "little")


def _canon(part) -> str:
    if isinstance(part, bool):
        raise TypeError("bool is not a valid seed part")
    if isinstance(part, (int, np.integer)):
        return str(int(part))
    if isinstance(part, (float, np.floating)):
        return repr(float(part))
    if isinstance(part, str):
        return part
    raise TypeError(f"cannot canonicalise seed part {part!r}")


def uniform_index(u: float, n: int) -> int:
    """Map a uniform in [0, 1) to an index in [0, n)."""
    j = int(u * n)
    return j if j < n else n - 1
