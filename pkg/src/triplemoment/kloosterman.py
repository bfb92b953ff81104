"""Exact Kloosterman sums S(m,n;c) and Weil-bound checks.

S(m,n;c) = sum over units d mod c of e((m d + n d^{-1})/c).  The sum is real
(d <-> -d pairs terms into conjugates); we evaluate all unit inverses with a
vectorized Euler-totient power so moduli up to ~10^6 stay cheap, and sum
cosines over the *sorted* residue multiset so that S(m,n;c) and S(n,m;c) are
bit-identical (the multisets coincide via d <-> d^{-1}).
"""

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["KloostermanQuery", "kloosterman", "kloosterman_with_residual", "weil_bound", "weil_bound_check"]


@dataclass(frozen=True)
class KloostermanQuery:
    m: int
    n: int
    c: int

    def __post_init__(self):
        if min(self.m, self.n, self.c) < 1:
            raise ValueError("m, n, c must all be >= 1")


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _totient(factors: dict[int, int]) -> int:
    phi = 1
    for p, k in factors.items():
        phi *= (p - 1) * p ** (k - 1)
    return phi


def divisor_count(n: int) -> int:
    return math.prod(k + 1 for k in _factorize(n).values())


def _unit_inverses(c: int) -> tuple[np.ndarray, np.ndarray]:
    """(units mod c, their inverses) as int64 arrays.

    Inverses via d^(phi(c)-1) mod c with a vectorized square-and-multiply;
    intermediate products stay below 2^63 for c <= ~3e9.
    """
    d = np.arange(1, c, dtype=np.int64)
    units = d[np.gcd(d, c) == 1]
    e = _totient(_factorize(c)) - 1
    result = np.ones_like(units)
    base = units.copy()
    while e:
        if e & 1:
            result = (result * base) % c
        e >>= 1
        if e:
            base = (base * base) % c
    return units, result


def kloosterman_with_residual(q: KloostermanQuery) -> tuple[float, float]:
    """(real value of S(m,n;c), accumulated |imaginary part| as sanity residual)."""
    m, n, c = q.m, q.n, q.c
    if c == 1:
        return 1.0, 0.0
    units, inv = _unit_inverses(c)
    residues = np.sort((m % c * units + n % c * inv) % c)
    angles = residues * (2.0 * math.pi / c)
    return float(np.sum(np.cos(angles))), float(abs(np.sum(np.sin(angles))))


def kloosterman(q: KloostermanQuery) -> float:
    value, residual = kloosterman_with_residual(q)
    if residual >= 1e-9:
        raise ArithmeticError(f"imaginary residual {residual} for {q}")
    return value


def weil_bound(q: KloostermanQuery) -> float:
    """tau(c) * sqrt(gcd(m,n,c)) * sqrt(c)."""
    g = math.gcd(math.gcd(q.m, q.n), q.c)
    return divisor_count(q.c) * math.sqrt(g) * math.sqrt(q.c)


def weil_bound_check(q: KloostermanQuery) -> bool:
    return abs(kloosterman(q)) <= weil_bound(q) + 1e-9
