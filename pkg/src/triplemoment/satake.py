"""Satake-parameter data model, local L-factors and archimedean Gamma numerics.

Local inverse factors are polynomials in X = p^{-s} with complex coefficients
and constant term 1; all series manipulation is formal, floats only appear at
evaluation.  The admissible unramified parameter box is |log_p |alpha|| <= 7/64.
"""

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import loggamma

from .primes import primes_up_to

KIM_SARNAK = 7 / 64
_BOX_SLACK = 1e-9

__all__ = [
    "ArchParams",
    "DirichletSeries",
    "GL2Local",
    "LocalSatake",
    "arch_triple_ratio",
    "dirichlet_expand",
    "factorization_check",
    "lift_sym",
    "log_L_at_1_via_primes",
    "poly_from_roots",
    "rankin_selberg",
    "triple_local_factor",
]


@dataclass(frozen=True)
class GL2Local:
    """Local data of a trivial-central-character GL(2) representation at p:
    either unramified with Satake parameter alpha, or special with sign +-1."""

    p: int
    alpha: complex | None = None
    sign: int | None = None

    def __post_init__(self):
        if self.p < 2:
            raise ValueError(f"need a prime modulus >= 2, got {self.p}")
        if (self.alpha is None) == (self.sign is None):
            raise ValueError("exactly one of alpha (unramified) or sign (special) required")
        if self.alpha is not None:
            t = abs(math.log(abs(self.alpha)) / math.log(self.p))
            if t > KIM_SARNAK + _BOX_SLACK:
                raise ValueError(f"|log_p|alpha|| = {t} outside the 7/64 box")
        if self.sign is not None and self.sign not in (1, -1):
            raise ValueError(f"special sign must be +-1, got {self.sign}")

    @property
    def unramified(self) -> bool:
        return self.alpha is not None

    @classmethod
    def from_angle(cls, p: int, theta: float) -> "GL2Local":
        return cls(p, alpha=cmath.exp(1j * theta))

    @classmethod
    def special(cls, p: int, sign: int) -> "GL2Local":
        return cls(p, sign=sign)


@dataclass(frozen=True)
class LocalSatake:
    """Multiset of Satake parameters of a lift/convolution at one prime."""

    params: tuple[complex, ...]

    def trace(self) -> complex:
        return sum(self.params)

    def sorted_params(self) -> list[complex]:
        return sorted(self.params, key=lambda z: (round(z.real, 9), round(z.imag, 9)))


@dataclass(frozen=True)
class ArchParams:
    """Archimedean principal-series data s = sigma + it with parity bit delta."""

    s: complex
    delta: int = 0

    def __post_init__(self):
        if self.delta not in (0, 1):
            raise ValueError("parity bit must be 0 or 1")
        if abs(self.s.imag) > _BOX_SLACK:
            if abs(self.s.real) > _BOX_SLACK:
                raise ValueError("parameter must lie in i*R union [-7/64, 7/64]")
        elif abs(self.s.real) > KIM_SARNAK + _BOX_SLACK:
            raise ValueError("parameter must lie in i*R union [-7/64, 7/64]")

    @property
    def t(self) -> float:
        return abs(self.s.imag)


@dataclass
class DirichletSeries:
    """Coefficients lambda(1..N) with degree/conductor metadata.

    `local_factors` retains the inverse local polynomials the series was
    assembled from, so exact log L(1) evaluations stay available.
    """

    coeffs: np.ndarray  # index n-1 holds lambda(n)
    degree: int
    conductor: str = "synthetic"
    local_factors: dict[int, list[complex]] = field(default_factory=dict)

    @property
    def N(self) -> int:
        return len(self.coeffs)

    def lam(self, n: int) -> complex:
        return self.coeffs[n - 1]


def poly_from_roots(gammas) -> list[complex]:
    """Coefficients of prod_k (1 - gamma_k X), ascending in X."""
    out = [1 + 0j]
    for g in gammas:
        nxt = out + [0j]
        for i in range(len(out), 0, -1):
            nxt[i] -= g * out[i - 1]
        out = nxt
    return out


def _series_inverse(poly: list[complex], depth: int) -> list[complex]:
    """First depth+1 coefficients of 1/poly as a power series (poly[0] == 1)."""
    if abs(poly[0] - 1) > 1e-12:
        raise ValueError("local inverse factor must have constant term 1")
    inv = [1 + 0j] + [0j] * depth
    for k in range(1, depth + 1):
        inv[k] = -sum(poly[j] * inv[k - j] for j in range(1, min(k, len(poly) - 1) + 1))
    return inv


def triple_local_factor(a: GL2Local, b: GL2Local, c: GL2Local) -> list[complex]:
    """Inverse local factor of the triple product at p, as coefficients of
    prod (1 - gamma X) in X = p^{-s}, for all four ramification patterns."""
    if not (a.p == b.p == c.p):
        raise ValueError("all three local components must share the prime")
    p = a.p
    unram = [g for g in (a, b, c) if g.unramified]
    special = [g for g in (a, b, c) if not g.unramified]

    if len(special) == 0:
        gammas = [
            a.alpha**ea * b.alpha**eb * c.alpha**ec
            for ea in (1, -1)
            for eb in (1, -1)
            for ec in (1, -1)
        ]
    elif len(special) == 1:
        chi = special[0].sign
        a1, a2 = unram[0].alpha, unram[1].alpha
        gammas = [
            a1**e1 * a2**e2 * chi * p**-0.5 for e1 in (1, -1) for e2 in (1, -1)
        ]
    elif len(special) == 2:
        chi = special[0].sign * special[1].sign
        al = unram[0].alpha
        gammas = []
        for e in (1, -1):
            gammas.append(al**e * chi)
            gammas.append(al**e * chi / p)
    else:
        chi = special[0].sign * special[1].sign * special[2].sign
        gammas = [chi * p**-0.5, chi * p**-0.5, chi * p**-1.5]
    return poly_from_roots(gammas)


def lift_sym(k: int, g: GL2Local) -> LocalSatake:
    """Satake multiset of sym^k at an unramified place, k in {2, 4}."""
    if k not in (2, 4):
        raise ValueError(f"only sym^2 and sym^4 are supported, got k={k}")
    if not g.unramified:
        raise ValueError("symmetric-power lifts of special components are out of scope")
    a = g.alpha
    if k == 2:
        return LocalSatake((a**2, 1 + 0j, a**-2))
    return LocalSatake((a**4, a**2, 1 + 0j, a**-2, a**-4))


def rankin_selberg(A: LocalSatake, B: LocalSatake) -> LocalSatake:
    """All pairwise products, with multiplicity."""
    return LocalSatake(tuple(x * y for x in A.params for y in B.params))


def factorization_check(alpha: complex) -> tuple[bool, float]:
    """Check sym2 (x) sym2 = sym4 + sym2 + {1} as Satake multisets and the
    trace identity lambda(p^2)^2 = lambda(p^4) + lambda(p^2) + 1.

    Returns (ok, residual) where residual is the max absolute deviation.
    """
    g = GL2Local(2, alpha=alpha)
    s2 = lift_sym(2, g)
    lhs = rankin_selberg(s2, s2).sorted_params()
    rhs = LocalSatake(lift_sym(4, g).params + s2.params + (1 + 0j,)).sorted_params()
    residual = max(abs(x - y) for x, y in zip(lhs, rhs))
    tr = s2.trace()
    residual = max(residual, abs(tr * tr - (lift_sym(4, g).trace() + tr + 1)))
    return residual < 1e-12, residual


def dirichlet_expand(
    locals_: dict[int, list[complex]], N: int, degree: int = 2, conductor: str = "synthetic"
) -> DirichletSeries:
    """Coefficients lambda(n), n <= N, from inverse local factors by formal
    series inversion at each prime and multiplicative assembly."""
    if N < 1:
        raise ValueError("need N >= 1")
    ps = primes_up_to(N) if N >= 2 else np.array([], dtype=np.int64)
    missing = [int(p) for p in ps if int(p) not in locals_]
    if missing:
        raise ValueError(f"missing local factors at primes {missing[:5]}")

    coeffs = np.zeros(N, dtype=complex)
    coeffs[0] = 1.0
    spf = np.zeros(N + 1, dtype=np.int64)  # smallest prime factor sieve
    for p in ps:
        sel = spf[p::p]
        sel[sel == 0] = p
        spf[p::p] = sel
    prime_powers: dict[int, list[complex]] = {}
    for p in ps:
        p = int(p)
        depth = int(math.log(N) / math.log(p) + 1e-9)
        prime_powers[p] = _series_inverse(locals_[p], depth)
    for n in range(2, N + 1):
        p = int(spf[n])
        m, k = n, 0
        while m % p == 0:
            m //= p
            k += 1
        coeffs[n - 1] = prime_powers[p][k] * (coeffs[m - 1] if m > 1 else 1.0)
    return DirichletSeries(coeffs, degree=degree, conductor=conductor, local_factors=dict(locals_))


def log_L_at_1_via_primes(series: DirichletSeries, x: int) -> tuple[float, float]:
    """(sum_{p<x} lambda(p)/p, exact log L(1) from the stored local factors).

    The exact value sums -log|P_p(1/p)| over every stored prime, where P_p is
    the inverse local factor.
    """
    if x > series.N:
        raise ValueError(f"cutoff {x} exceeds series length {series.N}")
    prime_sum = 0.0
    for p in primes_up_to(max(x - 1, 2)):
        p = int(p)
        if p < x:
            prime_sum += series.lam(p).real / p
    exact = 0.0
    for p, poly in series.local_factors.items():
        val = sum(c * (1.0 / p) ** k for k, c in enumerate(poly))
        exact -= math.log(abs(val))
    return prime_sum, exact


def _log_gamma_r(s: complex) -> complex:
    """log of Gamma_R(s) = pi^{-s/2} Gamma(s/2)."""
    return -0.5 * s * math.log(math.pi) + loggamma(0.5 * s)


def arch_triple_ratio(
    s1: ArchParams, s2: ArchParams, s3: ArchParams
) -> tuple[float, float]:
    """(L_inf(1/2, triple)/prod_i L_inf(1, sym^2 phi_i), analytic bound).

    The bound is exp(-pi/2 (sum_{e1,e2} |t1+e1 t2+e2 t3| - 2 sum t_i)) times
    prod_{e1,e2} (|t1+e1 t2+e2 t3|+1)^{-1/2}; the ratio itself is evaluated in
    log space so large spectral parameters do not underflow prematurely.
    """
    delta = (s1.delta + s2.delta + s3.delta) % 2
    if delta != 0:
        raise ValueError("odd total parity: the triple factor vanishes identically")

    log_num = 0.0 + 0.0j
    for e1 in (1, -1):
        for e2 in (1, -1):
            for e3 in (1, -1):
                log_num += _log_gamma_r(0.5 + e1 * s1.s + e2 * s2.s + e3 * s3.s + delta)
    log_den = 0.0 + 0.0j
    for si in (s1, s2, s3):
        log_den += _log_gamma_r(1 + 2 * si.s) + _log_gamma_r(1 + 0j) + _log_gamma_r(1 - 2 * si.s)
    ratio = math.exp((log_num - log_den).real)

    t1, t2, t3 = s1.t, s2.t, s3.t
    combos = [abs(t1 + e1 * t2 + e2 * t3) for e1 in (1, -1) for e2 in (1, -1)]
    log_bound = -0.5 * math.pi * (sum(combos) - 2 * (t1 + t2 + t3))
    log_bound -= 0.5 * sum(math.log1p(c) for c in combos)
    return ratio, math.exp(log_bound)
