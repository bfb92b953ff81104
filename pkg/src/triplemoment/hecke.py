"""Exact integer arithmetic for Hecke relations and Chebyshev-basis expansions.

Everything here works in the basis {lambda(p^0), lambda(p^1), ...} of
eigenvalues of the unramified Hecke operators at a single prime, where the
multiplication rule is

    lambda(p^n) lambda(p^m) = sum_{j=0}^{min(m,n)} lambda(p^{m+n-2j}).

Coefficients are arbitrary-precision ints; they grow like (d+1)^n and the
statements checked downstream are exact, so no floats enter until evaluation.
"""

import enum
import math
from dataclasses import dataclass, field

__all__ = [
    "HeckeExpansion",
    "IntPolynomial",
    "Lift",
    "catalan_coefficient",
    "chebyshev_u",
    "hecke_multiply",
    "hecke_power_table",
    "monomial_coefficients",
    "power_sum_in_lambda",
    "variance_expansion",
]


@dataclass(frozen=True)
class HeckeExpansion:
    """Sparse integer vector in the lambda(p^j) basis; zero entries elided."""

    coeffs: dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(j): int(c) for j, c in self.coeffs.items() if c != 0}
        if any(j < 0 for j in clean):
            raise ValueError("basis indices must be >= 0")
        object.__setattr__(self, "coeffs", clean)

    def __getitem__(self, j: int) -> int:
        return self.coeffs.get(j, 0)

    def __add__(self, other: "HeckeExpansion") -> "HeckeExpansion":
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out.get(j, 0) + c
        return HeckeExpansion(out)

    def scale(self, a: int) -> "HeckeExpansion":
        return HeckeExpansion({j: a * c for j, c in self.coeffs.items()})

    def __mul__(self, other: "HeckeExpansion") -> "HeckeExpansion":
        out: dict[int, int] = {}
        for j, a in self.coeffs.items():
            for k, b in other.coeffs.items():
                ab = a * b
                for i in range(min(j, k) + 1):
                    idx = j + k - 2 * i
                    out[idx] = out.get(idx, 0) + ab
        return HeckeExpansion(out)

    def evaluate(self, theta: float) -> float:
        """Evaluate with lambda(p^j) := sin((j+1) theta)/sin(theta)."""
        s = math.sin(theta)
        return sum(c * math.sin((j + 1) * theta) / s for j, c in self.coeffs.items())

    def total_mass(self) -> int:
        return sum(self.coeffs.values())


@dataclass(frozen=True)
class IntPolynomial:
    """Univariate polynomial with exact integer coefficients, ascending order."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __add__(self, other: "IntPolynomial") -> "IntPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        for i, c in enumerate(other.coeffs):
            a[i] += c
        return IntPolynomial(tuple(a))

    def __sub__(self, other: "IntPolynomial") -> "IntPolynomial":
        return self + other.scale(-1)

    def scale(self, a: int) -> "IntPolynomial":
        return IntPolynomial(tuple(a * c for c in self.coeffs))

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def __pow__(self, n: int) -> "IntPolynomial":
        result = IntPolynomial((1,))
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def evaluate(self, t: float) -> float:
        acc = 0.0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc


def chebyshev_u(n: int) -> IntPolynomial:
    """Second-kind Chebyshev polynomial U_n via U_{n+1} = 2t U_n - U_{n-1}."""
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    u_prev, u = IntPolynomial((1,)), IntPolynomial((0, 2))
    if n == 0:
        return u_prev
    for _ in range(n - 1):
        u_prev, u = u, IntPolynomial((0, 2)) * u - u_prev
    return u


def hecke_multiply(m: int, n: int) -> HeckeExpansion:
    """Expansion of lambda(p^m) lambda(p^n): min(m,n)+1 terms of coefficient 1."""
    if m < 0 or n < 0:
        raise ValueError("basis indices must be >= 0")
    return HeckeExpansion({m + n - 2 * j: 1 for j in range(min(m, n) + 1)})


def hecke_power_table(d: int, n_max: int) -> dict[int, HeckeExpansion]:
    """Expansions of lambda(p^d)^n for 1 <= n <= n_max by repeated multiplication."""
    if d < 1 or n_max < 1:
        raise ValueError("need d >= 1 and n_max >= 1")
    gen = HeckeExpansion({d: 1})
    table = {1: gen}
    for n in range(2, n_max + 1):
        table[n] = table[n - 1] * gen
    return table


def catalan_coefficient(n: int) -> int:
    """Constant term of lambda(p)^n: n!/((n/2)!((n/2)+1)!) for even n, else 0."""
    if n < 0:
        raise ValueError(f"need n >= 0, got {n}")
    if n % 2:
        return 0
    h = n // 2
    return math.factorial(n) // (math.factorial(h) * math.factorial(h + 1))


def power_sum_in_lambda(k: int) -> HeckeExpansion:
    """alpha^k + alpha^{-k} in the lambda(p^j) basis, for unit-determinant
    Satake pairs (alpha, 1/alpha).

    Newton's identities with e1 = lambda(p), e2 = 1 collapse to
    p_k = lambda(p^k) - lambda(p^{k-2}) once re-expanded over the basis.
    """
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if k == 1:
        return HeckeExpansion({1: 1})
    # p_k = lambda(p) p_{k-1} - p_{k-2}, seeded by p_0 = 2, p_1 = lambda(p).
    lam = HeckeExpansion({1: 1})
    prev, cur = HeckeExpansion({0: 2}), lam
    for _ in range(k - 1):
        prev, cur = cur, lam * cur + prev.scale(-1)
    return cur


class Lift(enum.Enum):
    """Closed label vocabulary for the isobaric pieces of the squared weight."""

    CONST = "const"
    SYM4_PI = "sym4_pi"
    SYM2_PI = "sym2_pi"
    SYM2_S1_SYM2_S2 = "sym2_sigma1_x_sym2_sigma2"
    SYM2_S1 = "sym2_sigma1"
    SYM2_S2 = "sym2_sigma2"
    SYM2_PI_S1_S2 = "sym2_pi_x_sigma1_x_sigma2"
    S1_S2 = "sigma1_x_sigma2"
    SYM2_PI_SYM2_S = "sym2_pi_x_sym2_sigma"
    SYM4_S = "sym4_sigma"
    SYM2_S = "sym2_sigma"


def variance_expansion(equal_forms: bool) -> dict[Lift, int]:
    """Decomposition of (lambda_pi(p)^2 + lambda_s1(p) lambda_s2(p))^2 into
    Hecke eigenvalues of lifts, for distinct (False) or equal (True) sigma_i."""
    if equal_forms:
        return {
            Lift.CONST: 6,
            Lift.SYM4_PI: 1,
            Lift.SYM2_PI: 5,
            Lift.SYM2_PI_SYM2_S: 2,
            Lift.SYM4_S: 1,
            Lift.SYM2_S: 5,
        }
    return {
        Lift.CONST: 3,
        Lift.SYM4_PI: 1,
        Lift.SYM2_PI: 3,
        Lift.SYM2_S1_SYM2_S2: 1,
        Lift.SYM2_S1: 1,
        Lift.SYM2_S2: 1,
        Lift.SYM2_PI_S1_S2: 2,
        Lift.S1_S2: 2,
    }


def evaluate_lift(label: Lift, theta_pi: float, theta_s1: float, theta_s2: float) -> float:
    """Numeric value of a lift eigenvalue for unit-circle Satake angles."""

    def lam(theta, j):
        return math.sin((j + 1) * theta) / math.sin(theta)

    match label:
        case Lift.CONST:
            return 1.0
        case Lift.SYM4_PI:
            return lam(theta_pi, 4)
        case Lift.SYM2_PI:
            return lam(theta_pi, 2)
        case Lift.SYM2_S1_SYM2_S2:
            return lam(theta_s1, 2) * lam(theta_s2, 2)
        case Lift.SYM2_S1:
            return lam(theta_s1, 2)
        case Lift.SYM2_S2:
            return lam(theta_s2, 2)
        case Lift.SYM2_PI_S1_S2:
            return lam(theta_pi, 2) * lam(theta_s1, 1) * lam(theta_s2, 1)
        case Lift.S1_S2:
            return lam(theta_s1, 1) * lam(theta_s2, 1)
        case Lift.SYM2_PI_SYM2_S:
            return lam(theta_pi, 2) * lam(theta_s1, 2)
        case Lift.SYM4_S:
            return lam(theta_s1, 4)
        case Lift.SYM2_S:
            return lam(theta_s1, 2)
    raise AssertionError(f"unhandled label {label}")


def monomial_coefficients(exponents: dict[int, int]) -> dict[int, HeckeExpansion]:
    """Per-prime expansions of prod_i lambda(p_i)^{k_i}, keyed like `exponents`.

    The multiplicative coefficients c_{m,n} for a monomial over several primes
    are products of the per-prime entries produced here.
    """
    return {p: hecke_power_table(1, k)[k] for p, k in exponents.items() if k >= 1}
