"""Deterministic evaluator of the conditional bound assembly: central-value
upper-bound terms, mean/variance targets, moment-parameter selection with
admissibility flags, the Gaussian integral, and the V-range bound table.

The paper-side constants (A, C, B, c(eps)) only exist asymptotically; they are
configuration inputs here, with defaults documented in BoundConfig.  The range
table is a desk-scale bookkeeping device: it reproduces the exponent
arithmetic -3/8 / -1/4 and the relative weight of the V-ranges, not the
theorem itself.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np
from scipy.integrate import quad

from .hecke import power_sum_in_lambda
from .primes import primes_up_to

__all__ = [
    "BoundConfig",
    "RangeRecord",
    "RangeReport",
    "XZKChoice",
    "chandee_rhs",
    "choose_x_z_k",
    "gaussian_integral",
    "mean_variance_targets",
    "power_sum_coefficients",
    "range_table_bound",
    "stirling_factorial_check",
    "watson_ichino_prefactor",
]

RANGE_NAMES = ("small", "bulk_p<z", "bulk_z<=p<x", "large", "higher_order", "tail")


@dataclass(frozen=True)
class BoundConfig:
    """Evaluation parameters.

    q is the level scale; epsilon the slack exponent.  A is the conditional
    upper-bound constant, C the range-splitting constant, B the conductor-term
    constant, c_eps the per-range decay constant (the sources only assert its
    existence).  delta_floor keeps the slowly-growing quantity
    Delta = logloglog q above 1 at desk scale, where the literal value has not
    yet left (0, 1); the floor is inactive for q > ~4e10 ... e^(e^(e^4)).
    """

    q: float
    epsilon: float
    equal_forms: bool = False
    A: float = 2.0
    C: float = 6.0
    B: float = 1.0
    c_eps: float = 1.0
    delta_floor: float = 4.0
    mass_constant: float = 1.0

    def __post_init__(self):
        if self.q < 16:
            raise ValueError("need q >= 16 so that logloglog q is defined")
        if not 0 < self.epsilon < 0.01:
            raise ValueError("epsilon must lie in (0, 1/100)")

    @property
    def log_q(self) -> float:
        return math.log(self.q)

    @property
    def loglog_q(self) -> float:
        return math.log(self.log_q)

    @property
    def delta(self) -> float:
        """Slowly growing range parameter, floored at desk scale."""
        return max(math.log(self.loglog_q), self.delta_floor)

    @property
    def mu_q(self) -> float:
        return (-2.0 if self.equal_forms else -1.5) * self.loglog_q

    @property
    def var_q(self) -> float:
        return (6.0 if self.equal_forms else 3.0) * self.loglog_q

    @property
    def v_max(self) -> float:
        return self.A * self.log_q / self.loglog_q


class MeanVarianceTargets(NamedTuple):
    mean_coefficient: Fraction
    variance_coefficient: Fraction
    exponent: Fraction


def mean_variance_targets(equal_forms: bool) -> MeanVarianceTargets:
    """Exact rational loglog-coefficients and the lognormal half-moment
    exponent mu/2 + var/8: -3/8 for distinct forms, -1/4 for equal forms."""
    mu = Fraction(-2) if equal_forms else Fraction(-3, 2)
    var = Fraction(6) if equal_forms else Fraction(3)
    return MeanVarianceTargets(mu, var, mu / 2 + var / 8)


def power_sum_coefficients(n: int) -> dict[int, int]:
    """c(m, n) with alpha^n + alpha^{-n} = sum_m c(m,n) lambda(p^m), from the
    exact Hecke power-sum expansion (no hand-entered table)."""
    return dict(power_sum_in_lambda(n).coeffs)


def chandee_rhs(
    lam1: dict[int, float],
    lam2: dict[int, float],
    lam3: dict[int, float],
    x: int,
    excluded: frozenset[int] | set[int] = frozenset(),
    log_conductor: float = 0.0,
    conductor_constant: float = 10.0,
) -> dict[str, float]:
    """Evaluate the prime-power terms of the conditional central-value bound.

    lam_i map p -> lambda(p); eigenvalues at p^m come from the three-term
    recurrence.  Returns the per-depth sums S_{n/2}, the conductor term and
    their total.  The n = 1 layer uses all three lambda's; for n >= 2 the
    third factor drops its m = 0 term.
    """
    logx = math.log(x)
    ps = [int(p) for p in primes_up_to(x) if int(p) not in excluded]

    def lam_powers(lam: dict[int, float], p: int, n: int) -> list[float]:
        l1 = lam[p]
        vals = [1.0, l1]
        for _ in range(n - 1):
            vals.append(l1 * vals[-1] - vals[-2])
        return vals

    out = {"S_1/2": 0.0}
    for p in ps:
        damp = p ** (-0.5 - 1.0 / logx) * math.log(x / p) / logx
        out["S_1/2"] += lam1[p] * lam2[p] * lam3[p] * damp

    for n in range(2, 6):
        key = f"S_{n}/2"
        out[key] = 0.0
        c = power_sum_coefficients(n)
        for p in ps:
            if p**n > x:
                break
            v1 = lam_powers(lam1, p, n)
            v2 = lam_powers(lam2, p, n)
            v3 = lam_powers(lam3, p, n)
            f1 = sum(cm * v1[m] for m, cm in c.items())
            f2 = sum(cm * v2[m] for m, cm in c.items())
            f3 = sum(cm * v3[m] for m, cm in c.items() if m >= 1)
            damp = p ** (-0.5 * n - n / logx) * math.log(x / p**n) / logx
            out[key] += f1 * f2 * f3 * damp / n
    out["conductor_term"] = conductor_constant * log_conductor / logx
    out["total"] = sum(out.values())
    return out


@dataclass(frozen=True)
class XZKChoice:
    x: float
    z: float
    k: int
    log_x: float
    log_z: float
    admissible: bool  # k log z (bulk) or k log x (other ranges) small enough
    x_above_log_power: bool  # x >= (log q)^{9/eps}

    def as_dict(self) -> dict:
        return {
            "log_x": self.log_x,
            "log_z": self.log_z,
            "k": self.k,
            "admissible": self.admissible,
            "x_above_log_power": self.x_above_log_power,
        }


def choose_x_z_k(V: float, cfg: BoundConfig, range_name: str) -> XZKChoice:
    """Moment parameters for a V in the given range.

    log x = 9 A log q/(eps V), z = x^{1/Delta^2}; in the bulk
    k = floor((1-(C+1)eps)^2/(1+eps) V^2/(2 var_q)), elsewhere
    k = floor(eps V/(900 A)).  The bulk admissibility flag k log z < log q/2
    is honest bookkeeping: it only turns true at astronomically large q.
    """
    if range_name not in RANGE_NAMES:
        raise ValueError(f"unknown range {range_name!r}")
    if range_name in ("small", "tail"):
        raise ValueError(f"no moment parameters are chosen in the {range_name} range")
    lo, hi = _range_interval(cfg, range_name)
    if not lo - 1e-12 <= V <= hi + 1e-12:
        raise ValueError(f"V = {V} outside the {range_name} interval [{lo}, {hi}]")

    eps, A = cfg.epsilon, cfg.A
    log_x = 9.0 * A * cfg.log_q / (eps * V)
    log_z = log_x / cfg.delta**2
    if range_name == "bulk_p<z":
        k = int((1.0 - (cfg.C + 1.0) * eps) ** 2 / (1.0 + eps) * V * V / (2.0 * cfg.var_q))
        admissible = k * log_z < 0.5 * cfg.log_q
    else:
        k = int(eps * V / (900.0 * A))
        admissible = k * log_x <= cfg.log_q / 100.0
    x_flag = log_x >= (9.0 / eps) * cfg.loglog_q
    return XZKChoice(math.exp(min(log_x, 700.0)), math.exp(min(log_z, 700.0)), k, log_x, log_z, admissible, x_flag)


def gaussian_integral(alpha: float, beta: float) -> tuple[float, float]:
    """(closed form, adaptive quadrature) of int e^{-alpha x^2 + beta x} dx."""
    if alpha <= 0:
        raise ValueError("need alpha > 0")
    closed = math.exp(beta * beta / (4.0 * alpha)) * math.sqrt(math.pi / alpha)
    center = beta / (2.0 * alpha)
    width = 40.0 / math.sqrt(alpha)
    val, _ = quad(
        lambda t: math.exp(-alpha * t * t + beta * t),
        center - width,
        center + width,
        epsabs=1e-13 * closed,
        epsrel=1e-13,
        limit=200,
    )
    return closed, val


def stirling_factorial_check(k_max: int) -> bool:
    """(2k)!/k! <= sqrt(2) (4k/e)^k for 1 <= k <= k_max, exact LHS."""
    if not 1 <= k_max <= 170:
        raise ValueError("need 1 <= k_max <= 170")
    for k in range(1, k_max + 1):
        lhs = math.factorial(2 * k) // math.factorial(k)
        log_rhs = 0.5 * math.log(2.0) + k * (math.log(4.0 * k) - 1.0)
        if math.log(lhs) > log_rhs:
            return False
    return True


def watson_ichino_prefactor(
    case: str, q: int, eta: int | None = None, delta: int = 0
) -> tuple[Fraction, Fraction]:
    """(C_q, C_inf) for the three level configurations.

    case: 'level1' (all forms at level one), 'mixed' (one level-one form, two
    newforms), 'all_new' (three newforms; eta is the product of their
    involution eigenvalues).  C_inf = (1 - delta)/2 for total parity delta.
    """
    if delta not in (0, 1):
        raise ValueError("parity must be 0 or 1")
    c_inf = Fraction(1 - delta, 2)
    if case == "level1":
        return Fraction(1), c_inf
    if case == "mixed":
        return Fraction(1, q), c_inf
    if case == "all_new":
        if eta not in (1, -1):
            raise ValueError("all_new requires the involution sign eta = +-1")
        return Fraction(q + 1, q * q) * (1 + eta), c_inf
    raise ValueError(f"unknown case {case!r}")


@dataclass
class RangeRecord:
    name: str
    v_lo: float
    v_hi: float
    contribution: float  # integral of e^{V/2} * bound over the interval, /q
    k: int | None = None
    log_x: float | None = None
    log_z: float | None = None

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "v_interval": [self.v_lo, self.v_hi],
            "contribution": self.contribution,
            "k": self.k,
            "log_x": self.log_x,
            "log_z": self.log_z,
        }


@dataclass
class RangeReport:
    config: dict
    ranges: list[RangeRecord]
    mu_q: float
    var_q: float
    final_bound_over_q: float
    reference_over_q: float  # sqrt(var) e^{mu/2 + var/8}
    ratio: float
    exponent: float  # prefactor-corrected loglog exponent
    exponent_raw: float
    target_exponent: float

    def as_dict(self) -> dict:
        d = {
            "config": self.config,
            "ranges": [r.as_dict() for r in self.ranges],
            "mu_q": self.mu_q,
            "var_q": self.var_q,
            "final_bound_over_q": self.final_bound_over_q,
            "reference_over_q": self.reference_over_q,
            "ratio": self.ratio,
            "exponent": self.exponent,
            "exponent_raw": self.exponent_raw,
            "target_exponent": self.target_exponent,
        }
        return d


def _range_interval(cfg: BoundConfig, name: str) -> tuple[float, float]:
    d, var, vmax = cfg.delta, cfg.var_q, cfg.v_max
    lo_all = var / d
    if name == "small":
        return -math.inf, lo_all
    if name in ("bulk_p<z", "bulk_z<=p<x"):
        return lo_all, min(d * var, vmax)
    if name == "large":
        return max(d * var, lo_all), vmax
    if name == "higher_order":
        return lo_all, vmax
    if name == "tail":
        return lo_all, vmax
    raise ValueError(f"unknown range {name!r}")


def _log_bound(cfg: BoundConfig, name: str, V: float) -> float:
    """log of the per-range tail bound on the cumulative counting function,
    normalized by q (the trivial spectral mass caps everything at log(mass))."""
    eps, d = cfg.epsilon, cfg.delta
    if name == "small":
        return 0.0
    if name == "bulk_p<z":
        return -(1.0 - (2.0 * cfg.C + 3.0) * eps) * V * V / (2.0 * cfg.var_q)
    if name == "bulk_z<=p<x":
        return -cfg.c_eps * d * V
    if name == "large":
        return -cfg.c_eps * V * math.log(d)
    if name == "higher_order":
        return -cfg.c_eps * V * math.log(max(V, math.e))
    if name == "tail":
        return -100.0 * cfg.log_q
    raise ValueError(f"unknown range {name!r}")


def range_table_bound(cfg: BoundConfig) -> RangeReport:
    """Assemble the V-integral sum over the six ranges of the bound table.

    Produces (1/2) e^{(1-eps) mu_q/2} sum_r q int e^{V/2} B_r(V) dV with the
    per-range bounds B_r capped by the spectral mass, compares it against
    q sqrt(var_q) e^{mu_q/2 + var_q/8}, and reports the loglog exponent of the
    bound with the sqrt(2 pi var) prefactor divided out.
    """
    var, vmax = cfg.var_q, cfg.v_max
    lo_all = var / cfg.delta
    if not lo_all < vmax:
        raise ValueError("empty V-range: increase q or the constant A")

    records: list[RangeRecord] = []
    total = 0.0
    for name in RANGE_NAMES:
        lo, hi = _range_interval(cfg, name)
        if name == "small":
            contribution = 2.0 * cfg.mass_constant * math.exp(lo / 2.0)
            records.append(RangeRecord(name, lo, hi, contribution))
            total += contribution
            continue
        if hi <= lo:
            records.append(RangeRecord(name, lo, hi, 0.0))
            continue
        grid = np.linspace(lo, hi, 4001)
        logs = 0.5 * grid + np.minimum(
            np.array([_log_bound(cfg, name, v) for v in grid]), math.log(cfg.mass_constant)
        )
        vals = np.exp(logs)
        contribution = float(np.trapz(vals, grid))
        rec = RangeRecord(name, lo, hi, contribution)
        if name not in ("tail",):
            v_star = float(grid[int(np.argmax(vals))])
            choice = choose_x_z_k(v_star, cfg, name)
            rec.k, rec.log_x, rec.log_z = choice.k, choice.log_x, choice.log_z
        records.append(rec)
        total += contribution

    prefactor = 0.5 * math.exp((1.0 - cfg.epsilon) * cfg.mu_q / 2.0)
    final_over_q = prefactor * total
    reference = math.sqrt(var) * math.exp(cfg.mu_q / 2.0 + var / 8.0)
    ratio = final_over_q / reference
    exponent_raw = math.log(final_over_q) / cfg.loglog_q
    exponent = math.log(final_over_q / (0.5 * math.sqrt(2.0 * math.pi * var))) / cfg.loglog_q
    target = float(mean_variance_targets(cfg.equal_forms).exponent)
    return RangeReport(
        config={
            "q": cfg.q,
            "epsilon": cfg.epsilon,
            "equal_forms": cfg.equal_forms,
            "A": cfg.A,
            "C": cfg.C,
            "B": cfg.B,
            "c_eps": cfg.c_eps,
            "delta_floor": cfg.delta_floor,
            "delta": cfg.delta,
        },
        ranges=records,
        mu_q=cfg.mu_q,
        var_q=var,
        final_bound_over_q=final_over_q,
        reference_over_q=reference,
        ratio=ratio,
        exponent=exponent,
        exponent_raw=exponent_raw,
        target_exponent=target,
    )
