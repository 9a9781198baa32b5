"""Log-space evaluation of the probability estimates behind the lower bound.

n enters only through ``L = log2(n)`` so the estimates can be checked at
sizes far beyond anything that could be sampled. Every value is a base-2
logarithm. Quantities such as ``log2(exp(-n**0.9995 / 9))`` overflow a double
once L passes about 1000, so those are carried as :mod:`mpmath` numbers;
everything polynomial in L stays in floats.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import mpmath

from .certificates import PAPER, ParameterProfile

mpmath.mp.dps = 30

LOG2E = math.log2(math.e)


def log2_sum(values: Iterable[float]) -> float:
    """log2(sum(2**v)) without overflow."""
    vals = list(values)
    if not vals:
        return -math.inf
    top = max(vals)
    if top == -math.inf:
        return top
    return top + math.log2(math.fsum(2.0 ** (v - top) for v in vals))


def log2_binom(k: float, i: float) -> float:
    """log2 C(k, i) for real k >= i >= 0 via log-gamma."""
    return (math.lgamma(k + 1) - math.lgamma(i + 1) - math.lgamma(k - i + 1)) / math.log(2)


@dataclass(frozen=True, order=True)
class LogProb:
    """A probability or expectation held as its base-2 logarithm."""

    value: float

    def __mul__(self, other: "LogProb") -> "LogProb":
        return LogProb(self.value + other.value)

    def __add__(self, other: "LogProb") -> "LogProb":
        return LogProb(log2_sum([self.value, other.value]))

    def __truediv__(self, other: "LogProb") -> "LogProb":
        return LogProb(self.value - other.value)

    def prob(self) -> float:
        return 2.0**self.value

    def __float__(self) -> float:
        return float(self.value)


def chernoff_upper(x: int, y: int, dev: float) -> LogProb:
    """log2 of exp(-2 dev^2 x y): upper tail of Bin(xy, 1/2) at (1/2 + dev) xy."""
    if x < 1 or y < 1:
        raise ValueError("x and y must be >= 1")
    if not 0 < dev <= 0.5:
        raise ValueError("dev must lie in (0, 1/2]")
    return LogProb(-2 * dev * dev * x * y * LOG2E)


def hypergeometric_tail(population: int, successes: int, draws: int, dev: float) -> LogProb:
    """Hoeffding bound log2 exp(-2 dev^2 draws) for a hypergeometric deviation of dev*draws.

    Sampling without replacement is at least as concentrated as with
    replacement, so the binomial Hoeffding exponent applies unchanged.
    """
    if not 0 <= draws <= population or not 0 <= successes <= population:
        raise ValueError("need draws <= population and successes <= population")
    if dev <= 0:
        raise ValueError("dev must be positive")
    return LogProb(-2 * dev * dev * draws * LOG2E)


def binomial_upper_tail_exact(trials: int, threshold: float) -> float:
    """P(Bin(trials, 1/2) >= threshold) by direct summation."""
    start = max(0, math.ceil(threshold - 1e-12))
    return math.fsum(math.comb(trials, j) for j in range(start, trials + 1)) / 2**trials


def lower_bound_coefficient(p: float) -> float:
    """1 / log2(1/p): how the Ω(log n) constant scales with edge density p."""
    if not 0 < p < 1:
        raise ValueError("p must lie in (0, 1)")
    return 1.0 / math.log2(1.0 / p)


@dataclass
class BoundReport:
    name: str
    L: float
    params: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)

    def rows(self) -> list[tuple]:
        out = [(self.L, k, _fmt(v), "") for k, v in self.params.items()]
        out += [(self.L, k, _fmt(v), "") for k, v in self.values.items()]
        out += [(self.L, k, "", "holds" if ok else "fails") for k, ok in self.verdicts.items()]
        return out

    def all_hold(self) -> bool:
        return all(self.verdicts.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "L": self.L,
            "params": {k: _fmt(v) for k, v in self.params.items()},
            "values": {k: _fmt(v) for k, v in self.values.items()},
            "verdicts": dict(self.verdicts),
        }

    def table(self) -> str:
        rows = [("expression", "log2_value", "verdict")] + [r[1:] for r in self.rows()]
        w0 = max(len(r[0]) for r in rows)
        w1 = max(len(r[1]) for r in rows)
        lines = [f"# {self.name}  L={_fmt(self.L)}"]
        lines += [f"{a:<{w0}}  {b:>{w1}}  {c}".rstrip() for a, b, c in rows]
        return "\n".join(lines) + "\n"


def _fmt(v) -> str:
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, mpmath.mpf):
        return mpmath.nstr(v, 12)
    if isinstance(v, float):
        return repr(round(v, 10))
    return str(v)


CSV_COLUMNS = ("L", "expression", "log2_value", "verdict")


def reports_to_csv(reports: Sequence[BoundReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(("report",) + CSV_COLUMNS)
    for rep in reports:
        for row in rep.rows():
            w.writerow((rep.name, _fmt(row[0])) + row[1:])
    return buf.getvalue()


def _bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    """Root of an increasing-through-zero ``f`` on [lo, hi] (f(lo) < 0 < f(hi))."""
    if f(lo) >= 0:
        return lo
    if f(hi) < 0:
        return math.inf
    for _ in range(iters):
        mid = (lo + hi) / 2
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return hi


def _pow2(x: float) -> mpmath.mpf:
    return mpmath.power(2, mpmath.mpf(x))


def lemma21_bounds(L: float, profile: ParameterProfile = PAPER) -> BoundReport:
    """Union bound for "every small S leaves many vertices untouched".

    ``total`` is log2 of n^(log n) * exp(-n^0.9995 / 9): the number of sets S
    times the per-set failure probability.
    """
    L = float(L)
    if L < 1:
        raise ValueError("L must be >= 1")
    s = profile.class_coeff * L
    rep = BoundReport("lemma21", L, {"s": s})
    # (n - s) 2^-s with n = 2^L
    expect = L + math.log2(1 - s * 2.0**-L) - s
    threshold = profile.indep_exp * L + math.log2(L)
    tail = -_pow2(profile.indep_exp_hi * L) / 9 * LOG2E
    set_count = L * L
    set_sum = 1 + s * L
    total = set_count + tail
    # threshold < expectation / 2 reduces to (1 - class_coeff - indep_exp) L > log2(L) + 1
    gap = 1 - profile.class_coeff - profile.indep_exp
    half_cross = _bisect(lambda t: gap * t - math.log2(t) - 1, 2.0, 1e12) if gap > 0 else math.inf
    rep.values.update(
        log2_expectation=expect,
        log2_expectation_claim=profile.indep_exp_hi * L,
        log2_threshold=threshold,
        log2_tail=tail,
        half_expectation_crossover_L=half_cross,
        log2_set_count_sum=set_sum,
        log2_set_count=set_count,
        total=total,
    )
    rep.verdicts.update(
        threshold_below_half_expectation=threshold < expect - 1,
        set_count_chain=set_sum < set_count,
        union_total_negative=bool(total < 0),
    )
    return rep


# exponent in the closed-form dense-neighbour union bound
LEMMA22_CLOSED_FORM_EXPONENT = 0.002


def lemma22_bounds(L: float, profile: ParameterProfile = PAPER) -> BoundReport:
    """Union bound for "few outside vertices have many neighbours in Y".

    ``total`` is the closed form: log2 of n^(log n / 4) *
    n^(-0.002 n^0.999), plus log2(n) for the number of summands.
    ``step_total`` redoes the intermediate step without dropping the factor e per
    summand; it only turns negative once L is above ``step_crossover_L``.
    """
    L = float(L)
    if L < 1:
        raise ValueError("L must be >= 1")
    x = profile.bad_count_coeff * L
    dev = 0.5 - profile.bad_frac
    chern = 2 * dev * dev
    y0 = _pow2(profile.indep_exp * L)
    dominant = L * x - LEMMA22_CLOSED_FORM_EXPONENT * L * y0
    total = dominant + L
    # per-element base e * n^(1 - indep_exp) * exp(-chern' x), chern' rounded down to 0.016
    base_coeff = (1 - profile.indep_exp) - 0.016 * profile.bad_count_coeff * LOG2E
    log2_base = LOG2E + base_coeff * L
    step_total = L + L * x + y0 * log2_base
    crossover = LOG2E / (-LEMMA22_CLOSED_FORM_EXPONENT - base_coeff) if base_coeff < -LEMMA22_CLOSED_FORM_EXPONENT else math.inf
    rep = BoundReport("lemma22", L, {"x": x, "dev": dev})
    rep.values.update(
        chernoff_coeff=chern,
        log2_base=log2_base,
        log2_dominant=dominant,
        total=total,
        step_total=step_total,
        step_crossover_L=crossover,
    )
    rep.verdicts.update(
        chernoff_rounding=chern > 0.016,
        union_total_negative=bool(total < 0),
        step_base_below_closed_form=log2_base <= -LEMMA22_CLOSED_FORM_EXPONENT * L,
        step_total_negative=bool(step_total < 0),
    )
    return rep


def janson_crossover(profile: ParameterProfile = PAPER, power: float = 10.0) -> float:
    """Positive root of log2(mu) = power * L, log2(mu) = a L^2 + b L."""
    a = profile.k_coeff * profile.m_exp - profile.k_coeff**2 / 2
    b = profile.k_coeff / 2
    return (power - b) / a


def janson_report(L: float, profile: ParameterProfile = PAPER) -> BoundReport:
    """Expectation, second-moment and final-probability bookkeeping for the clique family.

    Verdicts:
    (a) log2 mu >= 10 L;
    (b) Delta / mu^2 <= (1 + eps) k^2 / m^2 with eps <= 0.01;
    (c) log2(2^n exp(-mu^2 / 2 Delta)) < 0;
    (d) s log2(miss_base) < -1.1 L.
    """
    L = float(L)
    if L < 2:
        raise ValueError("L must be >= 2")
    k = profile.k_coeff * L
    r = profile.bad_count_coeff * L
    s = profile.s_coeff * L
    lm = profile.m_exp * L
    log2_k = math.log2(k)
    rep = BoundReport("janson", L, {"k": k, "r": r, "s": s, "log2_m": lm})

    log2_mu = k * lm - k * (k - 1) / 2
    i_max = math.floor(k - 1 + 1e-9)
    terms = {i: log2_binom(k, i) + i * (i - 1) / 2 - i * lm for i in range(2, i_max + 1)}
    ratio = log2_sum(terms.values())
    k2m2 = 2 * log2_k - 2 * lm
    eps = 2.0 ** (ratio - k2m2) - 1 if terms else -1.0

    def case_bound(i: int) -> float:
        # (k 2^(i/2) / m)^i
        return i * (log2_k + i / 2 - lm)

    case2 = [i for i in terms if 3 <= i < 100]
    case3 = [i for i in terms if 100 <= i <= k - 2]
    case2_ok = all(terms[i] <= case_bound(i) + 1e-9 for i in case2)
    case2_stated = 3 * (log2_k + 50 - lm)
    case3_stated = 100 * (log2_k + (k - 2) / 2 - lm)

    log2_mu2_over_2delta = -1 - ratio
    final = _pow2(L) - _pow2(log2_mu2_over_2delta) * LOG2E
    miss = s * math.log2(profile.miss_base)

    rep.values.update(
        log2_mu=log2_mu,
        log2_mu_stated_chain=0.03 * k * L,
        crossover_L=janson_crossover(profile),
        log2_delta_over_mu2=ratio,
        log2_k2_over_m2=k2m2,
        eps=eps,
        case1_term=terms.get(2, -math.inf),
        case2_max_term=max((terms[i] for i in case2), default=-math.inf),
        case2_stated_bound=case2_stated,
        case3_max_term=max((terms[i] for i in case3), default=-math.inf),
        case3_stated_bound=case3_stated,
        log2_mu2_over_2delta=log2_mu2_over_2delta,
        log2_m2_over_2k2=2 * lm - 1 - 2 * log2_k,
        final_exponent=final,
        miss_coeff=profile.s_coeff * math.log2(profile.miss_base),
        log2_miss=miss,
        log2_miss_times_k=log2_k + miss,
        log2_miss_times_n=L + miss,
    )
    rep.verdicts.update(
        a_mu_above_n10=log2_mu >= 10 * L,
        a_stated_chain=log2_mu >= 0.03 * k * L,
        b_ratio_eps=eps <= 0.01,
        case1=terms.get(2, -math.inf) <= k2m2 + 1e-9,
        case2=case2_ok and all(terms[i] <= case2_stated + 1e-9 for i in case2),
        case3=all(terms[i] <= case3_stated + 1e-9 for i in case3),
        c_final_negative=bool(final < 0),
        d_miss_below_n_minus_1_1=miss < -1.1 * L,
        miss_correction_small=log2_k + miss <= math.log2(0.01),
    )
    return rep
