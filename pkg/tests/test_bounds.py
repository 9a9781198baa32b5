import math

import mpmath
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cliquechrom.bounds import (
    LogProb,
    binomial_upper_tail_exact,
    chernoff_upper,
    hypergeometric_tail,
    janson_crossover,
    janson_report,
    lemma21_bounds,
    lemma22_bounds,
    log2_binom,
    log2_sum,
    lower_bound_coefficient,
    reports_to_csv,
)

LOG2E = 1 / math.log(2)


def test_log2_sum_matches_direct():
    vals = [-3.0, 0.5, 2.0]
    assert log2_sum(vals) == pytest.approx(math.log2(sum(2**v for v in vals)))
    assert log2_sum([-1e9, -1e9]) == pytest.approx(-1e9 + 1)
    assert log2_sum([]) == -math.inf


def test_logprob_arithmetic():
    a, b = LogProb(-2.0), LogProb(-3.0)
    assert (a * b).value == -5.0
    assert (a + b).prob() == pytest.approx(0.25 + 0.125)
    assert (a / b).value == 1.0


def test_log2_binom_integer_points():
    for k in range(1, 30):
        for i in range(k + 1):
            assert log2_binom(k, i) == pytest.approx(math.log2(math.comb(k, i)), abs=1e-9)


# --- chernoff -----------------------------------------------------------------------


def test_chernoff_examples():
    assert chernoff_upper(5, 1000, 0.09).value == pytest.approx(-81 * LOG2E, rel=1e-12)
    assert chernoff_upper(5, 1000, 0.09).value == pytest.approx(-116.858, abs=1e-3)
    assert chernoff_upper(1, 1, 0.09).value == pytest.approx(-0.0162 * LOG2E)
    assert chernoff_upper(1, 1, 0.09).value == pytest.approx(-0.02337, abs=1e-5)


def test_chernoff_beats_rounded_exponent():
    for x in range(1, 40):
        for y in (1, 10, 100, 1000, 10**6):
            assert chernoff_upper(x, y, 0.09).value < -0.016 * x * y * LOG2E


@pytest.mark.parametrize("args", [(0, 1, 0.1), (1, 0, 0.1), (1, 1, 0.0), (1, 1, 0.6)])
def test_chernoff_domain(args):
    with pytest.raises(ValueError):
        chernoff_upper(*args)


@given(st.integers(1, 20), st.integers(1, 20), st.floats(0.01, 0.5))
def test_chernoff_dominates_exact_tail(x, y, dev):
    t = x * y
    if t > 20:
        return
    exact = binomial_upper_tail_exact(t, (0.5 + dev) * t)
    assert 2 ** chernoff_upper(x, y, dev).value >= exact - 1e-15


def test_exact_tail_against_numpy():
    gen = np.random.default_rng(0)
    draws = gen.binomial(20, 0.5, size=200_000)
    assert binomial_upper_tail_exact(20, 14) == pytest.approx(np.mean(draws >= 14), abs=3e-3)


# --- hypergeometric --------------------------------------------------------------------


def test_hypergeometric_example():
    v = hypergeometric_tail(1000, 405, 100, 0.005).value
    assert v == pytest.approx(-2 * 0.000025 * 100 * LOG2E)
    assert v == pytest.approx(-0.0072, abs=1e-4)


def test_hypergeometric_domain():
    with pytest.raises(ValueError):
        hypergeometric_tail(1000, 405, 100, 0.0)
    with pytest.raises(ValueError):
        hypergeometric_tail(10, 5, 11, 0.1)


def test_hypergeometric_decreasing_in_draws():
    vals = [hypergeometric_tail(10**4, 5000, d, 0.05).value for d in range(1, 200)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


# --- lower-bound coefficient ------------------------------------------------------------


def test_lower_bound_coefficient():
    assert lower_bound_coefficient(0.5) == pytest.approx(1.0)
    assert lower_bound_coefficient(0.25) == pytest.approx(0.5)
    assert lower_bound_coefficient(0.1) == pytest.approx(1 / math.log2(10))
    ps = [0.9, 0.5, 0.1, 1e-3, 1e-9]
    cs = [lower_bound_coefficient(p) for p in ps]
    assert all(a > b for a, b in zip(cs, cs[1:]))
    for bad in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            lower_bound_coefficient(bad)


# --- independence union bound ------------------------------------------------------------


def test_lemma21_at_20():
    rep = lemma21_bounds(20)
    second = -(2**19.99) / 9 * LOG2E
    assert float(rep.values["log2_tail"]) == pytest.approx(second, rel=1e-9)
    assert float(rep.values["log2_tail"]) == pytest.approx(-1.68e5, rel=0.01)
    assert float(rep.values["total"]) == pytest.approx(400 + second, rel=1e-9)
    assert rep.verdicts["union_total_negative"]


def test_lemma21_small_L_reports():
    rep = lemma21_bounds(2)
    assert set(rep.verdicts) >= {"union_total_negative"}


def test_lemma21_decreasing_from_10():
    Ls = np.linspace(10, 400, 300)
    totals = [lemma21_bounds(L).values["total"] for L in Ls]
    assert all(a > b for a, b in zip(totals, totals[1:]))


def test_lemma21_half_expectation_crossover():
    rep = lemma21_bounds(100)
    cross = rep.values["half_expectation_crossover_L"]
    g = 1 - 1 / 2000 - 0.999
    assert g * cross == pytest.approx(math.log2(cross) + 1, rel=1e-9)
    assert not rep.verdicts["threshold_below_half_expectation"]
    assert lemma21_bounds(cross * 1.01).verdicts["threshold_below_half_expectation"]


# --- dense-neighbour union bound ---------------------------------------------------------


def test_lemma22_at_20():
    rep = lemma22_bounds(20)
    expected = 20 * (5 - 0.002 * 2 ** (0.999 * 20))
    assert rep.values["log2_dominant"] == pytest.approx(float(expected), rel=1e-9)
    assert rep.values["log2_dominant"] < -4e4
    assert rep.verdicts["union_total_negative"]
    assert rep.verdicts["chernoff_rounding"]


def test_lemma22_small_L_reports():
    rep = lemma22_bounds(4)
    assert "union_total_negative" in rep.verdicts


def test_lemma22_step_crossover():
    cross = lemma22_bounds(100).values["step_crossover_L"]
    assert 400 < cross < 700
    assert not lemma22_bounds(cross - 1).verdicts["step_base_below_closed_form"]
    assert lemma22_bounds(cross + 1).verdicts["step_base_below_closed_form"]


# --- second-moment bookkeeping ----------------------------------------------------------


def test_janson_at_200():
    rep = janson_report(200)
    v = rep.values
    assert v["log2_mu"] == pytest.approx(0.076 * 200**2 + 0.95 * 200)
    assert v["log2_mu"] == pytest.approx(3230)
    assert rep.verdicts["a_mu_above_n10"]
    assert v["log2_mu_stated_chain"] == pytest.approx(0.057 * 200**2)
    assert rep.verdicts["a_stated_chain"]
    assert v["miss_coeff"] == pytest.approx(1.65 * math.log2(0.6))
    assert v["miss_coeff"] == pytest.approx(-1.216, abs=5e-4)
    assert rep.verdicts["d_miss_below_n_minus_1_1"]
    assert rep.verdicts["b_ratio_eps"] and abs(v["eps"]) <= 0.01
    assert rep.verdicts["c_final_negative"]
    assert all(rep.verdicts[c] for c in ("case1", "case2", "case3"))


def test_janson_case2_term_at_200():
    k, lm = 1.9 * 200, 0.99 * 200
    bound = 3 * (math.log2(k) + 1.5 - lm)
    assert bound == pytest.approx(-563.8, abs=0.5)
    term = janson_report(200).values["case2_max_term"]
    assert term <= bound
    assert term == pytest.approx(log2_binom(k, 3) + 3 - 3 * lm)


def test_janson_ratio_terms_by_direct_sum():
    L = 80
    rep = janson_report(L)
    k, lm = 1.9 * L, 0.99 * L
    mpmath.mp.dps = 50
    total = mpmath.fsum(
        mpmath.binomial(k, i) * mpmath.power(2, i * (i - 1) / 2 - i * lm) for i in range(2, int(k - 1) + 1)
    )
    assert rep.values["log2_delta_over_mu2"] == pytest.approx(float(mpmath.log(total, 2)), rel=1e-9)
    mpmath.mp.dps = 30


def test_janson_crossover():
    assert janson_crossover() == pytest.approx(9.05 / 0.076)
    assert janson_crossover() <= 131
    Ls = np.arange(2, 400, 0.01)
    first = next(L for L in Ls if janson_report(L).verdicts["a_mu_above_n10"])
    assert abs(first - janson_crossover()) < 0.02


def test_janson_eps_small_from_60():
    for L in range(60, 1001, 10):
        assert janson_report(L).values["eps"] <= 0.01


def test_janson_miss_verdict_all_L():
    for L in (2, 5, 50, 500, 5000):
        assert janson_report(L).verdicts["d_miss_below_n_minus_1_1"]


def test_no_overflow_to_1e4():
    for L in (2, 10, 100, 1000, 5000, 10**4):
        for rep in (lemma21_bounds(L), lemma22_bounds(L), janson_report(L)):
            for val in rep.values.values():
                assert not (isinstance(val, float) and math.isnan(val))
            assert rep.to_dict()["L"] == L


def test_reports_pure_and_serialisable():
    a, b = janson_report(150), janson_report(150)
    assert a.to_dict() == b.to_dict()
    text = reports_to_csv([a, lemma21_bounds(150)])
    assert text.splitlines()[0] == "report,L,expression,log2_value,verdict"
    assert "a_mu_above_n10" in a.table()
