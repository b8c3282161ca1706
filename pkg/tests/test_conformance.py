import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from benfordkit.conformance import (
    analyze, digit_histogram, hill_mixture_fit, ks_cdf, ks_noise, ks_noise_two_sample, ks_to_benford,
    ks_two_sample, ks_uniform, rank_bound_check, tv_to_uniform,
)
from benfordkit.distributions import CombVariate, UnitDistribution, triangular_unit, uniform_unit


def _brute_ks(u):
    u = np.sort(u)
    t = np.concatenate([u, u - 1e-13])
    emp = np.searchsorted(u, t, side="right") / u.size
    return np.max(np.abs(emp - t))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 0.999999), min_size=1, max_size=50))
def test_ks_uniform_matches_brute_force(values):
    u = np.array(values)
    assert ks_uniform(u) == pytest.approx(_brute_ks(u), abs=1e-9)
    assert 0 <= ks_uniform(u) <= 1


def test_ks_noise_levels():
    assert ks_noise(10**6) == pytest.approx(0.00163)
    assert ks_noise_two_sample(10**6) == pytest.approx(1.63 * math.sqrt(2e-6))


def test_ks_two_sample_properties():
    rng = np.random.default_rng(0)
    x, y = rng.random(1000), rng.random(700)
    assert ks_two_sample(x, y) == ks_two_sample(y, x)
    assert ks_two_sample(x, x) == 0.0
    assert ks_two_sample([0.1, 0.2], [0.8, 0.9]) == 1.0
    with pytest.raises(ValueError):
        ks_two_sample([], [0.5])


def test_ks_cdf_against_exact_cdf():
    x = np.random.default_rng(1).normal(size=100_000)
    from scipy.stats import norm
    assert ks_cdf(x, norm.cdf) < ks_noise(x.size)


def test_constant_column_ks():
    # log-mantissa u0 gives KS max(u0, 1 - u0); exact powers of 10 give 1
    assert ks_to_benford(np.full(5, 100.0), 10) == 1.0
    u0 = math.log10(7.0)
    assert ks_to_benford(np.full(5, 7.0), 10) == pytest.approx(max(u0, 1 - u0))


def test_base8_negative_control(oracles):
    rng = np.random.default_rng(2)
    x = 10 ** rng.random(10**6)
    assert ks_to_benford(x, 8) == pytest.approx(oracles["ks_pow10_in_base8"], abs=ks_noise(10**6))


def test_digit_histogram(oracles):
    x = 10 ** np.random.default_rng(3).random(10**6)
    rows = digit_histogram(x, 10)
    assert [d for d, _, _ in rows] == list(range(1, 10))
    assert sum(f for _, f, _ in rows) == pytest.approx(1.0)
    for (d, f, bf), want in zip(rows, oracles["benford_digits_base10"]):
        assert bf == pytest.approx(want, rel=1e-14)
        assert abs(f - want) < 0.002
    with pytest.raises(ValueError):
        digit_histogram(x, 4.5)


def test_hill_fit_recovers_mixture(oracles):
    rng = np.random.default_rng(4)
    m = 200_000
    x = np.where(rng.random(m) < 0.7, 10 ** rng.random(m), 1.0)
    fit = hill_mixture_fit(x, 10)
    assert fit.p == pytest.approx(oracles["hill_p_mixture"], abs=0.01)
    assert fit.residual < 0.01
    pure = hill_mixture_fit(10 ** rng.random(m), 10)
    assert pure.p < 0.01


@pytest.mark.parametrize("N", [2, 4, 8])
def test_rank_bound_analytic_comb(N, oracles):
    r = rank_bound_check(CombVariate(N).unit(), N)
    assert r.satisfied
    assert r.observed_sup == pytest.approx(oracles["comb"][str(N)]["sup"], abs=1e-12)
    assert r.bound == 1 / N
    assert set(r.to_json()) == {"N", "bound", "observed", "ok"}


def test_rank_bound_fails_for_concentrated_law():
    r = rank_bound_check(UnitDistribution.empirical(np.full(1000, 0.5)), 4)
    assert not r.satisfied
    with pytest.raises(ValueError):
        rank_bound_check(uniform_unit(), 0)


@pytest.mark.parametrize("N", [2, 4, 8])
def test_tv_comb(N, oracles):
    comb = CombVariate(N)
    assert tv_to_uniform(comb.pdf, comb.breakpoints) == pytest.approx(oracles["comb"][str(N)]["tv"], abs=1e-9)


def test_tv_validation():
    assert tv_to_uniform(uniform_unit().pdf) == pytest.approx(0.0, abs=1e-12)
    assert tv_to_uniform(triangular_unit().pdf, (0.5,)) == pytest.approx(0.25, abs=1e-9)
    with pytest.raises(ValueError):
        tv_to_uniform(lambda x: 2.0)


def test_analyze_verdicts():
    rng = np.random.default_rng(5)
    benford = analyze(10 ** rng.random(10**5), 10)
    assert benford.verdict == "benford"
    assert benford.digit_freqs is not None
    comb_data = 10 ** CombVariate(4).sample(10**5, seed=5)
    periodic = analyze(comb_data, 10)
    assert periodic.verdict == "periodic(4)"
    assert periodic.rank_bound.satisfied
    const = analyze(np.full(10, 7.0), 10)
    assert const.verdict == "nonconforming"
    # with three rows 1.63/sqrt(m) exceeds the KS distance; degeneracy still decides
    tiny = analyze(np.full(3, 7.0), 10)
    assert tiny.ks_distance < tiny.threshold and tiny.verdict == "nonconforming"
    assert analyze(np.full(3, 100.0), 10).ks_distance == 1.0
    non_int = analyze(10 ** (2 * rng.random(10**5)), 10 ** (2 / 3))
    assert non_int.verdict == "benford" and non_int.digit_freqs is None
    keys = set(benford.to_json())
    assert keys == {"base", "m", "ks", "threshold", "digits", "hill_p", "hill_residual", "period",
                    "rank", "verdict", "notes"}
    with pytest.raises(ValueError):
        analyze(np.array([]), 10)
