import math
import warnings

import numpy as np
import pytest

from benfordkit.distributions import (
    FejerVariate, UniformExponentVariate, analytic_benford_spectrum,
)
from benfordkit.fourier import cf_noise
from benfordkit.spectrum import (
    LogCF, golden_section_min, root_closure_check, scan_spectrum, spectrum_upper_bound, union_check,
    whittaker_residual,
)

UE1 = UniformExponentVariate(10, 0, 1)
UE2 = UniformExponentVariate(10, 0, 2)
FEJER10 = FejerVariate.for_base(10)


def test_whittaker_examples(oracles):
    assert whittaker_residual(FEJER10, 10) < 1e-12
    assert whittaker_residual(UE1, 10) < 1e-15
    assert whittaker_residual(UE1, 100, n_max=1) == pytest.approx(oracles["uexp10_residual_b100_n1"], rel=1e-12)
    assert whittaker_residual(UE1, 100, n_max=1) == pytest.approx(2 / math.pi, rel=1e-12)
    with pytest.raises(ValueError):
        whittaker_residual(UE1, 1.0)


def test_whittaker_fejer_residual_beyond_interval(oracles):
    want = oracles["fejer_beta10_cf_at_2pi_over_ln20"]
    assert whittaker_residual(FEJER10, 20) == pytest.approx(want, rel=1e-9)
    assert want == pytest.approx(1 - math.log(10) / math.log(20), rel=1e-12)


def test_empirical_residual_matches_analytic():
    ln_x = UE1.sample_log(200_000, seed=1)
    emp = whittaker_residual(ln_x, 100, n_max=3)
    assert emp == pytest.approx(whittaker_residual(UE1, 100, n_max=3), abs=cf_noise(ln_x.size))


def test_golden_section_min():
    x, fx = golden_section_min(lambda t: (t - 0.3) ** 2 + 1, 0, 1, tol=1e-12)
    assert x == pytest.approx(0.3, abs=1e-6) and fx == pytest.approx(1.0)


def test_scan_uniform_exponent_recovers_spectrum():
    est = scan_spectrum(UE2, 2, 120)
    truth = analytic_benford_spectrum(UE2, 30)
    for b in (100, 10, 10 ** (2 / 3), 10**0.5):
        assert any(abs(d - b) <= 1e-4 for d in est.detected), b
    # nothing spurious: every detection is a member of the exact spectrum
    for d in est.detected:
        assert min(abs(d - t) for t in truth) <= 1e-4
    assert max(est.detected) <= est.upper_bound * (1 + 1e-6)
    assert est.upper_bound == pytest.approx(100, rel=1e-6)
    assert np.all((est.residuals >= 0) & (est.residuals <= 1 + 1e-12))
    assert est.n_max == 8 and est.tol == 1e-9


def test_scan_grid_is_uniform_in_ln_ln_b():
    est = scan_spectrum(UE1, 1.5, 50, steps=101)
    u = np.log(np.log(est.grid))
    np.testing.assert_allclose(np.diff(u), np.diff(u)[0], rtol=1e-9)
    assert est.grid[0] == pytest.approx(1.5) and est.grid[-1] == pytest.approx(50)


def test_scan_fejer_is_flat():
    est = scan_spectrum(FEJER10, 1.5, 10)
    assert np.all(est.residuals <= est.tol)
    assert est.intervals and est.intervals[0][0] == pytest.approx(1.5)
    assert est.intervals[-1][1] == pytest.approx(10)
    assert est.contains(5.0)
    assert est.upper_bound == pytest.approx(10, rel=1e-6)


def test_scan_constant_dataset():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        est = scan_spectrum(np.full(100, math.log(7.0)), 1.5, 50, steps=200)
    assert est.detected == [] and est.intervals == []
    assert math.isinf(est.upper_bound)
    assert est.to_json()["upper_bound"] is None


def test_scan_validation():
    with pytest.raises(ValueError):
        scan_spectrum(UE1, 5, 2)
    with pytest.raises(ValueError):
        scan_spectrum(UE1, 2, 5, steps=1)


def test_root_closure():
    est = scan_spectrum(UE1, 1.2, 20)
    assert root_closure_check(est, 10, k_max=4)
    fej = scan_spectrum(FEJER10, 1.5, 10)
    assert root_closure_check(fej, 10)
    est8 = scan_spectrum(UniformExponentVariate(8, 0, 1), 1.5, 20)
    with pytest.raises(ValueError):
        root_closure_check(est8, 10)
    # detected set closed under the roots that fall on the scanned range
    for b in est.detected:
        for k in (2, 3):
            if b ** (1 / k) > 1.2:
                assert est.contains(b ** (1 / k), rtol=1e-6)


def test_upper_bounds():
    assert spectrum_upper_bound(FEJER10) == pytest.approx(10, rel=1e-6)
    assert spectrum_upper_bound(UniformExponentVariate(7, 0, 1)) == pytest.approx(7, rel=1e-6)
    with pytest.warns(UserWarning):
        assert math.isinf(spectrum_upper_bound(lambda t: np.exp(0.3j * np.asarray(t)), t_step=0.01, t_max=50))
    with pytest.warns(UserWarning):
        assert math.isinf(spectrum_upper_bound(np.zeros(10)))


def test_empirical_residual_concentrates():
    m = 20_000
    under = 0
    for seed in range(20):
        ln_x = UE1.sample_log(m, seed)
        under += whittaker_residual(ln_x, 10) <= cf_noise(m)
    assert under >= 19


def test_union_check_examples():
    m = 200_000
    x = 2 ** np.random.default_rng(1).random(m)
    y = 3 ** np.random.default_rng(2).random(m)
    assert union_check(x, y, 2)
    assert union_check(x, y, 3)
    assert union_check(x, np.ones(m), 2)
    with pytest.raises(ValueError):
        union_check(x, y[:-1], 2)


def test_workers_do_not_change_results():
    ln_x = UE1.sample_log(300_000, 3)
    a = scan_spectrum(ln_x, 2, 20, steps=64, workers=1)
    b = scan_spectrum(ln_x, 2, 20, steps=64, workers=3)
    np.testing.assert_array_equal(a.residuals, b.residuals)
    assert a.detected == b.detected


def test_serialisation():
    est = scan_spectrum(UE1, 2, 20, steps=50)
    js = est.to_json()
    assert {"grid", "residuals", "detected", "upper_bound", "n_max", "tol"} <= set(js)
    lines = est.to_tsv().splitlines()
    assert lines[0].startswith("#") and sum(ln.startswith("#") for ln in lines) == 1
    assert all(len(ln.split("\t")) == 2 for ln in lines[1:])
    assert len(lines) == 51


def test_logcf_rejects_bad_data():
    with pytest.raises(ValueError):
        LogCF(np.array([]))
    with pytest.raises(ValueError):
        LogCF(np.array([np.nan]))
