from __future__ import annotations

import logging
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from subword_surprisal.regression import (INTERCEPT, InfiniteEffectError, SingularDesignError, coefficient_tests,
                                          cohens_f2, delta_loglik, delta_loglik_matrix, design_matrix, fit_matrix, fit_ols,
                                          fit_report_json)
from subword_surprisal.surprisal import FeatureRow, baseline_and_full


def oracle(X, y):
    """Normal equations, textbook formulas."""
    n, k = X.shape
    XtX = X.T @ X
    beta = np.linalg.solve(XtX, X.T @ y)
    resid = y - X @ beta
    rss = resid @ resid
    s2 = rss / (n - k)
    se = np.sqrt(s2 * np.diag(np.linalg.inv(XtX)))
    r2 = 1 - rss / np.sum((y - y.mean()) ** 2)
    sigma2 = rss / n
    ll = np.sum(stats.norm.logpdf(resid, scale=math.sqrt(sigma2)))
    return beta, beta / se, r2, ll


def random_fixture(seed, n=50, k=4):
    rng = np.random.default_rng(seed)
    X = np.column_stack([np.ones(n), rng.normal(size=(n, k))])
    y = X @ rng.normal(size=k + 1) + rng.normal(scale=rng.uniform(0.3, 3), size=n)
    return X, y


@pytest.mark.parametrize("seed", range(20))
def test_matches_normal_equations(seed):
    X, y = random_fixture(seed)
    fit = fit_matrix(X, y)
    beta, t, r2, ll = oracle(X, y)
    assert np.allclose(fit.coefficients, beta, rtol=0, atol=1e-8)
    assert np.allclose(coefficient_tests(fit).t, t, rtol=0, atol=1e-6)
    assert abs(fit.r2 - r2) < 1e-8
    assert abs(fit.loglik - ll) < 1e-8


def test_exact_fit(caplog):
    x = np.arange(10.0)
    X = np.column_stack([np.ones(10), x])
    fit = fit_matrix(X, 2 + 3 * x)
    assert np.allclose(fit.coefficients, [2, 3], atol=1e-10)
    assert fit.r2 == pytest.approx(1.0)
    assert fit.sigma2 < 1e-20
    assert math.isfinite(fit.loglik)
    with caplog.at_level(logging.WARNING):
        tests = coefficient_tests(fit)
    assert "exact fit" in caplog.text
    assert np.all(np.isinf(tests.t)) and np.all(tests.p == 0)


def test_constant_response():
    rng = np.random.default_rng(1)
    X = np.column_stack([np.ones(30), rng.normal(size=30)])
    fit = fit_matrix(X, np.full(30, 7.0))
    assert np.allclose(fit.coefficients, [7.0, 0.0], atol=1e-10)
    assert fit.r2 == 0.0


def test_singular_design_names_columns():
    rng = np.random.default_rng(2)
    x = rng.normal(size=20)
    X = np.column_stack([np.ones(20), x, 2 * x])
    with pytest.raises(SingularDesignError) as exc:
        fit_matrix(X, rng.normal(size=20), [INTERCEPT, "a", "b"])
    assert set(exc.value.columns) & {"a", "b"}


def test_too_few_rows():
    with pytest.raises(ValueError):
        fit_matrix(np.ones((2, 2)), np.ones(2))


def make_rows(seed, n=200, beta_s=2.0, noise_surprisal=False, k=1):
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n):
        s = rng.gamma(2.0, 3.0, size=k + 1)
        ln = rng.integers(2, 12, size=k + 1).astype(float)
        f = rng.normal(8, 2, size=k + 1)
        rt = 200 + beta_s * s[0] + 0.5 * ln[0] - 0.3 * f[0] + s[1:].sum() * 0.5 + rng.normal(0, 5)
        if noise_surprisal:
            s = rng.normal(size=k + 1)
        rows.append(FeatureRow("t", i, rt, tuple(s), tuple(ln), tuple(f)))
    return rows


def test_delta_identical_models():
    rows = make_rows(0)
    base, _ = baseline_and_full(1)
    assert delta_loglik(rows, base, base) == 0.0


def test_delta_noise_near_zero():
    base, full = baseline_and_full(1)
    d = delta_loglik(make_rows(3, n=2000, noise_surprisal=True), base, full)
    assert 0 <= d < 0.005


def test_delta_matches_two_fits():
    base, full = baseline_and_full(1)
    rows = make_rows(4)
    fb, ff = fit_ols(rows, base), fit_ols(rows, full)
    assert abs(delta_loglik(rows, base, full) - (ff.loglik - fb.loglik) / len(rows)) < 1e-10


def test_heldout_delta_uses_training_fit():
    base, full = baseline_and_full(1)
    rows = make_rows(5, n=300)
    train, test = rows[:200], rows[200:]
    fb, ff = fit_ols(train, base), fit_ols(train, full)
    Xf, y = design_matrix(test, full)
    Xb, _ = design_matrix(test, base)
    expect = (np.sum(stats.norm.logpdf(y - Xf @ ff.coefficients, scale=math.sqrt(ff.sigma2)))
              - np.sum(stats.norm.logpdf(y - Xb @ fb.coefficients, scale=math.sqrt(fb.sigma2)))) / len(test)
    assert delta_loglik(train, base, full, test) == pytest.approx(expect, abs=1e-9)
    assert expect > 0


def test_non_nested_rejected():
    with pytest.raises(ValueError):
        delta_loglik(make_rows(0), ["s0"], ["len0"])


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**6), st.integers(8, 60), st.integers(1, 4))
def test_nesting_bound(seed, n, extra):
    rng = np.random.default_rng(seed)
    Xb = np.column_stack([np.ones(n), rng.normal(size=(n, 2))])
    Xf = np.column_stack([Xb, rng.normal(size=(n, extra))])
    y = rng.normal(size=n) * rng.uniform(1e-3, 1e3)
    if n <= Xf.shape[1]:
        return
    assert delta_loglik_matrix(Xb, Xf, y) >= 0.0


def test_scaling_invariance():
    base, full = baseline_and_full(1)
    rows = make_rows(6)
    scaled = [FeatureRow(r.text_id, r.word_index, r.rt_ms * 1000, r.surprisal, r.length, r.log_freq) for r in rows]
    assert delta_loglik(scaled, base, full) == pytest.approx(delta_loglik(rows, base, full), abs=1e-9)


def test_null_pvalues_are_uniform():
    ps = []
    for seed in range(1000):
        rng = np.random.default_rng(seed)
        X = np.column_stack([np.ones(100), rng.normal(size=100)])
        ps.append(coefficient_tests(fit_matrix(X, rng.normal(size=100))).p[1])
    assert stats.kstest(ps, "uniform").pvalue > 0.01


def test_cohens_f2():
    fit_b = fit_matrix(*random_fixture(0))
    assert cohens_f2(fit_b, fit_b) == 0.0

    class R:
        def __init__(self, r2):
            self.r2, self.n = r2, 10
    assert cohens_f2(R(0.10), R(0.12)) == pytest.approx(0.02 / 0.88)
    assert cohens_f2(R(0.10), R(0.12)) == pytest.approx(0.02273, abs=5e-6)
    with pytest.raises(InfiniteEffectError):
        cohens_f2(R(0.5), R(1.0))


def test_fit_report_json():
    text = fit_report_json(fit_matrix(*random_fixture(1)))
    assert '"r2"' in text and '"p_values"' in text
