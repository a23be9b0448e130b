"""Ordinary least squares for reading times: fits, Gaussian log-likelihood,
per-token delta log-likelihood, t tests and Cohen's f^2."""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy import stats

from .surprisal import FeatureRow

log = logging.getLogger(__name__)

SIGMA2_FLOOR = 1e-12
INTERCEPT = "(intercept)"


class SingularDesignError(ValueError):
    def __init__(self, columns):
        super().__init__(f"design matrix is rank deficient; collinear column(s): {', '.join(columns)}")
        self.columns = list(columns)


class InfiniteEffectError(ValueError):
    pass


@dataclass(frozen=True)
class RegressionFit:
    names: tuple[str, ...]
    coefficients: np.ndarray
    sigma2: float
    loglik: float
    r2: float
    n: int
    p: int
    rss: float
    cov_unscaled: np.ndarray

    def predict(self, X: np.ndarray) -> np.ndarray:
        return X @ self.coefficients

    def loglik_on(self, X: np.ndarray, y: np.ndarray) -> float:
        """Gaussian log-likelihood of (X, y) under this fit's coefficients
        and variance (used for held-out evaluation)."""
        return gaussian_loglik(y - X @ self.coefficients, self.sigma2)


def gaussian_loglik(residuals: np.ndarray, sigma2: float) -> float:
    s2 = max(sigma2, SIGMA2_FLOOR)
    n = len(residuals)
    return -0.5 * n * math.log(2 * math.pi * s2) - float(residuals @ residuals) / (2 * s2)


def design_matrix(rows: Sequence[FeatureRow], predictors: Sequence[str]) -> tuple[np.ndarray, np.ndarray]:
    X = np.ones((len(rows), len(predictors) + 1))
    for j, name in enumerate(predictors, start=1):
        X[:, j] = [r.feature(name) for r in rows]
    y = np.array([r.rt_ms for r in rows], dtype=float)
    return X, y


def _pivoted_qr(X: np.ndarray, names: Sequence[str]):
    Q, R, piv = scipy.linalg.qr(X, mode="economic", pivoting=True)
    diag = np.abs(np.diag(R))
    tol = max(X.shape) * np.finfo(float).eps * (diag[0] if len(diag) else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < X.shape[1]:
        raise SingularDesignError([names[i] for i in piv[rank:]])
    return Q, R, piv


def fit_matrix(X: np.ndarray, y: np.ndarray, names: Sequence[str] | None = None) -> RegressionFit:
    """OLS on a design matrix whose first column is the intercept."""
    n, k = X.shape
    if names is None:
        names = [INTERCEPT] + [f"x{j}" for j in range(1, k)]
    if n <= k:
        raise ValueError(f"need more rows than parameters (n={n}, parameters={k})")
    Q, R, piv = _pivoted_qr(X, names)
    beta_p = scipy.linalg.solve_triangular(R, Q.T @ y)
    beta = np.empty(k)
    beta[piv] = beta_p
    resid = y - X @ beta
    rss = float(resid @ resid)
    sigma2 = rss / n
    tss = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - rss / tss if tss > 0 else 0.0
    r2 = min(max(r2, 0.0), 1.0)
    Rinv = scipy.linalg.solve_triangular(R, np.eye(k))
    cov_p = Rinv @ Rinv.T
    cov = np.empty_like(cov_p)
    cov[np.ix_(piv, piv)] = cov_p
    ll = gaussian_loglik(resid, sigma2)
    return RegressionFit(tuple(names), beta, sigma2, ll, r2, n, k - 1, rss, cov)


def fit_ols(rows: Sequence[FeatureRow], predictors: Sequence[str]) -> RegressionFit:
    X, y = design_matrix(rows, predictors)
    return fit_matrix(X, y, [INTERCEPT, *predictors])


def _check_nested(baseline: Sequence[str], full: Sequence[str]):
    missing = set(baseline) - set(full)
    if missing:
        raise ValueError(f"baseline predictors not in full model: {sorted(missing)}")


def delta_loglik_matrix(X_base: np.ndarray, X_full: np.ndarray, y: np.ndarray) -> float:
    """In-sample per-token log-likelihood gain of the full model.

    The full model's residual sum of squares is obtained by projecting the
    baseline residual onto the full column space, so the gain is computed
    as a non-negative quantity and the nesting bound holds in floating point.
    """
    base = fit_matrix(X_base, y)
    resid = y - X_base @ base.coefficients
    Q, _, _ = _pivoted_qr(X_full, [str(j) for j in range(X_full.shape[1])])
    explained = float(np.sum((Q.T @ resid) ** 2))
    rss_base = float(resid @ resid)
    if rss_base <= 0.0:
        return 0.0
    frac = min(explained / rss_base, 1.0 - SIGMA2_FLOOR)
    return -0.5 * math.log1p(-frac)


def delta_loglik(rows: Sequence[FeatureRow], baseline: Sequence[str], full: Sequence[str],
                 test_rows: Sequence[FeatureRow] | None = None) -> float:
    """Per-token log-likelihood difference (full minus baseline).

    Without ``test_rows`` this is the in-sample value on ``rows``. With
    ``test_rows`` both models are fit on ``rows`` and scored on
    ``test_rows`` using the training coefficients and variance.
    """
    _check_nested(baseline, full)
    if test_rows is None:
        if list(baseline) == list(full):
            return 0.0
        Xb, y = design_matrix(rows, baseline)
        Xf, _ = design_matrix(rows, full)
        return delta_loglik_matrix(Xb, Xf, y)
    fb, ff = fit_ols(rows, baseline), fit_ols(rows, full)
    Xb, yt = design_matrix(test_rows, baseline)
    Xf, _ = design_matrix(test_rows, full)
    return (ff.loglik_on(Xf, yt) - fb.loglik_on(Xb, yt)) / len(test_rows)


@dataclass(frozen=True)
class CoefficientTests:
    names: tuple[str, ...]
    estimates: np.ndarray
    std_errors: np.ndarray
    t: np.ndarray
    p: np.ndarray
    df: int

    def as_dict(self) -> dict[str, dict[str, float]]:
        return {name: {"estimate": float(b), "std_error": float(se), "t": float(t), "p": float(p)}
                for name, b, se, t, p in zip(self.names, self.estimates, self.std_errors, self.t, self.p)}


def coefficient_tests(fit: RegressionFit) -> CoefficientTests:
    """Classical OLS t tests with n - p - 1 degrees of freedom."""
    df = fit.n - fit.p - 1
    if df <= 0:
        raise ValueError("no residual degrees of freedom")
    s2 = fit.rss / df
    se = np.sqrt(s2 * np.diag(fit.cov_unscaled))
    if s2 <= SIGMA2_FLOOR * max(1.0, float(np.max(np.abs(fit.coefficients))) ** 2):
        log.warning("exact fit: residual variance is zero, reporting p = 0")
        t = np.where(fit.coefficients == 0, 0.0, np.sign(fit.coefficients) * np.inf)
        p = np.where(fit.coefficients == 0, 1.0, 0.0)
        return CoefficientTests(fit.names, fit.coefficients, se, t, p, df)
    t = fit.coefficients / se
    p = 2.0 * stats.t.sf(np.abs(t), df)
    return CoefficientTests(fit.names, fit.coefficients, se, t, p, df)


def cohens_f2(baseline: RegressionFit, full: RegressionFit) -> float:
    if full.n != baseline.n:
        raise ValueError("fits must be on identical rows")
    if full.r2 >= 1.0:
        raise InfiniteEffectError("full model explains all variance; f^2 is infinite")
    return (full.r2 - baseline.r2) / (1.0 - full.r2)


def fit_report(fit: RegressionFit) -> dict:
    tests = coefficient_tests(fit)
    return {
        "coefficients": dict(zip(fit.names, map(float, fit.coefficients))),
        "std_errors": dict(zip(fit.names, map(float, tests.std_errors))),
        "t": dict(zip(fit.names, map(float, tests.t))),
        "p_values": dict(zip(fit.names, map(float, tests.p))),
        "r2": fit.r2,
        "loglik": fit.loglik,
        "sigma2": fit.sigma2,
        "n": fit.n,
        "p": fit.p,
    }


def fit_report_json(fit: RegressionFit) -> str:
    return json.dumps(fit_report(fit), indent=2, sort_keys=True)
