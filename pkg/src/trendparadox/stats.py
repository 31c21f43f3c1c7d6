"""Maximum-likelihood trend fits, likelihood-ratio tests and trend signs.

Logistic fits use iteratively reweighted least squares (Newton's method on
the Bernoulli log-likelihood) on standardized predictors, starting from the
intercept-only model. Significance is always assessed with the likelihood
ratio test; no Wald statistics are computed.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import special

CONVERGED = "converged"
MAX_ITER = "max_iter"
SEPARATED = "separated"
DEGENERATE = "degenerate"

MAX_ITER_DEFAULT = 100
LOGLIK_TOL = 1e-10
STEP_TOL = 1e-7
SEPARATION_BOUND = 30.0
RIDGE = 1e-8
PROB_CLAMP = 1e-6
DEFAULT_THRESHOLD = 0.05


@dataclass(frozen=True)
class FitResult:
    alpha: float
    beta: float
    loglik_full: float
    loglik_null: float
    p_value: float
    n: int
    status: str
    iterations: int = 0

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MultiFitResult:
    alpha: float
    beta_p: float
    beta_c: float
    loglik: float
    loglik_null: float
    p_value_beta_p: float
    n: int
    status: str

    def to_dict(self) -> dict:
        return asdict(self)


def chi_square_survival(x: float, df: int) -> float:
    """P(chi2_df > x) via the regularized upper incomplete gamma function."""
    if df < 1:
        raise ValueError(f"df must be a positive integer, got {df}")
    if x < 0:
        raise ValueError(f"x must be non-negative, got {x}")
    if x == 0:
        return 1.0
    return float(min(1.0, max(0.0, special.gammaincc(df / 2.0, x / 2.0))))


def lrt_statistic(loglik_full: float, loglik_null: float) -> float:
    return max(0.0, 2.0 * (loglik_full - loglik_null))


def likelihood_ratio_test(loglik_full: float, loglik_null: float, df: int = 1) -> float:
    """p-value of the likelihood ratio test between nested models."""
    if loglik_full < loglik_null - 1e-9:
        raise ValueError(
            f"full model log-likelihood {loglik_full} is below the nested null {loglik_null}"
        )
    return chi_square_survival(lrt_statistic(loglik_full, loglik_null), df)


def trend_sign(fit, threshold: float = DEFAULT_THRESHOLD) -> int:
    """Three-valued trend: 0 unless the slope is non-zero and significant."""
    beta = fit.beta if isinstance(fit, FitResult) else fit.beta_p
    p = fit.p_value if isinstance(fit, FitResult) else fit.p_value_beta_p
    if fit.status == DEGENERATE or beta == 0 or p > threshold:
        return 0
    return 1 if beta > 0 else -1


# -- logistic ---------------------------------------------------------------

def bernoulli_loglik(eta: np.ndarray, y: np.ndarray) -> float:
    # log f = -log(1 + e^-eta), log(1 - f) = -log(1 + e^eta)
    return float(-np.sum(y * np.logaddexp(0.0, -eta) + (1.0 - y) * np.logaddexp(0.0, eta)))


def _null_logistic(y: np.ndarray) -> tuple[float, float]:
    ybar = float(np.clip(np.mean(y), PROB_CLAMP, 1.0 - PROB_CLAMP))
    alpha = math.log(ybar / (1.0 - ybar))
    return alpha, bernoulli_loglik(np.full(len(y), alpha), y)


def _solve_newton(hess: np.ndarray, grad: np.ndarray) -> np.ndarray:
    try:
        if np.linalg.cond(hess) < 1e12:
            return np.linalg.solve(hess, grad)
    except np.linalg.LinAlgError:
        pass
    return np.linalg.solve(hess + RIDGE * np.eye(len(grad)), grad)


def irls(design: np.ndarray, y: np.ndarray, max_iter: int = MAX_ITER_DEFAULT):
    """Newton/IRLS for logistic regression on a design with an intercept column first.

    Returns ``(theta, loglik, status, iterations, trace)`` where ``trace`` is the
    log-likelihood after each accepted iteration. Steps that would lower the
    likelihood are halved, so the trace is non-decreasing.
    """
    theta = np.zeros(design.shape[1])
    theta[0], ll = _null_logistic(y)
    trace = [ll]
    status = MAX_ITER
    it = 0
    for it in range(1, max_iter + 1):
        eta = design @ theta
        p = special.expit(eta)
        w = p * (1.0 - p)
        grad = design.T @ (y - p)
        hess = design.T @ (design * w[:, None])
        step = _solve_newton(hess, grad)
        for _ in range(60):
            cand = theta + step
            ll_new = bernoulli_loglik(design @ cand, y)
            if ll_new >= ll - LOGLIK_TOL:
                break
            step = step / 2.0
        else:
            cand, ll_new = theta, ll
        delta_ll = ll_new - ll
        theta, ll = cand, max(ll, ll_new)
        trace.append(ll)
        # separated data keeps taking O(1) steps with vanishing likelihood gain,
        # so convergence needs both a flat likelihood and a small step
        if abs(delta_ll) < LOGLIK_TOL and np.max(np.abs(step)) < STEP_TOL:
            status = CONVERGED
            break
    if np.max(np.abs(theta[1:]), initial=0.0) > SEPARATION_BOUND:
        status = SEPARATED
    return theta, ll, status, it, trace


def _standardize(x: np.ndarray) -> tuple[np.ndarray, float, float]:
    mean = float(np.mean(x))
    sd = float(np.std(x))
    return (x - mean) / sd, mean, sd


def _is_constant(x: np.ndarray) -> bool:
    return bool(np.all(x == x[0]))


def _check_binary(y: np.ndarray) -> None:
    if not np.all((y == 0.0) | (y == 1.0)):
        raise ValueError("logistic outcome must be binary (0/1)")


def fit_logistic(x, y) -> FitResult:
    """Fit ``P(y=1|x) = 1 / (1 + exp(-(alpha + beta x)))`` by maximum likelihood."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("x and y must have equal length >= 2")
    _check_binary(y)
    n = len(y)
    alpha0, ll0 = _null_logistic(y)
    if _is_constant(y) or _is_constant(x):
        return FitResult(alpha0, 0.0, ll0, ll0, 1.0, n, DEGENERATE)

    z, mean, sd = _standardize(x)
    design = np.column_stack([np.ones(n), z])
    theta, ll, status, it, _ = irls(design, y)
    beta = theta[1] / sd
    alpha = theta[0] - theta[1] * mean / sd
    ll = max(ll, ll0)
    return FitResult(float(alpha), float(beta), ll, ll0,
                     likelihood_ratio_test(ll, ll0, 1), n, status, it)


def _collinear(a: np.ndarray, b: np.ndarray) -> bool:
    za = (a - a.mean()) / a.std()
    zb = (b - b.mean()) / b.std()
    r = float(np.mean(za * zb))
    return abs(r) > 1.0 - 1e-12


def fit_logistic_multivariate(x_p, x_c, y) -> MultiFitResult:
    """Fit ``alpha + beta_p x_p + beta_c x_c`` and test ``beta_p`` against the (alpha, beta_c) model."""
    x_p = np.asarray(x_p, dtype=np.float64)
    x_c = np.asarray(x_c, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if not (len(x_p) == len(x_c) == len(y)) or len(y) < 3:
        raise ValueError("x_p, x_c and y must have equal length >= 3")
    _check_binary(y)
    n = len(y)
    alpha0, ll0 = _null_logistic(y)
    c_const = _is_constant(x_c)
    if (_is_constant(y) or _is_constant(x_p)
            or (not c_const and _collinear(x_p, x_c))):
        return MultiFitResult(alpha0, 0.0, 0.0, ll0, ll0, 1.0, n, DEGENERATE)

    zp, mp, sp = _standardize(x_p)
    if c_const:
        # no information in x_c: the model reduces to the univariate fit
        uni = fit_logistic(x_p, y)
        return MultiFitResult(uni.alpha, uni.beta, 0.0, uni.loglik_full, uni.loglik_null,
                              uni.p_value, n, uni.status)
    zc, mc, sc = _standardize(x_c)
    ones = np.ones(n)
    theta, ll, status, _, _ = irls(np.column_stack([ones, zp, zc]), y)
    _, ll_null, _, _, _ = irls(np.column_stack([ones, zc]), y)
    ll = max(ll, ll_null)
    beta_p = theta[1] / sp
    beta_c = theta[2] / sc
    alpha = theta[0] - theta[1] * mp / sp - theta[2] * mc / sc
    return MultiFitResult(float(alpha), float(beta_p), float(beta_c), ll, ll_null,
                          likelihood_ratio_test(ll, ll_null, 1), n, status)


# -- linear -----------------------------------------------------------------

def gaussian_loglik(rss: float, n: int) -> float:
    """Profile Gaussian log-likelihood at the MLE variance ``rss / n``."""
    return -0.5 * n * (math.log(2.0 * math.pi * rss / n) + 1.0)


def fit_linear(x, y) -> FitResult:
    """Ordinary least squares, scored as a Gaussian maximum-likelihood fit."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y) or len(x) < 3:
        raise ValueError("x and y must have equal length >= 3")
    n = len(y)
    ybar = float(np.mean(y))
    tss = float(np.sum((y - ybar) ** 2))
    if _is_constant(x) or tss == 0.0:
        ll0 = gaussian_loglik(max(tss, np.finfo(float).tiny), n)
        return FitResult(ybar, 0.0, ll0, ll0, 1.0, n, DEGENERATE)
    z, mean, sd = _standardize(x)
    slope_z = float(np.dot(z, y - ybar) / np.dot(z, z))
    rss = float(np.sum((y - ybar - slope_z * z) ** 2))
    # an exact fit has zero residual variance; floor it to keep the likelihood finite
    rss = min(max(rss, tss * 1e-30), tss)
    ll_full = gaussian_loglik(rss, n)
    ll_null = gaussian_loglik(tss, n)
    beta = slope_z / sd
    alpha = ybar - beta * mean
    return FitResult(float(alpha), float(beta), ll_full, ll_null,
                     likelihood_ratio_test(ll_full, ll_null, 1), n, CONVERGED, 1)


def fit_trend(x, y, model: str = "logistic") -> FitResult:
    if model == "logistic":
        return fit_logistic(x, y)
    if model == "linear":
        return fit_linear(x, y)
    raise ValueError(f"unknown model {model!r}")


def predict(fit: FitResult, x, model: str = "logistic") -> np.ndarray:
    eta = fit.alpha + fit.beta * np.asarray(x, dtype=np.float64)
    return special.expit(eta) if model == "logistic" else eta
