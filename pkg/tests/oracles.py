"""Independent reference computations used to check the library.

None of these import the code under test.
"""

import math

import numpy as np
from scipy import integrate, optimize


def chi2_density(t, df):
    k = df / 2.0
    return t ** (k - 1.0) * math.exp(-t / 2.0) / (2.0 ** k * math.gamma(k))


def chi2_survival_quad(x, df):
    """P(chi2_df > x) by adaptive quadrature of the density."""
    if x == 0:
        return 1.0
    # split at the mode region so quad resolves the peak before the tail
    upper, _ = integrate.quad(chi2_density, x, x + 50.0, args=(df,), epsabs=1e-13, epsrel=1e-12,
                              limit=200)
    tail, _ = integrate.quad(chi2_density, x + 50.0, np.inf, args=(df,), epsabs=1e-14)
    return upper + tail


def logistic_loglik(alpha, beta, x, y):
    eta = alpha + beta * np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def grid_search_logistic(x, y, lo=-10.0, hi=10.0):
    """Maximize the Bernoulli log-likelihood by exhaustive grid search plus refinement.

    A 0.01 grid over the box locates the basin, a 1e-3 grid around the best cell
    narrows it, and Nelder-Mead polishes the result.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)

    def grid(alphas, betas):
        a = alphas[:, None, None]
        b = betas[None, :, None]
        eta = a + b * x[None, None, :]
        ll = np.sum(y * eta - np.logaddexp(0.0, eta), axis=2)
        i, j = np.unravel_index(np.argmax(ll), ll.shape)
        return alphas[i], betas[j]

    coarse = np.round(np.arange(lo, hi + 1e-9, 0.01), 10)
    a0, b0 = grid(coarse, coarse)
    fine_a = np.arange(a0 - 0.02, a0 + 0.02 + 1e-12, 1e-3)
    fine_b = np.arange(b0 - 0.02, b0 + 0.02 + 1e-12, 1e-3)
    a1, b1 = grid(fine_a, fine_b)
    res = optimize.minimize(lambda t: -logistic_loglik(t[0], t[1], x, y), [a1, b1],
                            method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 20000})
    best = max([(a1, b1), tuple(res.x)], key=lambda t: logistic_loglik(t[0], t[1], x, y))
    return best, logistic_loglik(best[0], best[1], x, y)


def finite_difference_gradient(f, theta, h=1e-5):
    theta = np.asarray(theta, dtype=float)
    grad = np.empty_like(theta)
    for i in range(len(theta)):
        e = np.zeros_like(theta)
        e[i] = h
        grad[i] = (f(theta + e) - f(theta - e)) / (2.0 * h)
    return grad


def analytic_logistic_gradient(alpha, beta, x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    p = 1.0 / (1.0 + np.exp(-(alpha + beta * x)))
    r = y - p
    return np.array([r.sum(), (r * x).sum()])


def two_pass_variance(values):
    values = [float(v) for v in values]
    mean = sum(values) / len(values)
    return sum((v - mean) ** 2 for v in values) / (len(values) - 1)


def definition_variance(values):
    """Sample variance as E[X^2] - E[X]^2 scaled to the unbiased form."""
    n = len(values)
    s1 = math.fsum(values)
    s2 = math.fsum(v * v for v in values)
    return (s2 - s1 * s1 / n) / (n - 1)
