"""Independent reference computations in a truncated number basis.

Nothing here imports the package: states and operators are dense vectors
and matrices, eigenproblems go through scipy.
"""
import math

import numpy as np
from scipy import linalg, optimize
from scipy.special import gammaln


def coherent_vector(alpha, dim):
    """Number-basis amplitudes of |alpha> for n < dim, built in the log domain."""
    alpha = complex(alpha)
    n = np.arange(dim)
    if alpha == 0:
        out = np.zeros(dim, dtype=complex)
        out[0] = 1.0
        return out
    log_mag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * gammaln(n + 1)
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def annihilator(dim):
    return np.diag(np.sqrt(np.arange(1, dim)), 1).astype(complex)


def polynomial_operator(terms, dim):
    """Dense matrix of sum c (a^dag)^m a^n for single-mode ``{(m, n): c}``."""
    a = annihilator(dim)
    ad = a.conj().T
    out = np.zeros((dim, dim), dtype=complex)
    for (m, n), c in terms.items():
        out += c * np.linalg.matrix_power(ad, m) @ np.linalg.matrix_power(a, n)
    return out


def expectation(op, psi):
    return float(np.vdot(psi, op @ psi).real / np.vdot(psi, psi).real)


def squeezed_vector(xi, dim):
    """Even-n expansion with coefficients mu^-1/2 (-nu/2mu)^(n/2) sqrt(n!)/(n/2)!."""
    xi = complex(xi)
    mu = math.cosh(abs(xi))
    nu = np.exp(1j * np.angle(xi)) * math.sinh(abs(xi))
    out = np.zeros(dim, dtype=complex)
    ratio = -nu / (2 * mu)
    for n in range(0, dim, 2):
        k = n // 2
        if ratio == 0 and k > 0:
            break
        log_mag = 0.5 * gammaln(n + 1) - gammaln(k + 1)
        out[n] = ratio ** k * math.exp(log_mag) / math.sqrt(mu)
    return out


def dense_overlap(alpha, beta, dim=60):
    return complex(np.vdot(coherent_vector(alpha, dim), coherent_vector(beta, dim)))


def coherent_columns(amps, dim):
    return np.stack([coherent_vector(a, dim) for a in amps], axis=1)


def dense_g_matrix(op, amps, dim):
    cols = coherent_columns(amps, dim)
    return cols.conj().T @ op @ cols


def projection_weight(psi, amps, dim):
    """|| P psi ||^2 where P projects onto span{|alpha_k>} (the rank-one bound)."""
    cols = coherent_columns(amps, dim)
    q, _ = np.linalg.qr(cols)
    return float(np.linalg.norm(q.conj().T @ psi) ** 2)


def _amps_from(x, r):
    return x[:r] + 1j * x[r:]


def multistart(fun, r, n_starts=12, seed=1, radius=1.5):
    """Best of scipy Nelder-Mead runs over 2r real parameters."""
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(n_starts):
        x0 = radius * rng.normal(size=2 * r) / math.sqrt(2)
        res = optimize.minimize(fun, x0, method="Nelder-Mead",
                                options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 40000,
                                         "maxfev": 80000, "adaptive": True})
        if best is None or res.fun < best.fun:
            best = res
    return best


def pure_bound_oracle(psi, r, dim=70, **kw):
    """max over r amplitudes of the projection weight, by scipy multi-start."""
    def fun(x):
        amps = _amps_from(x, r)
        if r > 1:
            diffs = np.abs(np.subtract.outer(amps, amps))[np.triu_indices(r, 1)]
            if diffs.min() < 1e-4:
                return 1.0
        return -projection_weight(psi, amps, dim)
    res = multistart(fun, r, **kw)
    return -res.fun, _amps_from(res.x, r)


def min_eig_oracle(op, r, dim=70, **kw):
    """min over r amplitudes of the smallest generalized eigenvalue, scipy eigh on dense matrices."""
    def fun(x):
        amps = _amps_from(x, r)
        gk = dense_g_matrix(op, amps, dim)
        g1 = dense_g_matrix(np.eye(dim), amps, dim)
        try:
            return float(linalg.eigh(gk, g1, eigvals_only=True)[0])
        except (linalg.LinAlgError, ValueError):
            return 1e6
    res = multistart(fun, r, **kw)
    return res.fun, _amps_from(res.x, r)


def char_poly_roots(chi, lo, hi, points=4000):
    """Sign-change scan plus bisection (brentq) for the real roots of ``chi`` in [lo, hi]."""
    grid = np.linspace(lo, hi, points)
    vals = np.array([chi(b) for b in grid])
    roots = []
    for i in range(points - 1):
        if vals[i] == 0:
            roots.append(grid[i])
        elif vals[i] * vals[i + 1] < 0:
            roots.append(optimize.brentq(chi, grid[i], grid[i + 1], xtol=1e-15, rtol=1e-15))
    return np.array(roots)
