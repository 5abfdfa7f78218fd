"""Numpy implementation of the hot kernels.

This module is the reference semantics for ``_native.pyx``; both expose the
same functions with the same signatures and the same Nelder-Mead step
sequence, so results agree up to floating-point rounding.
"""
import math

import numpy as np
from scipy.linalg import lapack, solve_triangular

STATE_SUPERPOSITION = 0
STATE_SQUEEZED = 1
STATE_FOCK = 2

KIND_POLY_EIG = 0
KIND_PROJECTOR_EIG = 1
KIND_PROJECTOR_RANK1 = 2

STATUS_OK = 0
STATUS_CHOLESKY_FAILED = 1
STATUS_ILL_CONDITIONED = 2

COINCIDENCE_TOL = 1e-6
RCOND_GUARD = 1e-12


def gram(amps):
    """Coherent-state Gram matrix <alpha_i|alpha_j> for amplitudes of shape (r, N)."""
    amps = np.asarray(amps, dtype=complex)
    norms = np.sum(np.abs(amps) ** 2, axis=1)
    cross = amps.conj() @ amps.T
    return np.exp(-0.5 * norms[:, None] - 0.5 * norms[None, :] + cross)


def poly_matrix(amps, mexp, nexp, coef):
    """Matrix of <alpha_i| :poly: |alpha_j>, poly given as exponent/coefficient arrays."""
    amps = np.asarray(amps, dtype=complex)
    r = amps.shape[0]
    symbol = np.zeros((r, r), dtype=complex)
    conj = amps.conj()
    for m, n, c in zip(mexp, nexp, coef):
        left = np.prod(conj ** m[None, :], axis=1)
        right = np.prod(amps ** n[None, :], axis=1)
        symbol += c * left[:, None] * right[None, :]
    return symbol * gram(amps)


def state_overlaps(kind, cdata, bdata, amps):
    """Vector of <alpha_i|psi> for an encoded state model."""
    amps = np.asarray(amps, dtype=complex)
    if kind == STATE_SUPERPOSITION:
        return gram_cross(amps, bdata) @ cdata
    if kind == STATE_SQUEEZED:
        mu, nu = cdata[0], cdata[1]
        a = amps[:, 0]
        return np.exp(-0.5 * np.abs(a) ** 2 - nu * a.conj() ** 2 / (2.0 * mu)) / np.sqrt(mu)
    if kind == STATE_FOCK:
        a = amps[:, 0]
        out = np.zeros(a.shape[0], dtype=complex)
        term = np.exp(-0.5 * np.abs(a) ** 2).astype(complex)
        for n, psi_n in enumerate(cdata):
            if n:
                term = term * a.conj() / math.sqrt(n)
            out += psi_n * term
        return out
    raise ValueError(f"unknown state kind {kind}")


def gram_cross(left, right):
    """Matrix <left_i|right_k> between two amplitude sets."""
    left = np.asarray(left, dtype=complex)
    right = np.asarray(right, dtype=complex)
    nl = np.sum(np.abs(left) ** 2, axis=1)
    nr = np.sum(np.abs(right) ** 2, axis=1)
    return np.exp(-0.5 * nl[:, None] - 0.5 * nr[None, :] + left.conj() @ right.T)


def _cholesky(g1):
    """Lower Cholesky factor and reciprocal 1-norm condition estimate.

    Returns ``(L, rcond, status)``; ``L`` is None unless status is OK.
    """
    anorm = float(np.max(np.sum(np.abs(g1), axis=0)))
    chol, info = lapack.zpotrf(g1, lower=1, clean=1)
    if info != 0:
        return None, 0.0, STATUS_CHOLESKY_FAILED
    rcond, info = lapack.zpocon(chol, anorm, uplo="L")
    if info != 0 or not rcond >= RCOND_GUARD:
        return None, float(rcond), STATUS_ILL_CONDITIONED
    return chol, float(rcond), STATUS_OK


def hermitian_geneig(gk, g1):
    """All generalized eigenpairs of gk v = w g1 v by Cholesky whitening.

    Returns ``(w, V, rcond, status)`` with ``w`` ascending and the columns of
    ``V`` normalized so that ``V^H g1 V = 1``.
    """
    gk = np.asarray(gk, dtype=complex)
    g1 = np.asarray(g1, dtype=complex)
    chol, rcond, status = _cholesky(g1)
    if status != STATUS_OK:
        return None, None, rcond, status
    tmp = solve_triangular(chol, gk, lower=True)
    whitened = solve_triangular(chol, tmp.conj().T, lower=True).conj().T
    whitened = 0.5 * (whitened + whitened.conj().T)
    w, y = np.linalg.eigh(whitened)
    vecs = solve_triangular(chol, y, lower=True, trans="C")
    return w, vecs, rcond, STATUS_OK


class Objective:
    """Scalar objective over a real parameter vector; lower is better.

    Parameters mirror the native kernel: ``kind`` selects the observable
    form, ``sign`` is +1 to minimize the bound and -1 to maximize it.
    """

    def __init__(self, kind, sign, r, modes, line_mode, penalty,
                 mexp=None, nexp=None, coef=None,
                 state_kind=0, cdata=None, bdata=None):
        self.kind = kind
        self.sign = float(sign)
        self.r = r
        self.modes = modes
        self.line_mode = bool(line_mode)
        self.penalty = float(penalty)
        self.mexp = mexp
        self.nexp = nexp
        self.coef = coef
        self.state_kind = state_kind
        self.cdata = cdata
        self.bdata = bdata
        self.nfev = 0

    def amplitudes(self, x):
        rn = self.r * self.modes
        if self.line_mode:
            return (1j * np.asarray(x[:rn])).reshape(self.r, self.modes)
        return (np.asarray(x[:rn]) + 1j * np.asarray(x[rn:2 * rn])).reshape(self.r, self.modes)

    def amplitude_norm(self, x):
        return float(np.max(np.linalg.norm(self.amplitudes(x), axis=1)))

    def __call__(self, x):
        self.nfev += 1
        amps = self.amplitudes(x)
        r = self.r
        for i in range(r):
            for j in range(i + 1, r):
                if np.max(np.abs(amps[i] - amps[j])) < COINCIDENCE_TOL:
                    return self.penalty
        g1 = gram(amps)
        chol, _, status = _cholesky(g1)
        if status != STATUS_OK:
            return self.penalty
        if self.kind == KIND_POLY_EIG:
            gk = poly_matrix(amps, self.mexp, self.nexp, self.coef)
        else:
            g = state_overlaps(self.state_kind, self.cdata, self.bdata, amps)
            if self.kind == KIND_PROJECTOR_RANK1:
                y = solve_triangular(chol, g, lower=True)
                value = float(np.real(np.vdot(y, y)))
                return self.sign * value if math.isfinite(value) else self.penalty
            gk = np.outer(g, g.conj())
        tmp = solve_triangular(chol, gk, lower=True)
        whitened = solve_triangular(chol, tmp.conj().T, lower=True).conj().T
        whitened = 0.5 * (whitened + whitened.conj().T)
        w = np.linalg.eigvalsh(whitened)
        value = float(w[0] if self.sign > 0 else w[-1])
        if not math.isfinite(value):
            return self.penalty
        return self.sign * value


def nelder_mead(objective, x0, step, max_iter, tol, escape_radius, max_restarts=3):
    """Adaptive Nelder-Mead with restarts and runaway detection.

    Returns ``(x, f, iterations, nfev, converged, diverged)``. A run is
    flagged diverged when its best point sits beyond ``escape_radius`` and
    the objective improved after crossing it.
    """
    x_best = np.array(x0, dtype=float)
    n = x_best.size
    rho = 1.0
    chi = 1.0 + 2.0 / n
    psi = 0.75 - 1.0 / (2.0 * n)
    sigma = 1.0 - 1.0 / n
    xtol = math.sqrt(tol)
    nfev0 = objective.nfev

    f_best = objective(x_best)
    iterations = 0
    converged = False
    f_cross = None
    hard_escape = False
    restarts = 0

    while True:
        sim = np.empty((n + 1, n))
        fsim = np.empty(n + 1)
        sim[0] = x_best
        fsim[0] = f_best
        for k in range(n):
            y = x_best.copy()
            y[k] += step
            sim[k + 1] = y
            fsim[k + 1] = objective(y)
        order = np.argsort(fsim, kind="stable")
        sim = sim[order]
        fsim = fsim[order]
        converged = False

        while iterations < max_iter:
            if (fsim[-1] - fsim[0] <= tol
                    and np.max(np.abs(sim[1:] - sim[0])) <= xtol):
                converged = True
                break
            iterations += 1
            xbar = np.sum(sim[:-1], axis=0) / n
            xr = (1.0 + rho) * xbar - rho * sim[-1]
            fxr = objective(xr)
            shrink = False
            if fxr < fsim[0]:
                xe = (1.0 + rho * chi) * xbar - rho * chi * sim[-1]
                fxe = objective(xe)
                if fxe < fxr:
                    sim[-1], fsim[-1] = xe, fxe
                else:
                    sim[-1], fsim[-1] = xr, fxr
            elif fxr < fsim[-2]:
                sim[-1], fsim[-1] = xr, fxr
            elif fxr < fsim[-1]:
                xc = (1.0 + psi * rho) * xbar - psi * rho * sim[-1]
                fxc = objective(xc)
                if fxc <= fxr:
                    sim[-1], fsim[-1] = xc, fxc
                else:
                    shrink = True
            else:
                xcc = (1.0 - psi) * xbar + psi * sim[-1]
                fxcc = objective(xcc)
                if fxcc < fsim[-1]:
                    sim[-1], fsim[-1] = xcc, fxcc
                else:
                    shrink = True
            if shrink:
                for k in range(1, n + 1):
                    sim[k] = sim[0] + sigma * (sim[k] - sim[0])
                    fsim[k] = objective(sim[k])
            order = np.argsort(fsim, kind="stable")
            sim = sim[order]
            fsim = fsim[order]

            norm = objective.amplitude_norm(sim[0])
            if norm > escape_radius:
                if f_cross is None:
                    f_cross = fsim[0]
                if norm > 2.0 * escape_radius:
                    hard_escape = True
                    break
            else:
                f_cross = None

        improved = fsim[0] < f_best - tol
        if fsim[0] < f_best:
            x_best = sim[0].copy()
            f_best = fsim[0]
        if hard_escape or not converged or not improved or restarts >= max_restarts:
            break
        restarts += 1

    diverged = False
    if f_cross is not None:
        diverged = f_best < f_cross - max(1e-6, 1e-3 * abs(f_cross))
    return x_best, float(f_best), iterations, objective.nfev - nfev0, converged, diverged
