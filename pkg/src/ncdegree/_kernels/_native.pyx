# cython: language_level=3
"""Compiled kernels: G-matrix assembly, whitened generalized eigensolve and
the Nelder-Mead driver, all running without the GIL.

Matrices handed to LAPACK are stored column-major in malloc'd buffers.
Semantics follow ``_pure.py`` line by line.
"""
import numpy as np

from libc.math cimport exp, cos, sin, sqrt, fabs, isfinite
from libc.stdlib cimport malloc, calloc, free
from libc.string cimport memcpy
from scipy.linalg.cython_lapack cimport zpotrf, zpocon, zhegst, zheev, ztrtrs

ctypedef double complex dcomplex

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

cdef enum:
    C_STATUS_OK = 0
    C_STATUS_CHOLESKY_FAILED = 1
    C_STATUS_ILL_CONDITIONED = 2

cdef double C_COINCIDENCE_TOL = 1e-6
cdef double C_RCOND_GUARD = 1e-12


cdef inline dcomplex cexp_c(dcomplex z) noexcept nogil:
    cdef double m = exp(z.real)
    return m * cos(z.imag) + 1j * (m * sin(z.imag))


cdef inline double abs2(dcomplex z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef struct Problem:
    int kind
    int r
    int modes
    int line_mode
    double sign
    double penalty
    # polynomial observable
    int nterms
    int maxdeg
    long *mexp
    long *nexp
    dcomplex *coef
    # rank-one observable
    int state_kind
    int ncdata
    int nb
    dcomplex *cdata
    dcomplex *bdata
    # workspace
    dcomplex *amps
    dcomplex *g1
    dcomplex *gk
    dcomplex *g
    dcomplex *powc
    dcomplex *pown
    dcomplex *work
    int lwork
    double *rwork
    double *w
    long nfev


cdef void fill_gram(const dcomplex *amps, int r, int modes, dcomplex *out) noexcept nogil:
    cdef int i, j, n
    cdef double ni, nj
    cdef dcomplex cross
    for j in range(r):
        nj = 0.0
        for n in range(modes):
            nj += abs2(amps[j * modes + n])
        for i in range(r):
            ni = 0.0
            cross = 0.0
            for n in range(modes):
                ni += abs2(amps[i * modes + n])
                cross = cross + amps[i * modes + n].conjugate() * amps[j * modes + n]
            out[i + j * r] = cexp_c(-0.5 * ni - 0.5 * nj + cross)


cdef void fill_poly(Problem *p, const dcomplex *gram, dcomplex *out) noexcept nogil:
    cdef int r = p.r, modes = p.modes, d1 = p.maxdeg + 1
    cdef int i, j, n, t, d
    cdef dcomplex a, ac, acc, term
    for i in range(r):
        for n in range(modes):
            a = p.amps[i * modes + n]
            ac = a.conjugate()
            p.powc[(i * modes + n) * d1] = 1.0
            p.pown[(i * modes + n) * d1] = 1.0
            for d in range(1, d1):
                p.powc[(i * modes + n) * d1 + d] = p.powc[(i * modes + n) * d1 + d - 1] * ac
                p.pown[(i * modes + n) * d1 + d] = p.pown[(i * modes + n) * d1 + d - 1] * a
    for j in range(r):
        for i in range(r):
            acc = 0.0
            for t in range(p.nterms):
                term = p.coef[t]
                for n in range(modes):
                    term = term * p.powc[(i * modes + n) * d1 + p.mexp[t * modes + n]] \
                        * p.pown[(j * modes + n) * d1 + p.nexp[t * modes + n]]
                acc = acc + term
            out[i + j * r] = acc * gram[i + j * r]


cdef dcomplex overlap_one(Problem *p, const dcomplex *alpha) noexcept nogil:
    cdef int k, n, modes = p.modes
    cdef double na, nb
    cdef dcomplex acc = 0.0, cross, term, mu, nu, ac
    if p.state_kind == 0:
        na = 0.0
        for n in range(modes):
            na += abs2(alpha[n])
        for k in range(p.nb):
            nb = 0.0
            cross = 0.0
            for n in range(modes):
                nb += abs2(p.bdata[k * modes + n])
                cross = cross + alpha[n].conjugate() * p.bdata[k * modes + n]
            acc = acc + p.cdata[k] * cexp_c(-0.5 * na - 0.5 * nb + cross)
        return acc
    if p.state_kind == 1:
        mu = p.cdata[0]
        nu = p.cdata[1]
        ac = alpha[0].conjugate()
        return cexp_c(-0.5 * abs2(alpha[0]) - nu * ac * ac / (2.0 * mu)) / sqrt(mu.real)
    ac = alpha[0].conjugate()
    term = exp(-0.5 * abs2(alpha[0]))
    for n in range(p.ncdata):
        if n:
            term = term * ac / sqrt(<double> n)
        acc = acc + p.cdata[n] * term
    return acc


cdef double amp_norm(Problem *p, const double *x) noexcept nogil:
    cdef int i, n, rn = p.r * p.modes
    cdef double best = 0.0, s, re, im
    for i in range(p.r):
        s = 0.0
        for n in range(p.modes):
            if p.line_mode:
                re = 0.0
                im = x[i * p.modes + n]
            else:
                re = x[i * p.modes + n]
                im = x[rn + i * p.modes + n]
            s += re * re + im * im
        s = sqrt(s)
        if s > best:
            best = s
    return best


cdef int factor_gram(Problem *p, double *rcond) noexcept nogil:
    """Cholesky-factor p.g1 in place (lower) and estimate its conditioning."""
    cdef int r = p.r, info = 0, i, j
    cdef double anorm = 0.0, col
    cdef char uplo = b'L'
    for j in range(r):
        col = 0.0
        for i in range(r):
            col += sqrt(abs2(p.g1[i + j * r]))
        if col > anorm:
            anorm = col
    zpotrf(&uplo, &r, p.g1, &r, &info)
    if info != 0:
        rcond[0] = 0.0
        return C_STATUS_CHOLESKY_FAILED
    zpocon(&uplo, &r, p.g1, &r, &anorm, rcond, p.work, p.rwork, &info)
    if info != 0 or not (rcond[0] >= C_RCOND_GUARD):
        return C_STATUS_ILL_CONDITIONED
    return C_STATUS_OK


cdef double c_objective(Problem *p, const double *x) noexcept nogil:
    cdef int r = p.r, modes = p.modes, rn = p.r * p.modes
    cdef int i, j, n, info = 0, itype = 1, one = 1
    cdef double rcond, dmax, value
    cdef char uplo = b'L', jobz = b'N', notrans = b'N', nonunit = b'N'
    p.nfev += 1
    for i in range(rn):
        if p.line_mode:
            p.amps[i] = 1j * x[i]
        else:
            p.amps[i] = x[i] + 1j * x[rn + i]
    for i in range(r):
        for j in range(i + 1, r):
            dmax = 0.0
            for n in range(modes):
                value = sqrt(abs2(p.amps[i * modes + n] - p.amps[j * modes + n]))
                if value > dmax:
                    dmax = value
            if dmax < C_COINCIDENCE_TOL:
                return p.penalty
    fill_gram(p.amps, r, modes, p.g1)
    if p.kind == 0:
        fill_poly(p, p.g1, p.gk)
    else:
        for i in range(r):
            p.g[i] = overlap_one(p, &p.amps[i * modes])
        if p.kind == 1:
            for j in range(r):
                for i in range(r):
                    p.gk[i + j * r] = p.g[i] * p.g[j].conjugate()
    if factor_gram(p, &rcond) != C_STATUS_OK:
        return p.penalty
    if p.kind == 2:
        ztrtrs(&uplo, &notrans, &nonunit, &r, &one, p.g1, &r, p.g, &r, &info)
        if info != 0:
            return p.penalty
        value = 0.0
        for i in range(r):
            value += abs2(p.g[i])
        if not isfinite(value):
            return p.penalty
        return p.sign * value
    zhegst(&itype, &uplo, &r, p.gk, &r, p.g1, &r, &info)
    if info != 0:
        return p.penalty
    zheev(&jobz, &uplo, &r, p.gk, &r, p.w, p.work, &p.lwork, p.rwork, &info)
    if info != 0:
        return p.penalty
    value = p.w[0] if p.sign > 0 else p.w[r - 1]
    if not isfinite(value):
        return p.penalty
    return p.sign * value


cdef void sort_simplex(double *sim, double *fsim, int n, int *idx,
                       double *simtmp, double *ftmp) noexcept nogil:
    # stable insertion sort of n+1 vertices by value
    cdef int a, b, key
    for a in range(n + 1):
        idx[a] = a
    for a in range(1, n + 1):
        key = idx[a]
        b = a - 1
        while b >= 0 and fsim[idx[b]] > fsim[key]:
            idx[b + 1] = idx[b]
            b -= 1
        idx[b + 1] = key
    for a in range(n + 1):
        memcpy(&simtmp[a * n], &sim[idx[a] * n], n * sizeof(double))
        ftmp[a] = fsim[idx[a]]
    memcpy(sim, simtmp, (n + 1) * n * sizeof(double))
    memcpy(fsim, ftmp, (n + 1) * sizeof(double))


cdef int nm_run(Problem *p, double *xbest, int n, double step, long max_iter,
                double tol, double escape, int max_restarts, double *fbest_out,
                long *iters_out, int *converged_out, int *diverged_out) noexcept nogil:
    cdef double *sim = <double *> malloc((n + 1) * n * sizeof(double))
    cdef double *simtmp = <double *> malloc((n + 1) * n * sizeof(double))
    cdef double *fsim = <double *> malloc((n + 1) * sizeof(double))
    cdef double *ftmp = <double *> malloc((n + 1) * sizeof(double))
    cdef double *xbar = <double *> malloc(n * sizeof(double))
    cdef double *xr = <double *> malloc(n * sizeof(double))
    cdef double *xe = <double *> malloc(n * sizeof(double))
    cdef double *xc = <double *> malloc(n * sizeof(double))
    cdef int *idx = <int *> malloc((n + 1) * sizeof(int))
    if (sim == NULL or simtmp == NULL or fsim == NULL or ftmp == NULL or xbar == NULL
            or xr == NULL or xe == NULL or xc == NULL or idx == NULL):
        free(sim); free(simtmp); free(fsim); free(ftmp)
        free(xbar); free(xr); free(xe); free(xc); free(idx)
        return -1

    cdef double rho = 1.0
    cdef double chi = 1.0 + 2.0 / n
    cdef double psi = 0.75 - 1.0 / (2.0 * n)
    cdef double sigma = 1.0 - 1.0 / n
    cdef double xtol = sqrt(tol)
    cdef double fbest, fxr, fxe, fxc, spread, norm, fcross = 0.0
    cdef long iterations = 0
    cdef int converged = 0, have_cross = 0, hard = 0, restarts = 0
    cdef int shrink, improved, k, j

    fbest = c_objective(p, xbest)
    while True:
        memcpy(sim, xbest, n * sizeof(double))
        fsim[0] = fbest
        for k in range(n):
            memcpy(&sim[(k + 1) * n], xbest, n * sizeof(double))
            sim[(k + 1) * n + k] += step
            fsim[k + 1] = c_objective(p, &sim[(k + 1) * n])
        sort_simplex(sim, fsim, n, idx, simtmp, ftmp)
        converged = 0

        while iterations < max_iter:
            if fsim[n] - fsim[0] <= tol:
                spread = 0.0
                for k in range(1, n + 1):
                    for j in range(n):
                        if fabs(sim[k * n + j] - sim[j]) > spread:
                            spread = fabs(sim[k * n + j] - sim[j])
                if spread <= xtol:
                    converged = 1
                    break
            iterations += 1
            for j in range(n):
                xbar[j] = 0.0
            for k in range(n):
                for j in range(n):
                    xbar[j] += sim[k * n + j]
            for j in range(n):
                xbar[j] = xbar[j] / n
                xr[j] = (1.0 + rho) * xbar[j] - rho * sim[n * n + j]
            fxr = c_objective(p, xr)
            shrink = 0
            if fxr < fsim[0]:
                for j in range(n):
                    xe[j] = (1.0 + rho * chi) * xbar[j] - rho * chi * sim[n * n + j]
                fxe = c_objective(p, xe)
                if fxe < fxr:
                    memcpy(&sim[n * n], xe, n * sizeof(double))
                    fsim[n] = fxe
                else:
                    memcpy(&sim[n * n], xr, n * sizeof(double))
                    fsim[n] = fxr
            elif fxr < fsim[n - 1]:
                memcpy(&sim[n * n], xr, n * sizeof(double))
                fsim[n] = fxr
            elif fxr < fsim[n]:
                for j in range(n):
                    xc[j] = (1.0 + psi * rho) * xbar[j] - psi * rho * sim[n * n + j]
                fxc = c_objective(p, xc)
                if fxc <= fxr:
                    memcpy(&sim[n * n], xc, n * sizeof(double))
                    fsim[n] = fxc
                else:
                    shrink = 1
            else:
                for j in range(n):
                    xc[j] = (1.0 - psi) * xbar[j] + psi * sim[n * n + j]
                fxc = c_objective(p, xc)
                if fxc < fsim[n]:
                    memcpy(&sim[n * n], xc, n * sizeof(double))
                    fsim[n] = fxc
                else:
                    shrink = 1
            if shrink:
                for k in range(1, n + 1):
                    for j in range(n):
                        sim[k * n + j] = sim[j] + sigma * (sim[k * n + j] - sim[j])
                    fsim[k] = c_objective(p, &sim[k * n])
            sort_simplex(sim, fsim, n, idx, simtmp, ftmp)

            norm = amp_norm(p, sim)
            if norm > escape:
                if not have_cross:
                    fcross = fsim[0]
                    have_cross = 1
                if norm > 2.0 * escape:
                    hard = 1
                    break
            else:
                have_cross = 0

        improved = fsim[0] < fbest - tol
        if fsim[0] < fbest:
            memcpy(xbest, sim, n * sizeof(double))
            fbest = fsim[0]
        if hard or not converged or not improved or restarts >= max_restarts:
            break
        restarts += 1

    fbest_out[0] = fbest
    iters_out[0] = iterations
    converged_out[0] = converged
    diverged_out[0] = 0
    if have_cross:
        diverged_out[0] = fbest < fcross - max(1e-6, 1e-3 * fabs(fcross))

    free(sim); free(simtmp); free(fsim); free(ftmp)
    free(xbar); free(xr); free(xe); free(xc); free(idx)
    return 0


cdef class Objective:
    """Compiled counterpart of ``_pure.Objective`` (same constructor)."""

    cdef Problem prob
    cdef object _keep

    def __cinit__(self, int kind, double sign, int r, int modes, line_mode, double penalty,
                  mexp=None, nexp=None, coef=None, int state_kind=0, cdata=None, bdata=None):
        cdef long[:, ::1] mv_m
        cdef long[:, ::1] mv_n
        cdef dcomplex[::1] mv_c
        cdef dcomplex[::1] mv_cd
        cdef dcomplex[:, ::1] mv_bd
        self.prob.kind = kind
        self.prob.sign = sign
        self.prob.r = r
        self.prob.modes = modes
        self.prob.line_mode = 1 if line_mode else 0
        self.prob.penalty = penalty
        self.prob.nfev = 0
        self.prob.nterms = 0
        self.prob.maxdeg = 0
        self.prob.ncdata = 0
        self.prob.nb = 0
        self.prob.state_kind = state_kind
        keep = []
        if kind == KIND_POLY_EIG:
            m_arr = np.array(mexp, dtype=np.int_, order="C", copy=True).reshape(-1, modes)
            n_arr = np.array(nexp, dtype=np.int_, order="C", copy=True).reshape(-1, modes)
            c_arr = np.array(coef, dtype=np.complex128, order="C", copy=True).reshape(-1)
            keep += [m_arr, n_arr, c_arr]
            self.prob.nterms = c_arr.shape[0]
            if self.prob.nterms:
                self.prob.maxdeg = int(max(m_arr.max(), n_arr.max()))
                mv_m = m_arr
                mv_n = n_arr
                mv_c = c_arr
                self.prob.mexp = &mv_m[0, 0]
                self.prob.nexp = &mv_n[0, 0]
                self.prob.coef = &mv_c[0]
        else:
            cd = np.array(cdata, dtype=np.complex128, order="C", copy=True).reshape(-1)
            keep.append(cd)
            self.prob.ncdata = cd.shape[0]
            if self.prob.ncdata:
                mv_cd = cd
                self.prob.cdata = &mv_cd[0]
            if state_kind == STATE_SUPERPOSITION:
                bd = np.array(bdata, dtype=np.complex128, order="C", copy=True).reshape(-1, modes)
                keep.append(bd)
                self.prob.nb = bd.shape[0]
                mv_bd = bd
                self.prob.bdata = &mv_bd[0, 0]
        self._keep = keep
        cdef int d1 = self.prob.maxdeg + 1
        self.prob.lwork = 64 * r if r > 1 else 64
        self.prob.amps = <dcomplex *> calloc(r * modes, sizeof(dcomplex))
        self.prob.g1 = <dcomplex *> calloc(r * r, sizeof(dcomplex))
        self.prob.gk = <dcomplex *> calloc(r * r, sizeof(dcomplex))
        self.prob.g = <dcomplex *> calloc(r, sizeof(dcomplex))
        self.prob.powc = <dcomplex *> calloc(r * modes * d1, sizeof(dcomplex))
        self.prob.pown = <dcomplex *> calloc(r * modes * d1, sizeof(dcomplex))
        self.prob.work = <dcomplex *> calloc(self.prob.lwork, sizeof(dcomplex))
        self.prob.rwork = <double *> calloc(3 * r + 2, sizeof(double))
        self.prob.w = <double *> calloc(r, sizeof(double))
        if (self.prob.amps == NULL or self.prob.g1 == NULL or self.prob.gk == NULL
                or self.prob.g == NULL or self.prob.powc == NULL or self.prob.pown == NULL
                or self.prob.work == NULL or self.prob.rwork == NULL or self.prob.w == NULL):
            raise MemoryError()

    def __dealloc__(self):
        free(self.prob.amps)
        free(self.prob.g1)
        free(self.prob.gk)
        free(self.prob.g)
        free(self.prob.powc)
        free(self.prob.pown)
        free(self.prob.work)
        free(self.prob.rwork)
        free(self.prob.w)

    @property
    def nfev(self):
        return self.prob.nfev

    @property
    def r(self):
        return self.prob.r

    @property
    def modes(self):
        return self.prob.modes

    @property
    def line_mode(self):
        return bool(self.prob.line_mode)

    def amplitudes(self, x):
        x = np.asarray(x, dtype=float)
        rn = self.prob.r * self.prob.modes
        if self.prob.line_mode:
            return (1j * x[:rn]).reshape(self.prob.r, self.prob.modes)
        return (x[:rn] + 1j * x[rn:2 * rn]).reshape(self.prob.r, self.prob.modes)

    def amplitude_norm(self, x):
        cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
        return amp_norm(&self.prob, &xv[0])

    def __call__(self, x):
        cdef const double[::1] xv = np.ascontiguousarray(x, dtype=float)
        cdef double out
        with nogil:
            out = c_objective(&self.prob, &xv[0])
        return out


def nelder_mead(Objective objective, x0, double step, long max_iter, double tol,
                double escape_radius, int max_restarts=3):
    """Compiled counterpart of ``_pure.nelder_mead`` (same return tuple)."""
    cdef double[::1] x = np.array(x0, dtype=float, copy=True)
    cdef int n = x.shape[0]
    cdef double fbest
    cdef long iterations
    cdef int converged, diverged, status
    cdef long nfev0 = objective.prob.nfev
    with nogil:
        status = nm_run(&objective.prob, &x[0], n, step, max_iter, tol, escape_radius,
                        max_restarts, &fbest, &iterations, &converged, &diverged)
    if status != 0:
        raise MemoryError()
    return (np.asarray(x), float(fbest), int(iterations), int(objective.prob.nfev - nfev0),
            bool(converged), bool(diverged))


def gram(amps):
    """Coherent-state Gram matrix <alpha_i|alpha_j> for amplitudes of shape (r, N)."""
    cdef const dcomplex[:, ::1] a = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef int r = a.shape[0], modes = a.shape[1]
    out_cm = np.empty((r, r), dtype=np.complex128, order="F")
    cdef dcomplex[::1, :] o = out_cm
    if r:
        fill_gram(&a[0, 0], r, modes, &o[0, 0])
    return np.ascontiguousarray(out_cm)


def gram_cross(left, right):
    """Matrix <left_i|right_k> between two amplitude sets."""
    left = np.asarray(left, dtype=np.complex128)
    right = np.asarray(right, dtype=np.complex128)
    nl = np.sum(np.abs(left) ** 2, axis=1)
    nr = np.sum(np.abs(right) ** 2, axis=1)
    return np.exp(-0.5 * nl[:, None] - 0.5 * nr[None, :] + left.conj() @ right.T)


def poly_matrix(amps, mexp, nexp, coef):
    """Matrix of <alpha_i| :poly: |alpha_j>, poly given as exponent/coefficient arrays."""
    a_arr = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef int r = a_arr.shape[0], modes = a_arr.shape[1]
    cdef Objective obj = Objective(KIND_POLY_EIG, 1.0, r, modes, False, 0.0,
                                   mexp=mexp, nexp=nexp, coef=coef)
    cdef const dcomplex[:, ::1] a = a_arr
    cdef int i
    for i in range(r * modes):
        obj.prob.amps[i] = (&a[0, 0])[i]
    out = np.empty((r, r), dtype=np.complex128)
    cdef dcomplex[:, ::1] o = out
    fill_gram(obj.prob.amps, r, modes, obj.prob.g1)
    fill_poly(&obj.prob, obj.prob.g1, obj.prob.gk)
    cdef int j
    for i in range(r):
        for j in range(r):
            o[i, j] = obj.prob.gk[i + j * r]
    return out


def state_overlaps(int kind, cdata, bdata, amps):
    """Vector of <alpha_i|psi> for an encoded state model."""
    a_arr = np.ascontiguousarray(amps, dtype=np.complex128)
    cdef int r = a_arr.shape[0], modes = a_arr.shape[1]
    cdef Objective obj = Objective(KIND_PROJECTOR_EIG, 1.0, max(r, 1), modes, False, 0.0,
                                   state_kind=kind, cdata=cdata, bdata=bdata)
    cdef const dcomplex[:, ::1] a = a_arr
    out = np.empty(r, dtype=np.complex128)
    cdef dcomplex[::1] o = out
    cdef int i
    for i in range(r):
        o[i] = overlap_one(&obj.prob, &a[i, 0])
    return out


def hermitian_geneig(gk, g1):
    """All generalized eigenpairs of gk v = w g1 v by Cholesky whitening.

    Returns ``(w, V, rcond, status)`` with ``w`` ascending and the columns of
    ``V`` normalized so that ``V^H g1 V = 1``.
    """
    a_f = np.array(gk, dtype=np.complex128, order="F", copy=True)
    b_f = np.array(g1, dtype=np.complex128, order="F", copy=True)
    cdef dcomplex[::1, :] a = a_f
    cdef dcomplex[::1, :] b = b_f
    cdef int r = a.shape[0], info = 0, itype = 1
    cdef int lwork = 64 * r if r > 1 else 64
    cdef char uplo = b'L', jobz = b'V', ctrans = b'C', nonunit = b'N'
    cdef double anorm = 0.0, col, rcond = 0.0
    cdef int i, j
    w_arr = np.zeros(r, dtype=float)
    cdef double[::1] w = w_arr
    work_arr = np.zeros(max(lwork, 2 * r), dtype=np.complex128)
    rwork_arr = np.zeros(3 * r + 2, dtype=float)
    cdef dcomplex[::1] work = work_arr
    cdef double[::1] rwork = rwork_arr
    for j in range(r):
        col = 0.0
        for i in range(r):
            col += sqrt(abs2(b[i, j]))
        if col > anorm:
            anorm = col
    zpotrf(&uplo, &r, &b[0, 0], &r, &info)
    if info != 0:
        return None, None, 0.0, STATUS_CHOLESKY_FAILED
    zpocon(&uplo, &r, &b[0, 0], &r, &anorm, &rcond, &work[0], &rwork[0], &info)
    if info != 0 or not (rcond >= C_RCOND_GUARD):
        return None, None, rcond, STATUS_ILL_CONDITIONED
    zhegst(&itype, &uplo, &r, &a[0, 0], &r, &b[0, 0], &r, &info)
    if info != 0:
        return None, None, rcond, STATUS_CHOLESKY_FAILED
    zheev(&jobz, &uplo, &r, &a[0, 0], &r, &w[0], &work[0], &lwork, &rwork[0], &info)
    if info != 0:
        raise ArithmeticError(f"zheev failed with info={info}")
    ztrtrs(&uplo, &ctrans, &nonunit, &r, &r, &b[0, 0], &r, &a[0, 0], &r, &info)
    return w_arr, np.ascontiguousarray(a_f), rcond, STATUS_OK
