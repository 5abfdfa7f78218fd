"""Inner generalized eigenproblem ``G_K lambda = b G_1 lambda``.

The extremal roots are obtained by Cholesky whitening of ``G_1`` and a
Hermitian eigensolve; ``closed_form_r2`` and ``char_poly_eval`` are
independent routes used for cross-checks.
"""
from dataclasses import dataclass

import numpy as np

from ._kernels import STATUS_OK, kernels
from .algebra import AmplitudeConfiguration, commutator_g_matrix, gram_matrix
from .errors import ConditioningError, InvalidInputError, NonHermitianError

CONDITION_GUARD = 1e12
DISCRIMINANT_CLAMP = -1e-10


@dataclass(frozen=True)
class EigenSolution:
    """Extremal generalized eigenpair.

    ``residual`` is ``||G_K v - b G_1 v|| / ||v||`` and ``condition_estimate``
    the LAPACK 1-norm condition estimate of ``G_1``.
    """

    value: float
    coefficients: np.ndarray
    residual: float
    condition_estimate: float


def _hermitian_pair(gk, g1):
    gk = np.asarray(gk, dtype=complex)
    g1 = np.asarray(g1, dtype=complex)
    if gk.ndim != 2 or gk.shape[0] != gk.shape[1] or gk.shape != g1.shape:
        raise InvalidInputError(f"need two square matrices of equal size, got {gk.shape} and {g1.shape}")
    if not (np.all(np.isfinite(gk)) and np.all(np.isfinite(g1))):
        raise InvalidInputError("matrices contain non-finite entries")
    for name, mat in (("G_K", gk), ("G_1", g1)):
        scale = max(1.0, float(np.max(np.abs(mat))))
        if np.max(np.abs(mat - mat.conj().T)) > 1e-10 * scale:
            raise NonHermitianError(f"{name} is not Hermitian")
    return gk, g1


def generalized_eigh(gk, g1):
    """All eigenpairs ``(w ascending, V)`` plus the condition estimate of ``g1``.

    Raises ``ConditioningError`` if ``g1`` is not positive definite or its
    condition estimate exceeds 1e12.
    """
    gk, g1 = _hermitian_pair(gk, g1)
    w, vecs, rcond, status = kernels.hermitian_geneig(gk, g1)
    if status != STATUS_OK:
        cond = np.inf if rcond <= 0 else 1.0 / rcond
        raise ConditioningError(cond)
    return w, vecs, 1.0 / rcond


def extremal_generalized_eigen(gk, g1, direction="min"):
    """Smallest (``"min"``/``"inf"``) or largest (``"max"``/``"sup"``) root of ``det(G_K - b G_1)``."""
    if direction in ("min", "inf"):
        idx = 0
    elif direction in ("max", "sup"):
        idx = -1
    else:
        raise InvalidInputError(f"direction must be 'min' or 'max', got {direction!r}")
    gk = np.asarray(gk, dtype=complex)
    g1 = np.asarray(g1, dtype=complex)
    w, vecs, cond = generalized_eigh(gk, g1)
    value = float(w[idx])
    vec = np.array(vecs[:, idx])
    residual = float(np.linalg.norm(gk @ vec - value * (g1 @ vec)) / np.linalg.norm(vec))
    return EigenSolution(value, vec, residual, float(cond))


def closed_form_r2(gk, g1):
    """Both roots ``(b-, b+)`` of a 2 x 2 pencil from trace and determinant.

    ``b = (Tr(G_1^-1 G_K) -/+ sqrt(Tr^2 - 4 det)) / 2``.
    """
    gk, g1 = _hermitian_pair(gk, g1)
    if gk.shape != (2, 2):
        raise InvalidInputError("closed_form_r2 needs 2 x 2 matrices")
    det1 = (g1[0, 0] * g1[1, 1] - g1[0, 1] * g1[1, 0]).real
    if not det1 > 0 or g1[0, 0].real <= 0:
        raise ConditioningError(np.inf, "G_1 is not positive definite")
    inv1 = np.array([[g1[1, 1], -g1[0, 1]], [-g1[1, 0], g1[0, 0]]]) / det1
    m = inv1 @ gk
    tr = (m[0, 0] + m[1, 1]).real
    det = (gk[0, 0] * gk[1, 1] - gk[0, 1] * gk[1, 0]).real / det1
    disc = tr * tr - 4.0 * det
    if disc < DISCRIMINANT_CLAMP * max(1.0, tr * tr):
        raise NonHermitianError(f"negative discriminant {disc:.3e}")
    delta = np.sqrt(max(disc, 0.0))
    return 0.5 * (tr - delta), 0.5 * (tr + delta)


def char_poly_eval(gk, g1, b):
    """``chi(b) = det(G_K - b G_1)`` (real part; real for Hermitian pencils)."""
    gk = np.asarray(gk, dtype=complex)
    g1 = np.asarray(g1, dtype=complex)
    if gk.shape != g1.shape:
        raise InvalidInputError("dimension mismatch")
    return float(np.linalg.det(gk - b * g1).real)


def rayleigh_quotient(gk, g1, coefficients):
    lam = np.asarray(coefficients, dtype=complex)
    return float(np.vdot(lam, gk @ lam).real / np.vdot(lam, g1 @ lam).real)


def stationarity_residual(obs, cfg, sol):
    """``|lambda^H G_[a,K] lambda| / (lambda^H G_1 lambda)`` (single mode).

    Vanishes at stationary amplitude configurations of the outer problem.
    """
    cfg = cfg if isinstance(cfg, AmplitudeConfiguration) else AmplitudeConfiguration(cfg)
    lam = sol.coefficients if isinstance(sol, EigenSolution) else np.asarray(sol, dtype=complex)
    comm = commutator_g_matrix(obs, cfg)
    g1 = gram_matrix(cfg)
    return float(abs(np.vdot(lam, comm @ lam)) / np.vdot(lam, g1 @ lam).real)
