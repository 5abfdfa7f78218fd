"""Coherent-state overlaps, normally ordered polynomials and the G-map.

The G-map sends an operator L to the r x r matrix of its coherent-state
matrix elements ``<alpha_i|L|alpha_j>``. For a normally ordered polynomial
with symbol ``k(a*, b)`` the entries factor as ``k(alpha_i*, alpha_j) *
<alpha_i|alpha_j>``; for a projector ``|psi><psi|`` they factor as
``g g^H`` with ``g_i = <alpha_i|psi>``.

G-matrices are plain complex ``numpy`` arrays of shape (r, r).
"""
from dataclasses import dataclass
from math import comb
from typing import NamedTuple, Union

import numpy as np

from ._kernels import COINCIDENCE_TOL, kernels
from .errors import (
    CoincidentAmplitudesError,
    InvalidInputError,
    NonHermitianError,
    UnsupportedModesError,
)

DEFAULT_MAX_DEGREE = 16
HERMITIAN_TOL = 1e-12


def _as_complex_vector(values, name="amplitude"):
    arr = np.atleast_1d(np.asarray(values, dtype=complex))
    if arr.ndim != 1:
        raise InvalidInputError(f"{name} must be a scalar or 1-d vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name} contains non-finite entries")
    return arr


def coherent_overlap(alpha, beta):
    """Return ``<alpha|beta>`` for (multimode) coherent amplitudes.

    ``exp(-|alpha|^2/2 - |beta|^2/2 + alpha* . beta)``, the product of the
    single-mode overlaps.
    """
    a = _as_complex_vector(alpha, "alpha")
    b = _as_complex_vector(beta, "beta")
    if a.shape != b.shape:
        raise InvalidInputError(f"mode count mismatch: {a.size} vs {b.size}")
    exponent = -0.5 * np.vdot(a, a).real - 0.5 * np.vdot(b, b).real + np.vdot(a, b)
    return complex(np.exp(exponent))


class AmplitudeConfiguration:
    """An ordered set of r distinct coherent amplitudes in C^N.

    Parameters
    ----------
    amps : array_like
        Shape (r, N) for N modes, or a flat length-r sequence for one mode.
    modes : int, optional
        Number of modes; inferred from ``amps`` when omitted.
    """

    __slots__ = ("_amps",)

    def __init__(self, amps, modes=None):
        arr = np.asarray(amps, dtype=complex)
        if arr.ndim == 0:
            arr = arr.reshape(1, 1)
        elif arr.ndim == 1:
            arr = arr.reshape(-1, 1) if modes in (None, 1) else arr.reshape(1, -1)
        if arr.ndim != 2:
            raise InvalidInputError(f"amplitudes must have shape (r, N), got {arr.shape}")
        if modes is not None and arr.shape[1] != modes:
            raise InvalidInputError(f"expected {modes} modes, got {arr.shape[1]}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidInputError("need r >= 1 amplitudes with N >= 1 modes")
        if not np.all(np.isfinite(arr)):
            raise InvalidInputError("amplitudes contain non-finite entries")
        for i in range(arr.shape[0]):
            for j in range(i + 1, arr.shape[0]):
                if np.max(np.abs(arr[i] - arr[j])) <= COINCIDENCE_TOL:
                    raise CoincidentAmplitudesError(
                        f"amplitudes {i} and {j} coincide within {COINCIDENCE_TOL:g}"
                    )
        arr = arr.copy()
        arr.setflags(write=False)
        self._amps = arr

    @property
    def amps(self):
        """Read-only complex array of shape (r, N)."""
        return self._amps

    @property
    def r(self):
        return self._amps.shape[0]

    @property
    def modes(self):
        return self._amps.shape[1]

    def __len__(self):
        return self.r

    def __iter__(self):
        return iter(self._amps)

    def __repr__(self):
        return f"AmplitudeConfiguration(r={self.r}, modes={self.modes}, amps={self._amps.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, AmplitudeConfiguration):
            return NotImplemented
        return self._amps.shape == other._amps.shape and bool(np.all(self._amps == other._amps))

    def __hash__(self):
        return hash((self._amps.shape, self._amps.tobytes()))

    def norm(self):
        """Frobenius norm of the stacked amplitudes (used for tie-breaking)."""
        return float(np.linalg.norm(self._amps))


class LadderMonomial(NamedTuple):
    """``prod_k (a_k^dagger)^m_k (a_k)^n_k`` in normal order."""

    creation: tuple
    annihilation: tuple


def _monomial(m, n):
    return LadderMonomial(tuple(int(v) for v in m), tuple(int(v) for v in n))


class NormalOrderedPolynomial:
    """A normally ordered polynomial in ladder operators.

    ``terms`` maps ``LadderMonomial`` (or a ``(m, n)`` pair of exponent
    tuples) to complex coefficients. Zero coefficients are dropped.
    """

    __slots__ = ("_terms", "_modes", "_max_degree")

    def __init__(self, terms, modes=1, max_degree=DEFAULT_MAX_DEGREE):
        if modes < 1:
            raise InvalidInputError("modes must be >= 1")
        clean = {}
        for key, value in dict(terms).items():
            mono = key if isinstance(key, LadderMonomial) else _monomial(*key)
            if len(mono.creation) != modes or len(mono.annihilation) != modes:
                raise InvalidInputError(f"monomial {mono} does not have {modes} modes")
            exps = mono.creation + mono.annihilation
            if min(exps) < 0:
                raise InvalidInputError(f"negative exponent in {mono}")
            if max(exps) > max_degree:
                raise InvalidInputError(f"exponent in {mono} exceeds degree cap {max_degree}")
            coeff = complex(value)
            if not np.isfinite(coeff):
                raise InvalidInputError(f"non-finite coefficient for {mono}")
            if coeff != 0:
                clean[mono] = clean.get(mono, 0) + coeff
        self._terms = {k: v for k, v in clean.items() if v != 0}
        self._modes = int(modes)
        self._max_degree = int(max_degree)

    # constructors -------------------------------------------------------

    @classmethod
    def identity(cls, modes=1):
        zero = (0,) * modes
        return cls({(zero, zero): 1.0}, modes)

    @classmethod
    def quadrature_square(cls):
        """``x^2 = (a + a^dagger)^2 = 2 a^dagger a + a^2 + a^dagger^2 + 1``."""
        return cls({((1,), (1,)): 2.0, ((0,), (2,)): 1.0, ((2,), (0,)): 1.0, ((0,), (0,)): 1.0})

    @classmethod
    def number(cls, mode=0, modes=1):
        e = tuple(1 if k == mode else 0 for k in range(modes))
        return cls({(e, e): 1.0}, modes)

    @classmethod
    def annihilation(cls, mode=0, modes=1):
        """The (non-Hermitian) operator ``a_mode``."""
        zero = (0,) * modes
        e = tuple(1 if k == mode else 0 for k in range(modes))
        return cls({(zero, e): 1.0}, modes)

    # accessors ----------------------------------------------------------

    @property
    def terms(self):
        return dict(self._terms)

    @property
    def modes(self):
        return self._modes

    @property
    def max_degree(self):
        return self._max_degree

    def degree(self):
        """Largest single-mode exponent present."""
        if not self._terms:
            return 0
        return max(max(m.creation + m.annihilation) for m in self._terms)

    def __repr__(self):
        return f"NormalOrderedPolynomial({self._terms!r}, modes={self._modes})"

    def __eq__(self, other):
        if not isinstance(other, NormalOrderedPolynomial):
            return NotImplemented
        return self._modes == other._modes and self._terms == other._terms

    def __hash__(self):
        return hash((self._modes, frozenset(self._terms.items())))

    def arrays(self):
        """Exponent and coefficient arrays ``(mexp, nexp, coef)`` for the kernels."""
        if not self._terms:
            zero = np.zeros((1, self._modes), dtype=np.int_)
            return zero, zero.copy(), np.zeros(1, dtype=complex)
        keys = list(self._terms)
        mexp = np.array([k.creation for k in keys], dtype=np.int_)
        nexp = np.array([k.annihilation for k in keys], dtype=np.int_)
        coef = np.array([self._terms[k] for k in keys], dtype=complex)
        return mexp, nexp, coef

    # algebra ------------------------------------------------------------

    def _check_modes(self, other):
        if other._modes != self._modes:
            raise InvalidInputError(f"mode count mismatch: {self._modes} vs {other._modes}")

    def __add__(self, other):
        if not isinstance(other, NormalOrderedPolynomial):
            return NotImplemented
        self._check_modes(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, 0) + v
        return NormalOrderedPolynomial(terms, self._modes, max(self._max_degree, other._max_degree))

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        if isinstance(scalar, NormalOrderedPolynomial):
            return NotImplemented
        s = complex(scalar)
        return NormalOrderedPolynomial({k: s * v for k, v in self._terms.items()},
                                       self._modes, self._max_degree)

    __rmul__ = __mul__

    def affine(self, shift, scale):
        """``shift * 1 + scale * self``."""
        return NormalOrderedPolynomial.identity(self._modes) * shift + self * scale

    def adjoint(self):
        return NormalOrderedPolynomial(
            {LadderMonomial(k.annihilation, k.creation): np.conj(v) for k, v in self._terms.items()},
            self._modes, self._max_degree,
        )

    def is_hermitian(self, tol=HERMITIAN_TOL):
        scale = max([abs(v) for v in self._terms.values()] + [1.0])
        adj = self.adjoint()._terms
        keys = set(self._terms) | set(adj)
        return all(abs(self._terms.get(k, 0) - adj.get(k, 0)) <= tol * scale for k in keys)

    def _bump(self, mode, creation, delta):
        out = {}
        for k, v in self._terms.items():
            exps = list(k.creation if creation else k.annihilation)
            exps[mode] += delta
            key = LadderMonomial(tuple(exps), k.annihilation) if creation else \
                LadderMonomial(k.creation, tuple(exps))
            out[key] = out.get(key, 0) + v
        return NormalOrderedPolynomial(out, self._modes, self._max_degree)

    def times_annihilation(self, mode=0):
        """``self * a_mode`` (stays normally ordered)."""
        return self._bump(mode, creation=False, delta=1)

    def creation_times(self, mode=0):
        """``a_mode^dagger * self`` (stays normally ordered)."""
        return self._bump(mode, creation=True, delta=1)

    def creation_derivative(self, mode=0):
        """Normally ordered form of ``[a_mode, self]``.

        Uses ``[a, (a^dagger)^m] = m (a^dagger)^(m-1)``; the symbol is
        ``d k / d alpha*_mode``.
        """
        out = {}
        for k, v in self._terms.items():
            m = k.creation[mode]
            if m == 0:
                continue
            exps = list(k.creation)
            exps[mode] = m - 1
            key = LadderMonomial(tuple(exps), k.annihilation)
            out[key] = out.get(key, 0) + m * v
        return NormalOrderedPolynomial(out, self._modes, self._max_degree)

    def annihilation_times(self, mode=0):
        """Normally ordered form of ``a_mode * self``.

        Symbol ``beta_mode * k + d k / d alpha*_mode``.
        """
        return self.times_annihilation(mode) + self.creation_derivative(mode)

    def displaced(self, beta):
        """``D(beta) K D(beta)^dagger``: substitutes ``a -> a - beta``."""
        beta = _as_complex_vector(beta, "beta")
        if beta.size != self._modes:
            raise InvalidInputError("displacement must have one entry per mode")
        out = {}
        for key, v in self._terms.items():
            # expand prod_k (a_k^dag - beta_k*)^m_k (a_k - beta_k)^n_k per mode
            partial = {((), ()): v}
            for mode in range(self._modes):
                m, n = key.creation[mode], key.annihilation[mode]
                b = beta[mode]
                nxt = {}
                for (cs, ans), c in partial.items():
                    for j in range(m + 1):
                        cj = comb(m, j) * (-np.conj(b)) ** (m - j)
                        for l in range(n + 1):
                            cl = comb(n, l) * (-b) ** (n - l)
                            k2 = (cs + (j,), ans + (l,))
                            nxt[k2] = nxt.get(k2, 0) + c * cj * cl
                partial = nxt
            for (cs, ans), c in partial.items():
                mono = LadderMonomial(cs, ans)
                out[mono] = out.get(mono, 0) + c
        return NormalOrderedPolynomial(out, self._modes, self._max_degree)

    def rotated(self, phi):
        """``exp(-i phi n) K exp(i phi n)``: ``a -> a e^{i phi}`` in every mode."""
        phis = np.broadcast_to(np.asarray(phi, dtype=float), (self._modes,))
        out = {}
        for k, v in self._terms.items():
            phase = sum(p * (n - m) for p, m, n in zip(phis, k.creation, k.annihilation))
            out[k] = v * np.exp(1j * phase)
        return NormalOrderedPolynomial(out, self._modes, self._max_degree)

    def transposed(self):
        """Fock-basis transpose: ``(a^dag^m a^n)^T = a^dag^n a^m``."""
        return NormalOrderedPolynomial(
            {LadderMonomial(k.annihilation, k.creation): v for k, v in self._terms.items()},
            self._modes, self._max_degree,
        )

    def symbol(self, alpha, beta):
        return polynomial_symbol(self, alpha, beta)


@dataclass(frozen=True)
class Projector:
    """Rank-one observable ``|psi><psi|`` for a normalized state model."""

    state: object

    @property
    def modes(self):
        return self.state.modes

    def is_hermitian(self, tol=HERMITIAN_TOL):
        return True


Observable = Union[NormalOrderedPolynomial, Projector]


def _config(cfg):
    return cfg if isinstance(cfg, AmplitudeConfiguration) else AmplitudeConfiguration(cfg)


def polynomial_symbol(poly, alpha, beta):
    """``k(alpha*, beta) = sum c(m,n) prod (alpha*)^m beta^n``."""
    a = _as_complex_vector(alpha, "alpha")
    b = _as_complex_vector(beta, "beta")
    if a.size != poly.modes or b.size != poly.modes:
        raise InvalidInputError(f"polynomial acts on {poly.modes} modes")
    ac = np.conj(a)
    total = 0j
    for k, v in poly._terms.items():
        term = v
        for mode in range(poly.modes):
            term *= ac[mode] ** k.creation[mode] * b[mode] ** k.annihilation[mode]
        total += term
    return complex(total)


def gram_matrix(cfg):
    """``G_1 = (<alpha_i|alpha_j>)``: Hermitian, unit diagonal, positive definite."""
    cfg = _config(cfg)
    return kernels.gram(cfg.amps)


def operator_matrix(poly, cfg):
    """G-map of an arbitrary (not necessarily Hermitian) normally ordered polynomial."""
    cfg = _config(cfg)
    if poly.modes != cfg.modes:
        raise InvalidInputError(f"polynomial acts on {poly.modes} modes, configuration has {cfg.modes}")
    return kernels.poly_matrix(cfg.amps, *poly.arrays())


def g_vector(state, cfg):
    """``g = (<alpha_i|psi>)`` so that ``G_{|psi><psi|} = g g^H``."""
    cfg = _config(cfg)
    if state.modes != cfg.modes:
        raise InvalidInputError(f"state has {state.modes} modes, configuration has {cfg.modes}")
    state.check_normalized()
    return np.asarray(state.overlaps(cfg.amps), dtype=complex)


def g_matrix(obs, cfg):
    """G-map ``(<alpha_i|K|alpha_j>)`` of a Hermitian observable."""
    cfg = _config(cfg)
    if isinstance(obs, Projector):
        g = g_vector(obs.state, cfg)
        return np.outer(g, g.conj())
    if not obs.is_hermitian():
        raise NonHermitianError("observable is not Hermitian")
    return operator_matrix(obs, cfg)


def rank_one_matrix(left_state, right_state, cfg):
    """G-map of ``|left><right|`` as ``g_left g_right^H``."""
    return np.outer(g_vector(left_state, cfg), g_vector(right_state, cfg).conj())


def _single_mode(cfg):
    if cfg.modes != 1:
        raise UnsupportedModesError("only single-mode configurations are supported here")


def annihilation_matrix(cfg):
    """``G_a = G_1 diag(alpha_1, ..., alpha_r)`` (single mode)."""
    cfg = _config(cfg)
    _single_mode(cfg)
    return gram_matrix(cfg) * cfg.amps[:, 0][None, :]


def annihilation_weighted_g_matrix(obs, cfg):
    """``G_{a K}`` for a single-mode observable ``K``.

    Polynomials use the symbol ``beta k + d k / d alpha*``; projectors use
    ``<alpha_i|a|psi> <psi|alpha_j>``.
    """
    cfg = _config(cfg)
    _single_mode(cfg)
    if isinstance(obs, Projector):
        state = obs.state
        left = np.array([state.annihilated_overlap(a) for a in cfg.amps], dtype=complex)
        g = g_vector(state, cfg)
        return np.outer(left, g.conj())
    return operator_matrix(obs.annihilation_times(0), cfg)


def commutator_g_matrix(obs, cfg):
    """``G_{[a, K]} = G_{a K} - G_K diag(alpha)`` (single mode)."""
    cfg = _config(cfg)
    _single_mode(cfg)
    if isinstance(obs, Projector):
        return annihilation_weighted_g_matrix(obs, cfg) - g_matrix(obs, cfg) * cfg.amps[:, 0][None, :]
    return operator_matrix(obs.creation_derivative(0), cfg)
