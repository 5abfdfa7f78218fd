"""State models with analytic coherent-state overlaps, and a Fock-basis oracle.

Every model exposes ``overlap_with_coherent(alpha) = <alpha|psi>``; the
truncated number-basis oracle ``fock_oracle_expectation`` is independent of
the G-map and is used to cross-check it.
"""
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from ._kernels import STATE_FOCK, STATE_SQUEEZED, STATE_SUPERPOSITION, kernels
from .algebra import (
    AmplitudeConfiguration,
    Projector,
    _as_complex_vector,
)
from .errors import (
    InvalidInputError,
    OracleCutoffError,
    UnnormalizedStateError,
    UnsupportedModesError,
)

NORM_TOL = 1e-10
DEFAULT_CUTOFF = 60
MAX_CUTOFF = 200
ORACLE_TAIL_TOL = 1e-8


class StateModel:
    """Base class: a normalized pure state with analytic coherent overlaps."""

    modes = 1

    def overlaps(self, amps):
        """Vector ``<alpha_i|psi>`` for amplitudes of shape (r, N)."""
        amps = np.asarray(amps, dtype=complex).reshape(-1, self.modes)
        kind, cdata, bdata = self.kernel_encoding()
        return kernels.state_overlaps(kind, cdata, bdata, amps)

    def overlap_with_coherent(self, alpha):
        alpha = _as_complex_vector(alpha)
        if alpha.size != self.modes:
            raise InvalidInputError(f"state has {self.modes} modes, amplitude has {alpha.size}")
        return complex(self.overlaps(alpha.reshape(1, -1))[0])

    def self_overlap(self):
        raise NotImplementedError

    def check_normalized(self, tol=NORM_TOL):
        norm = self.self_overlap()
        if abs(norm - 1.0) > tol:
            raise UnnormalizedStateError(f"self-overlap is {norm!r}, expected 1")

    def kernel_encoding(self):
        raise NotImplementedError

    def fock_coefficients(self, cutoff):
        """Number-basis amplitudes ``<n|psi>`` for ``n = 0..cutoff`` (single mode)."""
        raise NotImplementedError


def _coherent_fock(alpha, cutoff):
    out = np.empty(cutoff + 1, dtype=complex)
    out[0] = math.exp(-0.5 * abs(alpha) ** 2)
    for n in range(1, cutoff + 1):
        out[n] = out[n - 1] * alpha / math.sqrt(n)
    return out


class CoherentSuperposition(StateModel):
    """``sum_k kappa_k |beta_k>`` over distinct (multimode) amplitudes.

    Coefficients are rescaled to unit norm (via the Gram matrix of the
    components) unless ``normalize=False``.
    """

    def __init__(self, coefficients, amplitudes, modes=None, normalize=True):
        cfg = amplitudes if isinstance(amplitudes, AmplitudeConfiguration) else \
            AmplitudeConfiguration(amplitudes, modes)
        kappa = np.atleast_1d(np.asarray(coefficients, dtype=complex))
        if kappa.shape != (cfg.r,):
            raise InvalidInputError(f"need {cfg.r} coefficients, got shape {kappa.shape}")
        if not np.all(np.isfinite(kappa)):
            raise InvalidInputError("coefficients contain non-finite entries")
        self.components = cfg
        self.modes = cfg.modes
        norm = self._norm(kappa)
        if normalize:
            if norm <= 0:
                raise InvalidInputError("superposition has zero norm")
            kappa = kappa / math.sqrt(norm)
        kappa.setflags(write=False)
        self.coefficients = kappa

    @classmethod
    def coherent(cls, beta):
        beta = _as_complex_vector(beta, "beta")
        return cls([1.0], beta.reshape(1, -1))

    def _norm(self, kappa):
        gram = kernels.gram(self.components.amps)
        return float(np.real(np.vdot(kappa, gram @ kappa)))

    def self_overlap(self):
        return self._norm(self.coefficients)

    @property
    def amplitudes(self):
        return self.components.amps

    def kernel_encoding(self):
        return STATE_SUPERPOSITION, np.array(self.coefficients), np.array(self.components.amps)

    def annihilated_overlap(self, alpha):
        if self.modes != 1:
            raise UnsupportedModesError("annihilated_overlap is single-mode only")
        alpha = complex(_as_complex_vector(alpha)[0])
        betas = self.components.amps[:, 0]
        cross = kernels.gram_cross(np.array([[alpha]]), self.components.amps)[0]
        return complex(np.sum(self.coefficients * betas * cross))

    def fock_coefficients(self, cutoff):
        if self.modes != 1:
            raise UnsupportedModesError("Fock expansion is single-mode only")
        out = np.zeros(cutoff + 1, dtype=complex)
        for kappa, beta in zip(self.coefficients, self.components.amps[:, 0]):
            out += kappa * _coherent_fock(beta, cutoff)
        return out

    def transform_modes(self, unitary):
        """Apply a passive mode transformation ``beta -> U beta`` to every component."""
        from .bounds import mode_transform
        return CoherentSuperposition(self.coefficients, mode_transform(self.components, unitary),
                                     normalize=False)

    def __repr__(self):
        return (f"CoherentSuperposition(coefficients={self.coefficients.tolist()}, "
                f"amplitudes={self.components.amps.tolist()})")


class SqueezedVacuum(StateModel):
    """Squeezed vacuum ``mu^{-1/2} exp(-nu a^dag^2 / (2 mu)) |vac>``.

    ``mu = cosh|xi|`` and ``nu = exp(i arg xi) sinh|xi|``.
    """

    def __init__(self, xi):
        xi = complex(xi)
        if not np.isfinite(xi):
            raise InvalidInputError("xi must be finite")
        self.xi = xi
        self.mu = math.cosh(abs(xi))
        self.nu = complex(np.exp(1j * np.angle(xi)) * math.sinh(abs(xi)))

    def self_overlap(self):
        return 1.0

    def kernel_encoding(self):
        return (STATE_SQUEEZED, np.array([self.mu, self.nu], dtype=complex),
                np.zeros((0, 1), dtype=complex))

    def annihilated_overlap(self, alpha):
        alpha = complex(_as_complex_vector(alpha)[0])
        return -(self.nu / self.mu) * alpha.conjugate() * self.overlap_with_coherent(alpha)

    def fock_coefficients(self, cutoff):
        out = np.zeros(cutoff + 1, dtype=complex)
        out[0] = 1.0 / math.sqrt(self.mu)
        ratio = -self.nu / (2.0 * self.mu)
        if ratio == 0:
            return out
        log_ratio = math.log(abs(ratio))
        phase = np.angle(ratio)
        for n in range(2, cutoff + 1, 2):
            k = n // 2
            log_mag = -0.5 * math.log(self.mu) + k * log_ratio + 0.5 * gammaln(n + 1) - gammaln(k + 1)
            out[n] = math.exp(log_mag) * np.exp(1j * k * phase)
        return out

    def __repr__(self):
        return f"SqueezedVacuum(xi={self.xi!r})"


class FockVector(StateModel):
    """Finite number-basis state ``sum_n psi_n |n>``, normalized on construction."""

    def __init__(self, coefficients, normalize=True):
        psi = np.atleast_1d(np.asarray(coefficients, dtype=complex))
        if psi.ndim != 1 or psi.size == 0:
            raise InvalidInputError("Fock coefficients must be a non-empty vector")
        if not np.all(np.isfinite(psi)):
            raise InvalidInputError("Fock coefficients contain non-finite entries")
        norm = float(np.vdot(psi, psi).real)
        if normalize:
            if norm <= 0:
                raise InvalidInputError("Fock vector has zero norm")
            psi = psi / math.sqrt(norm)
        psi.setflags(write=False)
        self.coefficients = psi

    @property
    def cutoff(self):
        return self.coefficients.size - 1

    def self_overlap(self):
        return float(np.vdot(self.coefficients, self.coefficients).real)

    def kernel_encoding(self):
        return STATE_FOCK, np.array(self.coefficients), np.zeros((0, 1), dtype=complex)

    def annihilated_overlap(self, alpha):
        alpha = complex(_as_complex_vector(alpha)[0])
        psi = self.coefficients
        if psi.size < 2:
            return 0j
        lowered = psi[1:] * np.sqrt(np.arange(1, psi.size))
        basis = _coherent_fock(alpha, psi.size - 2).conj()
        return complex(np.dot(basis, lowered))

    def fock_coefficients(self, cutoff):
        out = np.zeros(cutoff + 1, dtype=complex)
        n = min(cutoff + 1, self.coefficients.size)
        out[:n] = self.coefficients[:n]
        return out

    def __repr__(self):
        return f"FockVector({self.coefficients.tolist()})"


@dataclass(frozen=True)
class CompassSpec:
    """Equal-weight superposition of ``R`` coherent states on a circle of radius ``beta``."""

    R: int
    beta: float

    def __post_init__(self):
        if int(self.R) != self.R or self.R < 2:
            raise InvalidInputError("compass states need an integer R >= 2")
        if not (self.beta >= 0 and math.isfinite(self.beta)):
            raise InvalidInputError("beta must be a finite nonnegative number")


def make_compass(spec):
    """Compass state with the closed-form equal coefficients.

    ``kappa = (sum_{k1,k2} exp[-beta^2 + beta^2 e^{2 pi i (k2-k1)/R}])^{-1/2}``
    """
    if spec.beta == 0:
        raise InvalidInputError("beta = 0 makes all compass components coincide")
    R = int(spec.R)
    b2 = float(spec.beta) ** 2
    diffs = np.subtract.outer(np.arange(R), np.arange(R))
    total = np.sum(np.exp(-b2 + b2 * np.exp(2j * np.pi * diffs / R)))
    kappa = 1.0 / np.sqrt(total.real)
    amplitudes = spec.beta * np.exp(2j * np.pi * np.arange(1, R + 1) / R)
    state = CoherentSuperposition(np.full(R, kappa), amplitudes, normalize=False)
    state.check_normalized()
    return state


def even_coherent_state(beta):
    """``|beta> + |-beta>``, normalized (the R = 2 compass state up to a phase of beta)."""
    return make_compass(CompassSpec(2, float(beta)))


def overlap_with_coherent(state, alpha):
    """``<alpha|psi>``."""
    return state.overlap_with_coherent(alpha)


def annihilated_overlap(state, alpha):
    """``<alpha|a|psi>`` (single mode)."""
    if state.modes != 1:
        raise UnsupportedModesError("annihilated_overlap is single-mode only")
    return state.annihilated_overlap(alpha)


def _oracle_state_vector(state_or_cfg, cutoff):
    if isinstance(state_or_cfg, StateModel):
        if state_or_cfg.modes != 1:
            raise UnsupportedModesError("the Fock oracle is single-mode only")
        return state_or_cfg.fock_coefficients(cutoff)
    cfg, lam = state_or_cfg
    cfg = cfg if isinstance(cfg, AmplitudeConfiguration) else AmplitudeConfiguration(cfg)
    if cfg.modes != 1:
        raise UnsupportedModesError("the Fock oracle is single-mode only")
    lam = np.asarray(lam, dtype=complex)
    out = np.zeros(cutoff + 1, dtype=complex)
    for coeff, alpha in zip(lam, cfg.amps[:, 0]):
        out += coeff * _coherent_fock(alpha, cutoff)
    return out


def _oracle_amplitude_scale(state_or_cfg):
    if isinstance(state_or_cfg, CoherentSuperposition):
        return float(np.max(np.abs(state_or_cfg.amplitudes)))
    if isinstance(state_or_cfg, StateModel):
        return 0.0
    cfg = state_or_cfg[0]
    amps = cfg.amps if isinstance(cfg, AmplitudeConfiguration) else np.asarray(cfg, dtype=complex)
    return float(np.max(np.abs(amps)))


def _truncated_expectation(obs, psi, cutoff):
    norm = float(np.vdot(psi, psi).real)
    if isinstance(obs, Projector):
        if obs.state.modes != 1:
            raise UnsupportedModesError("the Fock oracle is single-mode only")
        phi = obs.state.fock_coefficients(cutoff)
        return abs(np.vdot(phi, psi)) ** 2 / norm
    if obs.modes != 1:
        raise UnsupportedModesError("the Fock oracle is single-mode only")
    # <psi| a^dag^m a^n |psi> = <a^m psi | a^n psi>, exact for the truncated vector
    lowered = [psi]
    sqrt_n = np.sqrt(np.arange(cutoff + 1))
    for _ in range(obs.degree()):
        prev = lowered[-1]
        nxt = np.zeros_like(prev)
        nxt[:-1] = prev[1:] * sqrt_n[1:]
        lowered.append(nxt)
    total = 0j
    for key, coeff in obs.terms.items():
        total += coeff * np.vdot(lowered[key.creation[0]], lowered[key.annihilation[0]])
    return total.real / norm


def fock_oracle_expectation(obs, state_or_cfg, cutoff=DEFAULT_CUTOFF):
    """Brute-force ``<psi|K|psi>/<psi|psi>`` in the number basis ``0..cutoff``.

    ``state_or_cfg`` is a single-mode ``StateModel`` or a pair
    ``(configuration, coefficients)`` describing ``sum lambda_k |alpha_k>``.
    The result is compared against the same computation ten levels lower;
    a difference above 1e-8 raises ``OracleCutoffError``.
    """
    cutoff = int(cutoff)
    if not 10 < cutoff <= MAX_CUTOFF:
        raise InvalidInputError(f"cutoff must lie in (10, {MAX_CUTOFF}]")
    if _oracle_amplitude_scale(state_or_cfg) > cutoff / 10:
        raise OracleCutoffError(f"amplitudes exceed cutoff/10 = {cutoff / 10:g}")
    psi = _oracle_state_vector(state_or_cfg, cutoff)
    value = _truncated_expectation(obs, psi, cutoff)
    coarse = _truncated_expectation(obs, psi[: cutoff - 9], cutoff - 10)
    tail = abs(value - coarse)
    if not tail <= ORACLE_TAIL_TOL:
        raise OracleCutoffError(f"tail estimate {tail:.2e} exceeds {ORACLE_TAIL_TOL:g} at cutoff {cutoff}")
    return float(value)


__all__ = [
    "StateModel",
    "CoherentSuperposition",
    "SqueezedVacuum",
    "FockVector",
    "CompassSpec",
    "make_compass",
    "even_coherent_state",
    "overlap_with_coherent",
    "annihilated_overlap",
    "fock_oracle_expectation",
]
