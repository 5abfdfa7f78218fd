"""Outer optimization over amplitude configurations.

``optimize_bound`` computes ``b_r`` (sup) or ``b'_r`` (inf) of a Hermitian
observable over r-term coherent superpositions: every candidate
configuration is scored by the extremal generalized eigenvalue of
``(G_K, G_1)`` and the configurations are searched by a multi-start
Nelder-Mead simplex over the 2 r N real and imaginary parts.
"""
import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from . import _kernels
from ._kernels import KIND_POLY_EIG, KIND_PROJECTOR_EIG, KIND_PROJECTOR_RANK1
from .algebra import (
    AmplitudeConfiguration,
    NormalOrderedPolynomial,
    Projector,
    g_matrix,
    g_vector,
    gram_matrix,
)
from .errors import (
    ApproximationDomainError,
    DegenerateConfigurationError,
    InvalidInputError,
    NonHermitianError,
    UnboundedDirectionError,
)
from .spectral import extremal_generalized_eigen, generalized_eigh, stationarity_residual

logger = logging.getLogger(__name__)

STATIONARITY_ACCEPT = 1e-4
EFFECTIVE_RANK_TOL = 1e-8
UNITARY_TOL = 1e-10
MIN_UNCONSTRAINED_STARTS = 4


def default_starts(r):
    return 16 if r <= 4 else 48


@dataclass(frozen=True)
class OptimizerConfig:
    """Settings of the multi-start simplex search.

    ``n_starts=None`` picks 16 starts for r <= 4 and 48 otherwise. With
    ``heuristic_line_init`` (single mode only) part of the starts first
    search amplitudes on the imaginary axis, then are polished without
    constraint; at least four starts always stay fully unconstrained.
    """

    n_starts: Optional[int] = None
    max_iterations: int = 50_000
    simplex_tolerance: float = 1e-10
    seed: int = 0
    init_radius: float = 1.5
    heuristic_line_init: bool = False
    penalty_value: float = 1e6
    workers: int = 1
    max_restarts: int = 3

    def __post_init__(self):
        if self.n_starts is not None and self.n_starts < 1:
            raise InvalidInputError("n_starts must be >= 1")
        if self.max_iterations < 1:
            raise InvalidInputError("max_iterations must be >= 1")
        if not self.simplex_tolerance > 0 or not self.init_radius > 0:
            raise InvalidInputError("tolerances and init_radius must be positive")
        if not self.penalty_value > 0:
            raise InvalidInputError("penalty_value must be positive")
        if self.workers < 1:
            raise InvalidInputError("workers must be >= 1")

    def starts_for(self, r):
        return self.n_starts if self.n_starts is not None else default_starts(r)

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class StartOutcome:
    index: int
    line_init: bool
    value: float
    x: np.ndarray = field(repr=False)
    converged: bool
    diverged: bool
    penalized: bool
    iterations: int
    nfev: int


@dataclass(frozen=True)
class BoundResult:
    """Optimized bound with the optimal state and diagnostics.

    ``bound`` is the extremal generalized eigenvalue at
    ``optimal_amplitudes``; ``optimal_coefficients`` are normalized so that
    the superposition has unit norm. ``stationarity`` is the commutator
    residual (NaN for multimode input).
    """

    r: int
    modes: int
    direction: str
    bound: float
    optimal_amplitudes: AmplitudeConfiguration
    optimal_coefficients: np.ndarray
    stationarity: float
    starts_converged: int
    best_start_index: int
    n_starts: int
    effective_rank: int
    condition_estimate: float
    seed: int
    backend: str
    start_values: tuple = field(repr=False, default=())

    @property
    def accepted(self):
        if self.modes != 1 or math.isnan(self.stationarity):
            return True
        return self.stationarity < STATIONARITY_ACCEPT

    def to_dict(self):
        amps = self.optimal_amplitudes.amps
        return {
            "r": self.r,
            "modes": self.modes,
            "direction": self.direction,
            "bound": self.bound,
            "optimal_amplitudes": [[[z.real, z.imag] for z in row] for row in amps],
            "optimal_coefficients": [[z.real, z.imag] for z in self.optimal_coefficients],
            "stationarity": None if math.isnan(self.stationarity) else self.stationarity,
            "accepted": self.accepted,
            "starts_converged": self.starts_converged,
            "best_start_index": self.best_start_index,
            "n_starts": self.n_starts,
            "effective_rank": self.effective_rank,
            "condition_estimate": self.condition_estimate,
            "seed": self.seed,
        }


def _check_direction(direction):
    if direction not in ("inf", "sup"):
        raise InvalidInputError(f"direction must be 'inf' or 'sup', got {direction!r}")
    return 1.0 if direction == "inf" else -1.0


def _objective_factory(obs, r, modes, sign, penalty, rank_one=False):
    """Closure creating fresh kernel objectives (one per start, so starts can run in parallel)."""
    kern = _kernels.kernels
    if isinstance(obs, Projector):
        kind = KIND_PROJECTOR_RANK1 if rank_one else KIND_PROJECTOR_EIG
        state_kind, cdata, bdata = obs.state.kernel_encoding()

        def make(line_mode):
            return kern.Objective(kind, sign, r, modes, line_mode, penalty,
                                  state_kind=state_kind, cdata=cdata, bdata=bdata)
    else:
        mexp, nexp, coef = obs.arrays()

        def make(line_mode):
            return kern.Objective(KIND_POLY_EIG, sign, r, modes, line_mode, penalty,
                                  mexp=mexp, nexp=nexp, coef=coef)
    return make


def _plan_starts(r, modes, config):
    """Deterministic list of ``(line_init, x0)`` start points."""
    rng = np.random.default_rng(config.seed)
    total = config.starts_for(r)
    rad = config.init_radius
    if config.heuristic_line_init and modes == 1:
        n_free = max(MIN_UNCONSTRAINED_STARTS, total // 2)
        n_line = max(1, total - n_free)
    else:
        n_free, n_line = total, 0
    plan = []
    for _ in range(n_line):
        spacing = rad * (0.75 + 0.5 * rng.random())
        y = spacing * (np.arange(r) - 0.5 * (r - 1)) + 0.1 * rad * rng.normal(size=r)
        plan.append((True, y))
    for _ in range(n_free):
        z = rad * (rng.normal(size=(r, modes)) + 1j * rng.normal(size=(r, modes))) / math.sqrt(2.0)
        plan.append((False, np.concatenate([z.real.ravel(), z.imag.ravel()])))
    return plan


def _run_start(index, line_init, x0, make, config, escape):
    kern = _kernels.kernels
    step = 0.25 * config.init_radius
    total_iter = 0
    total_fev = 0
    if line_init:
        obj = make(True)
        y, _, it, nf, _, div = kern.nelder_mead(obj, x0, step, config.max_iterations,
                                                config.simplex_tolerance, escape, config.max_restarts)
        total_iter += it
        total_fev += nf
        if div:
            return StartOutcome(index, True, -math.inf, np.concatenate([np.zeros_like(y), y]),
                                False, True, False, total_iter, total_fev)
        x0 = np.concatenate([np.zeros_like(y), y])
        step = 0.02
    obj = make(False)
    x, f, it, nf, conv, div = kern.nelder_mead(obj, x0, step, config.max_iterations,
                                               config.simplex_tolerance, escape, config.max_restarts)
    total_iter += it
    total_fev += nf
    return StartOutcome(index, line_init, f, x, conv, div, f >= config.penalty_value,
                        total_iter, total_fev)


def _search(obs, r, modes, sign, config, rank_one=False):
    make = _objective_factory(obs, r, modes, sign, config.penalty_value, rank_one)
    plan = _plan_starts(r, modes, config)
    escape = 10.0 * config.init_radius
    args = [(i, line, x0, make, config, escape) for i, (line, x0) in enumerate(plan)]
    if config.workers > 1 and len(args) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outcomes = list(pool.map(lambda a: _run_start(*a), args))
    else:
        outcomes = [_run_start(*a) for a in args]

    diverged = [o for o in outcomes if o.diverged]
    if diverged:
        raise UnboundedDirectionError(
            f"objective keeps improving beyond amplitude radius {escape:g} "
            f"({len(diverged)} of {len(outcomes)} starts); the observable is unbounded "
            "in this direction"
        )
    usable = [o for o in outcomes if not o.penalized]
    if not usable:
        raise DegenerateConfigurationError("every start ended on a coincident or ill-conditioned configuration")

    best_value = min(o.value for o in usable)
    tied = [o for o in usable if o.value <= best_value + config.simplex_tolerance]
    obj = make(False)
    best = min(tied, key=lambda o: (obj.amplitude_norm(o.x), o.index))
    return best, outcomes, obj


def _finish(obs, r, modes, direction, best, outcomes, obj, config, rank_one):
    cfg = AmplitudeConfiguration(obj.amplitudes(best.x))
    g1 = gram_matrix(cfg)
    if rank_one:
        g = g_vector(obs.state, cfg)
        w, vecs, cond = generalized_eigh(np.outer(g, g.conj()), g1)
        lam = np.linalg.solve(g1, g)
        value = float(np.vdot(g, lam).real)
        lam = lam / math.sqrt(np.vdot(lam, g1 @ lam).real)
        value = min(max(value, 0.0), 1.0)
    else:
        gk = g_matrix(obs, cfg)
        sol = extremal_generalized_eigen(gk, g1, "min" if direction == "inf" else "max")
        value, lam, cond = sol.value, sol.coefficients, sol.condition_estimate
    stationarity = stationarity_residual(obs, cfg, lam) if modes == 1 else math.nan
    mags = np.abs(lam)
    eff_rank = int(np.sum(mags >= EFFECTIVE_RANK_TOL * np.linalg.norm(lam)))
    result = BoundResult(
        r=r,
        modes=modes,
        direction=direction,
        bound=float(value),
        optimal_amplitudes=cfg,
        optimal_coefficients=np.asarray(lam),
        stationarity=float(stationarity),
        starts_converged=sum(o.converged for o in outcomes),
        best_start_index=best.index,
        n_starts=len(outcomes),
        effective_rank=eff_rank,
        condition_estimate=float(cond),
        seed=config.seed,
        backend=_kernels.BACKEND,
        start_values=tuple(o.value for o in outcomes),
    )
    if not result.accepted:
        logger.warning("r=%d %s bound %.8f has commutator residual %.2e above %.0e",
                       r, direction, value, stationarity, STATIONARITY_ACCEPT)
    return result


def optimize_bound(obs, r, modes=None, direction="inf", config=None):
    """Extremal expectation value of ``obs`` over r-term coherent superpositions.

    Parameters
    ----------
    obs : NormalOrderedPolynomial or Projector
        Hermitian observable.
    r : int
        Number of superposed coherent states.
    modes : int, optional
        Defaults to the observable's mode count.
    direction : {"inf", "sup"}
        ``"inf"`` gives ``b'_r``, ``"sup"`` gives ``b_r``.
    config : OptimizerConfig, optional

    Raises
    ------
    UnboundedDirectionError
        If a start runs off to large amplitudes while still improving.
    DegenerateConfigurationError
        If every start ends on a penalized configuration.
    """
    config = config or OptimizerConfig()
    sign = _check_direction(direction)
    if int(r) != r or r < 1:
        raise InvalidInputError("r must be a positive integer")
    r = int(r)
    modes = obs.modes if modes is None else int(modes)
    if modes != obs.modes:
        raise InvalidInputError(f"observable acts on {obs.modes} modes, requested {modes}")
    if isinstance(obs, NormalOrderedPolynomial) and not obs.is_hermitian():
        raise NonHermitianError("optimize_bound needs a Hermitian observable")
    if isinstance(obs, Projector):
        obs.state.check_normalized()
    best, outcomes, obj = _search(obs, r, modes, sign, config)
    return _finish(obs, r, modes, direction, best, outcomes, obj, config, rank_one=False)


def pure_state_bound(psi, r, config=None):
    """``b_r(|psi><psi|) = max g^H G_1^-1 g`` over r-term configurations.

    Uses the rank-one closed form ``lambda = G_1^-1 g`` instead of the
    general eigensolve. The result lies in [0, 1].
    """
    config = config or OptimizerConfig()
    if int(r) != r or r < 1:
        raise InvalidInputError("r must be a positive integer")
    r = int(r)
    psi.check_normalized()
    obs = Projector(psi)
    best, outcomes, obj = _search(obs, r, psi.modes, -1.0, config, rank_one=True)
    return _finish(obs, r, psi.modes, "sup", best, outcomes, obj, config, rank_one=True)


def finite_superposition_bound_approx(psi, r):
    """Sum of the r largest ``|kappa_k|^2`` for well-separated components.

    Valid only when all pairwise component overlaps are below 1e-3 in
    modulus; the weights are renormalized to sum to one.
    """
    if int(r) != r or r < 1:
        raise InvalidInputError("r must be a positive integer")
    gram = gram_matrix(psi.components)
    off = np.abs(gram - np.diag(np.diag(gram)))
    if off.size and np.max(off) >= 1e-3:
        raise ApproximationDomainError(
            f"largest component overlap {np.max(off):.2e} is not below 1e-3"
        )
    weights = np.abs(psi.coefficients) ** 2
    weights = weights / np.sum(weights)
    if r >= weights.size:
        return 1.0
    return float(np.sum(np.sort(weights)[::-1][: int(r)]))


def mode_transform(cfg, unitary):
    """Map every amplitude vector ``alpha -> U alpha`` for a unitary U."""
    cfg = cfg if isinstance(cfg, AmplitudeConfiguration) else AmplitudeConfiguration(cfg)
    u = np.asarray(unitary, dtype=complex)
    if u.shape != (cfg.modes, cfg.modes):
        raise InvalidInputError(f"need a {cfg.modes} x {cfg.modes} matrix, got {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(cfg.modes))) > UNITARY_TOL:
        raise InvalidInputError("mode transformation is not unitary")
    return AmplitudeConfiguration(cfg.amps @ u.T)


def with_overrides(config, **overrides):
    """Copy of ``config`` with the non-None overrides applied."""
    clean = {k: v for k, v in overrides.items() if v is not None}
    return replace(config, **clean) if clean else config
