import math

import numpy as np
import pytest

import oracles
from conftest import dense_terms
from ncdegree import (
    AmplitudeConfiguration,
    CoherentSuperposition,
    CompassSpec,
    NormalOrderedPolynomial,
    OptimizerConfig,
    Projector,
    SqueezedVacuum,
    even_coherent_state,
    finite_superposition_bound_approx,
    make_compass,
    mode_transform,
    optimize_bound,
    pure_state_bound,
)
from ncdegree.algebra import g_matrix, gram_matrix
from ncdegree.bounds import default_starts, with_overrides
from ncdegree.errors import (
    ApproximationDomainError,
    InvalidInputError,
    NonHermitianError,
    UnboundedDirectionError,
)
from ncdegree.spectral import extremal_generalized_eigen

X2 = NormalOrderedPolynomial.quadrature_square()
NUM = NormalOrderedPolynomial.number()
FAST = OptimizerConfig(n_starts=6)

# scipy multi-start on dense truncated matrices (tests/oracles.py), dimension 80
SQUEEZED_PURE_BOUNDS = {
    0.2: (0.98032800, 0.99973895, 0.99999689),
    0.5: (0.88681888, 0.99087148, 0.99934006),
    0.8: (0.74769992, 0.95096530, 0.99142610),
    1.1: (0.59933406, 0.86647385, 0.95940454),
}
X2_R2_DENSE = 0.4430709144778516


def test_config_defaults_and_validation():
    assert default_starts(4) == 16 and default_starts(5) == 48
    cfg = OptimizerConfig()
    assert cfg.starts_for(3) == 16 and cfg.starts_for(7) == 48
    assert OptimizerConfig(n_starts=3).starts_for(9) == 3
    for bad in ({"n_starts": 0}, {"simplex_tolerance": 0}, {"init_radius": -1}, {"workers": 0}):
        with pytest.raises(InvalidInputError):
            OptimizerConfig(**bad)
    assert with_overrides(cfg, seed=None) is cfg
    assert with_overrides(cfg, seed=4).seed == 4


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("direction", ["inf", "sup"])
def test_identity_bound_is_one(r, direction):
    # the objective is flat, so the simplex wanders into mildly ill-conditioned
    # configurations; the error stays at the cond * eps level
    res = optimize_bound(NormalOrderedPolynomial.identity(), r, direction=direction, config=FAST)
    assert res.bound == pytest.approx(1, abs=1e-8)


def test_table_rows_small_r():
    assert optimize_bound(X2, 1).bound == pytest.approx(1, abs=1e-9)
    res = optimize_bound(X2, 2)
    assert res.bound == pytest.approx(0.443071, abs=1e-4)
    assert res.bound == pytest.approx(X2_R2_DENSE, abs=1e-9)
    assert res.accepted and res.starts_converged == res.n_starts
    # the bound is the extremal eigenvalue at the reported amplitudes
    cfg = res.optimal_amplitudes
    sol = extremal_generalized_eigen(g_matrix(X2, cfg), gram_matrix(cfg))
    assert sol.value == pytest.approx(res.bound, abs=1e-12)
    lam = res.optimal_coefficients
    assert np.vdot(lam, gram_matrix(cfg) @ lam).real == pytest.approx(1, abs=1e-10)


def test_line_init_agrees_with_unconstrained():
    free = optimize_bound(X2, 3)
    line = optimize_bound(X2, 3, config=OptimizerConfig(heuristic_line_init=True))
    assert free.bound == pytest.approx(line.bound, abs=1e-8)
    assert line.bound == pytest.approx(0.256447, abs=1e-4)


def test_bound_matches_dense_oracle_r2():
    dim = 70
    op = oracles.polynomial_operator(dense_terms(X2), dim)
    ref, _ = oracles.min_eig_oracle(op, 2, dim=dim, n_starts=4)
    assert optimize_bound(X2, 2).bound == pytest.approx(ref, abs=1e-8)


def test_sup_of_quadrature_is_unbounded():
    with pytest.raises(UnboundedDirectionError):
        optimize_bound(X2, 1, direction="sup", config=FAST)


def test_optimize_bound_validation():
    with pytest.raises(NonHermitianError):
        optimize_bound(NormalOrderedPolynomial.annihilation(), 1)
    with pytest.raises(InvalidInputError):
        optimize_bound(X2, 0)
    with pytest.raises(InvalidInputError):
        optimize_bound(X2, 1, direction="up")
    with pytest.raises(InvalidInputError):
        optimize_bound(X2, 1, modes=2)


def test_reproducible_and_parallel():
    a = optimize_bound(X2, 3, config=OptimizerConfig(seed=7))
    b = optimize_bound(X2, 3, config=OptimizerConfig(seed=7))
    c = optimize_bound(X2, 3, config=OptimizerConfig(seed=7, workers=4))
    assert a.bound == b.bound == c.bound
    assert a.best_start_index == c.best_start_index
    assert np.array_equal(a.optimal_amplitudes.amps, c.optimal_amplitudes.amps)


def test_affine_law():
    mu, nu = 0.7, 2.5
    base = optimize_bound(X2, 2).bound
    moved = optimize_bound(X2.affine(mu, nu), 2).bound
    assert moved == pytest.approx(mu + nu * base, abs=2e-10 * max(1, nu))


def test_displacement_moves_optimum():
    beta0 = 0.8 - 0.6j
    res = optimize_bound(NUM.displaced(beta0), 1, config=FAST)
    assert res.bound == pytest.approx(0, abs=1e-9)
    assert abs(res.optimal_amplitudes.amps[0, 0] - beta0) < 1e-4
    assert optimize_bound(X2.displaced(beta0), 2).bound == pytest.approx(optimize_bound(X2, 2).bound, abs=2e-10)


def test_rotation_moves_optimum():
    beta0, phi = 1.1 + 0.2j, 0.9
    res = optimize_bound(NUM.displaced(beta0).rotated(phi), 1, config=FAST)
    assert abs(res.optimal_amplitudes.amps[0, 0] - np.exp(-1j * phi) * beta0) < 1e-4
    assert optimize_bound(X2.rotated(phi), 2).bound == pytest.approx(optimize_bound(X2, 2).bound, abs=2e-10)


def test_coherent_state_is_reached():
    psi = CoherentSuperposition.coherent(0.4 + 0.3j)
    one = pure_state_bound(psi, 1, FAST)
    assert one.effective_rank == 1 and one.bound == pytest.approx(1, abs=1e-9)
    assert abs(one.optimal_amplitudes.amps[0, 0] - (0.4 + 0.3j)) < 1e-4
    # the second term is redundant; its weight is only as small as the simplex resolves
    two = pure_state_bound(psi, 2, FAST)
    assert two.bound == pytest.approx(1, abs=1e-9)
    assert np.min(np.abs(two.optimal_coefficients)) < 1e-4


def test_pure_bound_members_reach_one():
    psi = CoherentSuperposition([1, -0.5j], [0.9, -0.4 + 1j])
    assert pure_state_bound(psi, 2).bound == pytest.approx(1, abs=1e-8)
    assert pure_state_bound(psi, 1).bound < 0.99


def test_pure_bound_cat_limits():
    assert pure_state_bound(even_coherent_state(0.05), 1).bound > 0.999
    assert pure_state_bound(even_coherent_state(3.0), 1).bound == pytest.approx(0.5, abs=1e-3)


@pytest.mark.parametrize("xi", sorted(SQUEEZED_PURE_BOUNDS))
def test_squeezed_bounds_match_dense_oracle(xi):
    s = SqueezedVacuum(xi)
    got = [pure_state_bound(s, r).bound for r in (1, 2, 3)]
    assert got == pytest.approx(SQUEEZED_PURE_BOUNDS[xi], abs=1e-7)
    assert got[0] == pytest.approx(1 / math.cosh(xi), abs=1e-9)


def test_compass_law():
    psi = make_compass(CompassSpec(4, 4.0))
    for r in (1, 2, 3):
        b = pure_state_bound(psi, r).bound
        assert b == pytest.approx(r / 4, abs=1e-2)
        assert b == pytest.approx(finite_superposition_bound_approx(psi, r), abs=1e-3)
    assert finite_superposition_bound_approx(psi, 4) == 1.0
    assert finite_superposition_bound_approx(psi, 7) == 1.0


def test_approximation_domain():
    cat = even_coherent_state(3.0)
    assert finite_superposition_bound_approx(cat, 1) == pytest.approx(0.5, abs=1e-7)
    with pytest.raises(ApproximationDomainError):
        finite_superposition_bound_approx(even_coherent_state(1.0), 1)


def test_mode_transform(rng):
    cfg = AmplitudeConfiguration([[1, 2j], [0.5, -1]])
    assert mode_transform(cfg, np.eye(2)) == cfg
    swapped = mode_transform(cfg, [[0, 1], [1, 0]])
    assert np.array_equal(swapped.amps, cfg.amps[:, ::-1])
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    assert np.max(np.abs(gram_matrix(mode_transform(cfg, q)) - gram_matrix(cfg))) < 1e-12
    with pytest.raises(InvalidInputError):
        mode_transform(cfg, [[1, 1], [0, 1]])
    with pytest.raises(InvalidInputError):
        mode_transform(cfg, np.eye(3))


def test_multimode_unitary_invariance(rng):
    amps = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    psi = CoherentSuperposition([1, 0.5j, -0.3], amps)
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    for r in (1, 2):
        a = pure_state_bound(psi, r).bound
        b = pure_state_bound(psi.transform_modes(q), r).bound
        assert a == pytest.approx(b, abs=2e-10)
        assert 0 <= a <= 1


def test_multimode_polynomial():
    # total photon number of two modes is minimized by the vacuum
    n2 = NormalOrderedPolynomial.number(0, 2) + NormalOrderedPolynomial.number(1, 2)
    res = optimize_bound(n2, 1, config=FAST)
    assert res.bound == pytest.approx(0, abs=1e-9)
    assert math.isnan(res.stationarity) and res.accepted


def test_projector_observable_via_general_solver():
    cat = even_coherent_state(1.0)
    general = optimize_bound(Projector(cat), 1, direction="sup")
    assert general.bound == pytest.approx(pure_state_bound(cat, 1).bound, abs=1e-9)


def test_to_dict_is_json_ready():
    import json
    d = optimize_bound(X2, 2, config=FAST).to_dict()
    json.dumps(d)
    assert d["r"] == 2 and d["direction"] == "inf" and d["seed"] == 0
