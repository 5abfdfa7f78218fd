import math

import numpy as np
import pytest

import oracles
from ncdegree import (
    CoherentSuperposition,
    CompassSpec,
    FockVector,
    NormalOrderedPolynomial,
    Projector,
    SqueezedVacuum,
    even_coherent_state,
    fock_oracle_expectation,
    make_compass,
)
from ncdegree.algebra import g_matrix, gram_matrix
from ncdegree.errors import InvalidInputError, OracleCutoffError, UnsupportedModesError
from ncdegree.spectral import extremal_generalized_eigen, rayleigh_quotient
from ncdegree.states import annihilated_overlap, overlap_with_coherent

X2 = NormalOrderedPolynomial.quadrature_square()


def test_squeezed_overlap_closed_form():
    s = SqueezedVacuum(0.7)
    assert overlap_with_coherent(s, 0) == pytest.approx(1 / math.sqrt(math.cosh(0.7)))
    vac = SqueezedVacuum(0)
    a = 0.6 - 1.2j
    assert overlap_with_coherent(vac, a) == pytest.approx(math.exp(-abs(a) ** 2 / 2))


@pytest.mark.parametrize("xi", [0.3, -0.9, 0.5 + 0.8j, 1.2j])
def test_squeezed_overlap_matches_fock_expansion(xi):
    dim = 81
    vec = oracles.squeezed_vector(xi, dim)
    for a in (0, 1.0, -0.5 + 1.5j, 2j, 1.4 + 1.4j):
        ref = np.vdot(oracles.coherent_vector(a, dim), vec)
        assert abs(overlap_with_coherent(SqueezedVacuum(xi), a) - ref) < 1e-8


def test_squeezed_fock_coefficients_match_oracle():
    s = SqueezedVacuum(0.8 - 0.3j)
    assert np.allclose(s.fock_coefficients(80), oracles.squeezed_vector(0.8 - 0.3j, 81), atol=1e-14)


def test_even_cat_overlap_matches_fock_sum():
    cat = make_compass(CompassSpec(2, 1.5))
    dim = 60
    vec = oracles.coherent_vector(1.5, dim) + oracles.coherent_vector(-1.5, dim)
    vec /= np.linalg.norm(vec)
    ref = np.vdot(oracles.coherent_vector(1.5, dim), vec)
    # compass amplitudes are beta e^{2 pi i k / 2}: {-1.5, 1.5}
    assert abs(overlap_with_coherent(cat, 1.5) - ref) < 1e-10


def test_compass_coefficients():
    beta = 0.9
    cat = make_compass(CompassSpec(2, beta))
    kappa = (2 + 2 * math.exp(-2 * beta ** 2)) ** -0.5
    assert np.allclose(cat.coefficients, kappa, atol=1e-14)
    far = make_compass(CompassSpec(2, 8.0))
    assert np.allclose(far.coefficients, 1 / math.sqrt(2), atol=1e-14)
    c4 = make_compass(CompassSpec(4, 3.0))
    assert abs(c4.self_overlap() - 1) < 1e-10
    assert np.allclose(np.abs(c4.amplitudes[:, 0]), 3.0)


def test_compass_validation():
    with pytest.raises(InvalidInputError):
        make_compass(CompassSpec(3, 0.0))
    with pytest.raises(InvalidInputError):
        CompassSpec(1, 1.0)
    with pytest.raises(InvalidInputError):
        CompassSpec(3, -1.0)


def test_constructors_normalize(rng):
    for _ in range(20):
        amps = rng.normal(size=3) + 1j * rng.normal(size=3)
        s = CoherentSuperposition(rng.normal(size=3) + 1j * rng.normal(size=3), amps)
        assert abs(s.self_overlap() - 1) < 1e-10
    assert abs(FockVector([1, 2j, 3]).self_overlap() - 1) < 1e-12
    assert abs(SqueezedVacuum(0.4).self_overlap() - 1) < 1e-12
    with pytest.raises(InvalidInputError):
        CoherentSuperposition([1, 1], [1.0, 1.0])


def test_even_cat_parity():
    vec = even_coherent_state(1.3).fock_coefficients(60)
    assert np.max(np.abs(vec[1::2])) < 1e-15
    assert abs(np.linalg.norm(vec) - 1) < 1e-12


def test_annihilated_overlaps():
    beta = 0.5 - 0.7j
    coh = CoherentSuperposition.coherent(beta)
    a = 1.1 + 0.2j
    assert annihilated_overlap(coh, a) == pytest.approx(beta * np.exp(-abs(a) ** 2 / 2 - abs(beta) ** 2 / 2 + np.conj(a) * beta))
    s = SqueezedVacuum(0.6 + 0.2j)
    assert annihilated_overlap(s, a) == pytest.approx(-(s.nu / s.mu) * np.conj(a) * overlap_with_coherent(s, a))
    f = FockVector([0.2, 0.5j, -0.3, 0.7])
    dim = 40
    ref = np.vdot(oracles.coherent_vector(a, dim), oracles.annihilator(dim) @ f.fock_coefficients(dim - 1))
    assert abs(annihilated_overlap(f, a) - ref) < 1e-12
    two = CoherentSuperposition([1], [[0.1, 0.2]])
    with pytest.raises(UnsupportedModesError):
        annihilated_overlap(two, [0, 0])


def test_oracle_examples():
    a = 0.3 + 0.8j
    assert fock_oracle_expectation(X2, CoherentSuperposition.coherent(a)) == pytest.approx(
        1 + (2 * a.real) ** 2, abs=1e-8)
    s = SqueezedVacuum(0.5)
    assert fock_oracle_expectation(Projector(s), s) == pytest.approx(1, abs=1e-8)
    cfg = np.array([0.5j, -0.5j])
    gk, g1 = g_matrix(X2, cfg), gram_matrix(cfg)
    sol = extremal_generalized_eigen(gk, g1)
    assert fock_oracle_expectation(X2, (cfg, sol.coefficients)) == pytest.approx(sol.value, abs=1e-8)
    assert rayleigh_quotient(gk, g1, sol.coefficients) == pytest.approx(sol.value, abs=1e-12)


def test_oracle_cutoff_stability():
    state = even_coherent_state(1.8)
    v40 = fock_oracle_expectation(X2, state, 40)
    v60 = fock_oracle_expectation(X2, state, 60)
    v80 = fock_oracle_expectation(X2, state, 80)
    assert abs(v60 - v40) < 1e-8 and abs(v80 - v60) < 1e-8


def test_oracle_errors():
    with pytest.raises(OracleCutoffError):
        fock_oracle_expectation(X2, CoherentSuperposition.coherent(7.0), 60)
    with pytest.raises(OracleCutoffError):
        # in range for the amplitude heuristic but the tail is not converged
        fock_oracle_expectation(X2, CoherentSuperposition.coherent(2.0), 15)
    with pytest.raises(UnsupportedModesError):
        fock_oracle_expectation(NormalOrderedPolynomial.identity(2), CoherentSuperposition([1], [[0.1, 0.2]]))
    with pytest.raises(InvalidInputError):
        fock_oracle_expectation(X2, SqueezedVacuum(0.1), 5)


def test_transform_modes_preserves_norm(rng):
    amps = rng.normal(size=(3, 2)) + 1j * rng.normal(size=(3, 2))
    psi = CoherentSuperposition([1, 2j, -1], amps)
    q, _ = np.linalg.qr(rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2)))
    moved = psi.transform_modes(q)
    assert abs(moved.self_overlap() - 1) < 1e-12
    assert np.allclose(moved.components.amps, amps @ q.T)
