import os
import subprocess
import sys

import numpy as np
import pytest

from conftest import random_configuration, random_polynomial
from ncdegree import CoherentSuperposition, FockVector, NormalOrderedPolynomial, SqueezedVacuum
from ncdegree._kernels import (
    KIND_POLY_EIG,
    KIND_PROJECTOR_EIG,
    KIND_PROJECTOR_RANK1,
    STATUS_CHOLESKY_FAILED,
    STATUS_OK,
    available_backends,
    load_backend,
)

BACKENDS = available_backends()
needs_native = pytest.mark.skipif("native" not in BACKENDS, reason="compiled extension not built")
X2 = NormalOrderedPolynomial.quadrature_square()


@pytest.fixture(scope="module")
def pair():
    return load_backend("native"), load_backend("pure")


def test_pure_backend_always_available():
    assert "pure" in BACKENDS
    with pytest.raises(ValueError):
        load_backend("fortran")


@needs_native
def test_matrices_agree(pair, rng):
    nat, pure = pair
    for _ in range(20):
        r, modes = int(rng.integers(1, 6)), int(rng.integers(1, 3))
        amps = np.ascontiguousarray(random_configuration(rng, r, modes).amps)
        assert np.max(np.abs(nat.gram(amps) - pure.gram(amps))) < 1e-14
        arrays = random_polynomial(rng, 3, modes=modes).arrays()
        a, b = nat.poly_matrix(amps, *arrays), pure.poly_matrix(amps, *arrays)
        assert np.max(np.abs(a - b)) < 1e-12 * max(1, np.max(np.abs(b)))
        other = np.ascontiguousarray(random_configuration(rng, 2, modes).amps)
        assert np.max(np.abs(nat.gram_cross(amps, other) - pure.gram_cross(amps, other))) < 1e-14


@needs_native
@pytest.mark.parametrize("state", [
    CoherentSuperposition([1, 0.5j], [0.3, -1 + 1j]),
    SqueezedVacuum(0.7 - 0.2j),
    FockVector([0.3, 0.1j, -0.6, 0.2, 0.5]),
], ids=["superposition", "squeezed", "fock"])
def test_state_overlaps_agree(pair, rng, state):
    nat, pure = pair
    amps = np.ascontiguousarray(random_configuration(rng, 4).amps)
    kind, cdata, bdata = state.kernel_encoding()
    assert np.max(np.abs(nat.state_overlaps(kind, cdata, bdata, amps)
                         - pure.state_overlaps(kind, cdata, bdata, amps))) < 1e-13


@needs_native
def test_geneig_agrees(pair, rng):
    nat, pure = pair
    for _ in range(20):
        cfg = random_configuration(rng, int(rng.integers(2, 6)))
        amps = np.ascontiguousarray(cfg.amps)
        gk = pure.poly_matrix(amps, *random_polynomial(rng).arrays())
        g1 = pure.gram(amps)
        wn, vn, rn, sn = nat.hermitian_geneig(gk, g1)
        wp, vp, rp, sp = pure.hermitian_geneig(gk, g1)
        assert sn == sp == STATUS_OK
        assert np.allclose(wn, wp, atol=1e-10)
        assert rn == pytest.approx(rp, rel=1e-6)
        assert np.allclose(vn.conj().T @ g1 @ vn, np.eye(cfg.r), atol=1e-9)
    bad = np.diag([1.0, -1.0]).astype(complex)
    assert nat.hermitian_geneig(bad, bad)[3] == pure.hermitian_geneig(bad, bad)[3] == STATUS_CHOLESKY_FAILED


def _objectives(backend, kind, r, **kw):
    return backend.Objective(kind, 1.0 if kind == KIND_POLY_EIG else -1.0, r, 1, False, 1e6, **kw)


@needs_native
def test_objective_values_agree(pair, rng):
    nat, pure = pair
    mexp, nexp, coef = X2.arrays()
    state = SqueezedVacuum(0.8)
    sk, cd, bd = state.kernel_encoding()
    for r in (1, 2, 4):
        objs = [
            (_objectives(nat, KIND_POLY_EIG, r, mexp=mexp, nexp=nexp, coef=coef),
             _objectives(pure, KIND_POLY_EIG, r, mexp=mexp, nexp=nexp, coef=coef)),
            (_objectives(nat, KIND_PROJECTOR_EIG, r, state_kind=sk, cdata=cd, bdata=bd),
             _objectives(pure, KIND_PROJECTOR_EIG, r, state_kind=sk, cdata=cd, bdata=bd)),
            (_objectives(nat, KIND_PROJECTOR_RANK1, r, state_kind=sk, cdata=cd, bdata=bd),
             _objectives(pure, KIND_PROJECTOR_RANK1, r, state_kind=sk, cdata=cd, bdata=bd)),
        ]
        for _ in range(10):
            x = rng.normal(size=2 * r)
            for a, b in objs:
                assert a(x) == pytest.approx(b(x), abs=1e-10)
        # coincident amplitudes hit the penalty on both backends
        x = np.zeros(2 * r)
        if r > 1:
            assert objs[0][0](x) == objs[0][1](x) == 1e6


@needs_native
def test_nelder_mead_agrees(pair):
    nat, pure = pair
    mexp, nexp, coef = X2.arrays()
    x0 = np.array([0.2, -0.1, 0.9, -1.1])
    results = []
    for kern in pair:
        obj = _objectives(kern, KIND_POLY_EIG, 2, mexp=mexp, nexp=nexp, coef=coef)
        results.append(kern.nelder_mead(obj, x0, 0.375, 50000, 1e-10, 15.0, 3))
    (xn, fn, *_rest_n), (xp, fp, *_rest_p) = results
    assert fn == pytest.approx(fp, abs=1e-9)
    assert fn == pytest.approx(0.4430709, abs=1e-6)
    assert results[0][4] and results[1][4]


def test_forced_fallback_runs_end_to_end():
    env = dict(os.environ, NCDEGREE_PURE_PYTHON="1")
    code = ("import ncdegree as n; "
            "r = n.optimize_bound(n.NormalOrderedPolynomial.quadrature_square(), 2, "
            "config=n.OptimizerConfig(n_starts=3)); "
            "print(n.BACKEND, round(r.bound, 6), r.backend)")
    proc = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert proc.stdout.split() == ["pure", "0.443071", "pure"]
