import numpy as np
import pytest

from ncdegree import AmplitudeConfiguration, NormalOrderedPolynomial

# filled by test_acceptance, printed at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_configuration(rng, r, modes=1, scale=1.2, min_sep=0.3):
    """Random amplitudes with pairwise separation at least ``min_sep``."""
    while True:
        z = scale * (rng.normal(size=(r, modes)) + 1j * rng.normal(size=(r, modes)))
        d = [np.max(np.abs(z[i] - z[j])) for i in range(r) for j in range(i)]
        if not d or min(d) > min_sep:
            return AmplitudeConfiguration(z)


def random_polynomial(rng, max_degree=2, hermitian=True, modes=1, n_terms=4):
    terms = {}
    for _ in range(n_terms):
        m = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=modes))
        n = tuple(int(v) for v in rng.integers(0, max_degree + 1, size=modes))
        c = complex(rng.normal(), rng.normal())
        terms[(m, n)] = terms.get((m, n), 0) + c
        if hermitian:
            terms[(n, m)] = terms.get((n, m), 0) + np.conj(c)
    return NormalOrderedPolynomial(terms, modes)


def dense_terms(poly):
    """Single-mode polynomial as an ``{(m, n): c}`` dict for the oracles."""
    return {(k.creation[0], k.annihilation[0]): v for k, v in poly.terms.items()}
