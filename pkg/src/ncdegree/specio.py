"""JSON specs for observables and states, plus canonical hashing.

Complex numbers are written as ``[re, im]`` pairs; a bare number is
accepted on input as a real value.

Observable specs::

    {"type": "quadrature_square"}
    {"type": "identity", "modes": 2}
    {"type": "number", "modes": 1, "mode": 0}
    {"type": "polynomial", "modes": 1,
     "terms": [{"m": [1], "n": [1], "re": 2.0, "im": 0.0}, ...]}
    {"type": "projector", "state": <state spec>}

State specs::

    {"type": "superposition", "coefficients": [c, ...], "amplitudes": [a, ...]}
    {"type": "compass", "R": 4, "beta": 4.0}
    {"type": "even_cat", "beta": 3.0}
    {"type": "squeezed", "xi": 0.8}
    {"type": "fock", "coefficients": [c0, c1, ...]}

A term may give its coefficient as ``"c": [re, im]`` instead. For
multimode superpositions each amplitude is a list of per-mode complex
values.
"""
import hashlib
import json
import math
from pathlib import Path

import numpy as np

from .algebra import NormalOrderedPolynomial, Projector
from .errors import InvalidInputError
from .states import (
    CoherentSuperposition,
    CompassSpec,
    FockVector,
    SqueezedVacuum,
    even_coherent_state,
    make_compass,
)


def parse_complex(value, name="value"):
    if isinstance(value, bool):
        raise InvalidInputError(f"{name}: expected a number, got a boolean")
    if isinstance(value, (int, float)):
        z = complex(value)
    elif isinstance(value, (list, tuple)) and len(value) == 2 \
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value):
        z = complex(value[0], value[1])
    elif isinstance(value, dict) and set(value) <= {"re", "im"}:
        return parse_complex([value.get("re", 0.0), value.get("im", 0.0)], name)
    else:
        raise InvalidInputError(f"{name}: cannot read {value!r} as a complex number")
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise InvalidInputError(f"{name}: non-finite value")
    return z


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def _require(spec, key, kind):
    if key not in spec:
        raise InvalidInputError(f"{kind} spec is missing '{key}'")
    return spec[key]


def _int_field(spec, key, default=None):
    value = spec.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidInputError(f"'{key}' must be an integer, got {value!r}")
    return value


def _exponents(values, modes, key):
    if isinstance(values, int) and not isinstance(values, bool):
        values = [values]
    if not isinstance(values, list) or len(values) != modes:
        raise InvalidInputError(f"term field '{key}' needs {modes} exponents, got {values!r}")
    if any(isinstance(v, bool) or not isinstance(v, int) for v in values):
        raise InvalidInputError(f"term field '{key}' must hold integers")
    return tuple(values)


def _parse_amplitudes(raw, modes):
    if not isinstance(raw, list) or not raw:
        raise InvalidInputError("'amplitudes' must be a nonempty list")
    rows = []
    for i, entry in enumerate(raw):
        if modes > 1 or (isinstance(entry, list) and entry and isinstance(entry[0], list)):
            if not isinstance(entry, list):
                raise InvalidInputError(f"amplitude {i} must list one value per mode")
            rows.append([parse_complex(v, f"amplitude {i}") for v in entry])
        else:
            rows.append([parse_complex(entry, f"amplitude {i}")])
    return np.array(rows, dtype=complex)


def parse_state(spec):
    if not isinstance(spec, dict):
        raise InvalidInputError("state spec must be an object")
    kind = _require(spec, "type", "state")
    if kind == "superposition":
        modes = _int_field(spec, "modes", 1)
        amps = _parse_amplitudes(_require(spec, "amplitudes", "superposition"), modes)
        coeffs = _require(spec, "coefficients", "superposition")
        if not isinstance(coeffs, list):
            raise InvalidInputError("'coefficients' must be a list")
        kappa = [parse_complex(c, "coefficient") for c in coeffs]
        return CoherentSuperposition(kappa, amps, modes=amps.shape[1])
    if kind == "compass":
        beta = parse_complex(_require(spec, "beta", "compass"), "beta")
        if beta.imag != 0:
            raise InvalidInputError("compass beta must be real")
        return make_compass(CompassSpec(_int_field(spec, "R"), beta.real))
    if kind == "even_cat":
        beta = parse_complex(_require(spec, "beta", "even_cat"), "beta")
        if beta.imag != 0:
            raise InvalidInputError("even_cat beta must be real")
        return even_coherent_state(beta.real)
    if kind == "squeezed":
        return SqueezedVacuum(parse_complex(_require(spec, "xi", "squeezed"), "xi"))
    if kind == "fock":
        coeffs = _require(spec, "coefficients", "fock")
        if not isinstance(coeffs, list) or not coeffs:
            raise InvalidInputError("'coefficients' must be a nonempty list")
        return FockVector([parse_complex(c, "coefficient") for c in coeffs])
    raise InvalidInputError(f"unknown state type {kind!r}")


def parse_observable(spec):
    if not isinstance(spec, dict):
        raise InvalidInputError("observable spec must be an object")
    kind = _require(spec, "type", "observable")
    if kind == "quadrature_square":
        return NormalOrderedPolynomial.quadrature_square()
    if kind == "identity":
        return NormalOrderedPolynomial.identity(_int_field(spec, "modes", 1))
    if kind == "number":
        modes = _int_field(spec, "modes", 1)
        mode = _int_field(spec, "mode", 0)
        if not 0 <= mode < modes:
            raise InvalidInputError(f"mode {mode} out of range for {modes} modes")
        return NormalOrderedPolynomial.number(mode, modes)
    if kind == "polynomial":
        modes = _int_field(spec, "modes", 1)
        if modes < 1:
            raise InvalidInputError("modes must be >= 1")
        raw = _require(spec, "terms", "polynomial")
        if not isinstance(raw, list) or not raw:
            raise InvalidInputError("'terms' must be a nonempty list")
        terms = {}
        for t in raw:
            if not isinstance(t, dict):
                raise InvalidInputError("each term must be an object")
            key = (_exponents(_require(t, "m", "term"), modes, "m"),
                   _exponents(_require(t, "n", "term"), modes, "n"))
            if "c" in t:
                coeff = parse_complex(t["c"], "term coefficient")
            else:
                coeff = parse_complex([t.get("re", 0.0), t.get("im", 0.0)], "term coefficient")
            terms[key] = terms.get(key, 0) + coeff
        return NormalOrderedPolynomial(terms, modes)
    if kind == "projector":
        return Projector(parse_state(_require(spec, "state", "projector")))
    raise InvalidInputError(f"unknown observable type {kind!r}")


def load_spec(path):
    """Read a JSON spec file; I/O and syntax problems become ``InvalidInputError``."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInputError(f"cannot read spec {path}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInputError(f"spec {path} is not valid JSON: {exc}") from exc


def state_to_spec(state):
    if isinstance(state, SqueezedVacuum):
        return {"type": "squeezed", "xi": complex_to_json(state.xi)}
    if isinstance(state, FockVector):
        return {"type": "fock", "coefficients": [complex_to_json(c) for c in state.coefficients]}
    if isinstance(state, CoherentSuperposition):
        amps = state.components.amps
        return {
            "type": "superposition",
            "modes": state.modes,
            "coefficients": [complex_to_json(c) for c in state.coefficients],
            "amplitudes": [[complex_to_json(z) for z in row] for row in amps],
        }
    raise InvalidInputError(f"cannot serialize state {state!r}")


def observable_to_spec(obs):
    """Explicit (non-shortcut) spec; parsing it back gives an equal observable."""
    if isinstance(obs, Projector):
        return {"type": "projector", "state": state_to_spec(obs.state)}
    if isinstance(obs, NormalOrderedPolynomial):
        terms = sorted(obs.terms.items(), key=lambda kv: (kv[0].creation, kv[0].annihilation))
        return {
            "type": "polynomial",
            "modes": obs.modes,
            "terms": [{"m": list(k.creation), "n": list(k.annihilation),
                       "re": complex(v).real, "im": complex(v).imag} for k, v in terms],
        }
    raise InvalidInputError(f"cannot serialize observable {obs!r}")


def canonical_json(data):
    return json.dumps(data, sort_keys=True, separators=(",", ":"), allow_nan=False)


def content_hash(data):
    """Short SHA-256 of the canonical JSON encoding."""
    return hashlib.sha256(canonical_json(data).encode()).hexdigest()[:16]


def observable_hash(obs):
    return content_hash(observable_to_spec(obs))
