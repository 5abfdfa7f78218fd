"""Witness operators, certification of measured values, and unit helpers."""
import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import NormalOrderedPolynomial
from .bounds import BoundResult, OptimizerConfig, optimize_bound
from .errors import InvalidInputError, NestingError

NESTING_TOL = 1e-9


@dataclass(frozen=True)
class Witness:
    """``W_r = b_r 1 - K`` (sup) or ``W'_r = K - b'_r 1`` (inf), kept symbolic.

    ``expectation(value)`` maps a measured ``<K>`` to ``<W>``; a negative
    result excludes the state from the r-term set.
    """

    observable: object
    r: int
    modes: int
    direction: str
    bound: float
    provenance: Optional[BoundResult] = None

    def __post_init__(self):
        if self.direction not in ("inf", "sup"):
            raise InvalidInputError(f"direction must be 'inf' or 'sup', got {self.direction!r}")
        if self.provenance is not None:
            if self.provenance.direction != self.direction or self.provenance.bound != self.bound:
                raise InvalidInputError("witness bound/direction disagree with its provenance")

    def expectation(self, measured):
        if self.direction == "sup":
            return self.bound - measured
        return measured - self.bound

    def violated_by(self, measured):
        return self.expectation(measured) < 0

    def describe(self):
        if self.direction == "sup":
            return f"W_{self.r} = {self.bound:.6f} * 1 - K"
        return f"W'_{self.r} = K - {self.bound:.6f} * 1"


@dataclass(frozen=True)
class CertificationResult:
    """Outcome of comparing one measured value against a bound family.

    ``violated_r`` is always a prefix ``1..k``; ``margin`` is the distance
    of the measured value past the largest violated bound (negative when
    nothing is violated, then measured against the r = 1 bound), divided by
    ``standard_error`` when one was supplied.
    """

    measured_value: float
    direction: str
    violated_r: tuple
    certified_statement: str
    margin: float
    standard_error: Optional[float] = None

    @property
    def degree_lower_bound(self):
        """Smallest degree of nonclassicality consistent with the violations."""
        return (max(self.violated_r) + 1) if self.violated_r else None

    def to_dict(self):
        return {
            "measured": self.measured_value,
            "direction": self.direction,
            "violated_r": list(self.violated_r),
            "statement": self.certified_statement,
            "margin": self.margin,
            "standard_error": self.standard_error,
        }


def build_witness(obs, r, modes=None, direction="inf", config=None):
    """Optimize the bound and package it as a witness."""
    result = optimize_bound(obs, r, modes=modes, direction=direction, config=config)
    return Witness(obs, r, result.modes, direction, result.bound, result)


def check_nesting(bounds, direction):
    """Raise ``NestingError`` unless ``bounds`` (ordered r = 1, 2, ...) are monotone.

    Infima must not increase with r and suprema must not decrease.
    """
    for k in range(1, len(bounds)):
        prev, cur = bounds[k - 1], bounds[k]
        if direction == "inf" and cur > prev + NESTING_TOL:
            raise NestingError(f"b'_{k + 1} = {cur:.8f} exceeds b'_{k} = {prev:.8f}")
        if direction == "sup" and cur < prev - NESTING_TOL:
            raise NestingError(f"b_{k + 1} = {cur:.8f} is below b_{k} = {prev:.8f}")


def _statement(violated):
    if not violated:
        return "no bound violated; nothing is certified"
    k = max(violated)
    return (f"state lies outside M_r for r = {', '.join(map(str, violated))}; "
            f"hence D_Ncl > {k} (degree at least {k + 1})")


def certify(witness_family: Sequence[Witness], measured, standard_error=None):
    """Compare a measured expectation value against witnesses for r = 1..R.

    Only exclusions are ever certified: a non-violated bound says nothing
    about the degree of a possibly mixed state.
    """
    family = sorted(witness_family, key=lambda w: w.r)
    if not family:
        raise InvalidInputError("empty witness family")
    if [w.r for w in family] != list(range(1, len(family) + 1)):
        raise InvalidInputError("witness family must cover r = 1..R without gaps")
    direction = family[0].direction
    if any(w.direction != direction for w in family):
        raise InvalidInputError("witnesses must share a direction")
    if any(w.observable != family[0].observable for w in family):
        raise InvalidInputError("witnesses must share an observable")
    measured = float(measured)
    if not math.isfinite(measured):
        raise InvalidInputError("measured value must be finite")
    if standard_error is not None and not standard_error > 0:
        raise InvalidInputError("standard error must be positive")
    check_nesting([w.bound for w in family], direction)

    flags = [w.violated_by(measured) for w in family]
    violated = tuple(w.r for w, f in zip(family, flags) if f)
    if violated != tuple(range(1, len(violated) + 1)):
        raise NestingError(f"violations {violated} are not a prefix 1..k")

    ref = family[len(violated) - 1] if violated else family[0]
    margin = -ref.expectation(measured)
    if standard_error is not None:
        margin /= standard_error
    return CertificationResult(measured, direction, violated, _statement(violated), margin, standard_error)


def squeezing_db(value):
    """Vacuum-normalized variance to decibels, ``-10 log10(value)``."""
    value = float(value)
    if not value > 0:
        raise InvalidInputError("squeezing in dB needs a positive variance")
    return -10.0 * math.log10(value) + 0.0


def variance_from_db(db):
    """Inverse of ``squeezing_db``."""
    return 10.0 ** (-float(db) / 10.0)


def pure_state_distance(b_r):
    """``d_r = 2 (1 - b_r)``; zero exactly when the state is an r-term superposition."""
    b_r = float(b_r)
    if not 0.0 <= b_r <= 1.0:
        raise InvalidInputError(f"b_r must lie in [0, 1], got {b_r}")
    return 2.0 * (1.0 - b_r)


def quadrature_witness_family(max_r, config=None):
    """Witnesses ``W'_r`` for ``x^2`` and r = 1..max_r (the squeezing family)."""
    obs = NormalOrderedPolynomial.quadrature_square()
    config = config or OptimizerConfig(heuristic_line_init=True)
    return [build_witness(obs, r, 1, "inf", config) for r in range(1, max_r + 1)]
