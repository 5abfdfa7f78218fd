"""Backend selection for the hot kernels.

The compiled ``_native`` extension is used when it imports; otherwise the
numpy module ``_pure`` is used. Setting ``NCDEGREE_PURE_PYTHON=1`` forces
the fallback.
"""
import importlib
import os

from . import _pure

BACKENDS = ("native", "pure")


def load_backend(name):
    """Return the kernel module for ``name`` ("native" or "pure")."""
    if name == "pure":
        return _pure
    if name == "native":
        return importlib.import_module(f"{__name__}._native")
    raise ValueError(f"unknown backend {name!r}; expected one of {BACKENDS}")


def available_backends():
    names = []
    for name in BACKENDS:
        try:
            load_backend(name)
        except ImportError:
            continue
        names.append(name)
    return names


if os.environ.get("NCDEGREE_PURE_PYTHON", "").strip() not in ("", "0"):
    kernels = _pure
    BACKEND = "pure"
else:
    try:
        kernels = load_backend("native")
        BACKEND = "native"
    except ImportError:
        kernels = _pure
        BACKEND = "pure"

STATE_SUPERPOSITION = _pure.STATE_SUPERPOSITION
STATE_SQUEEZED = _pure.STATE_SQUEEZED
STATE_FOCK = _pure.STATE_FOCK
KIND_POLY_EIG = _pure.KIND_POLY_EIG
KIND_PROJECTOR_EIG = _pure.KIND_PROJECTOR_EIG
KIND_PROJECTOR_RANK1 = _pure.KIND_PROJECTOR_RANK1
STATUS_OK = _pure.STATUS_OK
STATUS_CHOLESKY_FAILED = _pure.STATUS_CHOLESKY_FAILED
STATUS_ILL_CONDITIONED = _pure.STATUS_ILL_CONDITIONED
COINCIDENCE_TOL = _pure.COINCIDENCE_TOL
RCOND_GUARD = _pure.RCOND_GUARD
