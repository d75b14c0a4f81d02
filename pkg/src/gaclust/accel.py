"""Compute-backend selection.

Hot kernels exist in two variants: numba-compiled loops and pure-numpy
vectorized fallbacks. The active variant is chosen once at import time
from the ``GACLUST_BACKEND`` environment variable:

- unset or empty: numba when importable, numpy otherwise;
- ``numba``: require numba, fail fast if it is missing;
- ``numpy``: force the fallback even when numba is available.
"""

import os

from .errors import ConfigError

try:
    import numba

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised via GACLUST_BACKEND=numpy
    numba = None
    HAS_NUMBA = False

_VALID = ("numba", "numpy")


def resolve_backend(choice: str | None) -> str:
    """Map an env-var value to a backend name, validating availability."""
    choice = (choice or "").strip().lower()
    if choice == "":
        return "numba" if HAS_NUMBA else "numpy"
    if choice not in _VALID:
        raise ConfigError(
            f"GACLUST_BACKEND={choice!r} is not valid; expected one of {_VALID}"
        )
    if choice == "numba" and not HAS_NUMBA:
        raise ConfigError("GACLUST_BACKEND=numba but numba is not importable")
    return choice


BACKEND = resolve_backend(os.environ.get("GACLUST_BACKEND"))


def active_backend() -> str:
    """Name of the backend selected at import time."""
    return BACKEND
