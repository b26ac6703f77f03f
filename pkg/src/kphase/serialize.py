"""JSON wire helpers shared by the library and the command line.

Complex matrices travel as nested row-major lists of two-element
``[real, imag]`` pairs, so every payload is plain JSON with no custom types.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionMismatch
from .manifolds import Family, ManifoldSpec


def matrix_to_json(m) -> list:
    """Encode a complex matrix as nested [real, imag] pairs, row-major."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim == 1:
        arr = arr.reshape(1, -1)
    if arr.ndim != 2:
        raise DimensionMismatch("only scalars, vectors, and matrices encode")
    return [
        [[float(v.real), float(v.imag)] for v in row] for row in arr
    ]


def matrix_from_json(data) -> np.ndarray:
    """Decode nested [real, imag] pairs back into a complex matrix."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise DimensionMismatch(
            "matrix JSON must be rows of [real, imag] pairs"
        )
    return arr[:, :, 0] + 1j * arr[:, :, 1]


def vector_to_json(v) -> list:
    """Encode a complex vector as a flat list of [real, imag] pairs."""
    arr = np.asarray(v, dtype=complex).reshape(-1)
    return [[float(x.real), float(x.imag)] for x in arr]


def vector_from_json(data) -> np.ndarray:
    """Decode a flat list of [real, imag] pairs into a complex vector."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise DimensionMismatch("vector JSON must be [real, imag] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


def spec_to_json(spec: ManifoldSpec) -> dict:
    """Encode a manifold spec as {family, p, q, compact}."""
    return {
        "family": spec.family.value,
        "p": spec.p,
        "q": spec.q,
        "compact": spec.compact,
    }


def spec_from_json(data: dict) -> ManifoldSpec:
    """Decode {family, p, q, compact}; q and compact default to 1 and true."""
    return ManifoldSpec(
        family=Family(data["family"]),
        p=int(data["p"]),
        q=int(data.get("q", 1)),
        compact=bool(data.get("compact", True)),
    )
