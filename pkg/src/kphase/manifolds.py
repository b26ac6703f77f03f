"""Matrix coordinate charts and reproducing kernels for the four classical
Hermitian symmetric families.

A point lives in a single chart per family: a full ``p x q`` complex matrix
(family AIII), a symmetric or skew-symmetric ``p x p`` matrix (CI, DIII), or
a length-``p`` complex row vector (BDI).  Compact families accept every chart
point; non-compact families accept only the strict interior of the bounded
domain (``I - Z Z^dag > 0``, with a quadratic analogue for BDI).

Kernels are holomorphic in their first argument and antiholomorphic in the
second.  All downstream geometry (potential, metric, connection, phases) is
built from these kernel evaluations alone.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DimensionMismatch,
    OutsideDomain,
    SingularMinor,
    SpecMismatch,
    SymmetryViolation,
)

SYMMETRY_TOL = 1e-12
KERNEL_ZERO_TOL = 1e-12


class Family(str, enum.Enum):
    """Chart families: rectangular, symmetric, skew-symmetric, vector."""

    AIII = "AIII"
    CI = "CI"
    DIII = "DIII"
    BDI = "BDI"


@dataclass(frozen=True)
class ManifoldSpec:
    """Family, size parameters, and compactness of one symmetric space.

    Parameters
    ----------
    family : Family or str
        One of AIII, CI, DIII, BDI.
    p : int
        Row dimension (AIII), matrix size (CI, DIII), or vector length (BDI).
    q : int, optional
        Column dimension, meaningful for AIII only; must satisfy p >= q.
    compact : bool, optional
        Compact form (default) or its non-compact bounded-domain dual.
    """

    family: Family
    p: int
    q: int = 1
    compact: bool = True

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if not isinstance(self.p, int) or not isinstance(self.q, int):
            raise DimensionMismatch("p and q must be integers")
        if self.p < 1 or self.q < 1:
            raise DimensionMismatch("p and q must be positive")
        if self.family is Family.AIII and self.p < self.q:
            raise DimensionMismatch("family AIII requires p >= q")
        if self.family is Family.DIII and self.p < 2:
            raise DimensionMismatch("family DIII requires p >= 2")
        if self.family is not Family.AIII and self.q != 1:
            raise DimensionMismatch("q is only meaningful for family AIII")

    @property
    def point_shape(self) -> tuple[int, int]:
        if self.family is Family.AIII:
            return (self.p, self.q)
        if self.family is Family.BDI:
            return (1, self.p)
        return (self.p, self.p)

    @property
    def complex_dimension(self) -> int:
        if self.family is Family.AIII:
            return self.p * self.q
        if self.family is Family.CI:
            return self.p * (self.p + 1) // 2
        if self.family is Family.DIII:
            return self.p * (self.p - 1) // 2
        return self.p


def cp1(compact: bool = True) -> ManifoldSpec:
    """The rank-one AIII space with p = q = 1 (the Riemann sphere chart)."""
    return ManifoldSpec(Family.AIII, 1, 1, compact)


@dataclass(frozen=True)
class PointMatrix:
    """A validated chart point: immutable entries plus the spec they obey."""

    entries: np.ndarray
    spec: ManifoldSpec

    def __post_init__(self):
        self.entries.setflags(write=False)


def as_chart_array(spec: ManifoldSpec, z) -> np.ndarray:
    """Coerce scalars / nested lists / arrays to the chart's matrix shape."""
    arr = np.asarray(z, dtype=complex)
    if arr.ndim == 0:
        arr = arr.reshape(1, 1)
    if arr.ndim == 1:
        # A bare vector is only unambiguous for BDI rows and p x 1 columns.
        if spec.point_shape[0] == 1:
            arr = arr.reshape(1, -1)
        elif spec.point_shape[1] == 1:
            arr = arr.reshape(-1, 1)
    if arr.shape != spec.point_shape:
        raise DimensionMismatch(
            f"expected shape {spec.point_shape} for {spec.family.value}, "
            f"got {arr.shape}"
        )
    return arr


def validate_point(
    spec: ManifoldSpec, z, symmetry_tol: float = SYMMETRY_TOL
) -> PointMatrix:
    """Validate a chart point and return it as an immutable ``PointMatrix``.

    Symmetry (CI) and skew-symmetry (DIII) are enforced to ``symmetry_tol``
    and then projected exactly.  Non-compact specs additionally require the
    strict domain interior.

    Raises
    ------
    DimensionMismatch, SymmetryViolation, OutsideDomain
    """
    if isinstance(z, PointMatrix):
        if z.spec != spec:
            raise SpecMismatch("point was validated against a different spec")
        return z
    arr = as_chart_array(spec, z)

    if spec.family is Family.CI:
        residual = np.max(np.abs(arr - arr.T))
        if residual > symmetry_tol:
            raise SymmetryViolation(
                f"symmetric chart violated by {residual:.3e}"
            )
        arr = (arr + arr.T) / 2.0
    elif spec.family is Family.DIII:
        residual = np.max(np.abs(arr + arr.T))
        if residual > symmetry_tol:
            raise SymmetryViolation(
                f"skew-symmetric chart violated by {residual:.3e}"
            )
        arr = (arr - arr.T) / 2.0
        np.fill_diagonal(arr, 0.0)

    if not spec.compact:
        _check_interior(spec, arr)
    return PointMatrix(arr.copy(), spec)


def _check_interior(spec: ManifoldSpec, arr: np.ndarray) -> None:
    if spec.family is Family.BDI:
        zz = complex((arr @ arr.T).item())
        norm2 = float(np.real((arr @ arr.conj().T).item()))
        if abs(zz) >= 1.0 or 1.0 + abs(zz) ** 2 - 2.0 * norm2 <= 0.0:
            raise OutsideDomain("BDI point outside the bounded domain")
        return
    gram = np.eye(spec.point_shape[0]) - arr @ arr.conj().T
    if np.min(np.linalg.eigvalsh(gram)) <= 0.0:
        raise OutsideDomain("point on or outside the bounded domain boundary")


def _det(m: np.ndarray) -> complex:
    n = m.shape[0]
    if n == 1:
        return complex(m[0, 0])
    if n == 2:
        return complex(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    return complex(np.linalg.det(m))


def kernel(spec: ManifoldSpec, z, w) -> complex:
    """Evaluate the family kernel K(z, conj(w)).

    Determinant families use ``det(I +/- Z W^dag)`` on the ``p x p`` side,
    with ``+`` for compact and ``-`` for non-compact specs.  BDI uses the
    quadratic vector formula
    ``1 + (z.z)(conj(w.w)) +/- 2 (z . conj(w))``.

    Parameters
    ----------
    spec : ManifoldSpec
    z, w : PointMatrix or array_like
        Raw arrays are validated here against ``spec``.

    Returns
    -------
    complex
        Hermitian in its arguments: ``K(w, conj(z)) == conj(K(z, conj(w)))``.
    """
    zp = validate_point(spec, z)
    wp = validate_point(spec, w)
    a, b = zp.entries, wp.entries
    sign = 1.0 if spec.compact else -1.0
    if spec.family is Family.BDI:
        zz = complex((a @ a.T).item())
        ww = complex((b @ b.T).item())
        zw = complex((a @ b.conj().T).item())
        return 1.0 + zz * np.conj(ww) + sign * 2.0 * zw
    p = spec.point_shape[0]
    return _det(np.eye(p) + sign * (a @ b.conj().T))


def _check_single_level(level) -> int:
    if not isinstance(level, (int, np.integer)) or level < 1:
        raise ValueError("level must be a positive integer")
    return int(level)


def normalized_overlap(spec: ManifoldSpec, level: int, z, w) -> complex:
    """Unit-normalized kernel ratio at a single positive integer level.

    Returns ``K(z, conj(w))^level / sqrt(K(z, conj(z))^level
    K(w, conj(w))^level)``, the overlap of the normalized state labelled by
    ``w`` with the one labelled by ``z`` (holomorphic in ``z``).  Its modulus
    is at most one for compact specs and at least one for non-compact ones,
    with equality exactly on the diagonal.
    """
    lam = _check_single_level(level)
    kzw = kernel(spec, z, w)
    kzz = float(np.real(kernel(spec, z, z)))
    kww = float(np.real(kernel(spec, w, w)))
    return kzw**lam / math.sqrt(kzz**lam * kww**lam)


def projective_distance(spec: ManifoldSpec, z, w) -> float:
    """Chart-invariant separation of two rays, zero only on equal rays.

    Compact specs use ``arccos`` of the clamped level-one overlap modulus;
    non-compact specs, where the overlap modulus is >= 1, use ``arccosh``.
    """
    mag = abs(normalized_overlap(spec, 1, z, w))
    if spec.compact:
        return math.acos(min(1.0, mag))
    return math.acosh(max(1.0, mag))


def flag_minor_kernel(weights, m) -> complex:
    """Product of powered lower-right corner minors of a square matrix.

    For an ``n x n`` matrix ``M`` and a weight vector of length ``n - 1``,
    returns ``prod_j det(M[n-j:, n-j:]) ** weights[j-1]``.  With
    ``M = U(z1)^dag U(z2)`` built from upper-unipotent ``U``, the order-one
    corner reproduces the rank-one AIII kernel ``1 + conj(z1) z2``.

    Raises
    ------
    DimensionMismatch
        If ``M`` is not square of size ``len(weights) + 1``.
    SingularMinor
        If a minor carrying a positive weight vanishes.
    """
    mat = np.asarray(m, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise DimensionMismatch("minor kernel needs a square matrix")
    n = mat.shape[0]
    weights = [int(x) for x in weights]
    if len(weights) != n - 1:
        raise DimensionMismatch(
            f"need {n - 1} weights for an {n} x {n} matrix, got {len(weights)}"
        )
    if any(x < 0 for x in weights) or not any(x > 0 for x in weights):
        raise ValueError("weights must be non-negative with at least one positive")
    out = 1.0 + 0.0j
    for j, wj in enumerate(weights, start=1):
        if wj == 0:
            continue
        minor = _det(mat[n - j :, n - j :])
        if abs(minor) < KERNEL_ZERO_TOL:
            raise SingularMinor(f"order-{j} corner minor vanishes")
        out *= minor**wj
    return out


def random_point(
    spec: ManifoldSpec, rng: np.random.Generator, scale: float = 1.0
) -> PointMatrix:
    """Draw a random valid chart point, staying safely interior when bounded."""
    rows, cols = spec.point_shape
    arr = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    arr *= scale / math.sqrt(2.0)
    if spec.family is Family.CI:
        arr = (arr + arr.T) / 2.0
    elif spec.family is Family.DIII:
        arr = (arr - arr.T) / 2.0
    if not spec.compact:
        if spec.family is Family.BDI:
            norm = float(np.linalg.norm(arr))
            arr *= 0.55 / max(1.0, norm / 0.9)
            # 2 |z|^2 < 1 guarantees both interior inequalities.
            if float(np.linalg.norm(arr)) ** 2 >= 0.5:
                arr *= 0.6 / float(np.linalg.norm(arr))
        else:
            smax = float(np.linalg.svd(arr, compute_uv=False)[0])
            if smax >= 0.9:
                arr *= 0.9 / smax * rng.uniform(0.3, 0.95)
    return validate_point(spec, arr)
