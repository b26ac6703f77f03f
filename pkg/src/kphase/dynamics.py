"""Classical coherent-parameter flow under time-dependent linear Hamiltonians.

The defining-representation unitary U(t) is integrated with fixed-step RK4
and pushed onto the chart by a fractional-linear (Mobius) action; a direct
Riccati integration of the chart variable runs alongside as an independent
cross-check.  Hamiltonians are supplied as schedules: fixed Hermitian
generators with piecewise-linear time coefficients.

Chart orientation: the point z = 0 labels the reference (top) weight ray,
and a 2 x 2 unitary with blocks a, b, c, d moves the scalar coordinate as
z -> (c + d z) / (a + b z).  The matrix action below is the unique extension
of that rule, and the Riccati right-hand side is its derivative.  Under
H = diag(1, -1) the scalar coordinate therefore rotates as exp(+2it) z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ChartOverflow,
    CrossCheckFailure,
    DimensionMismatch,
    NoCycleFound,
    NonRealExpectation,
    ScheduleGap,
    SymmetryViolation,
    UnsupportedFamily,
)
from .manifolds import (
    Family,
    ManifoldSpec,
    PointMatrix,
    kernel,
    projective_distance,
    validate_point,
)
from .serialize import matrix_from_json, matrix_to_json

HERMITICITY_TOL = 1e-12
CROSS_CHECK_TOL = 1e-6
REUNITARIZE_EVERY = 50


def _hermitize(m, tol: float = HERMITICITY_TOL) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch("generators must be square matrices")
    residual = float(np.max(np.abs(arr - arr.conj().T)))
    if residual > tol:
        raise SymmetryViolation(f"generator is not Hermitian (by {residual:.3e})")
    return (arr + arr.conj().T) / 2.0


@dataclass(frozen=True)
class HamiltonianSchedule:
    """Hermitian generators with piecewise-linear time coefficients.

    Build with :meth:`constant` or :meth:`from_samples`.  Calling the
    schedule at a time returns the assembled Hermitian matrix
    ``sum_j a_j(t) G_j``; evaluation outside the sampled span raises
    ``ScheduleGap``.  A constant schedule covers every time.
    """

    generators: tuple[np.ndarray, ...]
    times: np.ndarray | None
    coefficients: np.ndarray
    _constant_matrix: np.ndarray | None = field(default=None, repr=False)

    @classmethod
    def constant(cls, generators, coefficients) -> "HamiltonianSchedule":
        gens = tuple(_hermitize(g) for g in generators)
        coeffs = np.asarray(coefficients, dtype=float).reshape(-1)
        if len(coeffs) != len(gens):
            raise DimensionMismatch("one coefficient per generator")
        matrix = _assemble(gens, coeffs)
        return cls(gens, None, coeffs, matrix)

    @classmethod
    def from_samples(cls, generators, samples) -> "HamiltonianSchedule":
        """Rows of ``samples`` are ``(t_k, a_1, ..., a_m)``."""
        gens = tuple(_hermitize(g) for g in generators)
        rows = np.asarray(samples, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(gens) + 1:
            raise DimensionMismatch(
                "each sample row must hold a time and one value per generator"
            )
        times = rows[:, 0]
        if rows.shape[0] == 1:
            return cls.constant(gens, rows[0, 1:])
        if np.any(np.diff(times) <= 0.0):
            raise ScheduleGap("sample times must be strictly increasing")
        return cls(gens, times.copy(), rows[:, 1:].copy(), None)

    @property
    def dim(self) -> int:
        return self.generators[0].shape[0] if self.generators else 0

    @property
    def is_constant(self) -> bool:
        return self.times is None

    def coefficients_at(self, t: float) -> np.ndarray:
        if self.times is None:
            return self.coefficients
        if t < self.times[0] - 1e-12 or t > self.times[-1] + 1e-12:
            raise ScheduleGap(
                f"time {t} outside the sampled span "
                f"[{self.times[0]}, {self.times[-1]}]"
            )
        return np.array(
            [
                np.interp(t, self.times, self.coefficients[:, j])
                for j in range(self.coefficients.shape[1])
            ]
        )

    def __call__(self, t: float) -> np.ndarray:
        if self._constant_matrix is not None:
            return self._constant_matrix
        return _assemble(self.generators, self.coefficients_at(t))

    def strength(self) -> float:
        """Upper bound on max-norm of the assembled matrix over the span."""
        scales = np.array([float(np.max(np.abs(g))) for g in self.generators])
        coeffs = np.abs(np.atleast_2d(self.coefficients))
        return float(np.max(coeffs @ scales)) if coeffs.size else 0.0

    def covers(self, t0: float, t1: float) -> bool:
        if self.times is None:
            return True
        return self.times[0] <= t0 + 1e-12 and t1 <= self.times[-1] + 1e-12

    def to_json(self) -> dict:
        out = {"generators": [matrix_to_json(g) for g in self.generators]}
        if self.times is None:
            out["constant"] = [float(c) for c in self.coefficients]
        else:
            out["samples"] = [
                [float(t)] + [float(c) for c in row]
                for t, row in zip(self.times, self.coefficients)
            ]
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HamiltonianSchedule":
        gens = [matrix_from_json(g) for g in data["generators"]]
        if "constant" in data:
            return cls.constant(gens, data["constant"])
        return cls.from_samples(gens, data["samples"])


def _assemble(generators, coefficients) -> np.ndarray:
    out = np.zeros_like(generators[0])
    for a, g in zip(coefficients, generators):
        out = out + a * g
    return out


def block_split(H, spec: ManifoldSpec):
    """Split a defining-representation matrix into the chart's four blocks.

    The top-left block is p x p: the defining size is p + q for AIII and
    2p for CI and DIII.  The vector family has no defining block action.
    """
    if spec.family is Family.BDI:
        raise UnsupportedFamily(
            "the vector chart has no block fractional-linear action"
        )
    arr = np.asarray(H, dtype=complex)
    p = spec.p
    n = p + spec.q if spec.family is Family.AIII else 2 * p
    if arr.shape != (n, n):
        raise DimensionMismatch(
            f"expected a {n} x {n} matrix for {spec.family.value} "
            f"p={spec.p}, got {arr.shape}"
        )
    return arr[:p, :p], arr[:p, p:], arr[p:, :p], arr[p:, p:]


def defining_dimension(spec: ManifoldSpec) -> int:
    """Size of the defining-representation matrices acting on the chart."""
    if spec.family is Family.BDI:
        raise UnsupportedFamily(
            "the vector chart has no block fractional-linear action"
        )
    return spec.p + spec.q if spec.family is Family.AIII else 2 * spec.p


def mobius_act(
    spec: ManifoldSpec, U, Z, symmetry_tol: float = 1e-12
) -> PointMatrix:
    """Fractional-linear chart action of a defining-representation matrix.

    With blocks ``A, B, C, D`` the image is
    ``(A^T + Z B^T)^{-1} (C^T + Z D^T)``, the matrix extension of the
    scalar rule ``z -> (c + d z)/(a + b z)``.  Composing actions multiplies
    the matrices: ``act(U2, act(U1, Z)) == act(U2 @ U1, Z)``.
    """
    a, b, c, d = block_split(U, spec)
    zp = validate_point(spec, Z)
    z = zp.entries
    den = a.T + z @ b.T
    num = c.T + z @ d.T
    if abs(np.linalg.det(den)) < 1e-12:
        raise ChartOverflow("orbit left the coordinate chart")
    out = np.linalg.solve(den, num)
    return validate_point(spec, out, symmetry_tol=symmetry_tol)


def riccati_rhs(spec: ManifoldSpec, H, Z) -> np.ndarray:
    """Time derivative of the chart point under a Hermitian generator.

    The derivative of the fractional-linear action along exp(-iHt):
    ``-i (C^T + Z D^T - A^T Z - Z B^T Z)`` with ``A, B, C, D`` the blocks
    of ``H``.
    """
    a, b, c, d = block_split(H, spec)
    z = Z.entries if isinstance(Z, PointMatrix) else np.asarray(Z, dtype=complex)
    if z.ndim < 2:
        z = z.reshape(spec.point_shape)
    return -1j * (c.T + z @ d.T - a.T @ z - z @ b.T @ z)


def _polar_unitary(U: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(U)
    return w @ vh


def _rk4_unitary(U, H1, H2, H3, h):
    k1 = -1j * (H1 @ U)
    k2 = -1j * (H2 @ (U + (h / 2.0) * k1))
    k3 = -1j * (H2 @ (U + (h / 2.0) * k2))
    k4 = -1j * (H3 @ (U + h * k3))
    return U + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _grid(t0: float, t1: float, dt: float):
    if dt <= 0.0:
        raise ValueError("dt must be positive")
    span = t1 - t0
    if span <= 0.0:
        raise ValueError("the time span must be positive")
    n = max(1, math.ceil(span / dt - 1e-9))
    return n, span / n


def evolve_unitary(
    schedule: HamiltonianSchedule, t0: float, t1: float, dt: float
) -> np.ndarray:
    """Integrate i dU/dt = H(t) U from the identity over [t0, t1].

    Fixed-step RK4 with polar re-unitarization every 50 steps; the result
    is exactly re-unitarized at the end.
    """
    if not schedule.covers(t0, t1):
        raise ScheduleGap("schedule does not cover the integration span")
    n, h = _grid(t0, t1, dt)
    U = np.eye(schedule.dim, dtype=complex)
    for k in range(n):
        t = t0 + k * h
        H1 = schedule(t)
        H2 = schedule(t + h / 2.0)
        H3 = schedule(t + h)
        U = _rk4_unitary(U, H1, H2, H3, h)
        if (k + 1) % REUNITARIZE_EVERY == 0:
            U = _polar_unitary(U)
    return _polar_unitary(U)


@dataclass
class Trajectory:
    """Sampled chart evolution with its defining-representation unitaries.

    ``cross_check_error`` is the largest entrywise gap between the Mobius
    path (stored in ``points``) and the independent Riccati integration.
    """

    spec: ManifoldSpec
    times: np.ndarray
    points: list[PointMatrix]
    unitaries: list[np.ndarray] | None
    cross_check_error: float

    @property
    def final_point(self) -> PointMatrix:
        return self.points[-1]

    def chart_path(self) -> np.ndarray:
        """All sampled points stacked into one (n_samples, rows, cols) array."""
        return np.stack([p.entries for p in self.points])


def trajectory(
    spec: ManifoldSpec,
    Z0,
    schedule: HamiltonianSchedule,
    T: float,
    dt: float,
    cross_check_tol: float = CROSS_CHECK_TOL,
    store_unitaries: bool = True,
    symmetry_tol: float = 1e-9,
) -> Trajectory:
    """Evolve a chart point, cross-checking Mobius against Riccati.

    One fused loop advances the unitary and the Riccati variable with the
    same RK4 stages and Hamiltonian evaluations.  Stored points come from
    the Mobius route; the loop raises ``CrossCheckFailure`` as soon as the
    two routes disagree beyond ``cross_check_tol``.
    """
    if schedule.dim != defining_dimension(spec):
        raise DimensionMismatch(
            "schedule generators do not match the defining size"
        )
    if not schedule.covers(0.0, T):
        raise ScheduleGap("schedule does not cover [0, T]")
    z0 = validate_point(spec, Z0)
    n, h = _grid(0.0, T, dt)
    U = np.eye(schedule.dim, dtype=complex)
    z_riccati = z0.entries.copy()
    times = np.linspace(0.0, T, n + 1)
    points = [z0]
    unitaries = [U.copy()] if store_unitaries else None
    max_err = 0.0
    for k in range(n):
        t = k * h
        H1 = schedule(t)
        H2 = schedule(t + h / 2.0)
        H3 = schedule(t + h)
        U = _rk4_unitary(U, H1, H2, H3, h)
        if (k + 1) % REUNITARIZE_EVERY == 0:
            U = _polar_unitary(U)
        r1 = riccati_rhs(spec, H1, z_riccati)
        r2 = riccati_rhs(spec, H2, z_riccati + (h / 2.0) * r1)
        r3 = riccati_rhs(spec, H2, z_riccati + (h / 2.0) * r2)
        r4 = riccati_rhs(spec, H3, z_riccati + h * r3)
        z_riccati = z_riccati + (h / 6.0) * (r1 + 2.0 * r2 + 2.0 * r3 + r4)
        if not np.all(np.isfinite(z_riccati)) or np.max(np.abs(z_riccati)) > 1e8:
            raise ChartOverflow(
                f"Riccati variable diverged near t = {times[k + 1]:.6g}"
            )
        try:
            zp = mobius_act(spec, U, z0, symmetry_tol=symmetry_tol)
        except ChartOverflow as exc:
            raise ChartOverflow(
                f"orbit left the coordinate chart at t = {times[k + 1]:.6g}"
            ) from exc
        err = float(np.max(np.abs(zp.entries - z_riccati)))
        if err > max_err:
            max_err = err
        if max_err > cross_check_tol:
            raise CrossCheckFailure(
                f"Mobius and Riccati paths disagree by {max_err:.3e} "
                f"at t = {times[k + 1]:.6g}"
            )
        points.append(zp)
        if store_unitaries:
            unitaries.append(U.copy())
    return Trajectory(spec, times, points, unitaries, max_err)


def expectation(spec: ManifoldSpec, level: int, Z, H) -> float:
    """Coherent expectation value of a Hermitian generator at a chart point.

    Differentiates the log of the weighted kernel cocycle along the
    one-parameter flow exp(-isH) by a central difference (step 1e-5):
    ``i d/ds [ level * ( ln det(A_s^T + Z B_s^T) + ln K(Z_s, conj(Z))
    - ln K(Z, conj(Z)) ) ]``.  The imaginary part must cancel below 1e-8.
    """
    zp = validate_point(spec, Z)
    H = _hermitize(H)
    step = 1e-5
    k00 = np.log(kernel(spec, zp, zp))

    def log_term(s: float) -> complex:
        U = expm_hermitian_generator(H, s)
        a, b, _, _ = block_split(U, spec)
        den = a.T + zp.entries @ b.T
        det = np.linalg.det(den)
        if abs(det) < 1e-12:
            raise ChartOverflow("flow left the chart during differentiation")
        zs = mobius_act(spec, U, zp, symmetry_tol=1e-9)
        return level * (np.log(det) + np.log(kernel(spec, zs, zp)) - k00)

    value = 1j * (log_term(step) - log_term(-step)) / (2.0 * step)
    if abs(value.imag) > 1e-8:
        raise NonRealExpectation(
            f"imaginary part {value.imag:.3e} exceeds tolerance"
        )
    return float(value.real)


def expm_hermitian_generator(H: np.ndarray, s: float) -> np.ndarray:
    """exp(-i s H) for Hermitian H, by eigendecomposition (2x2 closed form)."""
    if H.shape == (2, 2):
        c0 = (H[0, 0] + H[1, 1]) / 2.0
        v = np.array([H[0, 1].real + 0j, -H[0, 1].imag + 0j, (H[0, 0] - H[1, 1]) / 2.0])
        r = math.sqrt(float(np.sum(np.abs(v) ** 2)))
        phase = np.exp(-1j * c0 * s)
        if r < 1e-300:
            return phase * np.eye(2)
        cos_part = math.cos(r * s)
        sin_part = math.sin(r * s) / r
        sigma_dot = np.array(
            [
                [v[2], v[0] - 1j * v[1]],
                [v[0] + 1j * v[1], -v[2]],
            ]
        )
        return phase * (cos_part * np.eye(2) - 1j * sin_part * sigma_dot)
    w, vecs = np.linalg.eigh(H)
    return (vecs * np.exp(-1j * s * w)) @ vecs.conj().T


@dataclass(frozen=True)
class CycleInfo:
    """First return of a trajectory to its starting ray."""

    index: int
    time: float
    residual: float


def ray_distances(traj: Trajectory) -> np.ndarray:
    """Projective distance of every sample from the starting point."""
    z0 = traj.points[0]
    return np.array(
        [projective_distance(traj.spec, p, z0) for p in traj.points]
    )


def is_stationary(traj: Trajectory, tol: float = 1e-9) -> bool:
    """True when the whole trajectory stays on the starting ray."""
    return float(np.max(ray_distances(traj))) < tol


def find_cycle(traj: Trajectory, tol: float | None = None) -> CycleInfo:
    """Locate the first return to the starting ray.

    Scans for the first sample beyond the initial escape whose projective
    distance to the start drops below ``tol`` (default: five times the
    median sample spacing), walks to the local minimum, and refines the
    return time by a parabola through the squared distances.  A trajectory
    that never leaves the start ray returns index 1 immediately.
    """
    d = ray_distances(traj)
    n = len(d) - 1
    if n < 1:
        raise NoCycleFound("trajectory has no steps")
    if tol is None:
        spacing = float(np.median(np.abs(np.diff(d)))) if n > 1 else 0.0
        tol = max(5.0 * spacing, 1e-12)
    if d[1] < tol:
        first_out = next((k for k in range(1, n + 1) if d[k] >= tol), None)
        if first_out is None:
            return CycleInfo(1, float(traj.times[1]), float(d[1]))
        escape = first_out
    else:
        escape = 1
    k_ret = next((k for k in range(escape, n + 1) if d[k] < tol), None)
    if k_ret is None:
        raise NoCycleFound(
            f"no return below tolerance {tol:.3e} within the span"
        )
    while k_ret + 1 <= n and d[k_ret + 1] < d[k_ret]:
        k_ret += 1
    t_star = float(traj.times[k_ret])
    if 1 <= k_ret <= n - 1:
        t_star = _parabola_vertex(traj.times, d, k_ret)
    elif k_ret == n and n >= 2:
        t_star = _parabola_vertex(traj.times, d, n - 1)
        t_star = min(max(t_star, float(traj.times[n - 1])), float(traj.times[n]))
    return CycleInfo(k_ret, t_star, float(d[k_ret]))


def _parabola_vertex(times, d, k: int) -> float:
    t0, t1, t2 = (float(times[k - 1]), float(times[k]), float(times[k + 1]))
    y0, y1, y2 = float(d[k - 1]) ** 2, float(d[k]) ** 2, float(d[k + 1]) ** 2
    h = t1 - t0
    curv = y0 - 2.0 * y1 + y2
    if curv <= 0.0:
        return t1
    t_star = t1 - h / 2.0 * (y2 - y0) / curv
    return min(max(t_star, t0), t2)
