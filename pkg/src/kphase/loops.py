"""Closed test loops in chart coordinates.

Both factories return point lists whose final entry repeats the first one
exactly, so downstream phase integrals see a closed path without any
cyclicity slack.
"""

from __future__ import annotations

import numpy as np

from .manifolds import Family, ManifoldSpec, validate_point


def latitude_circle(spec: ManifoldSpec, radius: float, samples: int):
    """Circle of constant chart radius, sampled uniformly with closure.

    Returns ``samples + 1`` points; the duplicate endpoint reuses the
    first point's float values bit for bit.
    """
    if samples < 3:
        raise ValueError("need at least 3 samples")
    if radius <= 0:
        raise ValueError("radius must be positive")
    rows, cols = spec.point_shape
    points = []
    for k in range(samples + 1):
        angle = 2.0 * np.pi * (k % samples) / samples
        z = np.zeros((rows, cols), dtype=complex)
        z[0, 0] = radius * np.exp(1j * angle)
        points.append(validate_point(spec, z))
    return points


def fourier_loop(
    spec: ManifoldSpec,
    rng: np.random.Generator,
    samples: int,
    modes: int = 3,
    scale: float = 0.5,
):
    """Smooth random closed loop built from a low-order Fourier series.

    Coefficient matrices are drawn from ``rng``, symmetrized to the
    family's chart symmetry, and damped by mode number.  Non-compact
    charts get an extra overall contraction to stay inside the domain.
    """
    if samples < 3:
        raise ValueError("need at least 3 samples")
    rows, cols = spec.point_shape
    coeffs = []
    for m in range(1, modes + 1):
        for _ in range(2):
            raw = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal(
                (rows, cols)
            )
            if spec.family is Family.CI:
                raw = (raw + raw.T) / 2.0
            elif spec.family is Family.DIII:
                raw = (raw - raw.T) / 2.0
            coeffs.append(raw * scale / m)
    if not spec.compact:
        total = sum(np.linalg.norm(c, 2) for c in coeffs)
        if total > 0:
            shrink = 0.4 / max(total, 0.4)
            coeffs = [c * shrink for c in coeffs]
    points = []
    for k in range(samples + 1):
        t = 2.0 * np.pi * (k % samples) / samples
        z = np.zeros((rows, cols), dtype=complex)
        for m in range(1, modes + 1):
            z = z + coeffs[2 * (m - 1)] * np.cos(m * t)
            z = z + coeffs[2 * m - 1] * np.sin(m * t)
        points.append(validate_point(spec, z))
    return points
