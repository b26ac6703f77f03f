import math

import numpy as np
import pytest

from kphase import (
    DimensionMismatch,
    Family,
    ManifoldSpec,
    OutsideDomain,
    SingularMinor,
    SpecMismatch,
    SymmetryViolation,
    cp1,
    flag_minor_kernel,
    kernel,
    normalized_overlap,
    projective_distance,
    random_point,
    validate_point,
)

ALL_SPECS = [
    ManifoldSpec(Family.AIII, 1, 1, True),
    ManifoldSpec(Family.AIII, 2, 2, True),
    ManifoldSpec(Family.AIII, 3, 2, False),
    ManifoldSpec(Family.CI, 2, 1, True),
    ManifoldSpec(Family.CI, 2, 1, False),
    ManifoldSpec(Family.DIII, 3, 1, True),
    ManifoldSpec(Family.DIII, 3, 1, False),
    ManifoldSpec(Family.BDI, 4, 1, True),
    ManifoldSpec(Family.BDI, 4, 1, False),
]


def test_spec_validation():
    with pytest.raises(DimensionMismatch):
        ManifoldSpec(Family.AIII, 1, 2)
    with pytest.raises(DimensionMismatch):
        ManifoldSpec(Family.DIII, 1)
    with pytest.raises(DimensionMismatch):
        ManifoldSpec(Family.CI, 2, 2)
    with pytest.raises(DimensionMismatch):
        ManifoldSpec(Family.BDI, 0)


def test_point_shapes():
    assert cp1().point_shape == (1, 1)
    assert ManifoldSpec(Family.AIII, 3, 2).point_shape == (3, 2)
    assert ManifoldSpec(Family.BDI, 5).point_shape == (1, 5)
    assert ManifoldSpec(Family.CI, 3).point_shape == (3, 3)
    assert ManifoldSpec(Family.DIII, 4).complex_dimension == 6
    assert ManifoldSpec(Family.CI, 3).complex_dimension == 6


def test_validate_scalar_coercion():
    p = validate_point(cp1(), 0.5 + 0.25j)
    assert p.entries.shape == (1, 1)
    assert p.entries[0, 0] == 0.5 + 0.25j
    # entries are frozen
    with pytest.raises(ValueError):
        p.entries[0, 0] = 0.0


def test_validate_symmetry_enforced():
    spec = ManifoldSpec(Family.CI, 2)
    z = np.array([[0.1, 0.2], [0.2 + 5e-13, 0.3]], complex)
    p = validate_point(spec, z)
    assert np.array_equal(p.entries, p.entries.T)
    z_bad = np.array([[0.1, 0.2], [0.4, 0.3]], complex)
    with pytest.raises(SymmetryViolation):
        validate_point(spec, z_bad)

    skew = ManifoldSpec(Family.DIII, 2)
    q = validate_point(skew, np.array([[0, 0.3], [-0.3, 0]], complex))
    assert np.array_equal(q.entries, -q.entries.T)
    assert q.entries[0, 0] == 0.0
    with pytest.raises(SymmetryViolation):
        validate_point(skew, np.array([[0, 0.3], [0.3, 0]], complex))


def test_spec_mismatch_on_foreign_point():
    p = validate_point(cp1(), 0.5)
    with pytest.raises(SpecMismatch):
        validate_point(cp1(compact=False), p)


def test_noncompact_domain():
    nc = cp1(compact=False)
    validate_point(nc, 0.99)
    with pytest.raises(OutsideDomain):
        validate_point(nc, 1.0)
    with pytest.raises(OutsideDomain):
        validate_point(nc, 1.2)


def test_bdi_noncompact_domain_needs_both_conditions():
    spec = ManifoldSpec(Family.BDI, 2, compact=False)
    validate_point(spec, [0.3, 0.2j])
    # z.z small but norm too large: second condition must catch it
    z = np.array([0.7, 0.7j])
    assert abs(z @ z) < 1e-12
    with pytest.raises(OutsideDomain):
        validate_point(spec, z)


def test_kernel_cp1_values():
    spec = cp1()
    assert kernel(spec, 1.0, 1j) == pytest.approx(1.0 - 1.0j, abs=1e-15)
    assert kernel(spec, 0.0, 1.0) == pytest.approx(1.0)
    nc = cp1(compact=False)
    assert kernel(nc, 0.5, 0.5) == pytest.approx(0.75)


def test_kernel_hermiticity_all_families(rng):
    for spec in ALL_SPECS:
        for _ in range(25):
            z = random_point(spec, rng)
            w = random_point(spec, rng)
            a = kernel(spec, z, w)
            b = kernel(spec, w, z)
            assert abs(a - np.conj(b)) < 1e-12
            assert kernel(spec, z, z).real > 0.0
            assert abs(kernel(spec, z, z).imag) < 1e-12


def test_bdi_kernel_formula(rng):
    spec = ManifoldSpec(Family.BDI, 3)
    z = random_point(spec, rng).entries[0]
    w = random_point(spec, rng).entries[0]
    expected = 1.0 + (z @ z) * np.conj(w @ w) + 2.0 * (z @ np.conj(w))
    assert kernel(spec, z, w) == pytest.approx(expected, abs=1e-14)


def test_normalized_overlap_values():
    spec = cp1()
    assert abs(normalized_overlap(spec, 1, 0.0, 1.0)) == pytest.approx(
        1.0 / math.sqrt(2.0), abs=1e-15
    )
    assert abs(normalized_overlap(spec, 2, 0.0, 1.0)) == pytest.approx(
        0.5, abs=1e-15
    )
    assert normalized_overlap(spec, 3, 0.7j, 0.7j) == pytest.approx(1.0)


def test_overlap_level_power(rng):
    for spec in ALL_SPECS:
        z = random_point(spec, rng)
        w = random_point(spec, rng)
        o1 = normalized_overlap(spec, 1, z, w)
        o3 = normalized_overlap(spec, 3, z, w)
        assert o3 == pytest.approx(o1**3, abs=1e-12)


def test_overlap_bounds(rng):
    compact = ManifoldSpec(Family.AIII, 2, 2, True)
    bounded = ManifoldSpec(Family.AIII, 2, 2, False)
    for _ in range(50):
        z, w = random_point(compact, rng), random_point(compact, rng)
        assert abs(normalized_overlap(compact, 1, z, w)) <= 1.0 + 1e-12
        z, w = random_point(bounded, rng), random_point(bounded, rng)
        assert abs(normalized_overlap(bounded, 1, z, w)) >= 1.0 - 1e-12


def test_projective_distance_values():
    spec = cp1()
    assert projective_distance(spec, 0.0, 1.0) == pytest.approx(
        math.pi / 4.0, abs=1e-12
    )
    # far point approaches the antipode of the origin
    d = projective_distance(spec, 0.0, 1000.0)
    assert d == pytest.approx(math.pi / 2.0 - 1e-3, abs=1e-8)
    assert projective_distance(spec, 0.3 + 0.1j, 0.3 + 0.1j) == 0.0


def test_projective_distance_symmetry(rng):
    for spec in ALL_SPECS:
        z, w = random_point(spec, rng), random_point(spec, rng)
        assert projective_distance(spec, z, w) == pytest.approx(
            projective_distance(spec, w, z), abs=1e-12
        )


def test_flag_minor_kernel_corner_calibration(rng):
    # With unipotent frames the order-one corner minor reproduces the
    # rank-one kernel, so weight vectors power it the same way.
    z1, z2 = 0.3 + 0.2j, -0.1 + 0.5j
    u1 = np.array([[1.0, z1], [0.0, 1.0]], complex)
    u2 = np.array([[1.0, z2], [0.0, 1.0]], complex)
    m = u1.conj().T @ u2
    val = flag_minor_kernel([3], m)
    ref = kernel(cp1(), z2, z1) ** 3
    assert val == pytest.approx(ref, abs=1e-12)


def test_flag_minor_kernel_singular():
    m = np.array([[1.0, 0.0], [0.0, 0.0]], complex)
    with pytest.raises(SingularMinor):
        flag_minor_kernel([1], m)


def test_flag_minor_kernel_weight_validation():
    m = np.eye(3, dtype=complex)
    with pytest.raises(ValueError):
        flag_minor_kernel([0, 0], m)
    with pytest.raises(ValueError):
        flag_minor_kernel([-1, 2], m)
    with pytest.raises(DimensionMismatch):
        flag_minor_kernel([1], m)


def test_random_point_stays_interior(rng):
    for spec in ALL_SPECS:
        for _ in range(40):
            validate_point(spec, random_point(spec, rng))
