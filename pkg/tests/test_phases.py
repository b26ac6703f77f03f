import math

import numpy as np
import pytest

from kphase import (
    BranchCut,
    DimensionMismatch,
    GridMismatch,
    HamiltonianSchedule,
    KernelZero,
    NotClosed,
    PhaseReport,
    assemble_report,
    cp1,
    dynamical_phase,
    latitude_circle,
    line_integral_phase,
    polygon_phase,
    stokes_compare,
    trajectory,
    triangle_phase,
    wrap_angle,
)

SZ = np.array([[1.0, 0.0], [0.0, -1.0]], complex)


def test_wrap_angle_branch():
    assert wrap_angle(-math.pi) == math.pi
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(3.0 * math.pi) == pytest.approx(math.pi)
    assert wrap_angle(-3.5 * math.pi) == pytest.approx(0.5 * math.pi)
    assert wrap_angle(0.25) == 0.25


def test_phase_report_wrapping_and_defect():
    rep = PhaseReport(
        alpha_raw=3.0 * math.pi,
        beta_raw=2.0 * math.pi,
        gamma_raw=math.pi,
        closure_residual=1e-9,
    )
    assert rep.alpha == pytest.approx(math.pi)
    assert rep.beta == pytest.approx(0.0)
    assert abs(rep.defect) < 1e-12
    assert rep.consistent


def test_phase_report_json_keys():
    rep = assemble_report(0.5, 0.2, 0.3, 1e-8)
    data = rep.to_json()
    assert sorted(data) == [
        "alpha",
        "alpha_raw",
        "beta",
        "consistent",
        "gamma",
        "gamma_raw",
        "residual",
    ]
    tagged = assemble_report(0.5, 0.2, 0.3, 1e-8, method="quantum-oracle")
    assert tagged.to_json()["method"] == "quantum-oracle"


def test_assemble_report_rejects_nonfinite():
    with pytest.raises(ValueError):
        assemble_report(float("nan"), 0.0, 0.0, 0.0)


def test_triangle_octant():
    spec = cp1()
    val = triangle_phase(spec, 1, 1.0, 1j)
    assert val == pytest.approx(math.pi / 4.0, abs=1e-12)
    assert triangle_phase(spec, 1, 1j, 1.0) == pytest.approx(
        -val, abs=1e-12
    )
    assert triangle_phase(spec, 3, 1.0, 1j) == pytest.approx(
        3.0 * math.pi / 4.0, abs=1e-12
    )


def test_triangle_kernel_zero():
    spec = cp1()
    # antipodal pair annihilates the kernel
    with pytest.raises(KernelZero):
        triangle_phase(spec, 1, 1.0, -1.0)


def test_triangle_branch_cut():
    spec = cp1()
    with pytest.raises(BranchCut):
        triangle_phase(spec, 1, 2.0, -0.5 + 1e-6j)


def test_polygon_needs_two_vertices():
    with pytest.raises(DimensionMismatch):
        polygon_phase(cp1(), 1, [1.0])


def test_polygon_open_fan_telescopes(rng):
    # consecutive-pair fan over an open path equals the sum of its parts
    spec = cp1()
    pts = [complex(*rng.standard_normal(2)) * 0.5 for _ in range(5)]
    total = polygon_phase(spec, 1, pts)
    split = polygon_phase(spec, 1, pts[:3]) + polygon_phase(spec, 1, pts[2:])
    assert total == pytest.approx(split, abs=1e-12)


def test_polygon_closed_ngon_approaches_latitude_area():
    spec = cp1()
    loop = latitude_circle(spec, 1.0, 720)
    val = polygon_phase(spec, 1, loop)
    assert val == pytest.approx(math.pi, abs=1e-4)


def test_line_integral_latitude_formula():
    spec = cp1()
    for level in (1, 2):
        for r in (0.5, 1.0, 2.0):
            loop = latitude_circle(spec, r, 1500)
            got = line_integral_phase(spec, level, loop)
            want = 2.0 * math.pi * level * r**2 / (1.0 + r**2)
            assert got == pytest.approx(want, abs=2e-5 * level)


def test_line_integral_rejects_open_path():
    spec = cp1()
    pts = [0.0, 0.5, 0.5 + 0.5j]
    with pytest.raises(NotClosed):
        line_integral_phase(spec, 1, pts)


def test_line_integral_accepts_trajectory():
    spec = cp1()
    sched = HamiltonianSchedule.constant([SZ], [1.0])
    traj = trajectory(spec, 1.0, sched, math.pi, 1e-3)
    val = line_integral_phase(spec, 1, traj, cyclicity_tol=1e-6)
    assert val == pytest.approx(math.pi, abs=1e-5)


def test_dynamical_phase_constant_field():
    spec = cp1()
    sched = HamiltonianSchedule.constant([SZ], [1.0])
    traj = trajectory(spec, 0.5, sched, 1.0, 1e-2)
    beta = dynamical_phase(spec, 1, traj, sched)
    # conserved energy times the span
    z = 0.5
    expected = (1.0 - z**2) / (1.0 + z**2)
    assert beta == pytest.approx(expected, abs=1e-7)


def test_dynamical_phase_grid_mismatch():
    spec = cp1()
    sched = HamiltonianSchedule.constant([SZ], [1.0])
    traj = trajectory(spec, 0.5, sched, 1.0, 1e-2)
    short = HamiltonianSchedule.from_samples([SZ], [[0.0, 1.0], [0.5, 1.0]])
    with pytest.raises(GridMismatch):
        dynamical_phase(spec, 1, traj, short)


def test_stokes_compare_latitude():
    spec = cp1()
    loop = latitude_circle(spec, 1.0, 600)
    rep = stokes_compare(spec, 1, loop)
    assert abs(rep.difference) < 1e-4
    assert rep.samples == 601
    assert rep.polygon_fan == pytest.approx(math.pi, abs=1e-3)


def test_stokes_compare_branch_cut_refinement():
    spec = cp1()
    # the long jump between the two far vertices crosses the cut until
    # midpoint insertion splits it
    loop = [0.5, 2.0, -0.5 + 0.03j, 0.5]
    rep = stokes_compare(spec, 1, loop, cyclicity_tol=1e-12)
    assert abs(rep.difference) < 0.3
    with pytest.raises(BranchCut):
        polygon_phase(spec, 1, loop)
