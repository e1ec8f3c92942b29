import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from airybeam import (ArrayGeometry, FieldGrid, Focusing, InvalidInputError,
                      airy_ai, airy_constants, carrier_from_frequency, classify_trajectory, critical_distance,
                      extract_measured_trajectory, field_closedform_cubic, field_grid,
                      ideal_parabolic_trajectory, trajectory_cubic, trajectory_cubic_focus, trajectory_deviation)
from airybeam.exceptions import ConsistencyError
from airybeam.trajectory import (TrajectoryClassification, TrajectoryCurve, cubic_regimes,
                                 ideal_parabolic_acceleration, ideal_parabolic_velocity, theory_curve,
                                 trajectory_acceleration, trajectory_velocity)

CARRIER = carrier_from_frequency(7e9)
MU0 = airy_constants().mu0
x0s = st.floats(0.2, 3.0) | st.floats(-3.0, -0.2)


def test_critical_distances():
    assert critical_distance(1.0, CARRIER) == pytest.approx(72.6247, abs=1e-3)
    assert critical_distance(1.0, carrier_from_frequency(30e9)) == pytest.approx(311.2487, abs=1e-3)
    r = cubic_regimes(1.0, CARRIER)
    assert r.z_c == critical_distance(1.0, CARRIER)


def test_cubic_trajectory_sign_change_at_zc():
    zc = critical_distance(1.0, CARRIER)
    assert trajectory_cubic(1.0, CARRIER, zc) == pytest.approx(-CARRIER.k / (4 * zc) - MU0 * zc / CARRIER.k)
    assert trajectory_cubic(1.0, CARRIER, 0.5 * zc) < 0 < trajectory_cubic(1.0, CARRIER, 2 * zc)


def test_ideal_parabolic_reference():
    z = np.array([0.0, 3.0, 9.0])
    x = ideal_parabolic_trajectory(0.01, CARRIER, z)
    assert x[0] == pytest.approx(MU0 * 0.01)
    assert ideal_parabolic_velocity(0.01, CARRIER, 3.0) == pytest.approx(3.0 / (2 * CARRIER.k * 1e-6))
    assert ideal_parabolic_acceleration(0.01, CARRIER) > 0
    with pytest.raises(InvalidInputError):
        ideal_parabolic_trajectory(0.01, CARRIER, -1.0)


@given(x0=x0s)
@settings(max_examples=25)
def test_monotone_in_z(x0):
    z = np.linspace(0.5, 500, 1000)
    dx = np.diff(trajectory_cubic(x0, CARRIER, z))
    assert np.all(dx > 0) if x0 > 0 else np.all(dx < 0)


@given(x0=x0s)
@settings(max_examples=25)
def test_asymptotes(x0):
    k = CARRIER.k
    zc = critical_distance(x0, CARRIER)
    for z in (zc / 20, zc / 40):
        x = trajectory_cubic(x0, CARRIER, z)
        assert abs(x - (-k / (4 * x0 ** 3 * z))) <= 0.01 * abs(x)
    for z in (20 * zc, 50 * zc):
        x = trajectory_cubic(x0, CARRIER, z)
        assert abs(x - (-MU0 * x0 * z / k)) <= 0.01 * abs(x)


def test_focus_passthrough_example():
    assert trajectory_cubic_focus(1.0, 0.0, 20.0, CARRIER, 20.0) == pytest.approx(0.139, abs=1e-3)


@given(x0=x0s, xf=st.floats(-5, 5), zf=st.floats(1, 100))
def test_focus_passthrough_exact(x0, xf, zf):
    got = trajectory_cubic_focus(x0, xf, zf, CARRIER, zf) - xf
    want = -MU0 * x0 * zf / CARRIER.k
    assert got == pytest.approx(want, rel=1e-9, abs=1e-12 * max(1.0, abs(xf)))


@given(x0=x0s, xf=st.floats(-3, 3), zf=st.floats(5, 60), z=st.floats(2, 100))
def test_velocity_acceleration_vs_finite_difference(x0, xf, zf, z):
    h = 1e-3 * z

    def x(q):
        return trajectory_cubic_focus(x0, xf, zf, CARRIER, q)

    # 4th-order central differences
    v_fd = (-x(z + 2 * h) + 8 * x(z + h) - 8 * x(z - h) + x(z - 2 * h)) / (12 * h)
    v = trajectory_velocity(x0, xf, zf, CARRIER, z)
    assert v == pytest.approx(v_fd, rel=1e-6, abs=1e-9)

    def vel(q):
        return trajectory_velocity(x0, xf, zf, CARRIER, q)

    a_fd = (-vel(z + 2 * h) + 8 * vel(z + h) - 8 * vel(z - h) + vel(z - 2 * h)) / (12 * h)
    a = trajectory_acceleration(x0, xf, zf, CARRIER, z)
    assert a == pytest.approx(a_fd, rel=1e-6, abs=1e-9)
    if x0 > 0:
        assert a < 0


def test_classification_examples():
    t1 = classify_trajectory(1.0, 0.0, 30.0, CARRIER)
    assert t1.trajectory_type == 1
    assert t1.z_ext == pytest.approx(32.94, abs=1e-2)
    assert t1.x_ext == pytest.approx(0.218, abs=1e-3)
    assert classify_trajectory(1.0, 2.6147, 29.8858, CARRIER).trajectory_type == 2
    assert classify_trajectory(-1.0, 0.0, 30.0, CARRIER).trajectory_type == 3


def test_extremum_matches_numerical_maximum():
    from scipy.optimize import minimize_scalar
    res = minimize_scalar(lambda z: -trajectory_cubic_focus(1.0, 0.0, 30.0, CARRIER, z),
                          bounds=(5, 200), method="bounded", options={"xatol": 1e-8})
    t1 = classify_trajectory(1.0, 0.0, 30.0, CARRIER)
    assert res.x == pytest.approx(t1.z_ext, rel=1e-5)
    assert -res.fun == pytest.approx(trajectory_cubic_focus(1.0, 0.0, 30.0, CARRIER, t1.z_ext), rel=1e-9)


def test_boundary_equality_is_monotone():
    k = CARRIER.k
    zf = 30.0
    thr = k / (4 * zf) + MU0 * zf / k
    assert classify_trajectory(1.0, thr, zf, CARRIER).trajectory_type == 2
    assert classify_trajectory(-1.0, -thr, zf, CARRIER).trajectory_type == 4


def test_classification_type_validation():
    with pytest.raises(InvalidInputError):
        TrajectoryClassification(5, 1.0)
    with pytest.raises(ConsistencyError):
        TrajectoryClassification(1, 1.0, -2.0, 0.0)


@given(x0=x0s, xf=st.floats(-4, 4), zf=st.floats(5, 80))
@settings(max_examples=100)
def test_classification_vs_velocity_sign(x0, xf, zf):
    c = classify_trajectory(x0, xf, zf, CARRIER)
    z = np.geomspace(0.05, 1e5, 20000)
    v = trajectory_velocity(x0, xf, zf, CARRIER, z)
    changes = np.nonzero(np.diff(np.sign(v)) != 0)[0]
    if c.trajectory_type in (1, 3):
        assert changes.size == 1
        i = changes[0]
        assert z[i] <= c.z_ext * (1 + 1e-9) and c.z_ext <= z[i + 1] * (1 + 1e-9)
    else:
        assert changes.size == 0


def test_argmax_of_closed_form_follows_trajectory():
    for z in (10.0, 40.0, 120.0):
        xt = trajectory_cubic(1.0, CARRIER, z)
        x = np.linspace(xt - 0.5, xt + 0.5, 20001)
        mag = np.abs(field_closedform_cubic(1.0, CARRIER, x, z))
        assert abs(x[np.argmax(mag)] - xt) <= x[1] - x[0]


# extraction

def planted_grid(xhat, x_axis, z_axis):
    width = 0.05
    vals = np.array([airy_ai(MU0 + (x_axis - xh) / width) for xh in xhat])
    return FieldGrid(x_axis, z_axis, vals.astype(complex), "raw-sum")


def test_planted_peak_recovery():
    z = np.linspace(10, 30, 41)
    xhat = 0.2 + 0.01 * z + 0.003 * np.sin(z)
    x_axis = np.linspace(-1, 1.5, 1001)
    curve = extract_measured_trajectory(planted_grid(xhat, x_axis, z))
    assert curve.provenance == "measured"
    assert np.max(np.abs(curve.x - xhat)) <= (x_axis[1] - x_axis[0]) / 2


def test_constant_field_is_flagged():
    x = np.linspace(-1, 1, 11)
    z = np.linspace(1, 2, 3)
    curve = extract_measured_trajectory(FieldGrid(x, z, np.ones((3, 11), dtype=complex), "raw-sum"))
    assert curve.z.size == 0
    assert len(curve.flags) == 3
    assert {f[1] for f in curve.flags} <= {"boundary-peak", "ill-defined-peak"}


def test_focusing_grid_passes_focus():
    carrier = CARRIER
    geom = ArrayGeometry.half_wavelength(carrier, 256)
    dx = carrier.wavelength / 4
    x = np.arange(-1.0, 3.0, dx)
    z = np.array([19.0, 20.0, 21.0])
    grid = field_grid(Focusing(0.8, 20.0), geom, carrier, x, z)
    curve = extract_measured_trajectory(grid)
    assert abs(curve.at(20.0) - 0.8) <= dx


def test_window_must_be_ordered():
    x = np.linspace(-1, 1, 11)
    grid = FieldGrid(x, np.array([1.0, 2.0]), np.ones((2, 11), dtype=complex), "raw-sum")
    with pytest.raises(InvalidInputError):
        extract_measured_trajectory(grid, (2.0, 1.0))


# deviation

def test_deviation_identity_and_offset():
    z = np.linspace(10, 30, 201)
    theory = theory_curve(z, 1.0, CARRIER, 0.0, 30.0)
    same = TrajectoryCurve(z, theory.x.copy(), "measured")
    assert trajectory_deviation(theory, same, 10, 30).delta_x_bar == 0.0
    shifted = TrajectoryCurve(z, theory.x - 0.01, "measured")
    dev = trajectory_deviation(theory, shifted, 10, 30)
    assert dev.delta_x_bar == pytest.approx(0.01, rel=1e-12)
    assert dev.max_abs == pytest.approx(0.01, rel=1e-12)


def test_deviation_window_errors():
    z = np.linspace(10, 30, 21)
    theory = theory_curve(z, 1.0, CARRIER)
    with pytest.raises(InvalidInputError):
        trajectory_deviation(theory, theory, 5, 30)
    with pytest.raises(InvalidInputError):
        trajectory_deviation(theory, theory, 30, 10)


def test_curve_validation():
    with pytest.raises(InvalidInputError):
        TrajectoryCurve(np.array([2.0, 1.0]), np.array([0.0, 0.0]), "measured")
    with pytest.raises(InvalidInputError):
        TrajectoryCurve(np.array([1.0]), np.array([0.0]), "guessed")
