import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from airybeam import (ArrayGeometry, BeamSpec, CubicPhase, CubicPlusFocus, Focusing, InvalidInputError,
                      PhaseProfile, Steering, airy_or_focusing, antenna_positions, beamforming_vector,
                      carrier_from_frequency, phase_profile, unwrapped_phases)
from airybeam.beams import phase_rate, wrap_phase

CARRIER = carrier_from_frequency(7e9)
GEOM = ArrayGeometry.half_wavelength(CARRIER, 256)


def test_cubic_profile_example():
    p = phase_profile(CubicPhase(1.0), GEOM, CARRIER)
    x = antenna_positions(GEOM)
    assert p.phases[-1] == pytest.approx(math.fmod(x[-1] ** 3 / 3, 2 * math.pi), abs=1e-12)
    assert p.phases[-1] == pytest.approx(6.797 - 2 * math.pi, abs=2e-3)


def test_focusing_profile_matches_formula():
    v = Focusing(0.0, 20.0)
    x = antenna_positions(GEOM)
    raw = -CARRIER.k * x ** 2 / 40.0
    np.testing.assert_allclose(unwrapped_phases(v, GEOM, CARRIER), raw, rtol=1e-14)


def test_zero_x0_degenerates_to_focusing():
    v = airy_or_focusing(0.0, 1.7431, 19.9239)
    assert isinstance(v, Focusing)
    a = phase_profile(v, GEOM, CARRIER).phases
    b = phase_profile(Focusing(1.7431, 19.9239), GEOM, CARRIER).phases
    assert np.array_equal(a, b)


def test_composite_is_sum():
    v = CubicPlusFocus(1.2, 0.5, 25.0)
    x = antenna_positions(GEOM)
    np.testing.assert_allclose(v.phase(x, CARRIER),
                               v.cubic.phase(x, CARRIER) + v.focusing.phase(x, CARRIER), rtol=1e-15)


@pytest.mark.parametrize("make", [lambda: CubicPhase(0.0), lambda: Focusing(0.0, 0.0),
                                  lambda: Focusing(0.0, -1.0), lambda: Steering(math.pi / 2),
                                  lambda: CubicPhase(math.nan), lambda: BeamSpec(CubicPhase(1.0), 0.0)])
def test_invalid_specs(make):
    with pytest.raises(InvalidInputError):
        make()


def test_profile_is_read_only():
    p = phase_profile(CubicPhase(1.0), GEOM, CARRIER)
    with pytest.raises(ValueError):
        p.phases[0] = 1.0
    with pytest.raises(InvalidInputError):
        PhaseProfile(np.array([0.0, 2 * math.pi]))


def test_wrap_tiny_negative():
    assert wrap_phase(np.array([-1e-18]))[0] < 2 * math.pi


finite_x0 = st.floats(0.05, 4.0) | st.floats(-4.0, -0.05)


@given(x0=finite_x0, xf=st.floats(-5, 5), zf=st.floats(1, 200), n=st.integers(1, 512))
def test_profile_range_and_unit_modulus(x0, xf, zf, n):
    geom = ArrayGeometry.half_wavelength(CARRIER, n)
    p = phase_profile(CubicPlusFocus(x0, xf, zf), geom, CARRIER)
    assert len(p) == n
    assert np.all((p.phases >= 0) & (p.phases < 2 * math.pi))
    np.testing.assert_allclose(np.abs(beamforming_vector(p)), 1.0, atol=1e-15)


@given(x0=finite_x0, theta=st.floats(-1.5, 1.5))
def test_wrapped_equals_unwrapped_mod_2pi(x0, theta):
    for v in (CubicPhase(x0), Steering(theta)):
        w = beamforming_vector(phase_profile(v, GEOM, CARRIER))
        u = np.exp(1j * unwrapped_phases(v, GEOM, CARRIER))
        np.testing.assert_allclose(w, u, atol=1e-9)


@given(x0=finite_x0, xf=st.floats(-3, 3), zf=st.floats(5, 100))
def test_phase_rate_matches_finite_difference(x0, xf, zf):
    v = CubicPlusFocus(x0, xf, zf)
    x = np.linspace(-2, 2, 9)
    h = 1e-5
    fd = (v.phase(x + h, CARRIER) - v.phase(x - h, CARRIER)) / (2 * h)
    np.testing.assert_allclose(phase_rate(v, x, CARRIER), fd, rtol=1e-6, atol=1e-6)


def test_cubic_profile_is_odd():
    x = antenna_positions(GEOM)
    w = CubicPhase(1.7).phase(x, CARRIER)
    np.testing.assert_allclose(w[::-1], -w, atol=1e-12)


def test_zero_steering_profile():
    assert np.all(phase_profile(Steering(0.0), GEOM, CARRIER).phases == 0.0)


def test_quarter_turn_weight():
    v = beamforming_vector(PhaseProfile(np.array([math.pi / 2])))
    assert abs(v[0] - 1j) <= 1e-15


@given(x0=finite_x0, xf=st.floats(-3, 3), zf=st.floats(1, 100))
def test_composite_minus_cubic_is_focusing_mod_2pi(x0, xf, zf):
    a = phase_profile(CubicPlusFocus(x0, xf, zf), GEOM, CARRIER).phases
    b = phase_profile(CubicPhase(x0), GEOM, CARRIER).phases
    c = phase_profile(Focusing(xf, zf), GEOM, CARRIER).phases
    diff = np.exp(1j * (a - b)) - np.exp(1j * c)
    assert np.max(np.abs(diff)) <= 1e-9
