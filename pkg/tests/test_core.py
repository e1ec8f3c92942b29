import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from airybeam import ArrayGeometry, CarrierConfig, InvalidInputError, antenna_positions, carrier_from_frequency


def test_carrier_7ghz():
    c = carrier_from_frequency(7e9)
    assert c.wavelength == pytest.approx(0.0428571, abs=1e-7)
    assert c.k == pytest.approx(146.607, abs=1e-3)


def test_carrier_30ghz():
    assert carrier_from_frequency(30e9).k == pytest.approx(628.319, abs=1e-3)


@pytest.mark.parametrize("bad", [0.0, -1e9, math.inf, math.nan])
def test_carrier_rejects_bad_frequency(bad):
    with pytest.raises(InvalidInputError):
        carrier_from_frequency(bad)


@given(st.floats(1e6, 1e12))
def test_carrier_identities(f):
    c = carrier_from_frequency(f)
    assert c.wavelength * c.f_c == pytest.approx(c.c, rel=1e-15)
    assert c.k * c.wavelength == pytest.approx(2 * math.pi, rel=1e-15)


def test_positions_small_arrays():
    assert antenna_positions(ArrayGeometry(1, 0.5)).tolist() == [0.0]
    assert antenna_positions(ArrayGeometry(2, 0.5)).tolist() == [-0.25, 0.25]


def test_positions_u6g(u6g):
    g = ArrayGeometry.half_wavelength(u6g, 256)
    x = antenna_positions(g)
    assert x[0] == pytest.approx(-2.7321, abs=1e-4)
    assert x[-1] == pytest.approx(2.7321, abs=1e-4)
    assert x[-1] - x[0] == pytest.approx(255 * g.spacing, rel=1e-14)
    assert g.aperture == 256 * g.spacing


@given(st.integers(1, 4096), st.floats(1e-4, 1.0))
def test_positions_centered_and_uniform(n, d):
    x = antenna_positions(ArrayGeometry(n, d))
    assert x.size == n
    assert abs(x.sum()) <= 1e-12 * n * d * n
    np.testing.assert_allclose(np.diff(x), d, rtol=1e-9)
    np.testing.assert_allclose(x, -x[::-1], atol=1e-12 * n * d)


@pytest.mark.parametrize("n,d", [(0, 0.1), (-3, 0.1), (2.5, 0.1), (4, 0.0), (4, -1.0)])
def test_geometry_invariants(n, d):
    with pytest.raises(InvalidInputError):
        ArrayGeometry(n, d)


def test_carrier_default_speed():
    assert CarrierConfig(1e9).c == 3.0e8
