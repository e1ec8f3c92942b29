import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from airybeam import (ArrayBeamformer, CubicPlusFocus, Focusing, InvalidInputError, MainLobeTracker,
                      carrier_from_frequency, trajectory_cubic_focus)

CARRIER = carrier_from_frequency(7e9)


def test_params_roundtrip_and_clone():
    bf = ArrayBeamformer(n_antennas=64, x0=1.5, focus=(0.3, 25.0))
    params = bf.get_params()
    assert params["x0"] == 1.5 and params["focus"] == (0.3, 25.0)
    c = clone(bf).set_params(x0=2.0)
    assert c.x0 == 2.0 and bf.x0 == 1.5


def test_fit_builds_weights():
    bf = ArrayBeamformer(n_antennas=64).fit()
    assert isinstance(bf.variant_, CubicPlusFocus)
    assert bf.weights_.shape == (64,)
    np.testing.assert_allclose(np.abs(bf.weights_), 1.0)
    assert bf.geometry_.spacing == pytest.approx(CARRIER.wavelength / 2)


def test_fit_with_target_row():
    bf = ArrayBeamformer(family="focusing", n_antennas=128).fit(np.array([[0.5, 18.0], [9.0, 9.0]]))
    assert bf.variant_ == Focusing(0.5, 18.0)
    assert abs(bf.predict([[0.5, 18.0]])[0]) == pytest.approx(128.0, rel=1e-12)
    assert bf.score([[0.5, 18.0]]) == pytest.approx(1.0, rel=1e-12)


def test_predict_before_fit():
    with pytest.raises(NotFittedError):
        ArrayBeamformer().predict([[0.0, 10.0]])


def test_bad_inputs():
    bf = ArrayBeamformer(n_antennas=16).fit()
    with pytest.raises(InvalidInputError):
        bf.predict([[0.0, -1.0]])
    with pytest.raises(InvalidInputError):
        bf.predict([[0.0, 1.0, 2.0]])
    with pytest.raises(InvalidInputError):
        ArrayBeamformer(family="laser").fit()
    with pytest.raises(InvalidInputError):
        ArrayBeamformer(normalization="unit").fit()


def test_steering_family():
    bf = ArrayBeamformer(family="steering", theta=0.1, n_antennas=32).fit()
    assert bf.variant_.theta == 0.1
    with pytest.raises(InvalidInputError):
        bf.trajectory([10.0])


def test_tracker_follows_theory():
    bf = ArrayBeamformer(n_antennas=256, x0=1.0, focus=(0.0, 30.0)).fit()
    dx = CARRIER.wavelength / 4
    x = np.arange(-1.5, 1.5, dx)
    z = np.linspace(22.0, 40.0, 19)
    grid = bf.field_grid(x, z)
    tracker = MainLobeTracker().fit(grid)
    theory = bf.trajectory(z)
    assert np.max(np.abs(tracker.predict(z) - theory.x)) < 0.1
    samples = MainLobeTracker().fit_transform(grid)
    assert samples.shape[1] == 2
    np.testing.assert_allclose(theory.x, trajectory_cubic_focus(1.0, 0.0, 30.0, CARRIER, z))


def test_tracker_needs_slices():
    from airybeam import FieldGrid
    x = np.linspace(-1, 1, 11)
    g = FieldGrid(x, np.array([1.0, 2.0]), np.ones((2, 11), dtype=complex), "raw-sum")
    with pytest.raises(InvalidInputError):
        MainLobeTracker().fit(g)
