"""Scikit-learn style wrappers so beamformers compose with standard tooling."""
import math

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .beams import (CubicPhase, CubicPlusFocus, Focusing, Steering, beamforming_vector,
                    phase_profile)
from .core import ArrayGeometry, antenna_positions, carrier_from_frequency
from .exceptions import InvalidInputError
from .field import NORMALIZATIONS, field_discrete_paraxial, field_grid
from .trajectory import TrajectoryCurve, extract_measured_trajectory, theory_curve

FAMILIES = ("cubic", "cubic_focus", "focusing", "steering")


def check_points(X):
    """Validate an (n_samples, 2) array of (x, z) observation points."""
    X = check_array(X, dtype=float, ensure_2d=True)
    if X.shape[1] != 2:
        raise InvalidInputError(f"expected columns (x, z), got {X.shape[1]} columns")
    if np.any(X[:, 1] <= 0):
        raise InvalidInputError("all z values must be > 0")
    return X


class ArrayBeamformer(BaseEstimator):
    """Phase-only linear-array beamformer.

    fit(X) builds the weights; when X is given its first row (x, z) becomes
    the focus for the focusing families or the pointing target for steering.
    predict(X) returns the complex paraxial field at rows (x, z).
    """

    def __init__(self, frequency=7e9, n_antennas=256, spacing=None, family="cubic_focus",
                 x0=1.0, focus=(0.0, 20.0), theta=0.0, power=1.0, normalization="raw-sum"):
        self.frequency = frequency
        self.n_antennas = n_antennas
        self.spacing = spacing
        self.family = family
        self.x0 = x0
        self.focus = focus
        self.theta = theta
        self.power = power
        self.normalization = normalization

    def _variant(self, focus):
        if self.family == "cubic":
            return CubicPhase(self.x0)
        if self.family == "cubic_focus":
            return CubicPlusFocus(self.x0, *focus)
        if self.family == "focusing":
            return Focusing(*focus)
        if self.family == "steering":
            return Steering(self.theta if focus is None else math.atan2(*focus))
        raise InvalidInputError(f"unknown family {self.family!r}; expected one of {FAMILIES}")

    def fit(self, X=None, y=None):
        if self.normalization not in NORMALIZATIONS:
            raise InvalidInputError(f"unknown normalization {self.normalization!r}")
        self.carrier_ = carrier_from_frequency(self.frequency)
        d = self.carrier_.wavelength / 2 if self.spacing is None else self.spacing
        self.geometry_ = ArrayGeometry(self.n_antennas, d)
        if X is not None:
            target = tuple(check_points(np.atleast_2d(X))[0])
        elif self.family == "steering":
            target = None
        else:
            target = tuple(self.focus)
        self.variant_ = self._variant(target)
        self.positions_ = antenna_positions(self.geometry_)
        self.profile_ = phase_profile(self.variant_, self.geometry_, self.carrier_)
        self.weights_ = beamforming_vector(self.profile_)
        return self

    def predict(self, X):
        check_is_fitted(self)
        X = check_points(X)
        return field_discrete_paraxial(self.variant_, self.geometry_, self.carrier_,
                                       X[:, 0], X[:, 1], self.normalization)

    def score(self, X, y=None):
        """Mean received power gain |field|^2 / N^2 at the rows of X."""
        check_is_fitted(self)
        X = check_points(X)
        raw = np.abs(field_discrete_paraxial(self.variant_, self.geometry_, self.carrier_, X[:, 0], X[:, 1]))
        return float(np.mean(raw ** 2) / self.geometry_.n_antennas ** 2)

    def field_grid(self, x_axis, z_axis, threads=1):
        check_is_fitted(self)
        return field_grid(self.variant_, self.geometry_, self.carrier_, x_axis, z_axis,
                          self.normalization, threads=threads)

    def trajectory(self, z):
        """Closed-form main-lobe trajectory for the cubic families."""
        check_is_fitted(self)
        v = self.variant_
        if isinstance(v, CubicPlusFocus):
            return theory_curve(z, v.x0, self.carrier_, v.x_F, v.z_F)
        if isinstance(v, CubicPhase):
            return theory_curve(z, v.x0, self.carrier_)
        raise InvalidInputError("only cubic families have a closed-form trajectory")


class MainLobeTracker(BaseEstimator):
    """Learns the measured main-lobe path from a FieldGrid and interpolates it."""

    def __init__(self, z_window=None):
        self.z_window = z_window

    def fit(self, X, y=None):
        curve = extract_measured_trajectory(X, self.z_window)
        if curve.z.size < 2:
            raise InvalidInputError("grid yielded fewer than two valid slices")
        self.curve_ = curve
        self.flags_ = curve.flags
        return self

    def predict(self, X):
        check_is_fitted(self)
        z = check_array(np.reshape(np.asarray(X, dtype=float), (-1, 1)), dtype=float).ravel()
        return self.curve_.at(z)

    def transform(self, X):
        """Return the measured curve's (z, x) samples as an array."""
        check_is_fitted(self)
        return np.column_stack([self.curve_.z, self.curve_.x])

    def fit_transform(self, X, y=None):
        return self.fit(X).transform(X)


__all__ = ["ArrayBeamformer", "MainLobeTracker", "check_points", "TrajectoryCurve"]
