"""Phase profiles and beamforming vectors for the four beam families."""
from dataclasses import dataclass
import math

import numpy as np

from .core import antenna_positions, check_finite, check_nonzero_x0, check_positive
from .exceptions import InvalidInputError

TWO_PI = 2 * math.pi


@dataclass(frozen=True)
class CubicPhase:
    """omega(x) = x0^3 x^3 / 3, x0 in 1/m."""

    x0: float

    def __post_init__(self):
        check_nonzero_x0(self.x0)

    def phase(self, x, carrier):
        return self.x0 ** 3 / 3 * np.asarray(x, dtype=float) ** 3


@dataclass(frozen=True)
class Focusing:
    """omega(x) = -k (x_F - x)^2 / (2 z_F)."""

    x_F: float
    z_F: float

    def __post_init__(self):
        check_finite("x_F", self.x_F)
        check_positive("z_F", self.z_F)

    def phase(self, x, carrier):
        x = np.asarray(x, dtype=float)
        return -carrier.k * (self.x_F - x) ** 2 / (2 * self.z_F)


@dataclass(frozen=True)
class CubicPlusFocus:
    """Cubic phase plus a focusing phase towards (x_F, z_F)."""

    x0: float
    x_F: float
    z_F: float

    def __post_init__(self):
        check_nonzero_x0(self.x0)
        check_finite("x_F", self.x_F)
        check_positive("z_F", self.z_F)

    @property
    def cubic(self):
        return CubicPhase(self.x0)

    @property
    def focusing(self):
        return Focusing(self.x_F, self.z_F)

    def phase(self, x, carrier):
        return self.cubic.phase(x, carrier) + self.focusing.phase(x, carrier)


@dataclass(frozen=True)
class Steering:
    """omega(x) = k x sin(theta)."""

    theta: float

    def __post_init__(self):
        check_finite("theta", self.theta)
        if abs(self.theta) >= math.pi / 2:
            raise InvalidInputError("|theta| must be < pi/2")

    def phase(self, x, carrier):
        return carrier.k * np.asarray(x, dtype=float) * math.sin(self.theta)


VARIANTS = (CubicPhase, CubicPlusFocus, Focusing, Steering)


@dataclass(frozen=True)
class BeamSpec:
    variant: object
    power: float = 1.0

    def __post_init__(self):
        if not isinstance(self.variant, VARIANTS):
            raise InvalidInputError(f"unknown beam variant {self.variant!r}")
        check_positive("power", self.power)

    def phase(self, x, carrier):
        return self.variant.phase(x, carrier)


def as_variant(spec):
    """Accept either a BeamSpec or a bare variant."""
    if isinstance(spec, BeamSpec):
        return spec.variant
    if isinstance(spec, VARIANTS):
        return spec
    raise InvalidInputError(f"not a beam specification: {spec!r}")


def spec_power(spec, default=1.0):
    return spec.power if isinstance(spec, BeamSpec) else default


def airy_or_focusing(x0, x_F, z_F):
    """Cubic+focus beam, degenerating to a plain focusing beam at x0 = 0."""
    if x0 == 0:
        return Focusing(x_F, z_F)
    return CubicPlusFocus(x0, x_F, z_F)


def unwrapped_phases(spec, geom, carrier):
    """omega(x_n) without wrapping, for use inside propagation sums."""
    return as_variant(spec).phase(antenna_positions(geom), carrier)


@dataclass(frozen=True)
class PhaseProfile:
    phases: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.phases, dtype=float)
        if p.ndim != 1 or not np.all(np.isfinite(p)):
            raise InvalidInputError("phases must be a finite 1-D array")
        if np.any((p < 0) | (p >= TWO_PI)):
            raise InvalidInputError("phases must lie in [0, 2*pi)")
        p.setflags(write=False)
        object.__setattr__(self, "phases", p)

    def __len__(self):
        return len(self.phases)


def wrap_phase(phi):
    w = np.mod(phi, TWO_PI)
    # mod can return exactly 2*pi for tiny negative inputs
    return np.where(w >= TWO_PI, 0.0, w)


def phase_profile(spec, geom, carrier):
    return PhaseProfile(wrap_phase(unwrapped_phases(spec, geom, carrier)))


def beamforming_vector(profile):
    phases = profile.phases if isinstance(profile, PhaseProfile) else np.asarray(profile, dtype=float)
    return np.exp(1j * phases)


def phase_rate(spec, x, carrier):
    """d omega / dx at source positions x (unwrapped)."""
    v = as_variant(spec)
    x = np.asarray(x, dtype=float)
    if isinstance(v, CubicPhase):
        return v.x0 ** 3 * x ** 2
    if isinstance(v, Focusing):
        return carrier.k * (v.x_F - x) / v.z_F
    if isinstance(v, CubicPlusFocus):
        return v.x0 ** 3 * x ** 2 + carrier.k * (v.x_F - x) / v.z_F
    return np.full_like(x, carrier.k * math.sin(v.theta))
