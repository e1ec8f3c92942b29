"""Main-lobe trajectories: closed forms, classification, extraction and deviation."""
from dataclasses import dataclass, field
import math

import numpy as np

from .airy import airy_constants
from .core import check_depth, check_finite, check_nonzero_x0, check_positive
from .exceptions import ConsistencyError, InvalidInputError

PROVENANCES = ("theory-cubic", "theory-cubic-focus", "theory-ideal-parabolic", "measured")


def _out(v):
    return float(v) if np.ndim(v) == 0 else v


# ideal optics reference (x0 is a length here)

def ideal_parabolic_trajectory(x0_length, carrier, z):
    x0 = check_nonzero_x0(x0_length)
    z = np.asarray(z, dtype=float)
    if np.any(z < 0):
        raise InvalidInputError("z must be >= 0")
    return _out(z ** 2 / (4 * carrier.k * x0 ** 3) + airy_constants().mu0 * x0)


def ideal_parabolic_velocity(x0_length, carrier, z):
    x0 = check_nonzero_x0(x0_length)
    return _out(np.asarray(z, dtype=float) / (2 * carrier.k * x0 ** 3))


def ideal_parabolic_acceleration(x0_length, carrier):
    x0 = check_nonzero_x0(x0_length)
    return 1.0 / (2 * carrier.k * x0 ** 3)


# cubic phase

def trajectory_cubic(x0, carrier, z):
    """x(z) = -k/(4 x0^3 z) - mu0 x0 z / k."""
    x0 = check_nonzero_x0(x0)
    z = check_depth(z)
    k = carrier.k
    return _out(-k / (4 * x0 ** 3 * z) - airy_constants().mu0 * x0 * z / k)


def critical_distance(x0, carrier):
    """z_c where the hyperbolic and straight-line parts cancel."""
    x0 = check_nonzero_x0(x0)
    return carrier.k / (2 * x0 ** 2 * math.sqrt(abs(airy_constants().mu0)))


@dataclass(frozen=True)
class CubicRegimes:
    z_c: float
    near: str
    far: str


def cubic_regimes(x0, carrier):
    """Critical distance with the near (hyperbolic) and far (linear) asymptotes."""
    k = carrier.k
    mu0 = airy_constants().mu0
    return CubicRegimes(critical_distance(x0, carrier),
                        f"x ~ {-k / (4 * x0 ** 3):.6g}/z",
                        f"x ~ {-mu0 * x0 / k:.6g}*z")


# cubic + focusing phase

def _linear_slope(x0, x_F, z_F, k):
    return x_F / z_F - k / (4 * z_F ** 2 * x0 ** 3) - airy_constants().mu0 * x0 / k


def _check_focus(x0, x_F, z_F):
    return check_nonzero_x0(x0), check_finite("x_F", x_F), check_positive("z_F", z_F)


def trajectory_cubic_focus(x0, x_F, z_F, carrier, z):
    x0, x_F, z_F = _check_focus(x0, x_F, z_F)
    z = check_depth(z)
    k = carrier.k
    return _out(-k / (4 * x0 ** 3 * z) + _linear_slope(x0, x_F, z_F, k) * z + k / (2 * z_F * x0 ** 3))


def trajectory_velocity(x0, x_F, z_F, carrier, z):
    """dx/dz of the cubic+focus trajectory."""
    x0, x_F, z_F = _check_focus(x0, x_F, z_F)
    z = check_depth(z)
    k = carrier.k
    return _out(k / (4 * x0 ** 3 * z ** 2) + _linear_slope(x0, x_F, z_F, k))


def trajectory_acceleration(x0, x_F, z_F, carrier, z):
    x0, x_F, z_F = _check_focus(x0, x_F, z_F)
    z = check_depth(z)
    return _out(-carrier.k / (2 * x0 ** 3 * z ** 3))


@dataclass(frozen=True)
class TrajectoryClassification:
    trajectory_type: int
    z_c: float
    z_ext: float = None
    x_ext: float = None

    def __post_init__(self):
        if self.trajectory_type not in (1, 2, 3, 4):
            raise InvalidInputError("trajectory type must be 1..4")
        if self.z_ext is not None and self.z_ext <= 0:
            raise ConsistencyError("z_ext must be positive")


def classify_trajectory(x0, x_F, z_F, carrier):
    """Assign the trajectory type; equality in the type conditions counts as monotone."""
    x0, x_F, z_F = _check_focus(x0, x_F, z_F)
    k = carrier.k
    mu0 = airy_constants().mu0
    threshold = k / (4 * x0 ** 3 * z_F) + mu0 * x0 * z_F / k
    if x0 > 0:
        ttype = 1 if x_F < threshold else 2
    else:
        ttype = 3 if x_F > threshold else 4
    z_ext = x_ext = None
    if ttype in (1, 3):
        disc = k ** 2 - 4 * k * x_F * z_F * x0 ** 3 + 4 * mu0 * z_F ** 2 * x0 ** 4
        if disc <= 0:
            raise ConsistencyError("negative discriminant for an extremum-type trajectory")
        z_ext = k * z_F / math.sqrt(disc)
        x_ext = k / (2 * x0 ** 3) * (1 / z_F - 1 / z_ext)
    return TrajectoryClassification(ttype, critical_distance(x0, carrier), z_ext, x_ext)


# curves, extraction and deviation

@dataclass(frozen=True)
class TrajectoryCurve:
    z: np.ndarray
    x: np.ndarray
    provenance: str
    flags: tuple = field(default=())

    def __post_init__(self):
        z = np.asarray(self.z, dtype=float)
        x = np.asarray(self.x, dtype=float)
        if self.provenance not in PROVENANCES:
            raise InvalidInputError(f"unknown provenance {self.provenance!r}")
        if z.shape != x.shape or z.ndim != 1:
            raise InvalidInputError("z and x must be 1-D arrays of equal length")
        if z.size and (np.any(z <= 0) or np.any(np.diff(z) <= 0)):
            raise InvalidInputError("z must be positive and strictly increasing")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "x", x)

    @property
    def samples(self):
        return list(zip(self.z.tolist(), self.x.tolist()))

    def at(self, z):
        return np.interp(z, self.z, self.x)


def theory_curve(z, x0, carrier, x_F=None, z_F=None):
    """Closed-form trajectory sampled at z (cubic if no focus is given)."""
    z = check_depth(np.atleast_1d(z))
    if z_F is None:
        return TrajectoryCurve(z, trajectory_cubic(x0, carrier, z), "theory-cubic")
    return TrajectoryCurve(z, trajectory_cubic_focus(x0, x_F, z_F, carrier, z), "theory-cubic-focus")


def _refine_peak(mag, i):
    a, b, c = mag[i - 1], mag[i], mag[i + 1]
    den = a - 2 * b + c
    if not den < 0:
        return None
    return 0.5 * (a - c) / den


def extract_measured_trajectory(grid, z_window=None):
    """Per-slice argmax of |field| with 3-point parabolic refinement.

    Slices whose peak sits on the x boundary (or has no concave neighbourhood)
    are omitted and listed in the returned curve's flags as (z, reason).
    """
    lo, hi = (grid.z_axis[0], grid.z_axis[-1]) if z_window is None else z_window
    if lo > hi:
        raise InvalidInputError("z_window must be ordered")
    if grid.x_axis.size < 5:
        raise InvalidInputError("need at least 5 x samples per slice")
    sel = (grid.z_axis >= lo - 1e-12) & (grid.z_axis <= hi + 1e-12)
    mags = np.abs(grid.values[sel])
    zs, xs, flags = [], [], []
    dx = grid.dx
    for z, mag in zip(grid.z_axis[sel], mags):
        i = int(np.argmax(mag))
        if i == 0 or i == mag.size - 1:
            flags.append((float(z), "boundary-peak"))
            continue
        off = _refine_peak(mag, i)
        if off is None:
            flags.append((float(z), "ill-defined-peak"))
            continue
        zs.append(z)
        xs.append(grid.x_axis[i] + off * dx)
    return TrajectoryCurve(np.array(zs), np.array(xs), "measured", tuple(flags))


@dataclass(frozen=True)
class TrajectoryDeviation:
    z: np.ndarray
    delta_x: np.ndarray
    delta_x_bar: float
    z_window: tuple

    @property
    def max_abs(self):
        return float(np.max(np.abs(self.delta_x))) if self.delta_x.size else 0.0


def trajectory_deviation(theory, measured, z_min, z_max):
    """Delta x = theory - measured on measured samples; mean |Delta x| by trapezoid."""
    if not z_min < z_max:
        raise InvalidInputError("need z_min < z_max")
    tol = 1e-9 * max(1.0, abs(z_max))
    for name, curve in (("theory", theory), ("measured", measured)):
        if curve.z.size < 2 or curve.z[0] > z_min + tol or curve.z[-1] < z_max - tol:
            raise InvalidInputError(f"{name} curve does not cover [{z_min}, {z_max}]")
    sel = (measured.z >= z_min - tol) & (measured.z <= z_max + tol)
    z = measured.z[sel]
    if z.size < 2:
        raise InvalidInputError("fewer than two measured samples in the window")
    dxv = theory.at(z) - measured.x[sel]
    bar = float(np.trapezoid(np.abs(dxv), z) / (z[-1] - z[0]))
    return TrajectoryDeviation(z, dxv, bar, (float(z_min), float(z_max)))
