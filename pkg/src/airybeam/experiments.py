"""End-to-end studies shared by the CLI presets and the acceptance suite."""
from dataclasses import dataclass
import math

import numpy as np

from .beams import CubicPhase, CubicPlusFocus, Focusing, as_variant
from .constraints import distortion_free_range, min_aperture
from .core import ArrayGeometry
from .exceptions import ExtractionError, InvalidInputError
from .field import field_grid
from .scenarios import (MobilityScenario, MultiUserScenario, ObstructionScenario,
                        RobustnessScenario, focus_for_user_on_trajectory, noise_for_snr,
                        received_power_obstructed, se_mobility, se_multiuser,
                        se_positioning_error, users_on_trajectory, _slope_at)
from .trajectory import (TrajectoryCurve, extract_measured_trajectory, theory_curve,
                         trajectory_deviation)


def _theory(variant, carrier, z):
    if isinstance(variant, CubicPlusFocus):
        return theory_curve(z, variant.x0, carrier, variant.x_F, variant.z_F)
    if isinstance(variant, CubicPhase):
        return theory_curve(z, variant.x0, carrier)
    raise InvalidInputError("trajectory studies need a cubic beam family")


def trajectory_window(variant, geom, carrier, z_cap_factor=3.0):
    """Distortion-free range; an unbounded far end is capped at z_cap_factor * z_F (or * z_min)."""
    v = as_variant(variant)
    z_F = v.z_F if isinstance(v, CubicPlusFocus) else None
    z_min, z_max = distortion_free_range(geom.aperture, v.x0, z_F, carrier)
    capped = math.isinf(z_max)
    if capped:
        z_max = z_cap_factor * (z_F if z_F is not None else z_min)
    return z_min, z_max, capped


def depth_axis(z_min, z_max, dz):
    """Multiples of dz inside [z_min, z_max] (at least three samples)."""
    lo = math.ceil(z_min / dz - 1e-9)
    hi = math.floor(z_max / dz + 1e-9)
    if hi - lo < 2:
        return np.linspace(z_min, z_max, 3)
    return np.arange(lo, hi + 1) * dz


def measure_trajectory(variant, geom, carrier, z_axis, dx=None, margin=1.5, threads=1):
    """Measured main lobe on a grid spanning the theory curve +- margin."""
    v = as_variant(variant)
    dx = carrier.wavelength / 4 if dx is None else dx
    xt = _theory(v, carrier, z_axis).x
    x_lo = float(np.min(xt)) - margin
    n_x = int(math.ceil((float(np.max(xt)) + margin - x_lo) / dx)) + 1
    x_axis = x_lo + dx * np.arange(n_x)
    grid = field_grid(v, geom, carrier, x_axis, z_axis, threads=threads)
    return extract_measured_trajectory(grid)


@dataclass(frozen=True)
class TrajectoryComparison:
    theory: TrajectoryCurve
    measured: TrajectoryCurve
    delta_x: np.ndarray
    delta_x_bar: float
    max_abs_delta: float
    window: tuple
    capped: bool


def compare_trajectory(variant, geom, carrier, window=None, dz=0.1, dx=None, margin=1.5,
                       z_cap_factor=3.0, threads=1):
    """Theory vs measured main lobe over the distortion-free range (or a given window)."""
    v = as_variant(variant)
    if window is None:
        z_min, z_max, capped = trajectory_window(v, geom, carrier, z_cap_factor)
    else:
        (z_min, z_max), capped = window, False
    z_axis = depth_axis(z_min, z_max, dz)
    measured = measure_trajectory(v, geom, carrier, z_axis, dx, margin, threads)
    if measured.z.size < 2:
        raise ExtractionError("no usable main-lobe peaks in the window")
    theory = _theory(v, carrier, z_axis)
    lo, hi = max(z_axis[0], measured.z[0]), min(z_axis[-1], measured.z[-1])
    dev = trajectory_deviation(theory, measured, lo, hi)
    return TrajectoryComparison(theory, measured, dev.delta_x, dev.delta_x_bar, dev.max_abs,
                                (float(z_axis[0]), float(z_axis[-1])), capped)


def offsets_at(variant, geom, carrier, z_values, dx=None, margin=1.5):
    """theory - measured at isolated depths (NaN where extraction fails)."""
    out = []
    for z in np.atleast_1d(z_values):
        m = measure_trajectory(variant, geom, carrier, np.array([z]), dx, margin)
        t = _theory(as_variant(variant), carrier, np.array([z])).x[0]
        out.append(t - m.x[0] if m.z.size else math.nan)
    return np.array(out)


def deviation_vs_aperture(carrier, x0, focus, n_values, spacing=None, dz=0.1, margin=1.5,
                          z_cap_factor=3.0, threads=1):
    """Rows (L, z_min, z_max, delta_x_bar) for apertures N*d."""
    d = carrier.wavelength / 2 if spacing is None else spacing
    rows = []
    for n in n_values:
        geom = ArrayGeometry(int(n), d)
        cmp_ = compare_trajectory(CubicPlusFocus(x0, *focus), geom, carrier, dz=dz, margin=margin,
                                  z_cap_factor=z_cap_factor, threads=threads)
        rows.append((geom.aperture, cmp_.window[0], cmp_.window[1], cmp_.delta_x_bar))
    return np.array(rows)


def deviation_vs_spacing(carrier, x0, focus, aperture, spacings, dz=0.1, margin=1.5,
                         z_cap_factor=3.0, threads=1):
    """Rows (d, N, delta_x_bar) at (nearly) fixed aperture."""
    rows = []
    for d in spacings:
        geom = ArrayGeometry.from_aperture(aperture, d)
        cmp_ = compare_trajectory(CubicPlusFocus(x0, *focus), geom, carrier, dz=dz, margin=margin,
                                  z_cap_factor=z_cap_factor, threads=threads)
        rows.append((d, geom.n_antennas, cmp_.delta_x_bar))
    return np.array(rows)


def sampling_offset_slope(carrier, x0, focus, spacing, aperture, z_values, dx=None, margin=1.0):
    """Least-squares slope of (measured - theory) against z."""
    geom = ArrayGeometry.from_aperture(aperture, spacing)
    off = -offsets_at(CubicPlusFocus(x0, *focus), geom, carrier, z_values,
                      dx if dx is not None else carrier.wavelength / 8, margin)
    ok = np.isfinite(off)
    return float(np.polyfit(np.asarray(z_values)[ok], off[ok], 1)[0]), off


# obstruction

@dataclass(frozen=True)
class ObstructionSetup:
    airy: CubicPlusFocus
    focusing: Focusing
    tip: tuple
    user: tuple


def obstruction_setup(carrier, x0=1.0, user=(0.0, 30.0), obstacle_depth=15.0):
    """Airy beam focused at the obstacle tip and bending onto the user; focusing beam on the user."""
    x_o = focus_for_user_on_trajectory(x0, obstacle_depth, user, carrier)
    return ObstructionSetup(CubicPlusFocus(x0, x_o, obstacle_depth), Focusing(*user),
                            (x_o, obstacle_depth), tuple(user))


def obstruction_sweep(carrier, geom, setup, etas, power=1.0, c0=math.sqrt(0.5944), side="above"):
    """Rows (eta, P_A, P_G) with top-index blocking at each eta."""
    rows = []
    for eta in etas:
        sc = ObstructionScenario(setup.tip, setup.user, c0, side, eta)
        pa = received_power_obstructed(setup.airy, geom, carrier, sc, power).total
        pg = received_power_obstructed(setup.focusing, geom, carrier, sc, power).total
        rows.append((eta, pa, pg))
    return np.array(rows)


# spectral efficiency sweeps

FAMILY_ORDER = ("airy", "focusing", "steering")


def positioning_sweep(carrier, geom, x0, user, offsets, axis="x", snr_db=10.0, power=1.0, log_base=2):
    """Rows (offset, SE_airy, SE_focusing, SE_steering)."""
    sigma2 = noise_for_snr(snr_db, power, carrier, math.hypot(*user))
    rows = []
    for off in offsets:
        err = (off, 0.0) if axis == "x" else (0.0, off)
        row = [off]
        for fam in FAMILY_ORDER:
            sc = RobustnessScenario(tuple(user), err, sigma2, fam, x0, power)
            row.append(se_positioning_error(geom, carrier, sc, log_base).se)
        rows.append(row)
    return np.array(rows)


def trajectory_direction(x0, focus, carrier, speed):
    """Velocity of magnitude speed along the trajectory tangent at the focus (moving away)."""
    slope = _slope_at(x0, focus[0], focus[1], carrier.k, focus[1])
    norm = math.hypot(slope, 1.0)
    return speed * slope / norm, speed / norm


def mobility_sweep(carrier, geom, x0, focus, speed, intervals, snr_db=10.0, power=1.0,
                   log_base=2, n_samples=129):
    """Rows (T, SE_airy, SE_focusing)."""
    v = trajectory_direction(x0, focus, carrier, speed)
    sigma2 = noise_for_snr(snr_db, power, carrier, math.hypot(*focus))
    rows = []
    for t in intervals:
        row = [t]
        for fam in ("airy", "focusing"):
            sc = MobilityScenario(tuple(focus), v, t, sigma2, fam, x0, power, n_samples)
            row.append(se_mobility(geom, carrier, sc, log_base).se)
        rows.append(row)
    return np.array(rows)


def multiuser_users(carrier, geom, x0, focus, k_users, z_cap_factor=3.0):
    """User 1 at the focus, the rest evenly spaced on the trajectory up to z_max."""
    _, z_max = distortion_free_range(geom.aperture, x0, focus[1], carrier)
    if math.isinf(z_max):
        z_max = z_cap_factor * focus[1]
    zs = [focus[1] + i * (z_max - focus[1]) / k_users for i in range(k_users)]
    users = users_on_trajectory(x0, focus, carrier, zs)
    return (tuple(focus),) + users[1:]


def multiuser_sweep(carrier, geom, x0, users, snr_dbs, power=1.0, log_base=2):
    """Rows (snr_db, SE_airy, SE_focusing, SE_steering); SNR referenced to user 1."""
    rows = []
    r_ref = math.hypot(*users[0])
    for snr in snr_dbs:
        sc = MultiUserScenario(tuple(users), power, noise_for_snr(snr, power, carrier, r_ref), x0)
        rows.append([snr] + [se_multiuser(geom, carrier, sc, fam, log_base).se for fam in FAMILY_ORDER])
    return np.array(rows)


def aperture_for_window(x0, z_F, window, carrier, spacing, margin=1.3):
    """Antenna count covering the target window with a safety margin."""
    L = margin * min_aperture(x0, z_F, window[0], window[1], carrier)
    return ArrayGeometry(int(math.ceil(L / spacing)), spacing)
