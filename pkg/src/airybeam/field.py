"""Radiated-field evaluation: exact spherical sums, paraxial sums,
finite-aperture quadrature and the closed-form Airy expressions."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
import math

import numpy as np
from scipy.signal import czt

from ._quad import chirp_integral
from .airy import airy_ai
from .beams import (CubicPhase, CubicPlusFocus, as_variant, phase_rate, spec_power,
                    unwrapped_phases)
from .core import antenna_positions, check_depth, check_finite, check_nonzero_x0, check_positive
from .exceptions import InvalidInputError

NORMALIZATIONS = ("raw-sum", "d-weighted", "link-budget")
_POINT_CHUNK = 4096


@dataclass(frozen=True)
class FieldPoint:
    x: float
    z: float
    y: float = 0.0

    def __post_init__(self):
        check_finite("x", self.x)
        check_finite("y", self.y)
        check_depth(self.z)


def _point(point):
    if isinstance(point, FieldPoint):
        return point
    if len(point) == 2:
        return FieldPoint(point[0], point[1])
    if len(point) == 3:
        return FieldPoint(point[0], point[2], point[1])
    raise InvalidInputError("point must be (x, z) or (x, y, z)")


def _ordered_sum(terms):
    """Sum along the last axis strictly in ascending index order."""
    return np.cumsum(terms, axis=-1)[..., -1]


def field_exact_spherical(spec, geom, carrier, point, mode="paper"):
    """Full spherical-wave sum with the Green's function amplitude.

    mode "paper" uses the centre distance r in every amplitude, "exact" the
    per-antenna distance.
    """
    if mode not in ("paper", "exact"):
        raise InvalidInputError(f"unknown amplitude mode {mode!r}")
    p = _point(point)
    xn = antenna_positions(geom)
    omega = unwrapped_phases(spec, geom, carrier)
    dist = np.sqrt((p.x - xn) ** 2 + p.y ** 2 + p.z ** 2)
    amp_r = dist if mode == "exact" else math.sqrt(p.x ** 2 + p.y ** 2 + p.z ** 2)
    terms = np.exp(1j * (omega + carrier.k * dist)) * carrier.wavelength / (4 * math.pi * amp_r)
    return complex(math.sqrt(spec_power(spec) / geom.n_antennas) * _ordered_sum(terms))


def _normalize(raw, spec, geom, carrier, x, z, normalization):
    if normalization == "raw-sum":
        return raw
    if normalization == "d-weighted":
        return raw * geom.spacing
    if normalization == "link-budget":
        r = np.sqrt(x ** 2 + z ** 2)
        pref = math.sqrt(spec_power(spec) / geom.n_antennas) * carrier.wavelength / (4 * math.pi)
        return raw * pref * np.exp(1j * carrier.k * z) / r
    raise InvalidInputError(f"unknown normalization {normalization!r}")


def field_discrete_paraxial(spec, geom, carrier, x, z, normalization="raw-sum"):
    """Paraxial array factor sum_n exp(j(omega_n + k (x - x_n)^2 / (2 z))).

    x and z broadcast against each other; scalars give a complex scalar.
    """
    if normalization not in NORMALIZATIONS:
        raise InvalidInputError(f"unknown normalization {normalization!r}")
    x = np.asarray(x, dtype=float)
    z = check_depth(z)
    x, z = np.broadcast_arrays(x, z)
    xn = antenna_positions(geom)
    omega = unwrapped_phases(spec, geom, carrier)
    k = carrier.k
    flat_x, flat_z = x.ravel(), z.ravel()
    raw = np.empty(flat_x.shape, dtype=complex)
    for s in range(0, flat_x.size, _POINT_CHUNK):
        xs, zs = flat_x[s:s + _POINT_CHUNK, None], flat_z[s:s + _POINT_CHUNK, None]
        raw[s:s + _POINT_CHUNK] = _ordered_sum(np.exp(1j * (omega + k * (xs - xn) ** 2 / (2 * zs))))
    out = _normalize(raw.reshape(x.shape), spec, geom, carrier, x, z, normalization)
    return complex(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class FieldGrid:
    """Complex field on a uniform (z, x) rectangle; values[i, j] at (x_axis[j], z_axis[i])."""

    x_axis: np.ndarray
    z_axis: np.ndarray
    values: np.ndarray
    normalization: str = "raw-sum"

    def __post_init__(self):
        xa = np.asarray(self.x_axis, dtype=float)
        za = np.asarray(self.z_axis, dtype=float)
        vals = np.asarray(self.values)
        for name, ax in (("x_axis", xa), ("z_axis", za)):
            if ax.ndim != 1 or ax.size < 1 or not np.all(np.isfinite(ax)):
                raise InvalidInputError(f"{name} must be a finite 1-D array")
            if ax.size > 1:
                step = np.diff(ax)
                if np.any(step <= 0):
                    raise InvalidInputError(f"{name} must be strictly increasing")
                if np.ptp(step) > 1e-6 * abs(step.mean()):
                    raise InvalidInputError(f"{name} must be uniformly spaced")
        if np.any(za <= 0):
            raise InvalidInputError("z_axis entries must be > 0")
        if vals.shape != (za.size, xa.size):
            raise InvalidInputError(f"values shape {vals.shape} does not match axes ({za.size}, {xa.size})")
        if self.normalization not in NORMALIZATIONS:
            raise InvalidInputError(f"unknown normalization {self.normalization!r}")
        object.__setattr__(self, "x_axis", xa)
        object.__setattr__(self, "z_axis", za)
        object.__setattr__(self, "values", vals)

    @property
    def magnitude(self):
        return np.abs(self.values)

    @property
    def dx(self):
        return float(self.x_axis[1] - self.x_axis[0]) if self.x_axis.size > 1 else 0.0


def _czt_slice(b_base, xn, k, xa, dx, n_x, z, d):
    """Paraxial raw sum on x = xa + m dx at one depth via a chirp-z transform."""
    b = b_base * np.exp(1j * (k * xn ** 2 / (2 * z) - k * xa * (xn - xn[0]) / z))
    w = np.exp(-1j * k * dx * d / z)
    s = czt(b, n_x, w, 1.0)
    xm = xa + dx * np.arange(n_x)
    return s * np.exp(1j * (k * xm ** 2 / (2 * z) - k * xm * xn[0] / z))


def field_grid(spec, geom, carrier, x_axis, z_axis, normalization="raw-sum", method="auto", threads=1):
    """Evaluate the paraxial field on a grid and return a FieldGrid."""
    if normalization not in NORMALIZATIONS:
        raise InvalidInputError(f"unknown normalization {normalization!r}")
    if method not in ("auto", "czt", "direct"):
        raise InvalidInputError(f"unknown method {method!r}")
    x_axis = np.asarray(x_axis, dtype=float)
    z_axis = check_depth(z_axis)
    use_czt = method == "czt" or (method == "auto" and x_axis.size >= 16 and geom.n_antennas >= 16)
    if use_czt and x_axis.size < 2:
        use_czt = False
    xn = antenna_positions(geom)
    k = carrier.k

    if use_czt:
        base = np.exp(1j * unwrapped_phases(spec, geom, carrier))
        dx = float(x_axis[1] - x_axis[0])

        def one(z):
            return _czt_slice(base, xn, k, float(x_axis[0]), dx, x_axis.size, z, geom.spacing)
    else:
        def one(z):
            return field_discrete_paraxial(spec, geom, carrier, x_axis, z)

    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            rows = list(pool.map(one, z_axis))
    else:
        rows = [one(z) for z in z_axis]
    raw = np.vstack(rows) if rows else np.empty((0, x_axis.size), dtype=complex)
    X, Z = np.meshgrid(x_axis, z_axis)
    vals = _normalize(raw, spec, geom, carrier, X, Z, normalization)
    return FieldGrid(x_axis, z_axis, vals, normalization)


def field_finite_continuous(spec, aperture, carrier, point, tol=None, max_panels=2 ** 24):
    """Finite-aperture integral of exp(j(omega(x') + k (x - x')^2 / (2 z))) over [-L/2, L/2].

    Raises QuadratureError (carrying the best estimate) when tol is not met.
    """
    L = check_positive("aperture", aperture)
    p = _point(point)
    x, z, k = p.x, p.z, carrier.k
    variant = as_variant(spec)
    tol = 1e-6 * L if tol is None else tol

    def integrand(xp):
        return np.exp(1j * (variant.phase(xp, carrier) + k * (x - xp) ** 2 / (2 * z)))

    # phi'(x') = omega'(x') - k (x - x') / z is at most quadratic in x'
    probe = np.array([-L / 2, 0.0, L / 2])
    dphi = phase_rate(variant, probe, carrier) - k * (x - probe) / z
    a2 = (dphi[0] + dphi[2] - 2 * dphi[1]) / (2 * (L / 2) ** 2)
    a1 = (dphi[2] - dphi[0]) / L
    cand = [abs(dphi[0]), abs(dphi[2])]
    if a2 != 0 and abs(a1 / (2 * a2)) < L / 2:
        v = -a1 / (2 * a2)
        cand.append(abs(a2 * v * v + a1 * v + dphi[1]))
    rate = max(max(cand), 1.0 / L)
    value, _ = chirp_integral(integrand, -L / 2, L / 2, rate, tol, max_panels)
    return complex(value)


def _cubic_quadratic(x0, a_coef, b_coef, c_coef):
    """Integral over the real line of exp(j(x0^3 t^3/3 + A t^2 + B t + C)) dt."""
    a = a_coef / x0 ** 2
    alpha = -a ** 2 + b_coef / x0
    phase = 2.0 / 3.0 * a ** 3 - a * b_coef / x0 + c_coef
    return 2 * math.pi / abs(x0) * airy_ai(alpha) * np.exp(1j * phase)


def cubic_airy_argument(x0, carrier, x, z):
    k = carrier.k
    return -k ** 2 / (4 * z ** 2 * x0 ** 4) - k * x / (z * x0)


def cubic_focus_airy_argument(x0, x_F, z_F, carrier, x, z):
    k = carrier.k
    return (-k ** 2 * (z_F - z) ** 2 / (4 * z ** 2 * z_F ** 2 * x0 ** 4)
            - k * (x * z_F - x_F * z) / (z * z_F * x0))


def field_closedform_cubic(x0, carrier, x, z):
    """Infinite-aperture field of the cubic phase: (2 pi/|x0|) Ai(.) exp(j phi2)."""
    x0 = check_nonzero_x0(x0)
    z = check_depth(z)
    x = np.asarray(x, dtype=float)
    k = carrier.k
    out = _cubic_quadratic(x0, k / (2 * z), -k * x / z, k * x ** 2 / (2 * z))
    return complex(out) if np.ndim(out) == 0 else out


def field_closedform_cubic_focus(x0, x_F, z_F, carrier, x, z):
    """Infinite-aperture field of the cubic+focusing phase."""
    x0 = check_nonzero_x0(x0)
    z_F = check_positive("z_F", z_F)
    x_F = check_finite("x_F", x_F)
    z = check_depth(z)
    x = np.asarray(x, dtype=float)
    k = carrier.k
    out = _cubic_quadratic(x0, k / (2 * z) - k / (2 * z_F), -k * x / z + k * x_F / z_F,
                           k * x ** 2 / (2 * z) - k * x_F ** 2 / (2 * z_F))
    return complex(out) if np.ndim(out) == 0 else out


def field_closedform(spec, carrier, x, z):
    """Dispatch to the closed form of a cubic or cubic+focus spec."""
    v = as_variant(spec)
    if isinstance(v, CubicPhase):
        return field_closedform_cubic(v.x0, carrier, x, z)
    if isinstance(v, CubicPlusFocus):
        return field_closedform_cubic_focus(v.x0, v.x_F, v.z_F, carrier, x, z)
    raise InvalidInputError("closed forms exist only for cubic beam families")


@dataclass(frozen=True)
class FieldErrorReport:
    psi_closed: complex
    psi_finite: complex
    psi_discrete: complex

    @property
    def epsilon_truncation(self):
        return self.psi_closed - self.psi_finite

    @property
    def epsilon_sampling(self):
        return self.psi_finite - self.psi_discrete

    @property
    def epsilon_total(self):
        return self.psi_closed - self.psi_discrete

    @property
    def magnitudes(self):
        return {"total": abs(self.epsilon_total),
                "truncation": abs(self.epsilon_truncation),
                "sampling": abs(self.epsilon_sampling)}


def truncation_sampling_errors(spec, geom, carrier, point, tol=None):
    """Split psi_I - psi_A into truncation (psi_I - psi_M) and sampling (psi_M - psi_A)."""
    p = _point(point)
    psi_i = field_closedform(spec, carrier, p.x, p.z)
    psi_m = field_finite_continuous(spec, geom.aperture, carrier, p, tol=tol)
    psi_a = field_discrete_paraxial(spec, geom, carrier, p.x, p.z, normalization="d-weighted")
    return FieldErrorReport(psi_i, psi_m, psi_a)


def field_paraxial_2d(spec_x, spec_y, geom_x, geom_y, carrier, x, y, z, power=1.0):
    """Planar-array paraxial field by the direct double sum (link-budget units)."""
    z = float(check_depth(z))
    k = carrier.k
    xn = antenna_positions(geom_x)
    ym = antenna_positions(geom_y)
    wx = unwrapped_phases(spec_x, geom_x, carrier)
    wy = unwrapped_phases(spec_y, geom_y, carrier)
    phase = (wx[:, None] + wy[None, :] + k * (x - xn[:, None]) ** 2 / (2 * z)
             + k * (y - ym[None, :]) ** 2 / (2 * z))
    total = _ordered_sum(np.exp(1j * phase).ravel())
    return complex(_planar_prefactor(geom_x, geom_y, carrier, x, y, z, power) * total)


def _planar_prefactor(geom_x, geom_y, carrier, x, y, z, power):
    r = math.sqrt(x * x + y * y + z * z)
    mn = geom_x.n_antennas * geom_y.n_antennas
    return math.sqrt(power / mn) * carrier.wavelength * np.exp(1j * carrier.k * z) / (4 * math.pi * r)


def field_paraxial_2d_product(spec_x, spec_y, geom_x, geom_y, carrier, x, y, z, power=1.0):
    """Same field through the decoupled product of the two 1-D sums."""
    px = field_discrete_paraxial(spec_x, geom_x, carrier, x, z)
    py = field_discrete_paraxial(spec_y, geom_y, carrier, y, z)
    return complex(_planar_prefactor(geom_x, geom_y, carrier, x, y, z, power) * px * py)
