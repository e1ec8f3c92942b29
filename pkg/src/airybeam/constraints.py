"""Aperture and spacing feasibility plus the analytic error bounds."""
from dataclasses import dataclass
import math

import numpy as np

from .core import check_depth, check_finite, check_nonzero_x0, check_positive
from .exceptions import InfeasibleApertureError, InvalidInputError, PreconditionError
from .trajectory import trajectory_cubic_focus


def neighborhood_width(x0):
    """Width 2|3/x0^3|^(1/3) of the stationary-phase neighbourhood."""
    x0 = check_nonzero_x0(x0)
    return 2 * abs(3 / x0 ** 3) ** (1 / 3)


def aperture_phase(x0, x_F, z_F, carrier, observation, xp):
    """Source-plane phase phi(x') (constant terms dropped) seen from (x, z)."""
    x, z = observation
    k = carrier.k
    xp = np.asarray(xp, dtype=float)
    return (x0 ** 3 * xp ** 3 / 3 + k * (z_F - z) * xp ** 2 / (2 * z * z_F)
            - k * (x * z_F - x_F * z) * xp / (z * z_F))


def _phi_prime(x0, x_F, z_F, k, x, z, xp):
    return x0 ** 3 * xp ** 2 + k * (z_F - z) * xp / (z * z_F) - k * (x * z_F - x_F * z) / (z * z_F)


@dataclass(frozen=True)
class PhaseDerivatives:
    phi_prime: float
    phi_double_prime: float
    caustic_source_point: float


def caustic_source_point(x0, z_F, carrier, z):
    k = carrier.k
    return -k / (2 * x0 ** 3 * z) + k / (2 * z_F * x0 ** 3)


def phase_derivatives(x0, x_F, z_F, carrier, observation, source):
    x0 = check_nonzero_x0(x0)
    z_F = check_positive("z_F", z_F)
    x, z = observation
    z = float(check_depth(z))
    xp = check_finite("source", source)
    k = carrier.k
    return PhaseDerivatives(
        float(_phi_prime(x0, x_F, z_F, k, x, z, xp)),
        2 * x0 ** 3 * xp + k * (z_F - z) / (z * z_F),
        caustic_source_point(x0, z_F, carrier, z),
    )


def min_aperture(x0, z_F, z_min_target, z_max_target, carrier):
    x0 = check_nonzero_x0(x0)
    if not 0 < z_min_target <= z_F <= z_max_target:
        raise InvalidInputError("need 0 < z_min_target <= z_F <= z_max_target")
    inv_far = 0.0 if math.isinf(z_max_target) else 1 / z_max_target
    span = max(1 / z_min_target - 1 / z_F, 1 / z_F - inv_far)
    return span * carrier.k / abs(x0 ** 3) + neighborhood_width(x0)


def distortion_free_range(L, x0, z_F, carrier):
    """(z_min, z_max) with z_max = inf when unbounded; z_F=None means no focusing term."""
    L = check_positive("L", L)
    x0 = check_nonzero_x0(x0)
    excess = L - neighborhood_width(x0)
    if excess <= 0:
        raise InfeasibleApertureError(
            f"aperture {L:.6g} m does not exceed the neighbourhood width {neighborhood_width(x0):.6g} m")
    k = carrier.k
    if z_F is None:
        return k / (excess * abs(x0 ** 3)), math.inf
    z_F = check_positive("z_F", z_F)
    a = excess * z_F * abs(x0 ** 3)
    z_min = k * z_F / (a + k)
    z_max = k * z_F / (k - a) if k > a else math.inf
    return z_min, z_max


def nyquist_branches(L, x0, x_F, z_F, carrier):
    """The two endpoint spacing limits 4 pi z_F / |z_F x0^3 L^2 +- 2 k L + 4 k x_F|."""
    k = carrier.k
    out = []
    for sign in (1, -1):
        den = abs(z_F * x0 ** 3 * L ** 2 + sign * 2 * k * L + 4 * k * x_F)
        out.append(math.inf if den == 0 else 4 * math.pi * z_F / den)
    return tuple(out)


def max_spacing(L, x0, x_F, z_F, carrier):
    """Largest spacing keeping the beamforming phase step <= pi, capped at lambda/2.

    Uses the true maximum of |omega'| over the aperture (endpoints and the
    interior vertex when it falls inside).
    """
    L = check_positive("L", L)
    x0 = check_nonzero_x0(x0)
    z_F = check_positive("z_F", z_F)
    k = carrier.k
    limits = list(nyquist_branches(L, x0, x_F, z_F, carrier))
    vertex = k / (2 * z_F * x0 ** 3)
    if abs(vertex) < L / 2:
        w = abs(x0 ** 3 * vertex ** 2 - k * vertex / z_F + k * x_F / z_F)
        if w > 0:
            limits.append(math.pi / w)
    return min(min(limits), carrier.wavelength / 2)


def sampling_trajectory_offset(d, x0, carrier, z):
    if d < 0:
        raise InvalidInputError("spacing must be >= 0")
    z = check_depth(z)
    out = d ** 2 * x0 ** 3 * z / (3 * carrier.k)
    return float(out) if np.ndim(out) == 0 else out


def truncation_error_bound(L, x0, x_F, z_F, carrier, observation):
    """2/|phi'(L/2)| + 2/|phi'(-L/2)|; inf when an endpoint derivative vanishes."""
    L = check_positive("L", L)
    x0 = check_nonzero_x0(x0)
    x, z = observation
    z = float(check_depth(z))
    k = carrier.k
    # phi' is a parabola in x'; both stationary points must lie inside the aperture
    a = x0 ** 3
    b = k * (z_F - z) / (z * z_F)
    c = -k * (x * z_F - x_F * z) / (z * z_F)
    disc = b * b - 4 * a * c
    if disc < 0:
        raise PreconditionError("no stationary point: observation is off the main lobe")
    roots = ((-b - math.sqrt(disc)) / (2 * a), (-b + math.sqrt(disc)) / (2 * a))
    if max(abs(r) for r in roots) > L / 2 * (1 + 1e-12):
        raise PreconditionError("stationary point outside the aperture; bound does not apply")
    scale = abs(a) * L * L + abs(b) * L + abs(c)
    total = 0.0
    for edge in (L / 2, -L / 2):
        dphi = abs(_phi_prime(x0, x_F, z_F, k, x, z, edge))
        if dphi <= 1e-12 * scale:
            return math.inf
        total += 2 / dphi
    return total


def sampling_error_bound(L, d, x0, x_F, z_F, carrier, observation=None):
    """max|phi'(+-L/2)| * d * L / 2.

    With an observation point phi' is the full integrand phase derivative;
    without one, the beamforming phase derivative omega' is used.
    """
    L = check_positive("L", L)
    d = check_positive("d", d)
    x0 = check_nonzero_x0(x0)
    k = carrier.k
    edges = np.array([L / 2, -L / 2])
    if observation is None:
        rate = x0 ** 3 * edges ** 2 + k * (x_F - edges) / z_F
    else:
        x, z = observation
        z = float(check_depth(z))
        rate = _phi_prime(x0, x_F, z_F, k, x, z, edges)
    return float(np.max(np.abs(rate)) * d * L / 2)


@dataclass(frozen=True)
class ConstraintReport:
    L_min: float
    z_min: float
    z_max: float
    d_max: float
    sampling_offset: float
    truncation_bound: float
    sampling_bound: float

    @property
    def z_max_unbounded(self):
        return math.isinf(self.z_max)


def constraint_report(L, d, x0, x_F, z_F, carrier, target_window=None, observation_z=None):
    """Collect all design quantities for one aperture.

    Bounds are evaluated on the trajectory at observation_z (default z_F).
    L_min refers to target_window when given, else to the bare neighbourhood width.
    """
    z_min, z_max = distortion_free_range(L, x0, z_F, carrier)
    if target_window is None:
        l_min = neighborhood_width(x0)
    else:
        l_min = min_aperture(x0, z_F, target_window[0], target_window[1], carrier)
    zo = z_F if observation_z is None else observation_z
    obs = (trajectory_cubic_focus(x0, x_F, z_F, carrier, zo), zo)
    try:
        tb = truncation_error_bound(L, x0, x_F, z_F, carrier, obs)
    except PreconditionError:
        tb = math.nan
    return ConstraintReport(
        L_min=l_min,
        z_min=z_min,
        z_max=z_max,
        d_max=max_spacing(L, x0, x_F, z_F, carrier),
        sampling_offset=d ** 2 * x0 ** 3 / (3 * carrier.k),
        truncation_bound=tb,
        sampling_bound=sampling_error_bound(L, d, x0, x_F, z_F, carrier, obs),
    )
