"""Obstruction, robustness, mobility and multi-user studies."""
from dataclasses import dataclass, field
import math

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import minimize_scalar

from .airy import airy_constants
from .beams import CubicPlusFocus, Focusing, Steering, airy_or_focusing, unwrapped_phases
from .core import antenna_positions, check_finite, check_positive
from .exceptions import DegenerateDesignError, DomainError, InvalidInputError
from .trajectory import trajectory_cubic_focus

FAMILIES = ("airy", "focusing", "steering")


def _log(x, base):
    if base == 2:
        return np.log2(x)
    if base == 10:
        return np.log10(x)
    raise InvalidInputError("log base must be 2 or 10")


def beam_towards(family, target, x0=1.0):
    """Beam of the given family aimed at target = (x, z)."""
    x_t, z_t = target
    if z_t <= 0:
        raise DomainError("beam target must have z > 0")
    if family == "airy":
        return airy_or_focusing(x0, x_t, z_t)
    if family == "focusing":
        return Focusing(x_t, z_t)
    if family == "steering":
        return Steering(math.atan2(x_t, z_t))
    raise InvalidInputError(f"unknown beam family {family!r}")


def array_gain(spec, geom, carrier, user):
    """Raw paraxial sum at the user position (complex)."""
    x_u, z_u = user
    if z_u <= 0:
        raise DomainError("user must have z > 0")
    xn = antenna_positions(geom)
    w = unwrapped_phases(spec, geom, carrier)
    return complex(np.exp(1j * (w + carrier.k * (x_u - xn) ** 2 / (2 * z_u))).sum())


def link_power(power, geom, carrier, user, gain):
    """P lambda^2 |gain|^2 / (16 pi^2 r^2 N)."""
    r2 = user[0] ** 2 + user[1] ** 2
    return power * carrier.wavelength ** 2 * abs(gain) ** 2 / (16 * math.pi ** 2 * r2 * geom.n_antennas)


def noise_for_snr(snr_db, power, carrier, r_ref):
    """Noise variance giving per-antenna received SNR snr_db at distance r_ref."""
    rho = 10 ** (snr_db / 10)
    return power * carrier.wavelength ** 2 / (16 * math.pi ** 2 * r_ref ** 2 * rho)


@dataclass(frozen=True)
class SEResult:
    se: float
    received_power: float
    per_user: tuple = field(default=())

    def __post_init__(self):
        if not self.se >= 0:
            raise InvalidInputError("spectral efficiency must be >= 0")


# obstruction

@dataclass(frozen=True)
class ObstructionScenario:
    obstacle_tip: tuple
    user: tuple
    c0: complex = math.sqrt(0.5944)
    side: str = "above"
    eta: float = None  # forces top-index blocking when set

    def __post_init__(self):
        x_o, z_o = self.obstacle_tip
        x_u, z_u = self.user
        for name, v in (("x_O", x_o), ("z_O", z_o), ("x_U", x_u), ("z_U", z_u)):
            check_finite(name, v)
        if not 0 < z_o < z_u:
            raise DomainError("need 0 < z_O < z_U")
        if not abs(self.c0) < 1:
            raise InvalidInputError("|C0| must be < 1")
        if self.side not in ("above", "below"):
            raise InvalidInputError("side must be 'above' or 'below'")
        if self.eta is not None and not 0 <= self.eta <= 1:
            raise InvalidInputError("eta must lie in [0, 1]")


def blocked_antenna_set(geom, scenario):
    """Indices of blocked antennas and the blocked fraction eta."""
    n = geom.n_antennas
    if scenario.eta is not None:
        nb = int(round(scenario.eta * n))
        idx = np.arange(n - nb, n)
        return idx, nb / n
    xn = antenna_positions(geom)
    x_o, z_o = scenario.obstacle_tip
    x_u, z_u = scenario.user
    at_tip = (x_u - xn) * z_o / z_u + xn
    mask = at_tip > x_o if scenario.side == "above" else at_tip < x_o
    idx = np.flatnonzero(mask)
    return idx, idx.size / n


@dataclass(frozen=True)
class ObstructionPower:
    total: float
    direct: float
    diffractive: float
    eta: float
    blocked: np.ndarray


def received_power_obstructed(spec, geom, carrier, scenario, power=None):
    """Direct rays from unblocked antennas plus the C0-weighted field diffracted at the tip."""
    p_tx = getattr(spec, "power", 1.0) if power is None else power
    idx, eta = blocked_antenna_set(geom, scenario)
    mask = np.zeros(geom.n_antennas, dtype=bool)
    mask[idx] = True
    xn = antenna_positions(geom)
    w = unwrapped_phases(spec, geom, carrier)
    k = carrier.k
    x_o, z_o = scenario.obstacle_tip
    x_u, z_u = scenario.user
    r_u = math.hypot(x_u, z_u)
    r_o = math.hypot(x_o, z_o)
    direct = np.exp(1j * (w[~mask] + k * (x_u - xn[~mask]) ** 2 / (2 * z_u))).sum() / r_u
    diffr = scenario.c0 * np.exp(1j * (w[mask] + k * (x_o - xn[mask]) ** 2 / (2 * z_o))).sum() / r_o
    scale = p_tx * carrier.wavelength ** 2 / (16 * math.pi ** 2 * geom.n_antennas)
    return ObstructionPower(scale * abs(direct + diffr) ** 2, scale * abs(direct) ** 2,
                            scale * abs(diffr) ** 2, eta, idx)


def focus_for_user_on_trajectory(x0, z_focus, user, carrier):
    """x_F such that the cubic+focus trajectory with focus depth z_focus passes the user."""
    x_u, z_u = user
    k = carrier.k
    mu0 = airy_constants().mu0
    # trajectory is affine in x_F with slope z/z_F
    base = (-k / (4 * x0 ** 3 * z_u) + (-k / (4 * z_focus ** 2 * x0 ** 3) - mu0 * x0 / k) * z_u
            + k / (2 * z_focus * x0 ** 3))
    return (x_u - base) * z_focus / z_u


# robustness and mobility

@dataclass(frozen=True)
class RobustnessScenario:
    true_position: tuple
    position_error: tuple = (0.0, 0.0)
    noise_variance: float = 1e-12
    family: str = "airy"
    x0: float = 1.0
    power: float = 1.0

    def __post_init__(self):
        if self.true_position[1] <= 0:
            raise DomainError("true user depth must be > 0")
        if self.true_position[1] + self.position_error[1] <= 0:
            raise DomainError("estimated user depth must be > 0")
        check_positive("noise_variance", self.noise_variance)
        check_positive("power", self.power)
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown beam family {self.family!r}")


def se_positioning_error(geom, carrier, scenario, log_base=2):
    """Beam aimed at the estimated position, channel at the true one."""
    x_u, z_u = scenario.true_position
    est = (x_u + scenario.position_error[0], z_u + scenario.position_error[1])
    spec = beam_towards(scenario.family, est, scenario.x0)
    p = link_power(scenario.power, geom, carrier, (x_u, z_u), array_gain(spec, geom, carrier, (x_u, z_u)))
    return SEResult(float(_log(1 + p / scenario.noise_variance, log_base)), p)


def min_x0_for_offset(delta_x, z_u0, carrier):
    """|x0| above which the Airy main lobe still covers an offset delta_x."""
    z_u0 = check_positive("z_U0", z_u0)
    c = airy_constants()
    return carrier.k * abs(delta_x) / (z_u0 * abs(c.mu1 - c.mu0))


@dataclass(frozen=True)
class MobilityScenario:
    initial_position: tuple
    velocity: tuple
    interval: float
    noise_variance: float = 1e-12
    family: str = "airy"
    x0: float = 1.0
    power: float = 1.0
    n_samples: int = 129

    def __post_init__(self):
        if self.interval < 0:
            raise InvalidInputError("interval must be >= 0")
        if self.initial_position[1] <= 0 or self.initial_position[1] + self.velocity[1] * self.interval <= 0:
            raise DomainError("user path leaves z > 0")
        if self.n_samples < 64:
            raise InvalidInputError("need at least 64 time samples")
        check_positive("noise_variance", self.noise_variance)
        if self.family not in FAMILIES:
            raise InvalidInputError(f"unknown beam family {self.family!r}")


def se_mobility(geom, carrier, scenario, log_base=2):
    """Beam frozen at t = 0; received power averaged over [0, T] (Simpson)."""
    x0_, z0_ = scenario.initial_position
    vx, vz = scenario.velocity
    spec = beam_towards(scenario.family, (x0_, z0_), scenario.x0)

    def power_at(t):
        u = (x0_ + vx * t, z0_ + vz * t)
        return link_power(scenario.power, geom, carrier, u, array_gain(spec, geom, carrier, u))

    if scenario.interval == 0:
        p = power_at(0.0)
    else:
        ts = np.linspace(0.0, scenario.interval, scenario.n_samples)
        p = float(simpson([power_at(t) for t in ts], x=ts) / scenario.interval)
    return SEResult(float(_log(1 + p / scenario.noise_variance, log_base)), p)


@dataclass(frozen=True)
class VelocityDesign:
    x0: float
    mode: str
    practical: bool


def _slope_at(x0, x_F, z_F, k, z):
    mu0 = airy_constants().mu0
    return k / (4 * x0 ** 3) * (1 / z ** 2 - 1 / z_F ** 2) + x_F / z_F - mu0 * x0 / k


def design_x0_for_velocity(velocity, focus, carrier, mode="closed-form-at-focus",
                           z_window=None, practical_limit=5.0, x0_max=50.0):
    """x0 whose trajectory slope matches v_x/v_z (at the focus, or on average over z_window)."""
    vx, vz = velocity
    if vz == 0:
        raise InvalidInputError("v_z = 0: motion parallel to the array is unsupported")
    x_F, z_F = focus
    check_positive("z_F", z_F)
    k = carrier.k
    target = vx / vz
    mu0 = airy_constants().mu0
    if mode == "closed-form-at-focus":
        x0 = k * (x_F / z_F - target) / mu0
        if abs(x0) < 1e-12:
            raise DegenerateDesignError("radial motion gives x0 = 0; use a focusing beam")
    elif mode == "scan":
        if z_window is None:
            raise InvalidInputError("scan mode needs a z_window")
        zs = np.linspace(z_window[0], z_window[1], 201)

        def cost(x0):
            return float(np.mean(np.abs(_slope_at(x0, x_F, z_F, k, zs) - target)))

        mags = np.geomspace(1e-2, x0_max, 800)
        grid = np.concatenate([-mags[::-1], mags])
        costs = np.array([cost(v) for v in grid])
        i = int(np.argmin(costs))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, grid.size - 1)]
        if lo * hi <= 0:  # never straddle x0 = 0
            lo, hi = (grid[i], hi) if grid[i] > 0 else (lo, grid[i])
        res = minimize_scalar(cost, bounds=(min(lo, hi), max(lo, hi)), method="bounded",
                              options={"xatol": 1e-10 * max(1.0, abs(grid[i]))})
        x0 = float(res.x) if res.fun <= costs[i] else float(grid[i])
    else:
        raise InvalidInputError(f"unknown design mode {mode!r}")
    return VelocityDesign(float(x0), mode, abs(x0) <= practical_limit)


# multi-user

def multiuser_power_allocation(power, positions):
    """P_k proportional to r_k^2; exact sum to P (last user absorbs rounding)."""
    power = check_positive("power", power)
    pos = np.asarray(positions, dtype=float).reshape(-1, 2) if len(positions) else np.empty((0, 2))
    if pos.shape[0] == 0:
        raise InvalidInputError("at least one user is required")
    r2 = (pos ** 2).sum(axis=1)
    p = power * r2 / r2.sum()
    p[-1] = power - p[:-1].sum()
    return p


@dataclass(frozen=True)
class MultiUserScenario:
    users: tuple
    power: float = 1.0
    noise_variance: float = 1e-12
    x0: float = 1.0

    def __post_init__(self):
        if len(self.users) < 1:
            raise InvalidInputError("K must be >= 1")
        if any(u[1] <= 0 for u in self.users):
            raise DomainError("all users must have z > 0")
        check_positive("power", self.power)
        check_positive("noise_variance", self.noise_variance)


def users_on_trajectory(x0, focus, carrier, z_values):
    """User positions on the cubic+focus trajectory through focus."""
    x_F, z_F = focus
    zs = np.asarray(z_values, dtype=float)
    xs = trajectory_cubic_focus(x0, x_F, z_F, carrier, zs)
    return tuple(zip(np.atleast_1d(xs).tolist(), zs.tolist()))


def se_multiuser(geom, carrier, scenario, family, log_base=2):
    """Average SE over frequency-multiplexed users; the beam is aimed at user 1."""
    spec = beam_towards(family, scenario.users[0], scenario.x0)
    alloc = multiuser_power_allocation(scenario.power, scenario.users)
    per_user, powers = [], []
    for p_k, u in zip(alloc, scenario.users):
        pr = link_power(p_k, geom, carrier, u, array_gain(spec, geom, carrier, u))
        powers.append(pr)
        per_user.append(float(_log(1 + pr / scenario.noise_variance, log_base)))
    return SEResult(float(np.mean(per_user)), float(np.sum(powers)), tuple(per_user))
