"""Carrier, array geometry and shared validation helpers."""
from dataclasses import dataclass
import math

import numpy as np

from .exceptions import DomainError, InvalidInputError

SPEED_OF_LIGHT = 3.0e8


def check_finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value}")
    return value


def check_positive(name, value):
    value = check_finite(name, value)
    if value <= 0:
        raise InvalidInputError(f"{name} must be positive, got {value}")
    return value


def check_depth(z):
    """Validate propagation depths (scalar or array); return a float array."""
    z = np.asarray(z, dtype=float)
    if not np.all(np.isfinite(z)):
        raise InvalidInputError("z must be finite")
    if np.any(z <= 0):
        raise DomainError("propagation depth z must be > 0")
    return z


def check_nonzero_x0(x0):
    x0 = check_finite("x0", x0)
    if x0 == 0:
        raise InvalidInputError("x0 must be nonzero for cubic phases; use a focusing beam")
    return x0


@dataclass(frozen=True)
class CarrierConfig:
    """Carrier frequency with its derived wavelength and wavenumber."""

    f_c: float
    c: float = SPEED_OF_LIGHT

    def __post_init__(self):
        check_positive("f_c", self.f_c)
        check_positive("c", self.c)

    @property
    def wavelength(self):
        return self.c / self.f_c

    @property
    def k(self):
        return 2 * math.pi * self.f_c / self.c

    # short alias used in formulas
    lam = wavelength


def carrier_from_frequency(f_c, c=SPEED_OF_LIGHT):
    return CarrierConfig(check_positive("f_c", f_c), check_positive("c", c))


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array centred on the origin along x."""

    n_antennas: int
    spacing: float

    def __post_init__(self):
        n = self.n_antennas
        if isinstance(n, bool) or int(n) != n or n < 1:
            raise InvalidInputError(f"n_antennas must be a positive integer, got {n!r}")
        object.__setattr__(self, "n_antennas", int(n))
        check_positive("spacing", self.spacing)

    @property
    def aperture(self):
        return self.n_antennas * self.spacing

    @classmethod
    def half_wavelength(cls, carrier, n_antennas):
        return cls(n_antennas, carrier.wavelength / 2)

    @classmethod
    def from_aperture(cls, aperture, spacing):
        """Largest array with N*d <= aperture (rounded to the nearest N)."""
        n = max(1, int(round(aperture / spacing)))
        return cls(n, spacing)


def antenna_positions(geom):
    """x_n = (n - (N+1)/2) d for n = 1..N."""
    n = np.arange(1, geom.n_antennas + 1, dtype=float)
    return (n - (geom.n_antennas + 1) / 2) * geom.spacing
