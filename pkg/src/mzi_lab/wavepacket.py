"""Free Gaussian wave packet.

The packet amplitude is

    G(x) = (pi * dx**2 / 2) ** (-1/4) * exp(-(x - x0)**2 / dx**2)

so that ``|G|**2`` integrates to one. Spreading is ignored: a delay only
translates the packet.
"""
from dataclasses import dataclass, replace
import math

import numpy as np

from ._validation import as_real_array, check_finite, check_positive

#: Half-width of the default quadrature window, in units of the packet width.
QUAD_HALF_WIDTH = 12.0


@dataclass(frozen=True)
class GaussianPacket:
    """Gaussian packet of width ``width`` moving at ``velocity``, centred at ``center``."""

    width: float
    velocity: float = 1.0
    center: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "width", check_positive(self.width, "width"))
        object.__setattr__(self, "velocity", check_positive(self.velocity, "velocity"))
        object.__setattr__(self, "center", float(check_finite(self.center, "center")))

    @property
    def prefactor(self):
        return (math.pi * self.width**2 / 2.0) ** -0.25


def eval_gaussian(x, packet):
    """Evaluate the packet amplitude at ``x`` (scalar or array)."""
    arr = as_real_array(x)
    out = packet.prefactor * np.exp(-((arr - packet.center) ** 2) / packet.width**2)
    return float(out) if out.ndim == 0 else out


def shifted_copy(packet, delay):
    """Return the packet delayed by ``delay``, i.e. moved back by ``velocity * delay``."""
    delay = float(check_finite(delay, "delay"))
    return replace(packet, center=packet.center - packet.velocity * delay)


def quadrature_bounds(packet, *extra_centers, half_width=QUAD_HALF_WIDTH):
    """Integration window covering the packet and any extra centres."""
    centers = [packet.center, *extra_centers]
    pad = half_width * packet.width
    return min(centers) - pad, max(centers) + pad
