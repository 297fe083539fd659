"""Closed-form densities and moments at the two output ports.

The D1 amplitude is ``A1 G(x) + A2 G(x + v tau)``: the right-arm copy is
the free packet moved back by ``v tau``. Everything here is analytic;
the quadrature oracles live in the tests and in :mod:`mzi_lab.analysis`.
"""
from dataclasses import dataclass, field
import io
import json
import math

import numpy as np

from ._validation import as_complex, as_real_array, check_finite, check_positive
from .errors import DarkPortError, VanishingNormError
from .wavepacket import GaussianPacket, eval_gaussian, quadrature_bounds

MASS_FLOOR = 1e-15
_AMPLITUDE_SLACK = 1e-12


@dataclass(frozen=True)
class TwoPathConfig:
    """Amplitude pair for one port, the packet, and the right-arm delay."""

    A1: complex
    A2: complex
    packet: GaussianPacket
    delay: float = 1.0

    def __post_init__(self):
        a1 = as_complex(self.A1, "A1")
        a2 = as_complex(self.A2, "A2")
        delay = float(check_finite(self.delay, "delay"))
        if delay < 0:
            raise ValueError(f"delay must be >= 0, got {delay!r}")
        if abs(a1) ** 2 + abs(a2) ** 2 > 1.0 + _AMPLITUDE_SLACK:
            raise ValueError("|A1|^2 + |A2|^2 exceeds 1")
        object.__setattr__(self, "A1", a1)
        object.__setattr__(self, "A2", a2)
        object.__setattr__(self, "delay", delay)

    @classmethod
    def for_port(cls, paths, detector, packet, delay=1.0):
        a, b = paths.port(detector)
        return cls(a, b, packet, delay)

    @property
    def vtau(self):
        return self.packet.velocity * self.delay

    @property
    def overlap(self):
        """Overlap of the two unit-normalised copies, exp(-(v tau)^2 / (2 dx^2))."""
        return math.exp(-self.vtau**2 / (2.0 * self.packet.width**2))

    def bounds(self):
        """Quadrature window enclosing both copies."""
        return quadrature_bounds(self.packet, self.packet.center - self.vtau)


@dataclass(frozen=True)
class SuperpositionSpec:
    """Coherent sum of shifted packet copies, ``sum_k a_k G(x + s_k)``."""

    terms: tuple
    packet: GaussianPacket

    def __post_init__(self):
        terms = tuple(
            (as_complex(a, "amplitude"), float(check_finite(s, "shift"))) for a, s in self.terms
        )
        if not terms:
            raise ValueError("superposition needs at least one term")
        object.__setattr__(self, "terms", terms)

    @classmethod
    def from_config(cls, cfg):
        return cls(((cfg.A1, 0.0), (cfg.A2, cfg.vtau)), cfg.packet)


@dataclass
class DensityProfile:
    """Density sampled on a grid; ``normalization`` is its trapezoid integral."""

    positions: np.ndarray
    values: np.ndarray
    normalization: float = field(init=False)
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.positions = as_real_array(self.positions, "positions")
        self.values = as_real_array(self.values, "values")
        if self.positions.shape != self.values.shape or self.positions.ndim != 1:
            raise ValueError("positions and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.positions) <= 0):
            raise ValueError("positions must be strictly increasing")
        if np.any(self.values < 0):
            raise ValueError("density values must be non-negative")
        self.normalization = float(np.trapezoid(self.values, self.positions))

    @classmethod
    def sample(cls, density, positions, meta=None):
        positions = as_real_array(positions, "positions")
        return cls(positions, np.asarray(density(positions), dtype=float), meta=meta or {})

    def normalized(self):
        if self.normalization <= 0:
            raise VanishingNormError("profile has zero mass")
        return DensityProfile(self.positions, self.values / self.normalization, meta=dict(self.meta))

    def to_csv(self, fh=None):
        """Write ``x,value`` rows; ``meta`` goes into '#' header lines."""
        out = fh if fh is not None else io.StringIO()
        out.write(f"# config: {json.dumps(self.meta, sort_keys=True, default=str)}\n")
        out.write(f"# normalization: {self.normalization:.11e}\n")
        out.write("x,value\n")
        for x, v in zip(self.positions, self.values):
            out.write(f"{x:.11e},{v:.11e}\n")
        return out.getvalue() if fh is None else None


def amplitude_d1(x, cfg):
    """Complex port amplitude ``A1 G(x) + A2 G(x + v tau)``."""
    arr = as_real_array(x)
    g0 = eval_gaussian(arr, cfg.packet)
    g1 = eval_gaussian(arr + cfg.vtau, cfg.packet)
    return cfg.A1 * g0 + cfg.A2 * g1


def density_d1(x, cfg):
    """Port density from the expanded form with the explicit interference term."""
    arr = as_real_array(x)
    g0 = eval_gaussian(arr, cfg.packet)
    g1 = eval_gaussian(arr + cfg.vtau, cfg.packet)
    cross = (cfg.A2.conjugate() * cfg.A1).real
    out = abs(cfg.A1) ** 2 * g0**2 + abs(cfg.A2) ** 2 * g1**2 + 2.0 * cross * g0 * g1
    # the expansion can dip a few ulp below zero at exact cancellation
    out = np.maximum(out, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def detection_probability(cfg):
    """Total probability of reaching the port."""
    cross = (cfg.A2.conjugate() * cfg.A1).real
    p = abs(cfg.A1) ** 2 + abs(cfg.A2) ** 2 + 2.0 * cross * cfg.overlap
    if not -_AMPLITUDE_SLACK <= p <= 1.0 + _AMPLITUDE_SLACK:
        raise ValueError(f"detection probability {p!r} outside [0, 1]; invalid amplitude pair")
    return p


def mean_position(cfg):
    """Conditional mean of the port density, relative to the packet centre frame."""
    cross = (cfg.A2.conjugate() * cfg.A1).real
    e = cfg.overlap
    norm = abs(cfg.A1) ** 2 + abs(cfg.A2) ** 2 + 2.0 * cross * e
    if norm <= MASS_FLOOR:
        raise VanishingNormError("port is dark; conditional mean undefined")
    shift = -cfg.vtau * (abs(cfg.A2) ** 2 + cross * e) / norm
    return cfg.packet.center + shift


def asymptotic_peak(A1, A2, vtau):
    """Broad-packet peak position, ``-Re[v tau A2 / (A1 + A2)]``."""
    A1, A2 = as_complex(A1, "A1"), as_complex(A2, "A2")
    total = A1 + A2
    if total == 0:
        raise DarkPortError("A1 + A2 = 0: no broad-packet peak")
    return -(vtau * A2 / total).real


def asymptotic_density(x, A1, A2, vtau, width):
    """Single Gaussian of mass ``|A1 + A2|^2`` centred at the asymptotic peak."""
    width = check_positive(width, "width")
    xbar = asymptotic_peak(A1, A2, vtau)
    arr = as_real_array(x)
    mass = abs(complex(A1) + complex(A2)) ** 2
    out = mass * (math.pi * width**2 / 2.0) ** -0.5 * np.exp(-2.0 * (arr - xbar) ** 2 / width**2)
    return float(out) if out.ndim == 0 else out


def superposition_amplitude(x, spec):
    arr = as_real_array(x)
    total = np.zeros(arr.shape, dtype=complex)
    for a, s in spec.terms:
        total = total + a * eval_gaussian(arr + s, spec.packet)
    return total


def superposition_density(x, spec):
    """``|sum_k a_k G(x + s_k)|^2``."""
    out = np.abs(superposition_amplitude(x, spec)) ** 2
    return float(out) if out.ndim == 0 else out


def superposition_peak_estimate(spec):
    """Broad-packet peak of an N-copy sum, ``-Re[sum a_k s_k / sum a_k]``."""
    total = sum(a for a, _ in spec.terms)
    if total == 0:
        raise DarkPortError("amplitudes sum to zero")
    return spec.packet.center - (sum(a * s for a, s in spec.terms) / total).real


def _gaussian_ratio(x, shift, width):
    """G(x + shift) / G(x), evaluated without forming either factor."""
    return np.exp(-(2.0 * x * shift + shift**2) / width**2)


def tail_ratio_front(x, cfg):
    """P(x)/|G(x)|^2 for an advanced configuration.

    With amplitudes from :func:`~mzi_lab.amplitudes.ratio_for_advancement`
    this stays below one for every ``x > 0``.
    """
    xbar = asymptotic_peak(cfg.A1, cfg.A2, cfg.vtau) - cfg.packet.center
    if xbar <= 0:
        raise ValueError(f"configuration is not advanced (xbar = {xbar!r})")
    arr = as_real_array(x) - cfg.packet.center
    k = xbar / (xbar + cfg.vtau)
    out = abs(cfg.A1) ** 2 * np.abs(1.0 - k * _gaussian_ratio(arr, cfg.vtau, cfg.packet.width)) ** 2
    return float(out) if out.ndim == 0 else out


def tail_ratio_rear(x, cfg):
    """P(x)/|G(x + v tau)|^2 for a configuration delayed by more than v tau."""
    xbar = asymptotic_peak(cfg.A1, cfg.A2, cfg.vtau) - cfg.packet.center
    if not xbar < -cfg.vtau:
        raise ValueError(f"configuration is not delayed beyond v*tau (xbar = {xbar!r})")
    arr = as_real_array(x) - cfg.packet.center
    k = (abs(xbar) - cfg.vtau) / abs(xbar)
    # G(x) / G(x + vtau) is the inverse shift seen from x + vtau
    r = _gaussian_ratio(arr + cfg.vtau, -cfg.vtau, cfg.packet.width)
    out = abs(cfg.A2) ** 2 * np.abs(1.0 - k * r) ** 2
    return float(out) if out.ndim == 0 else out


def density_d2(x, paths, packet, delay=1.0):
    return density_d1(x, TwoPathConfig.for_port(paths, 2, packet, delay))


def detection_probability_d2(paths, packet, delay=1.0):
    return detection_probability(TwoPathConfig.for_port(paths, 2, packet, delay))


def mean_d2(paths, packet, delay=1.0):
    return mean_position(TwoPathConfig.for_port(paths, 2, packet, delay))
