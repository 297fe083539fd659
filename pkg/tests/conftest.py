import math

import mpmath as mp
import pytest

from mzi_lab import DesignTarget, GaussianPacket, TwoPathConfig, design_symmetric

FIG2_A1 = 3 / math.sqrt(26)
FIG2_A2 = -2 / math.sqrt(26)


def mp_gaussian(x, width, center=0):
    """Independent high-precision packet amplitude for oracles."""
    x, width = mp.mpf(x), mp.mpf(width)
    return (mp.pi * width**2 / 2) ** mp.mpf(-0.25) * mp.exp(-((x - center) ** 2) / width**2)


@pytest.fixture
def fig2_paths():
    return design_symmetric(DesignTarget(-1.0, 2.0))


def fig2_config(width, delay=1.0):
    return TwoPathConfig(FIG2_A1, FIG2_A2, GaussianPacket(width), delay)


@pytest.fixture
def fig2():
    return fig2_config


def quad_moments(cfg):
    """Mass and mean of the port density by scipy adaptive quadrature.

    Uses its own Gaussian and never touches the package's density code.
    """
    from scipy import integrate

    w, d = cfg.packet.width, cfg.vtau
    c = (math.pi * w * w / 2) ** -0.25
    a1, a2 = complex(cfg.A1), complex(cfg.A2)

    def f(t):
        amp = a1 * c * math.exp(-t * t / (w * w)) + a2 * c * math.exp(-(t + d) ** 2 / (w * w))
        return amp.real**2 + amp.imag**2

    lo, hi = -d - 12 * w, 12 * w
    kw = dict(points=[-d, -d / 2, 0.0], epsabs=1e-15, epsrel=1e-13, limit=500)
    mass, _ = integrate.quad(f, lo, hi, **kw)
    kw.update(epsabs=1e-13 * mass * (hi - lo), epsrel=1e-12)
    mom, _ = integrate.quad(lambda t: t * f(t), lo, hi, **kw)
    return mass, mom / mass


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
