"""Numerical experiments built on the closed forms.

Peak search, centre-of-mass quadrature, width scans of the D1 density,
profile comparisons against the broad-packet asymptote and the free
packet, the naive inside-duration, and the Larmor-clock angle.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
import math

import numpy as np
from scipy import integrate

from ._validation import as_complex, check_finite, check_positive
from .density import (
    MASS_FLOOR,
    TwoPathConfig,
    asymptotic_density,
    asymptotic_peak,
    density_d1,
    detection_probability,
)
from .errors import DarkBracketError, DarkPortError, VanishingNormError
from .wavepacket import GaussianPacket, eval_gaussian

INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
DARK_FLOOR = 1e-30
MIN_COARSE_POINTS = 2048
#: Interior minima must sit below this fraction of the lower neighbouring maximum.
MINIMUM_DEPTH = 0.999
WINDOW_PAD = 6.0


def golden_max(f, lo, hi, tol):
    """Maximise a unimodal scalar ``f`` on ``[lo, hi]`` by golden-section search."""
    a, b = lo, hi
    c = b - INVPHI * (b - a)
    d = a + INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + INVPHI * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def _refine(f, grid, i, tol, sign=1.0):
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, len(grid) - 1)]
    return golden_max(lambda t: sign * float(f(t)), lo, hi, tol)


def find_peak(density, bracket, n_grid=MIN_COARSE_POINTS, rtol=1e-8):
    """Position of the global maximum of ``density`` inside ``bracket``.

    ``density`` must accept numpy arrays. A coarse grid picks the best
    sample, then golden-section search refines between its neighbours.
    """
    lo, hi = (float(check_finite(b, "bracket")) for b in bracket)
    if not hi > lo:
        raise ValueError("bracket must satisfy lo < hi")
    grid = np.linspace(lo, hi, max(int(n_grid), MIN_COARSE_POINTS))
    values = np.asarray(density(grid), dtype=float)
    if not np.any(values >= DARK_FLOOR):
        raise DarkBracketError(f"density below {DARK_FLOOR:g} everywhere in [{lo}, {hi}]")
    return _refine(density, grid, int(np.argmax(values)), rtol * (hi - lo))


def center_of_mass(density, bounds, points=None, rtol=1e-12):
    """``int x P / int P`` over ``bounds`` by adaptive quadrature.

    ``points`` lists locations (packet centres) the integrator should not
    step over; narrow packets in a wide window need them.
    """
    lo, hi = bounds
    kw = dict(epsabs=0.0, epsrel=rtol, limit=500)
    if points is not None:
        kw["points"] = [p for p in points if lo < p < hi] or None
    mass, _ = integrate.quad(lambda t: float(density(t)), lo, hi, **kw)
    if mass <= MASS_FLOOR:
        raise VanishingNormError("density carries no mass over the bounds")
    # shifting the origin to the window midpoint keeps the moment well conditioned
    mid = 0.5 * (lo + hi)
    kw["epsabs"] = 1e-14 * mass * (hi - lo)
    moment, _ = integrate.quad(lambda t: (t - mid) * float(density(t)), lo, hi, **kw)
    return mid + moment / mass


def two_path_mass(cfg):
    """Quadrature of the port density; oracle for the closed-form probability."""
    lo, hi = cfg.bounds()
    centers = [cfg.packet.center, cfg.packet.center - cfg.vtau]
    mass, _ = integrate.quad(
        lambda t: density_d1(t, cfg), lo, hi, points=centers, epsabs=0.0, epsrel=1e-12, limit=500
    )
    return mass


def two_path_com(cfg):
    centers = [cfg.packet.center, cfg.packet.center - cfg.vtau]
    return center_of_mass(lambda t: density_d1(t, cfg), cfg.bounds(), points=centers)


def scan_window(cfg):
    """Default window, from behind the delayed copy to past the asymptotic peak."""
    c = cfg.packet.center
    try:
        xbar = asymptotic_peak(cfg.A1, cfg.A2, cfg.vtau) + c
    except DarkPortError:
        xbar = c
    pad = WINDOW_PAD * cfg.packet.width
    return min(c - cfg.vtau, xbar) - pad, max(c, xbar) + pad


def local_extrema(values):
    """Indices of strict interior maxima and of sufficiently deep minima."""
    v = np.asarray(values)
    inner = slice(1, -1)
    maxima = np.flatnonzero((v[inner] > v[:-2]) & (v[inner] > v[2:])) + 1
    candidates = np.flatnonzero((v[inner] < v[:-2]) & (v[inner] < v[2:])) + 1
    minima = []
    for i in candidates:
        left = maxima[maxima < i]
        right = maxima[maxima > i]
        if not len(left) or not len(right):
            continue
        if v[i] < MINIMUM_DEPTH * min(v[left[-1]], v[right[0]]):
            minima.append(i)
    return maxima, np.array(minima, dtype=int)


@dataclass
class WidthScanRecord:
    delta_x: float
    peak_x: float
    com_x: float
    p_detect: float
    minima_x: list = field(default_factory=list)
    maxima_x: list = field(default_factory=list)

    @property
    def n_minima(self):
        return len(self.minima_x)


def scan_record(A1, A2, delta_x, vtau=1.0, n_grid=4096):
    """Peak, centre of mass, extrema and detection probability at one width."""
    cfg = TwoPathConfig(A1, A2, GaussianPacket(delta_x, velocity=vtau), delay=1.0)
    window = scan_window(cfg)
    grid = np.linspace(*window, n_grid)
    f = lambda t: density_d1(t, cfg)  # noqa: E731
    values = f(grid)
    if not np.any(values >= DARK_FLOOR):
        raise DarkBracketError(f"port is dark at delta_x={delta_x!r}")
    tol = 1e-8 * (window[1] - window[0])
    maxima, minima = local_extrema(values)
    p = detection_probability(cfg)
    com = two_path_com(cfg) if p > MASS_FLOOR else float("nan")
    return WidthScanRecord(
        delta_x=float(delta_x),
        peak_x=_refine(f, grid, int(np.argmax(values)), tol),
        com_x=com,
        p_detect=p,
        minima_x=[_refine(f, grid, int(i), tol, sign=-1.0) for i in minima],
        maxima_x=[_refine(f, grid, int(i), tol) for i in maxima],
    )


def width_scan(A1, A2, vtau, ladder, n_grid=4096, max_workers=None):
    """One :class:`WidthScanRecord` per width in ``ladder``.

    ``ladder`` must be strictly increasing. Rungs are independent and may
    run on ``max_workers`` threads; records come back sorted by width.
    """
    ladder = [check_positive(w, "delta_x") for w in ladder]
    if not ladder:
        raise ValueError("empty width ladder")
    if any(b <= a for a, b in zip(ladder, ladder[1:])):
        raise ValueError("width ladder must be strictly increasing")
    vtau = check_positive(vtau, "vtau")
    run = lambda w: scan_record(A1, A2, w, vtau, n_grid)  # noqa: E731
    if max_workers and max_workers > 1 and len(ladder) > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            records = list(pool.map(run, ladder))
    else:
        records = [run(w) for w in ladder]
    return sorted(records, key=lambda r: r.delta_x)


def contour_grid(A1, A2, vtau, ladder, n_x=512, window=None):
    """Rows ``(x, delta_x, P)`` for a contour plot of the port density."""
    ladder = [check_positive(w, "delta_x") for w in ladder]
    if window is None:
        widest = TwoPathConfig(A1, A2, GaussianPacket(ladder[-1], velocity=vtau))
        window = scan_window(widest)
    xs = np.linspace(*window, n_x)
    rows = []
    for w in ladder:
        cfg = TwoPathConfig(A1, A2, GaussianPacket(w, velocity=vtau))
        rows.extend(zip(xs, np.full_like(xs, w), density_d1(xs, cfg)))
    return rows


@dataclass
class ProfileComparison:
    """Exact port density, broad-packet asymptote and free packet on one grid.

    Raw columns carry their physical mass; the ``*_normalized`` columns
    are rescaled to unit mass.
    """

    positions: np.ndarray
    exact: np.ndarray
    asymptotic: np.ndarray
    free: np.ndarray
    exact_normalized: np.ndarray
    asymptotic_normalized: np.ndarray
    exact_peak: float
    asymptotic_peak: float
    p_detect: float
    sup_distance: float
    relative_sup_distance: float
    fits_under_front_tail: bool | None

    @property
    def peak_offset(self):
        return self.asymptotic_peak - self.exact_peak


def sup_distance_to_asymptote(cfg, n_grid=4096):
    """Max |exact - asymptotic| between the unit-mass densities, and its ratio to the exact peak."""
    window = scan_window(cfg)
    xs = np.linspace(*window, n_grid)
    exact = density_d1(xs, cfg) / detection_probability(cfg)
    w = cfg.packet.width
    asym = asymptotic_density(xs - cfg.packet.center, cfg.A1, cfg.A2, cfg.vtau, w)
    asym = asym / abs(cfg.A1 + cfg.A2) ** 2
    sup = float(np.max(np.abs(exact - asym)))
    return sup, sup / float(np.max(exact))


def compare_profiles(cfg, n_grid=2048, window=None):
    """Data behind the exact-versus-asymptote and exact-versus-free comparisons."""
    total = cfg.A1 + cfg.A2
    if total == 0:
        raise DarkPortError("A1 + A2 = 0: no asymptotic profile to compare")
    if window is None:
        window = scan_window(cfg)
    xs = np.linspace(*window, n_grid)
    c = cfg.packet.center
    w = cfg.packet.width
    exact = density_d1(xs, cfg)
    asym = asymptotic_density(xs - c, cfg.A1, cfg.A2, cfg.vtau, w)
    free = eval_gaussian(xs, cfg.packet) ** 2
    p = detection_probability(cfg)
    if p <= MASS_FLOOR:
        raise VanishingNormError("port is dark")
    exact_n = exact / p
    asym_n = asym / abs(total) ** 2
    xbar = asymptotic_peak(cfg.A1, cfg.A2, cfg.vtau) + c
    sup = float(np.max(np.abs(exact_n - asym_n)))
    fits = None
    if xbar > c:
        ahead = xs > c
        fits = bool(np.all(exact[ahead] <= free[ahead]))
    return ProfileComparison(
        positions=xs,
        exact=exact,
        asymptotic=asym,
        free=free,
        exact_normalized=exact_n,
        asymptotic_normalized=asym_n,
        exact_peak=find_peak(lambda t: density_d1(t, cfg), window),
        asymptotic_peak=xbar,
        p_detect=p,
        sup_distance=sup,
        relative_sup_distance=sup / float(np.max(exact_n)),
        fits_under_front_tail=fits,
    )


NORMAL = "normal"
ZERO_CROSSING = "zero-crossing"
NEGATIVE = "negative"
ABNORMAL_DELAY = "abnormal-delay"


@dataclass(frozen=True)
class TimeInference:
    L: float
    v: float
    xbar: float
    tau: float
    tau_inside: float
    classification: str


def infer_tau_inside(L, v, xbar, tau=0.0, eps_t=None):
    """Naive time between the beamsplitters, ``L/v - xbar/v``, with a label.

    The label is ``zero-crossing`` within ``eps_t`` of zero (default
    ``1e-12 L/v``), ``negative`` below that, ``abnormal-delay`` above
    ``L/v + tau``, and ``normal`` otherwise.
    """
    L = check_positive(L, "L")
    v = check_positive(v, "v")
    xbar = float(check_finite(xbar, "xbar"))
    tau = float(check_finite(tau, "tau"))
    eps = 1e-12 * L / v if eps_t is None else abs(float(eps_t))
    tau_inside = L / v - xbar / v
    if abs(tau_inside) <= eps:
        label = ZERO_CROSSING
    elif tau_inside < 0:
        label = NEGATIVE
    elif tau_inside > L / v + tau:
        label = ABNORMAL_DELAY
    else:
        label = NORMAL
    return TimeInference(L, v, xbar, tau, tau_inside, label)


@dataclass(frozen=True)
class LarmorConfig:
    tau1: float
    tau2: float
    A1: complex
    A2: complex
    omega_L: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "A1", as_complex(self.A1, "A1"))
        object.__setattr__(self, "A2", as_complex(self.A2, "A2"))
        for name in ("tau1", "tau2", "omega_L"):
            object.__setattr__(self, name, float(check_finite(getattr(self, name), name)))


def complex_time(cfg):
    """``(tau1 A1 + tau2 A2) / (A1 + A2)``."""
    total = cfg.A1 + cfg.A2
    if total == 0:
        raise DarkPortError("A1 + A2 = 0: spin rotation undefined")
    return (cfg.tau1 * cfg.A1 + cfg.tau2 * cfg.A2) / total


def larmor_angle(cfg):
    """Spin rotation angle at the port: omega_L times the real part of the complex time."""
    return cfg.omega_L * complex_time(cfg).real
