"""Path amplitudes of the four-path interferometer.

Paths 1 and 2 reach detector D1 through the left and right arm, paths 3
and 4 reach D2 the same way. Amplitudes can be given directly, designed
for a target asymptotic peak position, or derived from pre- and
post-selected qubit states in the path basis ``|b1>, |b2>``.
"""
from dataclasses import dataclass
import cmath
import math

from ._validation import as_complex, check_finite, check_positive
from .errors import (
    DegeneratePreselectionError,
    InvalidPostselectionError,
    PoleError,
    SingularTargetError,
)

CONSERVATION_TOL = 1e-12
NORM_TOL = 1e-12
ORTHONORMAL_TOL = 1e-9
#: Relative distance to the z == y pole below which a target is singular.
POLE_RTOL = 1e-9


@dataclass(frozen=True)
class PathSet:
    A1: complex
    A2: complex
    A3: complex = 0j
    A4: complex = 0j

    def __post_init__(self):
        for name in ("A1", "A2", "A3", "A4"):
            object.__setattr__(self, name, as_complex(getattr(self, name), name))

    def as_tuple(self):
        return (self.A1, self.A2, self.A3, self.A4)

    def port(self, detector):
        """Amplitude pair (left arm, right arm) feeding ``detector`` (1 or 2)."""
        if detector == 1:
            return self.A1, self.A2
        if detector == 2:
            return self.A3, self.A4
        raise ValueError(f"detector must be 1 or 2, got {detector!r}")

    def conservation_residuals(self):
        """Residuals of the path-sum and port-sum forms of probability conservation."""
        path_sum = sum(abs(a) ** 2 for a in self.as_tuple())
        port_sum = abs(self.A1 + self.A2) ** 2 + abs(self.A3 + self.A4) ** 2
        return path_sum - 1.0, port_sum - 1.0

    def port_cross_term(self):
        """A1 A2* + A3 A4*; zero for amplitudes built from orthonormal post-selections."""
        return self.A1 * self.A2.conjugate() + self.A3 * self.A4.conjugate()


@dataclass(frozen=True)
class QubitState:
    """State ``c1|b1> + c2|b2>``; must be normalised."""

    c1: complex
    c2: complex

    def __post_init__(self):
        c1 = as_complex(self.c1, "c1")
        c2 = as_complex(self.c2, "c2")
        norm = abs(c1) ** 2 + abs(c2) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalised: |c1|^2 + |c2|^2 = {norm!r}")
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c2", c2)

    @classmethod
    def from_components(cls, c1, c2):
        """Normalise and fix the global phase so that ``c1`` is real and non-negative.

        If ``c1`` vanishes the phase of ``c2`` is fixed instead.
        """
        c1 = as_complex(c1, "c1")
        c2 = as_complex(c2, "c2")
        norm = math.sqrt(abs(c1) ** 2 + abs(c2) ** 2)
        if norm == 0.0:
            raise ValueError("zero vector is not a state")
        lead = c1 if c1 != 0 else c2
        phase = cmath.exp(-1j * cmath.phase(lead))
        c1, c2 = c1 * phase / norm, c2 * phase / norm
        if c1 != 0:
            c1 = complex(c1.real, 0.0)
        else:
            c2 = complex(c2.real, 0.0)
        return cls(c1, c2)

    def inner(self, other):
        """<self|other>."""
        return self.c1.conjugate() * other.c1 + self.c2.conjugate() * other.c2


@dataclass(frozen=True)
class DesignTarget:
    """Pointer shift ``y`` (= -v*tau) and wanted asymptotic peak position ``z``."""

    y: float
    z: float

    def __post_init__(self):
        y = float(check_finite(self.y, "y"))
        z = float(check_finite(self.z, "z"))
        if y == 0.0:
            raise ValueError("y must be nonzero")
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "z", z)

    @classmethod
    def for_delay(cls, vtau, xbar):
        """Target for a right-arm delay ``vtau`` and desired peak position ``xbar``."""
        return cls(-check_positive(vtau, "vtau"), xbar)

    @property
    def ratio(self):
        """A2/A1 = z/(y - z) realising the target."""
        if abs(self.z - self.y) < POLE_RTOL * max(abs(self.y), 1.0):
            raise SingularTargetError(
                f"target z={self.z!r} coincides with y={self.y!r}; amplitudes diverge"
            )
        return self.z / (self.y - self.z)


def check_conservation(p, tol=CONSERVATION_TOL):
    """True iff both the path-sum and the port-sum forms of conservation hold."""
    path_res, port_res = p.conservation_residuals()
    return abs(path_res) <= tol and abs(port_res) <= tol


def design_symmetric(target):
    """Real amplitudes for the pre-selection ``(|b1> + |b2>)/sqrt(2)``.

    The resulting D1 pair has its broad-packet peak at ``target.z``.
    """
    r = target.ratio
    a1 = 1.0 / math.sqrt(2.0 * (1.0 + r * r))
    a2 = r * a1
    return PathSet(a1, a2, a2, -a1)


def design_states(initial, target):
    """Post-selected states D1, D2 giving real D1 amplitudes with peak at ``target.z``.

    ``initial`` must have both components nonzero. D2 is the orthogonal
    complement ``(<b2|D1>*, -<b1|D1>*)``.
    """
    c1, c2 = initial.c1, initial.c2
    if c1 == 0 or c2 == 0:
        raise DegeneratePreselectionError(
            "pre-selected state needs nonzero overlap with both |b1> and |b2>"
        )
    r = target.ratio
    norm = math.sqrt(1.0 / abs(c1) ** 2 + r * r / abs(c2) ** 2)
    d11 = 1.0 / (norm * c1.conjugate())
    d12 = r / (norm * c2.conjugate())
    d1 = QubitState(d11, d12)
    d2 = QubitState(d12.conjugate(), -d11.conjugate())
    return d1, d2


def amplitudes_from_states(initial, d1, d2):
    """Four path amplitudes ``<Dk|bj><bj|I>``."""
    gram = (d1.inner(d1) - 1.0, d2.inner(d2) - 1.0, d1.inner(d2))
    if max(abs(g) for g in gram) > ORTHONORMAL_TOL:
        raise InvalidPostselectionError("post-selected states D1, D2 are not orthonormal")
    return PathSet(
        d1.c1.conjugate() * initial.c1,
        d1.c2.conjugate() * initial.c2,
        d2.c1.conjugate() * initial.c1,
        d2.c2.conjugate() * initial.c2,
    )


def ratio_for_advancement(xbar, vtau):
    """A2/A1 placing the broad-packet peak a distance ``xbar`` ahead of the free one."""
    xbar = check_positive(xbar, "xbar")
    vtau = check_positive(vtau, "vtau")
    return -xbar / (xbar + vtau)


def ratio_for_delay(abs_xbar, vtau):
    """A2/A1 placing the peak ``abs_xbar`` behind the free one.

    Positive (constructive) while ``abs_xbar < vtau``, negative beyond.
    """
    abs_xbar = check_positive(abs_xbar, "abs_xbar")
    vtau = check_positive(vtau, "vtau")
    denom = abs_xbar - vtau
    if abs(denom) < POLE_RTOL * max(vtau, 1.0):
        raise PoleError("a delay of exactly v*tau requires A1 = 0")
    return -abs_xbar / denom
