"""Gaussian wave packets in a two-arm interferometer with a tunable delay."""
from .amplitudes import (
    DesignTarget,
    PathSet,
    QubitState,
    amplitudes_from_states,
    check_conservation,
    design_states,
    design_symmetric,
    ratio_for_advancement,
    ratio_for_delay,
)
from .analysis import (
    LarmorConfig,
    TimeInference,
    WidthScanRecord,
    center_of_mass,
    compare_profiles,
    find_peak,
    infer_tau_inside,
    larmor_angle,
    width_scan,
)
from .density import (
    DensityProfile,
    SuperpositionSpec,
    TwoPathConfig,
    asymptotic_density,
    asymptotic_peak,
    density_d1,
    density_d2,
    detection_probability,
    detection_probability_d2,
    mean_d2,
    mean_position,
    superposition_density,
    tail_ratio_front,
    tail_ratio_rear,
)
from .errors import (
    DarkBracketError,
    DarkPortError,
    DegeneratePreselectionError,
    DomainError,
    InvalidPostselectionError,
    MziLabError,
    PoleError,
    SingularTargetError,
    VanishingNormError,
)
from .wavepacket import GaussianPacket, eval_gaussian, shifted_copy

__version__ = "0.1.0"
