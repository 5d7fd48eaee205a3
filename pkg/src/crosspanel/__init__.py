"""Cross-panel channel inference for two-panel, two-frequency base stations.

Given the multi-path parameters of one panel's channel, infer the other
panel's channel (fully, in free space) or its path angles / elevation
ranges (multi-path with shared scatterers), and score the result against
exact geometric ground truth.
"""

from .geometry import (
    SPEED_OF_LIGHT,
    FieldRegime,
    PanelConfig,
    TwoPanelLayout,
    aperture,
    classify_field,
    element_grid,
    element_position,
    los_angles,
    rayleigh_distance,
)
from .channel import (
    PathComponent,
    Scatterer,
    friis_gain,
    steering_vector,
    synth_far_channel,
    synth_multipath_scene,
    synth_spherical_channel,
)
from .estimation import (
    ExtractionConfig,
    ExtractionDivergenceError,
    ExtractionError,
    ExtractionLimitWarning,
    extract_paths,
    reconstruct,
)
from .inference import (
    AngleDomainError,
    AngleRange,
    DeviationBoundError,
    InferenceResult,
    Scenario,
    infer_far_free,
    infer_gain_far,
    infer_multipath_far,
    infer_multipath_near,
    infer_near_free,
)
from .metrics import (
    ScenarioReport,
    UERecord,
    containment_rate,
    correlation,
    elevation_error_curve,
)

__version__ = "0.1.0"

__all__ = [
    "SPEED_OF_LIGHT",
    "AngleDomainError",
    "AngleRange",
    "DeviationBoundError",
    "ExtractionConfig",
    "ExtractionDivergenceError",
    "ExtractionError",
    "ExtractionLimitWarning",
    "FieldRegime",
    "InferenceResult",
    "PanelConfig",
    "PathComponent",
    "Scatterer",
    "Scenario",
    "ScenarioReport",
    "TwoPanelLayout",
    "UERecord",
    "aperture",
    "classify_field",
    "containment_rate",
    "correlation",
    "element_grid",
    "element_position",
    "elevation_error_curve",
    "extract_paths",
    "friis_gain",
    "infer_far_free",
    "infer_gain_far",
    "infer_multipath_far",
    "infer_multipath_near",
    "infer_near_free",
    "los_angles",
    "rayleigh_distance",
    "reconstruct",
    "steering_vector",
    "synth_far_channel",
    "synth_multipath_scene",
    "synth_spherical_channel",
]
