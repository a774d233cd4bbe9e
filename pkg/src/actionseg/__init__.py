"""Online sub-action segmentation and repetition counting on 2D pose streams."""

from .changepoint import (
    ChangeAlarm,
    CusumDetector,
    PiecewiseFit,
    estimate_end_time,
    fit_piecewise_linear,
)
from .config import RunConfig
from .counter import CountEvent, RepetitionCounter
from .features import (
    FeatureExtractor,
    FeatureSample,
    KeypointFrame,
    SkeletonTopology,
    bone_length,
    compute_features,
    default_topology,
    joint_angle,
    load_topology,
)
from .pipeline import ActionPipeline, run_pipeline
from .primitives import (
    CirclePrimitive,
    FitConfig,
    FitResult,
    LinePrimitive,
    Quadratic,
    StationaryPrimitive,
    eval_primitive,
    fit_circle,
    fit_line,
    fit_quadratic,
    fit_stationary,
    select_primitive,
    unwrap_angles,
)
from .representation import (
    SegmentRepresentation,
    is_match,
    match_error,
    summarize_segment,
)
from .segmenter import OnlineSegmenter
from .synth import GroundTruth, MotionScript, generate_stream, load_script

__version__ = "0.1.0"

__all__ = [
    "ActionPipeline",
    "ChangeAlarm",
    "CirclePrimitive",
    "CountEvent",
    "CusumDetector",
    "FeatureExtractor",
    "FeatureSample",
    "FitConfig",
    "FitResult",
    "GroundTruth",
    "KeypointFrame",
    "LinePrimitive",
    "MotionScript",
    "OnlineSegmenter",
    "PiecewiseFit",
    "Quadratic",
    "RepetitionCounter",
    "RunConfig",
    "SegmentRepresentation",
    "SkeletonTopology",
    "StationaryPrimitive",
    "bone_length",
    "compute_features",
    "default_topology",
    "estimate_end_time",
    "eval_primitive",
    "fit_circle",
    "fit_line",
    "fit_piecewise_linear",
    "fit_quadratic",
    "fit_stationary",
    "generate_stream",
    "is_match",
    "joint_angle",
    "load_script",
    "load_topology",
    "match_error",
    "run_pipeline",
    "select_primitive",
    "summarize_segment",
    "unwrap_angles",
]
