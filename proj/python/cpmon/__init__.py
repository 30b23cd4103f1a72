"""Conformal prediction sets with streaming out-of-calibration monitoring."""

from cpmon._core import (
    CalibrationModel,
    ConstraintError,
    Detector,
    RecordParseError,
    __version__,
    calibrate,
    conformity_score,
    empirical_coverage,
    entropy_sweep,
    fit_temperature,
    load_model,
    model_from_json,
    nse,
    prediction_set,
    sample_stream,
    severity_sweep,
    softmax,
)

__all__ = [
    "CalibrationModel",
    "ConstraintError",
    "Detector",
    "RecordParseError",
    "__version__",
    "calibrate",
    "conformity_score",
    "empirical_coverage",
    "entropy_sweep",
    "fit_temperature",
    "load_model",
    "model_from_json",
    "nse",
    "prediction_set",
    "sample_stream",
    "severity_sweep",
    "softmax",
]
