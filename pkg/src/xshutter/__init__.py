"""Recover a latent frame sequence from a motion-blurred image and a rolling-shutter image
captured over the same exposure."""
from .decompose import (DecomposeConfig, DecomposeState, DirectionReport, decompose,
                        disambiguation_report, energy, energy_gradient, energy_terms,
                        reconstruct_frame, reconstruct_sequence)
from .encoding import EncodingMap, encode_latent, encode_relative, encode_rs
from .errors import ConfigError, ParameterError, ShapeError, SolverDivergenceError
from .flowwarp import FlowField, backward_warp, cross_view_displacement, fuse, scale_flow
from .formation import (LatentSequence, ObservationPair, degrade_lowlight, degrade_shift,
                        synthesize_blur, synthesize_rs)
from .harness import EvalResult, ExperimentSpec, run_experiment, subsample_sequence
from .metrics import psnr, ssim
from .timing import (TimingConfig, default_realbr_timing, exposure_window, row_capture_times,
                     row_to_latent)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DecomposeConfig", "DecomposeState", "DirectionReport", "EncodingMap",
    "EvalResult", "ExperimentSpec", "FlowField", "LatentSequence", "ObservationPair",
    "ParameterError", "ShapeError", "SolverDivergenceError", "TimingConfig", "backward_warp",
    "cross_view_displacement", "decompose", "default_realbr_timing", "degrade_lowlight",
    "degrade_shift", "disambiguation_report", "encode_latent", "encode_relative", "encode_rs",
    "energy", "energy_gradient", "energy_terms", "exposure_window", "fuse", "psnr",
    "reconstruct_frame", "reconstruct_sequence", "row_capture_times", "row_to_latent",
    "run_experiment", "scale_flow", "ssim", "subsample_sequence", "synthesize_blur",
    "synthesize_rs",
]
