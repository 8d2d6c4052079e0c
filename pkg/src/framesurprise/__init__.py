"""Training-free keyframe selection by temporal-surprise scoring.

A video's per-frame latent features form a trajectory; frames whose
features deviate sharply from a low-order polynomial extrapolation of the
preceding frames are "surprising" and make good keyframes.  This package
provides the trajectory data model and spatial pooling, the
backward-difference predictor and residual scorer, budgeted selection
strategies plus baselines, a bit-exact binary container, and a batch CLI.
"""

from .errors import (
    BudgetError,
    EmptyInputError,
    FrameSurpriseError,
    InvalidConfigError,
    InvalidDataError,
    ShapeError,
    TrajectoryFormatError,
    TruncatedFileError,
    UnsupportedOrderError,
    UnsupportedVersionError,
)
from .io import (
    SelectionReport,
    export_residuals_csv,
    fnv1a64,
    read_trajectory,
    write_selection_json,
    write_trajectory,
)
from .selection import (
    STRATEGIES,
    SelectionRequest,
    SelectionResult,
    select_cosine_uniqueness,
    select_frame_difference,
    select_swift_local_max,
    select_swift_window_argmax,
    select_uniform,
    subsample_candidates,
)
from .taylor import (
    MAX_ORDER,
    ResidualSeries,
    StencilTable,
    SurpriseParams,
    TaylorConfig,
    collapsed_weights,
    fd_coefficients,
    residual_series,
    residual_series_oracle,
    surprise,
    taylor_predict,
)
from .trajectory import (
    FeatureSequence,
    PoolConfig,
    RegionSequence,
    SurpriseEvent,
    TokenGridSequence,
    flatten_to_features,
    gen_synthetic,
    pool_tokens,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "EmptyInputError",
    "FrameSurpriseError",
    "InvalidConfigError",
    "InvalidDataError",
    "ShapeError",
    "TrajectoryFormatError",
    "TruncatedFileError",
    "UnsupportedOrderError",
    "UnsupportedVersionError",
    "SelectionReport",
    "export_residuals_csv",
    "fnv1a64",
    "read_trajectory",
    "write_selection_json",
    "write_trajectory",
    "STRATEGIES",
    "SelectionRequest",
    "SelectionResult",
    "select_cosine_uniqueness",
    "select_frame_difference",
    "select_swift_local_max",
    "select_swift_window_argmax",
    "select_uniform",
    "subsample_candidates",
    "MAX_ORDER",
    "ResidualSeries",
    "StencilTable",
    "SurpriseParams",
    "TaylorConfig",
    "collapsed_weights",
    "fd_coefficients",
    "residual_series",
    "residual_series_oracle",
    "surprise",
    "taylor_predict",
    "FeatureSequence",
    "PoolConfig",
    "RegionSequence",
    "SurpriseEvent",
    "TokenGridSequence",
    "flatten_to_features",
    "gen_synthetic",
    "pool_tokens",
]
