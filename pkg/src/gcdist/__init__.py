"""Gaussian Combined Distance between bounding boxes.

A numpy-backed library for measuring bounding-box similarity through
2-D Gaussian modeling: the scale-invariant Gaussian Combined Distance
with exact analytic gradients, the comparison baselines (Wasserstein,
normalized Wasserstein, KL divergence, IoU/GIoU/DIoU), and a desk-scale
experiment lab (gradient-descent regression, sensitivity sweeps,
metric-driven label assignment, dataset size statistics).
"""

from .assignment import (
    IGNORE,
    NEGATIVE,
    AssignConfig,
    AssignResult,
    BucketAssignStats,
    assign,
    assign_stats,
    gen_anchor_grid,
)
from .boxes import (
    MIN_DIM,
    Box,
    GaussianBox,
    affine_apply,
    box_from_corner,
    from_gaussian,
    to_gaussian,
)
from .data import (
    DEFAULT_BUCKETS,
    Annotation,
    Dataset,
    ImageInfo,
    SizeStats,
    dataset_stats,
    export_table,
    load_coco,
)
from .errors import (
    CocoFormatError,
    ConfigError,
    DivergenceError,
    GcdistError,
    InvalidBoxError,
    InvalidGaussianError,
    InvalidTransformError,
    UnknownMetricError,
)
from .gradients import (
    FD_STEP,
    BoxGrad,
    finite_diff_grad,
    gcd_grad,
    loss_and_grad,
    wd_center_grad,
)
from .metrics import (
    DEFAULT_CONFIG,
    MetricConfig,
    MetricKind,
    diou,
    gcd_metric,
    gcd_squared,
    giou,
    iou,
    kld,
    metric_eval,
    nwd,
    pairwise_matrix,
    wd_squared,
)
from .simlab import (
    Curves,
    Parametrization,
    RegressionConfig,
    RegressionObjective,
    Trace,
    TraceRecord,
    parameter_error,
    run_regression,
    sweep_sensitivity,
)
from .table import Table, kv_table

__version__ = "0.1.0"

__all__ = [
    "AssignConfig",
    "AssignResult",
    "Annotation",
    "Box",
    "BoxGrad",
    "BucketAssignStats",
    "CocoFormatError",
    "ConfigError",
    "Curves",
    "Dataset",
    "DEFAULT_BUCKETS",
    "DEFAULT_CONFIG",
    "DivergenceError",
    "FD_STEP",
    "GaussianBox",
    "GcdistError",
    "IGNORE",
    "ImageInfo",
    "InvalidBoxError",
    "InvalidGaussianError",
    "InvalidTransformError",
    "MetricConfig",
    "MetricKind",
    "MIN_DIM",
    "NEGATIVE",
    "Parametrization",
    "RegressionConfig",
    "RegressionObjective",
    "SizeStats",
    "Table",
    "Trace",
    "TraceRecord",
    "UnknownMetricError",
    "affine_apply",
    "assign",
    "assign_stats",
    "box_from_corner",
    "dataset_stats",
    "diou",
    "export_table",
    "finite_diff_grad",
    "from_gaussian",
    "gcd_grad",
    "gcd_metric",
    "gcd_squared",
    "gen_anchor_grid",
    "giou",
    "iou",
    "kld",
    "kv_table",
    "load_coco",
    "loss_and_grad",
    "metric_eval",
    "nwd",
    "pairwise_matrix",
    "parameter_error",
    "run_regression",
    "sweep_sensitivity",
    "to_gaussian",
    "wd_center_grad",
    "wd_squared",
]
