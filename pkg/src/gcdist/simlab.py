"""Desk-scale experiments: regression by gradient descent and sensitivity sweeps.

``run_regression`` drives a single predicted box toward a target with plain
gradient descent under a chosen metric, recording the whole trajectory.
``sweep_sensitivity`` measures how each similarity metric reacts to a pure
positional offset at different object sizes, the core tiny-object question.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .boxes import MIN_DIM, Box
from .errors import ConfigError, DivergenceError, InvalidBoxError
from .gradients import BoxGrad, gcd_grad, loss_and_grad
from .metrics import DEFAULT_CONFIG, MetricConfig, MetricKind, gcd_squared, iou, metric_eval
from .table import Table


class Parametrization(Enum):
    """Descent coordinates: raw (cx, cy, w, h) or (cx, cy, ln w, ln h)."""

    DIRECT = "direct"
    LOG_SIZE = "log_size"


class RegressionObjective(Enum):
    """Scalarization of the GCD for descent.

    RAW_DISTANCE descends on the squared distance D2 itself (smooth at the
    optimum, converges to high precision at a fixed learning rate).
    SIMILARITY_LOSS descends on 1 - exp(-sqrt(D2)); the sqrt makes the
    optimum a cone, so a fixed learning rate ends in a small oscillation.
    Kinds other than GCD always use their ``loss_and_grad`` form.
    """

    RAW_DISTANCE = "raw_distance"
    SIMILARITY_LOSS = "similarity_loss"


# Step-halving attempts in DIRECT mode before a coordinate is marked stalled.
_MAX_HALVINGS = 30


@dataclass(frozen=True)
class RegressionConfig:
    init: Box
    target: Box
    loss_kind: MetricKind = MetricKind.GCD
    learning_rate: float = 0.1
    steps: int = 2000
    parametrization: Parametrization = Parametrization.LOG_SIZE
    objective: RegressionObjective = RegressionObjective.RAW_DISTANCE
    metric_cfg: MetricConfig = field(default_factory=MetricConfig)

    def __post_init__(self):
        if not (isinstance(self.learning_rate, (int, float)) and self.learning_rate > 0.0):
            raise ConfigError(f"learning_rate must be positive, got {self.learning_rate!r}")
        if not (isinstance(self.steps, int) and self.steps >= 1):
            raise ConfigError(f"steps must be an integer >= 1, got {self.steps!r}")


@dataclass(frozen=True)
class TraceRecord:
    step: int
    loss: float
    box: Box
    iou_vs_target: float
    stalled: bool = False


@dataclass(frozen=True)
class Trace:
    """Full descent trajectory: steps + 1 records including the initial state."""

    records: tuple[TraceRecord, ...]
    final_box: Box
    final_param_error: float

    def as_table(self) -> Table:
        columns = ["step", "loss", "cx", "cy", "w", "h", "iou", "stalled"]
        rows = [
            [r.step, r.loss, r.box.cx, r.box.cy, r.box.w, r.box.h, r.iou_vs_target, int(r.stalled)]
            for r in self.records
        ]
        return Table(columns, rows)


def parameter_error(box: Box, target: Box) -> float:
    """Max per-field deviation, each normalized by the target's axis extent.

    Centers are measured against the target's width/height rather than the
    raw center values, which may legitimately be zero.
    """
    return max(
        abs(box.cx - target.cx) / target.w,
        abs(box.cy - target.cy) / target.h,
        abs(box.w - target.w) / target.w,
        abs(box.h - target.h) / target.h,
    )


def _objective(cfg: RegressionConfig, box: Box) -> tuple[float, BoxGrad]:
    if cfg.loss_kind is MetricKind.GCD and cfg.objective is RegressionObjective.RAW_DISTANCE:
        return gcd_squared(box, cfg.target), gcd_grad(box, cfg.target)
    return loss_and_grad(cfg.loss_kind, box, cfg.target, cfg.metric_cfg)


def _step_direct(box: Box, grad: BoxGrad, lr: float, eps: float) -> tuple[Box, bool]:
    new_cx = box.cx - lr * grad.d_cx
    new_cy = box.cy - lr * grad.d_cy
    stalled = False
    dims = []
    for value, g in ((box.w, grad.d_w), (box.h, grad.d_h)):
        delta = -lr * g
        halvings = 0
        while value + delta <= eps and halvings < _MAX_HALVINGS:
            delta /= 2.0
            halvings += 1
        if value + delta <= eps:
            delta = 0.0
            stalled = True
        dims.append(value + delta)
    return Box(new_cx, new_cy, dims[0], dims[1]), stalled


def _step_log_size(box: Box, grad: BoxGrad, lr: float) -> Box:
    # chain rule: d/d(ln w) = w * d/dw
    lw = math.log(box.w) - lr * (box.w * grad.d_w)
    lh = math.log(box.h) - lr * (box.h * grad.d_h)
    return Box(box.cx - lr * grad.d_cx, box.cy - lr * grad.d_cy, math.exp(lw), math.exp(lh))


def run_regression(cfg: RegressionConfig) -> Trace:
    """Plain gradient descent of the configured loss for cfg.steps steps.

    Under LOG_SIZE the dimensions are descended in log space, which keeps
    them positive by construction.  Under DIRECT, a step that would push a
    dimension to eps or below has that coordinate's step halved (up to 30
    times); if still infeasible the coordinate is frozen for the step and
    the record is marked stalled.  A non-finite loss (or a box leaving the
    valid domain under LOG_SIZE, e.g. by exp overflow) aborts with
    :class:`DivergenceError` carrying the partial trace.
    """
    box = cfg.init
    lr = cfg.learning_rate
    loss, grad = _objective(cfg, box)
    records = [TraceRecord(0, loss, box, iou(box, cfg.target))]
    for k in range(1, cfg.steps + 1):
        stalled = False
        try:
            if cfg.parametrization is Parametrization.DIRECT:
                box, stalled = _step_direct(box, grad, lr, cfg.metric_cfg.eps)
            else:
                box = _step_log_size(box, grad, lr)
            loss, grad = _objective(cfg, box)
        except (OverflowError, InvalidBoxError) as exc:
            raise DivergenceError(f"descent left the valid box domain at step {k}: {exc}", records) from exc
        if not math.isfinite(loss):
            raise DivergenceError(f"non-finite loss at step {k}", records)
        records.append(TraceRecord(k, loss, box, iou(box, cfg.target), stalled))
    return Trace(tuple(records), box, parameter_error(box, cfg.target))


@dataclass(frozen=True)
class Curves:
    """Similarity values on a (size x offset x kind) grid."""

    sizes: tuple[float, ...]
    offsets: tuple[float, ...]
    kinds: tuple[MetricKind, ...]
    values: np.ndarray  # shape (len(sizes), len(offsets), len(kinds))

    def value(self, size: float, offset: float, kind: MetricKind) -> float:
        return float(
            self.values[self.sizes.index(size), self.offsets.index(offset), self.kinds.index(kind)]
        )

    def as_table(self) -> Table:
        columns = ["size", "offset"] + [k.value for k in self.kinds]
        rows = []
        for i, s in enumerate(self.sizes):
            for j, d in enumerate(self.offsets):
                rows.append([s, d] + [float(v) for v in self.values[i, j, :]])
        return Table(columns, rows)


def sweep_sensitivity(
    sizes: list[float],
    offsets: list[float],
    kinds: list[MetricKind],
    cfg: MetricConfig = DEFAULT_CONFIG,
) -> Curves:
    """Similarity of a size-s square box against a copy shifted by each offset.

    For each size s and offset d, evaluates
    ``metric_eval(kind, Box(0, 0, s, s), Box(d, 0, s, s))``.
    """
    for s in sizes:
        if not (isinstance(s, (int, float)) and math.isfinite(s)) or s < MIN_DIM:
            raise ConfigError(f"sizes must be >= {MIN_DIM}, got {s!r}")
    for d in offsets:
        if not (isinstance(d, (int, float)) and math.isfinite(d)):
            raise ConfigError(f"offsets must be finite, got {d!r}")
    if not kinds:
        raise ConfigError("at least one metric kind is required")
    values = np.empty((len(sizes), len(offsets), len(kinds)), dtype=np.float64)
    for i, s in enumerate(sizes):
        pred = Box(0.0, 0.0, s, s)
        for j, d in enumerate(offsets):
            gt = Box(d, 0.0, s, s)
            for k, kind in enumerate(kinds):
                values[i, j, k] = metric_eval(kind, pred, gt, cfg)
    return Curves(tuple(float(s) for s in sizes), tuple(float(d) for d in offsets), tuple(kinds), values)
