"""Metric-driven label assignment over anchor grids.

Implements the standard max-similarity assignment rule used at the RPN
stage of two-stage detectors, but parameterized by any supported metric:
an anchor is positive for its best ground-truth box if that similarity
clears ``pos_threshold``, negative below ``neg_threshold``, ignored in
between.  Low-quality matching optionally forces each ground truth's best
anchor positive so no object goes unsupervised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boxes import Box
from .errors import ConfigError
from .metrics import DEFAULT_CONFIG, MetricConfig, MetricKind, pairwise_matrix
from .table import Table

# Per-anchor labels: a non-negative value is the index of the matched
# ground truth; NEGATIVE and IGNORE are the two background states.
NEGATIVE = -1
IGNORE = -2


@dataclass(frozen=True)
class AssignConfig:
    pos_threshold: float = 0.7
    neg_threshold: float = 0.3
    allow_low_quality: bool = True

    def __post_init__(self):
        if not (0.0 < self.pos_threshold <= 1.0):
            raise ConfigError(f"pos_threshold must be in (0, 1], got {self.pos_threshold!r}")
        if not (0.0 <= self.neg_threshold < 1.0):
            raise ConfigError(f"neg_threshold must be in [0, 1), got {self.neg_threshold!r}")
        if self.neg_threshold > self.pos_threshold:
            raise ConfigError(
                f"neg_threshold ({self.neg_threshold!r}) must not exceed pos_threshold ({self.pos_threshold!r})"
            )


@dataclass(frozen=True)
class AssignResult:
    """One label per anchor plus tallies.

    labels[i] is the matched gt index (>= 0), NEGATIVE or IGNORE.
    per_gt_positives[j] counts anchors assigned to gt j.
    """

    labels: tuple[int, ...]
    per_gt_positives: tuple[int, ...]

    @property
    def num_positive(self) -> int:
        return sum(1 for v in self.labels if v >= 0)

    @property
    def num_negative(self) -> int:
        return sum(1 for v in self.labels if v == NEGATIVE)

    @property
    def num_ignore(self) -> int:
        return sum(1 for v in self.labels if v == IGNORE)

    def as_table(self) -> Table:
        rows = [[j, count] for j, count in enumerate(self.per_gt_positives)]
        return Table(["gt_index", "positive_anchors"], rows)


def gen_anchor_grid(
    img_w: float,
    img_h: float,
    stride: float,
    scales: list[float],
    ratios: list[float],
) -> list[Box]:
    """Anchor boxes on a regular grid, one per (cell, scale, ratio).

    Anchors sit at cell centers ((i+1/2)*stride, (j+1/2)*stride) with
    w = scale*sqrt(ratio) and h = scale/sqrt(ratio).  Cells are iterated
    row-major (y outer, x inner), then scales, then ratios, so anchor
    order is deterministic.
    """
    if not (stride > 0 and math.isfinite(stride)):
        raise ConfigError(f"stride must be positive, got {stride!r}")
    if not (img_w > 0 and img_h > 0):
        raise ConfigError(f"image dimensions must be positive, got {img_w!r} x {img_h!r}")
    if not scales or not all(s > 0 for s in scales):
        raise ConfigError(f"scales must be non-empty and positive, got {scales!r}")
    if not ratios or not all(r > 0 for r in ratios):
        raise ConfigError(f"ratios must be non-empty and positive, got {ratios!r}")
    nx = math.ceil(img_w / stride)
    ny = math.ceil(img_h / stride)
    anchors = []
    for j in range(ny):
        cy = (j + 0.5) * stride
        for i in range(nx):
            cx = (i + 0.5) * stride
            for scale in scales:
                for ratio in ratios:
                    root = math.sqrt(ratio)
                    anchors.append(Box(cx, cy, scale * root, scale / root))
    return anchors


def assign(
    anchors: list[Box],
    gts: list[Box],
    kind: MetricKind,
    a_cfg: AssignConfig = AssignConfig(),
    m_cfg: MetricConfig = DEFAULT_CONFIG,
) -> AssignResult:
    """Label every anchor against the ground-truth set using one metric.

    Per anchor, with m its best similarity over all gts: positive for the
    argmax gt if m >= pos_threshold, negative if m < neg_threshold, ignored
    otherwise.  Similarity ties pick the lowest gt index.  With low-quality
    matching on, each gt then forces its own best anchor (ties: lowest
    anchor index) positive for itself, in ascending gt order, regardless of
    thresholds.  With no gts at all, every anchor is negative.
    """
    if not gts:
        return AssignResult(tuple([NEGATIVE] * len(anchors)), tuple())
    sim = pairwise_matrix(anchors, gts, kind, m_cfg)
    labels = []
    for i in range(len(anchors)):
        j = int(np.argmax(sim[i, :]))  # first occurrence wins ties
        m = sim[i, j]
        if m >= a_cfg.pos_threshold:
            labels.append(j)
        elif m < a_cfg.neg_threshold:
            labels.append(NEGATIVE)
        else:
            labels.append(IGNORE)
    if a_cfg.allow_low_quality and anchors:
        for j in range(len(gts)):
            best = int(np.argmax(sim[:, j]))
            labels[best] = j
    per_gt = [0] * len(gts)
    for v in labels:
        if v >= 0:
            per_gt[v] += 1
    return AssignResult(tuple(labels), tuple(per_gt))


def _validate_buckets(buckets: list[tuple[float, float]]) -> None:
    for lo, hi in buckets:
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError(f"bucket [{lo!r}, {hi!r}) is not a valid half-open range")
    for (lo_a, hi_a), (lo_b, _) in zip(buckets, buckets[1:]):
        if lo_b < hi_a:
            raise ConfigError(f"buckets overlap or are unordered at [{lo_a}, {hi_a}) / [{lo_b}, ...)")


@dataclass(frozen=True)
class BucketAssignStats:
    lo: float
    hi: float
    gt_count: int
    mean_positives: float  # 0.0 when the bucket is empty
    zero_positive_gts: int


def assign_stats(
    result: AssignResult,
    gts: list[Box],
    size_buckets: list[tuple[float, float]],
) -> list[BucketAssignStats]:
    """Per-size-bucket supervision statistics for an assignment result.

    Ground truths fall into half-open buckets [lo, hi) by sqrt(w*h); ones
    outside every bucket are collected in a trailing overflow entry with
    lo = hi = nan.  Reports, per bucket: gt count, mean positive anchors
    per gt, and how many gts received no positive anchor at all.
    """
    if len(result.per_gt_positives) != len(gts):
        raise ConfigError(
            f"result covers {len(result.per_gt_positives)} gts but {len(gts)} were supplied"
        )
    _validate_buckets(size_buckets)
    groups: list[list[int]] = [[] for _ in size_buckets]
    outside: list[int] = []
    for j, gt in enumerate(gts):
        size = gt.size
        for b, (lo, hi) in enumerate(size_buckets):
            if lo <= size < hi:
                groups[b].append(result.per_gt_positives[j])
                break
        else:
            outside.append(result.per_gt_positives[j])
    stats = []
    for (lo, hi), counts in zip(size_buckets, groups):
        mean = sum(counts) / len(counts) if counts else 0.0
        stats.append(BucketAssignStats(lo, hi, len(counts), mean, sum(1 for c in counts if c == 0)))
    if outside:
        mean = sum(outside) / len(outside)
        stats.append(
            BucketAssignStats(math.nan, math.nan, len(outside), mean, sum(1 for c in outside if c == 0))
        )
    return stats
