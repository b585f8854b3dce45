"""Box-pair similarity metrics: GCD and its comparison baselines.

The Gaussian Combined Distance (GCD) between boxes p and t is the
four-term scalar sum

    D2(p, t) = 1/2 * [ (xp-xt)^2/wp^2 + (yp-yt)^2/hp^2 ]
             + 1/2 * [ (wp-wt)^2/(4 wp^2) + (hp-ht)^2/(4 hp^2) ]
             + 1/2 * [ (xt-xp)^2/wt^2 + (yt-yp)^2/ht^2 ]
             + 1/2 * [ (wt-wp)^2/(4 wt^2) + (ht-hp)^2/(4 ht^2) ]

which is symmetric, zero iff p = t, and invariant under a common affine
map of both boxes.  It is normalized to a similarity in (0, 1] via
exp(-sqrt(D2)).  Baselines: the squared 2-Wasserstein distance between
the Gaussian forms (not scale invariant), its normalized variant NWD,
the (asymmetric) KL divergence, and the IoU family.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .boxes import MIN_DIM, Box
from .errors import ConfigError, InvalidBoxError, UnknownMetricError


class MetricKind(Enum):
    """Selector for every supported box-pair metric."""

    GCD = "gcd"
    WD = "wd"
    NWD = "nwd"
    KLD = "kld"
    IOU = "iou"
    GIOU = "giou"
    DIOU = "diou"

    @classmethod
    def parse(cls, name: str) -> "MetricKind":
        try:
            return cls(name.strip().lower())
        except (ValueError, AttributeError):
            valid = ", ".join(k.value for k in cls)
            raise UnknownMetricError(f"unknown metric {name!r}; expected one of: {valid}") from None


@dataclass(frozen=True)
class MetricConfig:
    """Metric constants.

    nwd_c: the NWD normalization constant in pixels, conventionally the
        mean object size of the dataset (default 12.8).
    eps: numerical floor used where a denominator may reach zero
        (currently the sqrt term of the GCD loss gradient).
    """

    nwd_c: float = 12.8
    eps: float = 1e-7

    def __post_init__(self):
        if not (isinstance(self.nwd_c, (int, float)) and math.isfinite(self.nwd_c)) or self.nwd_c <= 0:
            raise ConfigError(f"nwd_c must be a positive finite number, got {self.nwd_c!r}")
        if not (isinstance(self.eps, (int, float)) and math.isfinite(self.eps)) or self.eps <= 0:
            raise ConfigError(f"eps must be a positive finite number, got {self.eps!r}")


DEFAULT_CONFIG = MetricConfig()


def gcd_squared(p: Box, t: Box) -> float:
    """Squared Gaussian Combined Distance (dimensionless, >= 0)."""
    dx = p.cx - t.cx
    dy = p.cy - t.cy
    dw = p.w - t.w
    dh = p.h - t.h
    wp2 = p.w * p.w
    hp2 = p.h * p.h
    wt2 = t.w * t.w
    ht2 = t.h * t.h
    return (
        0.5 * (dx * dx / wp2 + dy * dy / hp2)
        + 0.5 * (dw * dw / (4.0 * wp2) + dh * dh / (4.0 * hp2))
        + 0.5 * (dx * dx / wt2 + dy * dy / ht2)
        + 0.5 * (dw * dw / (4.0 * wt2) + dh * dh / (4.0 * ht2))
    )


def gcd_metric(p: Box, t: Box) -> float:
    """GCD as a similarity in (0, 1]: exp(-sqrt(D2)).  1 iff p = t."""
    return math.exp(-math.sqrt(gcd_squared(p, t)))


def wd_squared(p: Box, t: Box) -> float:
    """Squared 2-Wasserstein distance between the Gaussian forms (pixels^2).

    For diagonal covariances this is the squared center distance plus the
    squared Frobenius distance of the covariance roots:
    (xp-xt)^2 + (yp-yt)^2 + [(wp-wt)^2 + (hp-ht)^2] / 4.
    Symmetric, but scales with s^2 under a uniform scaling s of both boxes.
    """
    dx = p.cx - t.cx
    dy = p.cy - t.cy
    dw = p.w - t.w
    dh = p.h - t.h
    return dx * dx + dy * dy + (dw * dw + dh * dh) / 4.0


def nwd(p: Box, t: Box, cfg: MetricConfig = DEFAULT_CONFIG) -> float:
    """Normalized Wasserstein similarity exp(-W2 / C) in (0, 1]."""
    return math.exp(-math.sqrt(wd_squared(p, t)) / cfg.nwd_c)


def kld(p: Box, t: Box) -> float:
    """KL divergence KL(N_p || N_t) of the Gaussian forms.  Asymmetric.

    Closed form for diagonal covariances (wp^2/4, hp^2/4) vs (wt^2/4, ht^2/4):
    1/2 [ wp^2/wt^2 + hp^2/ht^2 + 4(xp-xt)^2/wt^2 + 4(yp-yt)^2/ht^2 - 2
          + ln(wt^2 ht^2 / (wp^2 hp^2)) ]
    """
    dx = p.cx - t.cx
    dy = p.cy - t.cy
    wp2 = p.w * p.w
    hp2 = p.h * p.h
    wt2 = t.w * t.w
    ht2 = t.h * t.h
    return 0.5 * (
        wp2 / wt2
        + hp2 / ht2
        + 4.0 * dx * dx / wt2
        + 4.0 * dy * dy / ht2
        - 2.0
        + math.log((wt2 * ht2) / (wp2 * hp2))
    )


def _inter_union(p: Box, t: Box) -> tuple[float, float]:
    px1, py1, px2, py2 = p.corners()
    tx1, ty1, tx2, ty2 = t.corners()
    iw = min(px2, tx2) - max(px1, tx1)
    ih = min(py2, ty2) - max(py1, ty1)
    inter = iw * ih if (iw > 0.0 and ih > 0.0) else 0.0
    union = p.area + t.area - inter
    return inter, union


def _enclosing_wh(p: Box, t: Box) -> tuple[float, float]:
    px1, py1, px2, py2 = p.corners()
    tx1, ty1, tx2, ty2 = t.corners()
    return max(px2, tx2) - min(px1, tx1), max(py2, ty2) - min(py1, ty1)


def iou(p: Box, t: Box) -> float:
    """Intersection over union in [0, 1]; 0 when the boxes do not overlap."""
    inter, union = _inter_union(p, t)
    return inter / union


def giou(p: Box, t: Box) -> float:
    """IoU minus the enclosing-box gap penalty |C \\ (A u B)| / |C|, in [-1, 1]."""
    inter, union = _inter_union(p, t)
    cw, ch = _enclosing_wh(p, t)
    c_area = cw * ch
    return inter / union - (c_area - union) / c_area


def diou(p: Box, t: Box) -> float:
    """IoU minus squared center distance over squared enclosing diagonal, in [-1, 1]."""
    inter, union = _inter_union(p, t)
    cw, ch = _enclosing_wh(p, t)
    dx = p.cx - t.cx
    dy = p.cy - t.cy
    return inter / union - (dx * dx + dy * dy) / (cw * cw + ch * ch)


def metric_eval(kind: MetricKind, p: Box, t: Box, cfg: MetricConfig = DEFAULT_CONFIG) -> float:
    """Evaluate any metric as a similarity (larger = more similar).

    Distance-type metrics are mapped through exp(-.) so that every kind is
    directly usable for threshold-based assignment: GCD -> exp(-sqrt(D2)),
    WD -> exp(-sqrt(W2)), NWD as defined, KLD -> exp(-KL(p||t)).  The IoU
    family is returned raw.  Raw distances remain available through
    :func:`gcd_squared`, :func:`wd_squared` and :func:`kld`.
    """
    if kind is MetricKind.GCD:
        return gcd_metric(p, t)
    if kind is MetricKind.WD:
        return math.exp(-math.sqrt(wd_squared(p, t)))
    if kind is MetricKind.NWD:
        return nwd(p, t, cfg)
    if kind is MetricKind.KLD:
        return math.exp(-kld(p, t))
    if kind is MetricKind.IOU:
        return iou(p, t)
    if kind is MetricKind.GIOU:
        return giou(p, t)
    if kind is MetricKind.DIOU:
        return diou(p, t)
    raise UnknownMetricError(f"unsupported metric kind {kind!r}")


def _check_box(b, label: str) -> None:
    if not isinstance(b, Box):
        raise InvalidBoxError(f"{label} is not a Box: {b!r}")
    # Guard against tampered instances; Box validates on construction.
    if not all(math.isfinite(v) for v in (b.cx, b.cy, b.w, b.h)) or b.w < MIN_DIM or b.h < MIN_DIM:
        raise InvalidBoxError(f"{label} is invalid: {b!r}")


def pairwise_matrix(
    preds: list[Box],
    gts: list[Box],
    kind: MetricKind,
    cfg: MetricConfig = DEFAULT_CONFIG,
) -> np.ndarray:
    """All-pairs similarity matrix of shape (len(preds), len(gts)).

    Entry (i, j) equals ``metric_eval(kind, preds[i], gts[j], cfg)`` exactly
    (same scalar code path).  Empty inputs produce a 0-row or 0-column matrix.
    """
    for i, b in enumerate(preds):
        _check_box(b, f"preds[{i}]")
    for j, b in enumerate(gts):
        _check_box(b, f"gts[{j}]")
    out = np.empty((len(preds), len(gts)), dtype=np.float64)
    for i, b in enumerate(preds):
        for j, g in enumerate(gts):
            out[i, j] = metric_eval(kind, b, g, cfg)
    return out
