"""Array-in/array-out batch surface over the gcdist metric core.

Boxes travel as (N, 4) contiguous float64 arrays with rows (cx, cy, w, h)
in pixels, the natural currency of ML pipelines.  The two calls wrap the
core pairwise similarity matrix and the per-pair regression loss/gradient.

Results are bit-for-bit identical to the core's scalar functions: inputs
are validated in a single vectorized pass, then each entry is produced by
the same code path a scalar call would take.  The wrapper holds no locks
of its own and is safe to call reentrantly.
"""

from __future__ import annotations

import numpy as np

from gcdist import (
    Box,
    InvalidBoxError,
    MetricConfig,
    MetricKind,
    MIN_DIM,
    loss_and_grad,
    pairwise_matrix,
)

__all__ = ["pairwise", "loss_grad"]
__version__ = "0.1.0"


def _as_box_array(arr, name: str) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=np.float64)
    if out.ndim != 2 or out.shape[1] != 4:
        raise ValueError(f"{name} must have shape (N, 4), got {tuple(out.shape)}")
    finite = np.isfinite(out).all(axis=1)
    dims_ok = (out[:, 2] >= MIN_DIM) & (out[:, 3] >= MIN_DIM)
    bad = np.nonzero(~(finite & dims_ok))[0]
    if bad.size:
        i = int(bad[0])
        raise InvalidBoxError(
            f"{name} row {i} is not a valid box (cx, cy, w, h) = {tuple(out[i])}: "
            f"fields must be finite with w, h >= {MIN_DIM}"
        )
    return out


def _boxes(arr: np.ndarray) -> list[Box]:
    return [Box(cx, cy, w, h) for cx, cy, w, h in arr]


def pairwise(preds, gts, kind: str, nwd_c: float = 12.8, eps: float = 1e-7) -> np.ndarray:
    """All-pairs similarity matrix between two box arrays.

    Args:
        preds: (N, 4) array of predicted boxes.
        gts: (M, 4) array of target boxes.
        kind: metric name ("gcd", "wd", "nwd", "kld", "iou", "giou", "diou").
        nwd_c: normalization constant for the "nwd" kind, pixels.
        eps: numerical floor passed through to the core.

    Returns:
        (N, M) float64 array; entry (i, j) equals the core scalar
        evaluation for the row pair, bit for bit.
    """
    metric = MetricKind.parse(kind)
    cfg = MetricConfig(nwd_c=nwd_c, eps=eps)
    p = _as_box_array(preds, "preds")
    g = _as_box_array(gts, "gts")
    return pairwise_matrix(_boxes(p), _boxes(g), metric, cfg)


def loss_grad(preds, gts, kind: str, nwd_c: float = 12.8, eps: float = 1e-7):
    """Row-wise regression loss and gradient for paired box arrays.

    Args:
        preds: (N, 4) array of predicted boxes.
        gts: (N, 4) array of target boxes, one row per prediction.
        kind: metric name as in :func:`pairwise`.
        nwd_c, eps: metric constants passed through to the core.

    Returns:
        (losses, grads): float64 arrays of shape (N,) and (N, 4); row i
        equals the core loss_and_grad on row pair i, bit for bit.
    """
    metric = MetricKind.parse(kind)
    cfg = MetricConfig(nwd_c=nwd_c, eps=eps)
    p = _as_box_array(preds, "preds")
    g = _as_box_array(gts, "gts")
    if p.shape[0] != g.shape[0]:
        raise ValueError(f"row counts differ: preds has {p.shape[0]}, gts has {g.shape[0]}")
    losses = np.empty(p.shape[0], dtype=np.float64)
    grads = np.empty((p.shape[0], 4), dtype=np.float64)
    for i, (pb, gb) in enumerate(zip(_boxes(p), _boxes(g))):
        loss, grad = loss_and_grad(metric, pb, gb, cfg)
        losses[i] = loss
        grads[i, :] = grad.as_tuple()
    return losses, grads
