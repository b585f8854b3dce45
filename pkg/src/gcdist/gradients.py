"""Analytic gradients of the box metrics plus a finite-difference oracle.

All gradients are taken with respect to the predicted box p = (cx, cy, w, h)
with the target t held fixed.  The GCD gradient is exact:

    dD2/dcx = (xp-xt)/wp^2 + (xp-xt)/wt^2        (= (wt^2+wp^2)(xp-xt)/(wt^2 wp^2))
    dD2/dw  = (wp*wt - wt^2)(wt^3+wp^3)/(4 wt^3 wp^3) - (xp-xt)^2/wp^3

(and the y/h analogues).  When wp = wt the width gradient reduces exactly
to -(xp-xt)^2/wp^3 and the center gradient to 2(xp-xt)/wt^2: the center
weight adapts to box scale, the criticized alternative being the WD center
gradient (2(xp-xt), 2(yp-yt)) which ignores box size entirely.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .boxes import Box
from .errors import InvalidBoxError, UnknownMetricError
from .metrics import (
    DEFAULT_CONFIG,
    MetricConfig,
    MetricKind,
    gcd_squared,
    metric_eval,
    wd_squared,
)

# Central-difference step in pixels; balances truncation against rounding
# for double precision at the pixel magnitudes used here.
FD_STEP = 1e-5


@dataclass(frozen=True)
class BoxGrad:
    """Partial derivatives of a scalar objective w.r.t. (cx, cy, w, h)."""

    d_cx: float
    d_cy: float
    d_w: float
    d_h: float

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.d_cx, self.d_cy, self.d_w, self.d_h)

    def scaled(self, factor: float) -> "BoxGrad":
        return BoxGrad(factor * self.d_cx, factor * self.d_cy, factor * self.d_w, factor * self.d_h)


def gcd_grad(p: Box, t: Box) -> BoxGrad:
    """Exact gradient of :func:`gcdist.metrics.gcd_squared` w.r.t. p."""
    dx = p.cx - t.cx
    dy = p.cy - t.cy
    wp2 = p.w * p.w
    hp2 = p.h * p.h
    wt2 = t.w * t.w
    ht2 = t.h * t.h
    wp3 = wp2 * p.w
    hp3 = hp2 * p.h
    wt3 = wt2 * t.w
    ht3 = ht2 * t.h
    d_cx = dx / wp2 + dx / wt2
    d_cy = dy / hp2 + dy / ht2
    d_w = (p.w * t.w - wt2) * ((wt3 + wp3) / (4.0 * wt3 * wp3)) - dx * dx / wp3
    d_h = (p.h * t.h - ht2) * ((ht3 + hp3) / (4.0 * ht3 * hp3)) - dy * dy / hp3
    return BoxGrad(d_cx, d_cy, d_w, d_h)


def wd_center_grad(p: Box, t: Box) -> tuple[float, float]:
    """Gradient of :func:`gcdist.metrics.wd_squared` w.r.t. the center of p.

    Exactly (2(xp-xt), 2(yp-yt)): independent of both boxes' dimensions,
    so every center error of the same magnitude gets the same pull
    regardless of object size.
    """
    return (2.0 * (p.cx - t.cx), 2.0 * (p.cy - t.cy))


def finite_diff_grad(objective: Callable[[Box], float], p: Box, step: float = FD_STEP) -> BoxGrad:
    """Central-difference gradient of an arbitrary scalar objective at p.

    Evaluates (f(p + step*e_i) - f(p - step*e_i)) / (2*step) per coordinate.
    The perturbed boxes must stay valid (e.g. w - step above the minimum
    dimension); a violation reports the offending coordinate.
    """
    if not (step > 0.0 and math.isfinite(step)):
        raise InvalidBoxError(f"finite-difference step must be positive and finite, got {step!r}")
    parts = []
    for name in ("cx", "cy", "w", "h"):
        value = getattr(p, name)
        try:
            hi = replace(p, **{name: value + step})
            lo = replace(p, **{name: value - step})
        except InvalidBoxError as exc:
            raise InvalidBoxError(
                f"cannot take finite difference along '{name}': perturbed box invalid ({exc})"
            ) from exc
        parts.append((objective(hi) - objective(lo)) / (2.0 * step))
    return BoxGrad(*parts)


def loss_and_grad(
    kind: MetricKind,
    p: Box,
    t: Box,
    cfg: MetricConfig = DEFAULT_CONFIG,
) -> tuple[float, BoxGrad]:
    """Regression loss and its gradient w.r.t. p for the given metric kind.

    GCD: loss = 1 - exp(-sqrt(D2)), with the analytic chain-rule gradient
        exp(-sqrt(D2)) * dD2 / (2 * max(sqrt(D2), eps)).  The sqrt has a
        non-smooth point at p = t; the eps clamp plus the identically-zero
        D2 gradient there make the returned gradient 0, the subgradient
        choice that terminates optimization cleanly.
    WD: loss = W2 squared itself, gradient (2 dx, 2 dy, (wp-wt)/2, (hp-ht)/2).
    All other kinds: loss = 1 - metric_eval, gradient by central finite
        differences (non-analytic; they are comparison baselines).
    """
    if kind is MetricKind.GCD:
        d2 = gcd_squared(p, t)
        m = math.exp(-math.sqrt(d2))
        scale = m / (2.0 * max(math.sqrt(d2), cfg.eps))
        return 1.0 - m, gcd_grad(p, t).scaled(scale)
    if kind is MetricKind.WD:
        gx, gy = wd_center_grad(p, t)
        return wd_squared(p, t), BoxGrad(gx, gy, (p.w - t.w) / 2.0, (p.h - t.h) / 2.0)
    if isinstance(kind, MetricKind):
        loss = 1.0 - metric_eval(kind, p, t, cfg)
        grad = finite_diff_grad(lambda b: 1.0 - metric_eval(kind, b, t, cfg), p)
        return loss, grad
    raise UnknownMetricError(f"no loss defined for kind {kind!r}")
