"""Axis-aligned boxes, their 2-D Gaussian form, and affine maps.

The canonical parametrization throughout the library is the center form
(cx, cy, w, h) in pixels.  Corner form only appears at the data-ingestion
boundary (COCO stores top-left corners).  A box maps to a Gaussian with
mean (cx, cy) and diagonal covariance (w^2/4, h^2/4).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidBoxError, InvalidGaussianError, InvalidTransformError

# Boxes thinner than this are rejected rather than clamped: the metrics
# divide by w^2 and h^2, and clamping would silently corrupt their values.
MIN_DIM = 1e-7


@dataclass(frozen=True)
class Box:
    """Axis-aligned bounding box in center parametrization, pixels."""

    cx: float
    cy: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("cx", "cy", "w", "h"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError) as exc:
                raise InvalidBoxError(f"box field '{name}' is not numeric: {value!r}") from exc
            if not math.isfinite(value):
                raise InvalidBoxError(f"box field '{name}' must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.w < MIN_DIM:
            raise InvalidBoxError(f"box width must be >= {MIN_DIM}, got {self.w!r}")
        if self.h < MIN_DIM:
            raise InvalidBoxError(f"box height must be >= {MIN_DIM}, got {self.h!r}")

    @property
    def size(self) -> float:
        """Geometric side length sqrt(w * h), the size-bucketing statistic."""
        return math.sqrt(self.w * self.h)

    @property
    def area(self) -> float:
        return self.w * self.h

    def corners(self) -> tuple[float, float, float, float]:
        """(x1, y1, x2, y2) corner form."""
        hw = self.w / 2.0
        hh = self.h / 2.0
        return (self.cx - hw, self.cy - hh, self.cx + hw, self.cy + hh)


@dataclass(frozen=True)
class GaussianBox:
    """2-D Gaussian with diagonal covariance representing a box.

    mu is the box center; var_x = w^2/4 and var_y = h^2/4.
    """

    mu_x: float
    mu_y: float
    var_x: float
    var_y: float

    def __post_init__(self):
        for name in ("mu_x", "mu_y", "var_x", "var_y"):
            value = getattr(self, name)
            try:
                value = float(value)
            except (TypeError, ValueError) as exc:
                raise InvalidGaussianError(f"gaussian field '{name}' is not numeric: {value!r}") from exc
            if not math.isfinite(value):
                raise InvalidGaussianError(f"gaussian field '{name}' must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.var_x <= 0.0:
            raise InvalidGaussianError(f"var_x must be positive, got {self.var_x!r}")
        if self.var_y <= 0.0:
            raise InvalidGaussianError(f"var_y must be positive, got {self.var_y!r}")


def box_from_corner(x: float, y: float, w: float, h: float) -> Box:
    """Build a Box from top-left-corner form (x, y, w, h)."""
    box = Box(0.0, 0.0, w, h)  # dimensions validated first so errors name w/h
    return Box(x + box.w / 2.0, y + box.h / 2.0, box.w, box.h)


def to_gaussian(b: Box) -> GaussianBox:
    """Gaussian form of a box: mean = center, variances = (w^2/4, h^2/4)."""
    return GaussianBox(b.cx, b.cy, b.w * b.w / 4.0, b.h * b.h / 4.0)


def from_gaussian(g: GaussianBox) -> Box:
    """Inverse of :func:`to_gaussian`: w = 2*sqrt(var_x), h = 2*sqrt(var_y)."""
    return Box(g.mu_x, g.mu_y, 2.0 * math.sqrt(g.var_x), 2.0 * math.sqrt(g.var_y))


def affine_apply(b: Box, sx: float, sy: float, dx: float, dy: float) -> Box:
    """Apply a positive per-axis scaling plus translation to a box.

    Keeps the box axis-aligned: center maps to (sx*cx + dx, sy*cy + dy),
    dimensions to (sx*w, sy*h).
    """
    for name, s in (("sx", sx), ("sy", sy)):
        if not (isinstance(s, (int, float)) and math.isfinite(s)) or s <= 0.0:
            raise InvalidTransformError(f"scale '{name}' must be a positive finite number, got {s!r}")
    return Box(sx * b.cx + dx, sy * b.cy + dy, sx * b.w, sy * b.h)
