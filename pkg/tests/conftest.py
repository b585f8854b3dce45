import json

import numpy as np
import pytest

from gcdist import Box


def random_box(rng: np.random.Generator, w_range=(0.5, 500.0), center_range=(-1000.0, 1000.0)) -> Box:
    lo, hi = np.log(w_range[0]), np.log(w_range[1])
    return Box(
        rng.uniform(*center_range),
        rng.uniform(*center_range),
        np.exp(rng.uniform(lo, hi)),
        np.exp(rng.uniform(lo, hi)),
    )


def random_pair(rng: np.random.Generator, w_range=(0.5, 500.0), offset_scale=2.0):
    """A box pair with comparable shapes and a center offset of a few sizes.

    Dimensions span the full w_range but the two boxes stay within a 4x
    aspect of each other and the offset within offset_scale sizes.  That
    keeps the squared distances small (tens, not 1e5), which the central
    finite-difference comparisons need: their rounding noise grows with
    the objective value divided by the step.
    """
    p = random_box(rng, w_range)
    lo, hi = w_range
    wt = min(max(p.w * np.exp(rng.uniform(np.log(0.25), np.log(4.0))), lo), hi)
    ht = min(max(p.h * np.exp(rng.uniform(np.log(0.25), np.log(4.0))), lo), hi)
    dx = rng.uniform(-offset_scale, offset_scale) * (p.w + wt) / 2.0
    dy = rng.uniform(-offset_scale, offset_scale) * (p.h + ht) / 2.0
    return p, Box(p.cx + dx, p.cy + dy, wt, ht)


@pytest.fixture
def coco_file(tmp_path):
    """Factory writing a COCO annotation dict to a temp file."""

    def write(payload: dict, name: str = "annotations.json"):
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path

    return write


# Two images, three annotations, one degenerate (zero width).  Sizes of the
# valid boxes: sqrt(4*4) = 4 and sqrt(16*16) = 16, so the mean size is 10.
SYNTHETIC_COCO = {
    "images": [
        {"id": 1, "width": 100, "height": 100},
        {"id": 2, "width": 64, "height": 64},
    ],
    "annotations": [
        {"image_id": 1, "category_id": 1, "bbox": [0, 0, 4, 4]},
        {"image_id": 2, "category_id": 1, "bbox": [10, 10, 16, 16]},
        {"image_id": 1, "category_id": 2, "bbox": [5, 5, 0, 3]},
    ],
}
