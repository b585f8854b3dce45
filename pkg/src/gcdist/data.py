"""COCO-format annotation ingestion, size statistics, and table export.

Annotation files are standard COCO JSON: a top-level "images" list with
id/width/height and an "annotations" list with image_id/category_id/bbox,
where bbox is [x, y, w, h] in top-left-corner form.  Extra fields are
ignored.  Degenerate annotations (w or h below the minimum box dimension)
are skipped and counted rather than treated as errors; real files contain
zero-area boxes and a hard failure would block statistics.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path

from .boxes import MIN_DIM, Box, box_from_corner
from .errors import CocoFormatError, ConfigError
from .table import Table, kv_table

# Size buckets (pixels, by sqrt(w*h)) used for tiny-object reporting:
# very tiny, tiny, small.
DEFAULT_BUCKETS = [(2.0, 8.0), (8.0, 16.0), (16.0, 32.0)]


@dataclass(frozen=True)
class ImageInfo:
    id: int
    width: float
    height: float


@dataclass(frozen=True)
class Annotation:
    image_id: int
    category_id: int
    box: Box


@dataclass(frozen=True)
class Dataset:
    images: tuple[ImageInfo, ...]
    annotations: tuple[Annotation, ...]
    skipped_count: int


def _require(mapping: dict, key: str, where: str):
    if key not in mapping:
        raise CocoFormatError(f"{where} is missing required field '{key}'")
    return mapping[key]


def load_coco(path: str | Path) -> Dataset:
    """Load a COCO annotation file into center-form boxes.

    Degenerate annotations are skipped and tallied in ``skipped_count``.
    An annotation referencing an unknown image id is a structural error.
    """
    with open(path, "r", encoding="utf-8") as f:
        try:
            raw = json.load(f)
        except json.JSONDecodeError as exc:
            raise CocoFormatError(f"{path}: not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise CocoFormatError(f"{path}: top level must be a JSON object")
    images = []
    image_ids = set()
    for i, entry in enumerate(raw.get("images", [])):
        info = ImageInfo(
            _require(entry, "id", f"images[{i}]"),
            _require(entry, "width", f"images[{i}]"),
            _require(entry, "height", f"images[{i}]"),
        )
        images.append(info)
        image_ids.add(info.id)
    annotations = []
    skipped = 0
    for i, entry in enumerate(raw.get("annotations", [])):
        image_id = _require(entry, "image_id", f"annotations[{i}]")
        category_id = _require(entry, "category_id", f"annotations[{i}]")
        bbox = _require(entry, "bbox", f"annotations[{i}]")
        if image_id not in image_ids:
            raise CocoFormatError(f"annotations[{i}] references unknown image_id {image_id!r}")
        if not (isinstance(bbox, list) and len(bbox) == 4):
            raise CocoFormatError(f"annotations[{i}] bbox must be [x, y, w, h], got {bbox!r}")
        x, y, w, h = bbox
        if not all(isinstance(v, (int, float)) and math.isfinite(v) for v in bbox):
            raise CocoFormatError(f"annotations[{i}] bbox has non-numeric entries: {bbox!r}")
        if w < MIN_DIM or h < MIN_DIM:
            skipped += 1
            continue
        annotations.append(Annotation(image_id, category_id, box_from_corner(x, y, w, h)))
    return Dataset(tuple(images), tuple(annotations), skipped)


@dataclass(frozen=True)
class SizeStats:
    """Dataset size statistics by sqrt(w*h) per annotation."""

    buckets: tuple[tuple[float, float], ...]
    histogram: tuple[int, ...]
    outside: int  # annotations whose size falls in no configured bucket
    total: int
    mean_size: float  # nan when the dataset is empty
    mean_defined: bool

    def as_table(self) -> Table:
        pairs: list[tuple[str, object]] = [
            ("total", self.total),
            ("mean_size", self.mean_size if self.mean_defined else ""),
            ("mean_defined", int(self.mean_defined)),
        ]
        for (lo, hi), count in zip(self.buckets, self.histogram):
            pairs.append((f"bucket[{lo:g},{hi:g})", count))
        pairs.append(("outside", self.outside))
        return kv_table(pairs)


def dataset_stats(d: Dataset, buckets: list[tuple[float, float]] | None = None) -> SizeStats:
    """Mean object size and half-open size-bucket histogram.

    An empty dataset is not an error: total is 0, the mean is undefined
    (nan, flagged).  Sizes outside every bucket land in ``outside`` so the
    histogram plus outside always sums to total.
    """
    if buckets is None:
        buckets = DEFAULT_BUCKETS
    for lo, hi in buckets:
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise ConfigError(f"bucket [{lo!r}, {hi!r}) is not a valid half-open range")
    for (_, hi_a), (lo_b, _) in zip(buckets, buckets[1:]):
        if lo_b < hi_a:
            raise ConfigError("buckets overlap or are unordered")
    histogram = [0] * len(buckets)
    outside = 0
    total = 0
    size_sum = 0.0
    for ann in d.annotations:
        size = ann.box.size
        total += 1
        size_sum += size
        for b, (lo, hi) in enumerate(buckets):
            if lo <= size < hi:
                histogram[b] += 1
                break
        else:
            outside += 1
    if total == 0:
        return SizeStats(tuple(buckets), tuple(histogram), 0, 0, math.nan, False)
    return SizeStats(tuple(buckets), tuple(histogram), outside, total, size_sum / total, True)


def export_table(rows, fmt: str, path: str | Path) -> None:
    """Write a result table as CSV or JSON.

    ``rows`` is a :class:`Table` or any result object with ``as_table()``
    (Curves, Trace, AssignResult, SizeStats).  CSV output has a header row
    and RFC-4180-style quoting; JSON output is an object with "columns"
    and "rows" keys.  Numbers keep their shortest round-trip form, so
    identical inputs produce byte-identical files.
    """
    table = rows if isinstance(rows, Table) else rows.as_table()
    fmt = fmt.strip().lower()
    if fmt == "csv":
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(table.columns)
            writer.writerows(table.rows)
    elif fmt == "json":
        with open(path, "w", encoding="utf-8") as f:
            json.dump({"columns": table.columns, "rows": table.rows}, f, indent=2)
            f.write("\n")
    else:
        raise ConfigError(f"unknown export format {fmt!r}; expected 'csv' or 'json'")
