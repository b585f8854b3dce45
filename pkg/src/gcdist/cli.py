"""Command-line front end: every experiment, reproducible and scriptable.

Subcommands: metric, sweep, regress, assign, stats, gradcheck.  All output
is deterministic for fixed flags and seed.  Exit codes: 0 success, 1 usage
or flag-parse error, 2 data error (invalid boxes, malformed files), 3
verification failure (gradcheck over tolerance).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .assignment import AssignConfig, assign, gen_anchor_grid
from .boxes import Box
from .data import DEFAULT_BUCKETS, dataset_stats, export_table, load_coco
from .errors import GcdistError
from .gradients import FD_STEP, finite_diff_grad, gcd_grad
from .metrics import MetricConfig, MetricKind, gcd_squared, kld, metric_eval, wd_squared
from .simlab import (
    Parametrization,
    RegressionConfig,
    RegressionObjective,
    run_regression,
    sweep_sensitivity,
)
from .svgplot import Series, write_line_chart
from .table import kv_table

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_VERIFY = 3


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parse_floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _parse_box_tuple(text: str) -> tuple[float, float, float, float]:
    values = _parse_floats(text)
    if len(values) != 4:
        raise argparse.ArgumentTypeError(f"expected cx,cy,w,h (4 numbers), got {text!r}")
    return tuple(values)


def _parse_boxes_list(text: str) -> list[tuple[float, float, float, float]]:
    return [_parse_box_tuple(part) for part in text.split(";") if part.strip()]


def _parse_kinds(text: str) -> list[MetricKind]:
    return [MetricKind.parse(name) for name in text.split(",") if name.strip()]


def _parse_buckets(text: str) -> list[tuple[float, float]]:
    edges = _parse_floats(text)
    if len(edges) < 2:
        raise argparse.ArgumentTypeError(f"need at least two bucket edges, got {text!r}")
    return list(zip(edges, edges[1:]))


def _metric_cfg(args) -> MetricConfig:
    return MetricConfig(nwd_c=args.nwd_c, eps=args.eps)


def _add_metric_flags(p, default_metric: str | None = "gcd"):
    if default_metric is not None:
        p.add_argument("--metric", default=default_metric,
                       help="metric kind (default: %(default)s)")
    p.add_argument("--nwd-c", type=float, default=12.8, dest="nwd_c",
                   help="NWD normalization constant in pixels (default: %(default)s)")
    p.add_argument("--eps", type=float, default=1e-7,
                   help="numerical floor (default: %(default)s)")


def _add_output_flags(p, formats=("csv", "json")):
    p.add_argument("--format", choices=formats, default="csv",
                   help="output format (default: %(default)s)")
    p.add_argument("--out", help="output file path (default: print JSON to stdout)")


def _print_json(payload: dict) -> None:
    print(json.dumps(payload))


def _emit(table, args) -> None:
    if args.out:
        export_table(table, args.format if args.format != "svg" else "json", args.out)
        print(f"wrote {args.out}")
    else:
        _print_json({"columns": table.columns, "rows": table.rows})


# ---------------------------------------------------------------------------
# subcommands


def _cmd_metric(args) -> int:
    kind = MetricKind.parse(args.metric)
    p = Box(*args.pred)
    t = Box(*args.gt)
    cfg = _metric_cfg(args)
    payload = {"metric": kind.value, "value": metric_eval(kind, p, t, cfg)}
    if kind is MetricKind.GCD:
        payload["distance"] = gcd_squared(p, t)
    elif kind in (MetricKind.WD, MetricKind.NWD):
        payload["distance"] = wd_squared(p, t)
    elif kind is MetricKind.KLD:
        payload["distance"] = kld(p, t)
    _print_json(payload)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    kinds = _parse_kinds(args.metrics)
    curves = sweep_sensitivity(args.sizes, args.offsets, kinds, _metric_cfg(args))
    if args.format == "svg":
        if not args.out:
            raise GcdistError("--format svg requires --out")
        series = []
        for i, size in enumerate(curves.sizes):
            for k, kind in enumerate(curves.kinds):
                series.append(
                    Series(
                        f"{kind.value} s={size:g}",
                        list(curves.offsets),
                        [float(v) for v in curves.values[i, :, k]],
                    )
                )
        write_line_chart(args.out, series, "offset (px)", "similarity", "metric vs positional offset")
        print(f"wrote {args.out}")
    else:
        _emit(curves.as_table(), args)
    return EXIT_OK


def _cmd_regress(args) -> int:
    if args.config:
        with open(args.config, "r", encoding="utf-8") as f:
            raw = json.load(f)
        try:
            init = Box(*raw["init"])
            target = Box(*raw["target"])
            kind = MetricKind.parse(raw.get("loss", "gcd"))
            lr = float(raw.get("learning_rate", 0.1))
            steps = int(raw.get("steps", 2000))
            parametrization = Parametrization(raw.get("parametrization", "log_size"))
            objective = RegressionObjective(raw.get("objective", "raw_distance"))
            m_cfg = MetricConfig(nwd_c=float(raw.get("nwd_c", 12.8)), eps=float(raw.get("eps", 1e-7)))
        except (KeyError, TypeError, ValueError) as exc:
            raise GcdistError(f"invalid regression config {args.config}: {exc!r}") from exc
    else:
        if args.init is None or args.target is None:
            raise GcdistError("either --config or both --init and --target are required")
        init = Box(*args.init)
        target = Box(*args.target)
        kind = MetricKind.parse(args.loss)
        lr = args.lr
        steps = args.steps
        parametrization = Parametrization(args.parametrization)
        objective = RegressionObjective(args.objective)
        m_cfg = _metric_cfg(args)
    cfg = RegressionConfig(init, target, kind, lr, steps, parametrization, objective, m_cfg)
    trace = run_regression(cfg)
    if args.format == "svg":
        if not args.out:
            raise GcdistError("--format svg requires --out")
        xs = [float(r.step) for r in trace.records]
        write_line_chart(
            args.out,
            [
                Series("loss", xs, [r.loss for r in trace.records]),
                Series("iou vs target", xs, [r.iou_vs_target for r in trace.records]),
            ],
            "step",
            "value",
            f"{kind.value} regression",
        )
        print(f"wrote {args.out}")
    else:
        _emit(trace.as_table(), args)
    return EXIT_OK


def _cmd_assign(args) -> int:
    kind = MetricKind.parse(args.metric)
    a_cfg = AssignConfig(args.pos_threshold, args.neg_threshold, not args.no_low_quality)
    m_cfg = _metric_cfg(args)
    buckets = args.buckets if args.buckets else DEFAULT_BUCKETS
    if args.coco:
        dataset = load_coco(args.coco)
        boxes_by_image: dict[int, list[Box]] = {}
        for ann in dataset.annotations:
            boxes_by_image.setdefault(ann.image_id, []).append(ann.box)
        totals = {"anchors": 0, "positive": 0, "negative": 0, "ignore": 0, "gts": 0}
        bucket_gts = [0] * (len(buckets) + 1)
        bucket_pos = [0] * (len(buckets) + 1)
        bucket_zero = [0] * (len(buckets) + 1)
        for image in dataset.images:
            gts = boxes_by_image.get(image.id, [])
            anchors = gen_anchor_grid(image.width, image.height, args.stride, args.scales, args.ratios)
            result = assign(anchors, gts, kind, a_cfg, m_cfg)
            totals["anchors"] += len(anchors)
            totals["gts"] += len(gts)
            totals["positive"] += result.num_positive
            totals["negative"] += result.num_negative
            totals["ignore"] += result.num_ignore
            for j, gt in enumerate(gts):
                idx = len(buckets)  # overflow slot
                for b, (lo, hi) in enumerate(buckets):
                    if lo <= gt.size < hi:
                        idx = b
                        break
                bucket_gts[idx] += 1
                bucket_pos[idx] += result.per_gt_positives[j]
                if result.per_gt_positives[j] == 0:
                    bucket_zero[idx] += 1
        pairs = [
            ("metric", kind.value),
            ("images", len(dataset.images)),
            ("anchors", totals["anchors"]),
            ("gts", totals["gts"]),
            ("positive", totals["positive"]),
            ("negative", totals["negative"]),
            ("ignore", totals["ignore"]),
        ]
        for b, (lo, hi) in enumerate(buckets):
            label = f"bucket[{lo:g},{hi:g})"
            mean = bucket_pos[b] / bucket_gts[b] if bucket_gts[b] else 0.0
            pairs.append((f"{label} gts", bucket_gts[b]))
            pairs.append((f"{label} mean_positives", mean))
            pairs.append((f"{label} zero_positive_gts", bucket_zero[b]))
        if bucket_gts[-1]:
            pairs.append(("outside gts", bucket_gts[-1]))
            pairs.append(("outside mean_positives", bucket_pos[-1] / bucket_gts[-1]))
            pairs.append(("outside zero_positive_gts", bucket_zero[-1]))
        _emit(kv_table(pairs), args)
        return EXIT_OK
    if not args.gts:
        raise GcdistError("either --coco or --gts is required")
    gts = [Box(*b) for b in args.gts]
    anchors = gen_anchor_grid(args.img_w, args.img_h, args.stride, args.scales, args.ratios)
    result = assign(anchors, gts, kind, a_cfg, m_cfg)
    pairs = [
        ("metric", kind.value),
        ("anchors", len(anchors)),
        ("gts", len(gts)),
        ("positive", result.num_positive),
        ("negative", result.num_negative),
        ("ignore", result.num_ignore),
    ]
    for j, count in enumerate(result.per_gt_positives):
        pairs.append((f"gt[{j}] positives", count))
    _emit(kv_table(pairs), args)
    return EXIT_OK


def _cmd_stats(args) -> int:
    dataset = load_coco(args.coco)
    stats = dataset_stats(dataset, args.buckets if args.buckets else DEFAULT_BUCKETS)
    base = stats.as_table()
    table = kv_table([("skipped_annotations", dataset.skipped_count)])
    table.rows.extend(base.rows)
    _emit(table, args)
    return EXIT_OK


def _cmd_gradcheck(args) -> int:
    rng = np.random.default_rng(args.seed)
    worst = -1.0
    worst_pair = None
    worst_coord = ""
    for _ in range(args.trials):
        wp = float(np.exp(rng.uniform(np.log(0.5), np.log(500.0))))
        hp = float(np.exp(rng.uniform(np.log(0.5), np.log(500.0))))
        # comparable shapes and offsets of a few sizes keep the objective
        # small enough for accurate central differences at step 1e-5
        wt = min(max(wp * float(np.exp(rng.uniform(np.log(0.25), np.log(4.0)))), 0.5), 500.0)
        ht = min(max(hp * float(np.exp(rng.uniform(np.log(0.25), np.log(4.0)))), 0.5), 500.0)
        cx = float(rng.uniform(-1000.0, 1000.0))
        cy = float(rng.uniform(-1000.0, 1000.0))
        dx = float(rng.uniform(-2.0, 2.0)) * (wp + wt) / 2.0
        dy = float(rng.uniform(-2.0, 2.0)) * (hp + ht) / 2.0
        p = Box(cx, cy, wp, hp)
        t = Box(cx + dx, cy + dy, wt, ht)
        analytic = gcd_grad(p, t)
        numeric = finite_diff_grad(lambda b: gcd_squared(b, t), p, FD_STEP)
        for name, a, n in zip(("cx", "cy", "w", "h"), analytic.as_tuple(), numeric.as_tuple()):
            # relative error with a 1e-8 absolute floor: coordinates whose
            # gradient is tiny are judged on absolute disagreement
            err = abs(a - n) / max(abs(a), 1e-8 / args.tolerance)
            if err > worst:
                worst = err
                worst_pair = (p, t)
                worst_coord = name
    passed = worst <= args.tolerance

    def flat(b: Box) -> list[float]:
        return [b.cx, b.cy, b.w, b.h]

    report = {
        "trials": args.trials,
        "seed": args.seed,
        "tolerance": args.tolerance,
        "max_rel_error": worst,
        "worst_coordinate": worst_coord,
        "worst_pred": flat(worst_pair[0]) if worst_pair else None,
        "worst_target": flat(worst_pair[1]) if worst_pair else None,
        "passed": passed,
    }
    _print_json(report)
    if args.out:
        pairs = [(k, json.dumps(v) if not isinstance(v, (int, float, str)) else v)
                 for k, v in report.items()]
        export_table(kv_table(pairs), args.format, args.out)
    return EXIT_OK if passed else EXIT_VERIFY


# ---------------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="gcdist", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("metric",
                       help="evaluate one metric on a single box pair")
    p.add_argument("--pred", type=_parse_box_tuple, required=True, help="predicted box cx,cy,w,h")
    p.add_argument("--gt", type=_parse_box_tuple, required=True, help="target box cx,cy,w,h")
    _add_metric_flags(p)
    p.set_defaults(func=_cmd_metric)

    p = sub.add_parser("sweep",
                       help="similarity vs positional offset per object size")
    p.add_argument("--sizes", type=_parse_floats, required=True, help="box sizes, comma separated")
    p.add_argument("--offsets", type=_parse_floats, required=True, help="center offsets, comma separated")
    p.add_argument("--metrics", required=True, help="metric kinds, comma separated")
    _add_metric_flags(p, default_metric=None)
    _add_output_flags(p, formats=("csv", "json", "svg"))
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("regress",
                       help="gradient-descent box regression under one loss")
    p.add_argument("--config", help="JSON config file (overrides the individual flags)")
    p.add_argument("--init", type=_parse_box_tuple, help="initial box cx,cy,w,h")
    p.add_argument("--target", type=_parse_box_tuple, help="target box cx,cy,w,h")
    p.add_argument("--loss", default="gcd", help="loss metric kind (default: %(default)s)")
    p.add_argument("--lr", type=float, default=0.1, help="learning rate (default: %(default)s)")
    p.add_argument("--steps", type=int, default=2000, help="descent steps (default: %(default)s)")
    p.add_argument("--parametrization", choices=[v.value for v in Parametrization],
                   default="log_size", help="descent coordinates (default: %(default)s)")
    p.add_argument("--objective", choices=[v.value for v in RegressionObjective],
                   default="raw_distance",
                   help="GCD scalarization to descend on (default: %(default)s)")
    _add_metric_flags(p, default_metric=None)
    _add_output_flags(p, formats=("csv", "json", "svg"))
    p.set_defaults(func=_cmd_regress)

    p = sub.add_parser("assign",
                       help="metric-driven label assignment on anchor grids")
    p.add_argument("--coco", help="COCO annotation file; assigns every image")
    p.add_argument("--gts", type=_parse_boxes_list,
                   help="synthetic ground truths as 'cx,cy,w,h;cx,cy,w,h;...'")
    p.add_argument("--img-w", type=float, default=64.0, dest="img_w",
                   help="synthetic image width (default: %(default)s)")
    p.add_argument("--img-h", type=float, default=64.0, dest="img_h",
                   help="synthetic image height (default: %(default)s)")
    p.add_argument("--stride", type=float, default=8.0, help="anchor stride (default: %(default)s)")
    p.add_argument("--scales", type=_parse_floats, default=[8.0],
                   help="anchor scales (default: 8)")
    p.add_argument("--ratios", type=_parse_floats, default=[0.5, 1.0, 2.0],
                   help="anchor aspect ratios (default: 0.5,1,2)")
    p.add_argument("--pos-threshold", type=float, default=0.7, dest="pos_threshold",
                   help="positive threshold (default: %(default)s)")
    p.add_argument("--neg-threshold", type=float, default=0.3, dest="neg_threshold",
                   help="negative threshold (default: %(default)s)")
    p.add_argument("--no-low-quality", action="store_true", dest="no_low_quality",
                   help="disable forcing each gt's best anchor positive")
    p.add_argument("--buckets", type=_parse_buckets,
                   help="size bucket edges, e.g. 2,8,16,32 (default: 2,8,16,32)")
    _add_metric_flags(p, default_metric="iou")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_assign)

    p = sub.add_parser("stats",
                       help="dataset size statistics from a COCO file")
    p.add_argument("--coco", required=True, help="COCO annotation file")
    p.add_argument("--buckets", type=_parse_buckets,
                   help="size bucket edges, e.g. 2,8,16,32 (default: 2,8,16,32)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_stats)

    p = sub.add_parser("gradcheck",
                       help="verify the analytic gradient against finite differences")
    p.add_argument("--trials", type=int, default=1000, help="random pairs (default: %(default)s)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default: %(default)s)")
    p.add_argument("--tolerance", type=float, default=1e-5,
                   help="max relative error allowed (default: %(default)s)")
    _add_output_flags(p)
    p.set_defaults(func=_cmd_gradcheck)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except GcdistError as exc:
        print(f"gcdist: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, json.JSONDecodeError) as exc:
        print(f"gcdist: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
