"""A tour of the box similarity metrics.

Walks one predicted/target pair through every metric, then demonstrates
the property that motivates the Gaussian Combined Distance: rescale the
whole scene and GCD does not move, while the Wasserstein distance grows
with the square of the scale.

Run: python demos/01_metric_tour.py
"""

from gcdist import (
    Box,
    MetricKind,
    affine_apply,
    gcd_squared,
    metric_eval,
    wd_squared,
)

# A 4 px object whose prediction is off by 1 px: a typical tiny-object miss.
pred = Box(0, 0, 4, 4)
target = Box(1, 0, 4, 4)

print(f"prediction {pred}")
print(f"target     {target}\n")

print("similarity under each metric (1.0 = identical):")
for kind in MetricKind:
    value = metric_eval(kind, pred, target)
    print(f"  {kind.value:>5}: {value:.6f}")

# Now scale the whole scene up 10x, as if the same object were photographed
# closer.  A metric that wants to generalize across object sizes should not
# change: the relative geometry is identical.
print("\nsame scene scaled 10x:")
pred10 = affine_apply(pred, 10, 10, 0, 0)
target10 = affine_apply(target, 10, 10, 0, 0)
for kind in (MetricKind.GCD, MetricKind.IOU, MetricKind.WD, MetricKind.NWD):
    before = metric_eval(kind, pred, target)
    after = metric_eval(kind, pred10, target10)
    marker = "scale invariant" if abs(after - before) < 1e-9 else "CHANGED"
    print(f"  {kind.value:>5}: {before:.6f} -> {after:.6f}   {marker}")

print(f"\nraw squared distances: gcd {gcd_squared(pred, target):.4f} -> "
      f"{gcd_squared(pred10, target10):.4f},  wd {wd_squared(pred, target):.4f} -> "
      f"{wd_squared(pred10, target10):.4f} (x100, quadratic in scale)")
