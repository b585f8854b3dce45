import math

import numpy as np
import pytest

from gcdist import (
    Box,
    InvalidBoxError,
    MetricConfig,
    MetricKind,
    UnknownMetricError,
    affine_apply,
    diou,
    gcd_metric,
    gcd_squared,
    giou,
    iou,
    kld,
    metric_eval,
    nwd,
    pairwise_matrix,
    wd_squared,
)

from conftest import random_box, random_pair

# Frozen goldens, recomputed term by term with exact rational arithmetic
# (fractions.Fraction) for the distances and 30-digit mpmath for the
# exponentials.
P_SHIFT = Box(0, 0, 2, 2)
T_SHIFT = Box(1, 0, 2, 2)
T_GROW = Box(0, 0, 4, 4)
GCD2_SHIFT = 0.25          # exact: 1/8 + 1/8
GCD2_GROW = 0.3125         # exact: 1/4 + 1/16
METRIC_SHIFT = 0.606530659712633  # exp(-1/2)
METRIC_GROW = 0.571770841641787   # exp(-sqrt(5)/4)
NWD_SHIFT_C128 = 0.924848813216205  # exp(-5/64)


class TestGcd:
    def test_identical_boxes_are_at_distance_zero(self):
        b = Box(10, 10, 4, 8)
        assert gcd_squared(b, b) == 0.0
        assert gcd_metric(b, b) == 1.0

    def test_goldens(self):
        assert gcd_squared(P_SHIFT, T_SHIFT) == pytest.approx(GCD2_SHIFT, abs=1e-12)
        assert gcd_squared(P_SHIFT, T_GROW) == pytest.approx(GCD2_GROW, abs=1e-12)
        assert gcd_metric(P_SHIFT, T_SHIFT) == pytest.approx(METRIC_SHIFT, abs=1e-12)
        assert gcd_metric(P_SHIFT, T_GROW) == pytest.approx(METRIC_GROW, abs=1e-12)

    def test_symmetry_and_identity_random(self):
        rng = np.random.default_rng(101)
        for _ in range(2000):
            p, t = random_box(rng), random_box(rng)
            d_pt = gcd_squared(p, t)
            d_tp = gcd_squared(t, p)
            assert abs(d_pt - d_tp) <= 1e-12 * (1.0 + d_pt)
            assert d_pt >= 0.0
            assert gcd_squared(p, p) == 0.0

    def test_nonzero_when_different(self):
        rng = np.random.default_rng(13)
        for _ in range(500):
            p, t = random_pair(rng)
            if p != t:
                assert gcd_squared(p, t) > 0.0
                assert gcd_metric(p, t) < 1.0

    def test_affine_invariance(self):
        rng = np.random.default_rng(23)
        for _ in range(1000):
            p, t = random_pair(rng)
            sx, sy = np.exp(rng.uniform(np.log(0.01), np.log(100.0), size=2))
            dx, dy = rng.uniform(-500.0, 500.0, size=2)
            d = gcd_squared(p, t)
            d_mapped = gcd_squared(
                affine_apply(p, sx, sy, dx, dy), affine_apply(t, sx, sy, dx, dy)
            )
            assert abs(d_mapped - d) <= 1e-9 * max(d, 1e-300)

    def test_metric_range(self):
        rng = np.random.default_rng(29)
        for _ in range(500):
            p, t = random_pair(rng)
            assert 0.0 < gcd_metric(p, t) <= 1.0


class TestWasserstein:
    def test_identical(self):
        b = Box(3, 4, 5, 6)
        assert wd_squared(b, b) == 0.0

    def test_golden(self):
        assert wd_squared(P_SHIFT, T_SHIFT) == pytest.approx(1.0, abs=1e-12)

    def test_scales_quadratically(self):
        # tripling both boxes multiplies the squared distance by 9: the
        # Wasserstein baseline is not scale invariant
        assert wd_squared(Box(0, 0, 6, 6), Box(3, 0, 6, 6)) == pytest.approx(9.0, abs=1e-12)
        rng = np.random.default_rng(31)
        for _ in range(500):
            p, t = random_pair(rng)
            s = np.exp(rng.uniform(np.log(0.01), np.log(100.0)))
            dx, dy = rng.uniform(-500.0, 500.0, size=2)
            base = wd_squared(p, t)
            mapped = wd_squared(affine_apply(p, s, s, dx, dy), affine_apply(t, s, s, dx, dy))
            assert abs(mapped - s * s * base) <= 1e-9 * max(s * s * base, 1e-300)

    def test_symmetry(self):
        rng = np.random.default_rng(37)
        for _ in range(500):
            p, t = random_box(rng), random_box(rng)
            d = wd_squared(p, t)
            assert abs(d - wd_squared(t, p)) <= 1e-12 * (1.0 + d)


class TestNwd:
    def test_identical(self):
        b = Box(1, 2, 3, 4)
        assert nwd(b, b) == 1.0

    def test_goldens(self):
        assert nwd(P_SHIFT, T_SHIFT) == pytest.approx(NWD_SHIFT_C128, abs=1e-12)
        assert nwd(P_SHIFT, T_SHIFT, MetricConfig(nwd_c=1.0)) == pytest.approx(
            math.exp(-1.0), abs=1e-12
        )

    def test_range(self):
        rng = np.random.default_rng(41)
        for _ in range(300):
            p, t = random_pair(rng)
            assert 0.0 < nwd(p, t) <= 1.0


class TestKld:
    def test_identical(self):
        b = Box(9, 9, 2, 3)
        assert kld(b, b) == 0.0

    def test_golden(self):
        # 1/2 (1 + 1 + 4/4 + 0 - 2 + ln 1) = 1/2
        assert kld(P_SHIFT, T_SHIFT) == pytest.approx(0.5, abs=1e-12)

    def test_asymmetric(self):
        assert kld(P_SHIFT, T_GROW) != kld(T_GROW, P_SHIFT)

    def test_nonnegative(self):
        rng = np.random.default_rng(43)
        for _ in range(500):
            p, t = random_pair(rng)
            assert kld(p, t) >= 0.0


class TestIouFamily:
    def test_iou_golden(self):
        # intersection 3x4 = 12, union 32 - 12 = 20
        assert iou(Box(2, 2, 4, 4), Box(3, 2, 4, 4)) == pytest.approx(0.6, abs=1e-12)

    def test_iou_disjoint_is_zero(self):
        assert iou(Box(0, 0, 2, 2), Box(10, 0, 2, 2)) == 0.0

    def test_giou_golden(self):
        # disjoint: IoU 0, enclosing 24, union 8 -> penalty 16/24
        assert giou(Box(0, 0, 2, 2), Box(10, 0, 2, 2)) == pytest.approx(-2.0 / 3.0, abs=1e-12)

    def test_diou_golden(self):
        # IoU 1/3, center distance^2 = 1, enclosing diagonal^2 = 13
        assert diou(P_SHIFT, T_SHIFT) == pytest.approx(1.0 / 3.0 - 1.0 / 13.0, abs=1e-12)

    def test_ranges(self):
        rng = np.random.default_rng(47)
        for _ in range(500):
            p, t = random_pair(rng)
            assert 0.0 <= iou(p, t) <= 1.0
            assert -1.0 <= giou(p, t) <= 1.0
            assert -1.0 <= diou(p, t) <= 1.0

    def test_scale_invariance(self):
        rng = np.random.default_rng(53)
        for _ in range(300):
            p, t = random_pair(rng)
            s = np.exp(rng.uniform(np.log(0.01), np.log(100.0)))
            dx, dy = rng.uniform(-500.0, 500.0, size=2)
            pm, tm = affine_apply(p, s, s, dx, dy), affine_apply(t, s, s, dx, dy)
            for fn in (iou, giou, diou):
                v = fn(p, t)
                assert abs(fn(pm, tm) - v) <= 1e-9 * max(abs(v), 1e-9)


class TestMetricEval:
    def test_identical_boxes_score_one(self):
        b = Box(4, 4, 2, 2)
        assert metric_eval(MetricKind.GCD, b, b) == 1.0

    def test_dispatch_matches_scalar_functions(self):
        cases = {
            MetricKind.GCD: gcd_metric(P_SHIFT, T_SHIFT),
            MetricKind.WD: math.exp(-math.sqrt(wd_squared(P_SHIFT, T_SHIFT))),
            MetricKind.NWD: nwd(P_SHIFT, T_SHIFT),
            MetricKind.KLD: math.exp(-kld(P_SHIFT, T_SHIFT)),
            MetricKind.IOU: iou(P_SHIFT, T_SHIFT),
            MetricKind.GIOU: giou(P_SHIFT, T_SHIFT),
            MetricKind.DIOU: diou(P_SHIFT, T_SHIFT),
        }
        for kind, expected in cases.items():
            assert metric_eval(kind, P_SHIFT, T_SHIFT) == expected

    def test_goldens(self):
        assert metric_eval(MetricKind.IOU, Box(2, 2, 4, 4), Box(3, 2, 4, 4)) == pytest.approx(0.6)
        assert metric_eval(MetricKind.NWD, P_SHIFT, T_SHIFT) == pytest.approx(NWD_SHIFT_C128)

    def test_parse(self):
        assert MetricKind.parse("GCD") is MetricKind.GCD
        assert MetricKind.parse(" diou ") is MetricKind.DIOU
        with pytest.raises(UnknownMetricError, match="nonsense"):
            MetricKind.parse("nonsense")


class TestPairwiseMatrix:
    def test_single_pair(self):
        b = Box(0, 0, 2, 2)
        m = pairwise_matrix([b], [b], MetricKind.GCD)
        assert m.shape == (1, 1) and m[0, 0] == 1.0

    def test_empty_inputs(self):
        b = Box(0, 0, 2, 2)
        assert pairwise_matrix([], [b], MetricKind.IOU).shape == (0, 1)
        assert pairwise_matrix([b], [], MetricKind.IOU).shape == (1, 0)
        assert pairwise_matrix([], [], MetricKind.IOU).shape == (0, 0)

    def test_matches_scalar_calls_elementwise(self):
        rng = np.random.default_rng(59)
        preds = [random_box(rng, w_range=(1, 50), center_range=(-50, 50)) for _ in range(6)]
        gts = [random_box(rng, w_range=(1, 50), center_range=(-50, 50)) for _ in range(4)]
        for kind in MetricKind:
            m = pairwise_matrix(preds, gts, kind)
            for i, p in enumerate(preds):
                for j, t in enumerate(gts):
                    assert m[i, j] == metric_eval(kind, p, t)

    def test_invalid_entry_reports_index(self):
        b = Box(0, 0, 2, 2)
        with pytest.raises(InvalidBoxError, match=r"gts\[1\]"):
            pairwise_matrix([b], [b, "oops"], MetricKind.IOU)
