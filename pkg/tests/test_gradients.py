import math

import numpy as np
import pytest

from gcdist import (
    Box,
    InvalidBoxError,
    MetricKind,
    finite_diff_grad,
    gcd_grad,
    gcd_metric,
    gcd_squared,
    iou,
    loss_and_grad,
    metric_eval,
    wd_center_grad,
    wd_squared,
)

from conftest import random_pair

P = Box(0, 0, 2, 2)
T = Box(1, 0, 2, 2)


def grad_close(a: float, n: float, rtol: float = 1e-5, floor: float = 1e-8) -> bool:
    """Relative agreement with an absolute floor for near-zero coordinates."""
    return abs(a - n) <= max(rtol * abs(a), floor)


class TestGcdGrad:
    def test_zero_at_target(self):
        b = Box(5, 6, 3, 4)
        assert gcd_grad(b, b).as_tuple() == (0.0, 0.0, 0.0, 0.0)

    def test_center_golden(self):
        # (wt^2 + wp^2)(xp - xt) / (wt^2 wp^2) = 8 * (-1) / 16
        g = gcd_grad(P, T)
        assert g.d_cx == -0.5
        assert g.d_cy == 0.0

    def test_width_golden_equal_dims(self):
        # with wp = wt the width gradient is exactly -(xp-xt)^2 / wp^3
        g = gcd_grad(P, T)
        assert g.d_w == -0.125
        assert g.d_h == 0.0

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(211)
        for _ in range(2000):
            p, t = random_pair(rng)
            analytic = gcd_grad(p, t)
            numeric = finite_diff_grad(lambda b: gcd_squared(b, t), p)
            for a, n in zip(analytic.as_tuple(), numeric.as_tuple()):
                assert grad_close(a, n)

    def test_degenerate_reduction_exact_on_dyadic_grid(self):
        # dyadic values make every arithmetic step exact, so the reduced
        # forms must match bit for bit
        for w in (0.5, 1.0, 2.0, 4.0, 8.0):
            for d in (-3.0, -0.5, 0.25, 1.0, 2.0):
                p = Box(d, -d, w, 2 * w)
                t = Box(0.0, 0.0, w, 2 * w)
                g = gcd_grad(p, t)
                assert g.d_cx == 2.0 * (d / (w * w))
                assert g.d_cy == 2.0 * (-d / (4.0 * w * w))
                assert g.d_w == -(d * d) / (w * w * w)
                assert g.d_h == -(d * d) / (8.0 * w * w * w)

    def test_degenerate_width_term_vanishes_for_random_sizes(self):
        rng = np.random.default_rng(223)
        for _ in range(500):
            w = float(np.exp(rng.uniform(np.log(0.5), np.log(500.0))))
            h = float(np.exp(rng.uniform(np.log(0.5), np.log(500.0))))
            dx, dy = rng.uniform(-3.0, 3.0, size=2)
            p = Box(dx, dy, w, h)
            t = Box(0.0, 0.0, w, h)
            g = gcd_grad(p, t)
            # the shape coupling factor (wp*wt - wt^2) is exactly zero, so
            # only the center pull remains; mirror the expression order
            assert g.d_w == -(dx * dx) / ((w * w) * w)
            assert g.d_h == -(dy * dy) / ((h * h) * h)

    def test_center_gradient_scale_adaptivity(self):
        # halving both widths multiplies the x pull by exactly 4
        rng = np.random.default_rng(227)
        for _ in range(200):
            p, t = random_pair(rng, w_range=(1.0, 64.0))
            g = gcd_grad(p, t)
            half = gcd_grad(
                Box(p.cx, p.cy, p.w / 2.0, p.h), Box(t.cx, t.cy, t.w / 2.0, t.h)
            )
            assert half.d_cx == 4.0 * g.d_cx


class TestWdCenterGrad:
    def test_zero_at_target(self):
        b = Box(1, 2, 3, 4)
        assert wd_center_grad(b, b) == (0.0, 0.0)

    def test_golden(self):
        assert wd_center_grad(P, T) == (-2.0, 0.0)

    def test_independent_of_dimensions(self):
        # the criticized property: the pull ignores object size entirely
        rng = np.random.default_rng(229)
        for _ in range(200):
            p, t = random_pair(rng)
            g = wd_center_grad(p, t)
            scaled = wd_center_grad(
                Box(p.cx, p.cy, 10 * p.w, 10 * p.h), Box(t.cx, t.cy, 10 * t.w, 10 * t.h)
            )
            assert scaled == g


class TestFiniteDiff:
    def test_near_zero_at_optimum(self):
        t = Box(2, 2, 3, 3)
        g = finite_diff_grad(lambda b: gcd_squared(b, t), t)
        assert all(abs(v) <= 1e-8 for v in g.as_tuple())

    def test_matches_analytic_center(self):
        g = finite_diff_grad(lambda b: gcd_squared(b, T), P, step=1e-5)
        assert abs(g.d_cx - (-0.5)) <= 1e-6

    def test_wd_closed_form(self):
        rng = np.random.default_rng(233)
        for _ in range(200):
            p, t = random_pair(rng, w_range=(1.0, 64.0))
            g = finite_diff_grad(lambda b: wd_squared(b, t), p)
            expected = (
                2.0 * (p.cx - t.cx),
                2.0 * (p.cy - t.cy),
                (p.w - t.w) / 2.0,
                (p.h - t.h) / 2.0,
            )
            for a, b in zip(g.as_tuple(), expected):
                assert abs(a - b) <= 1e-6 * max(abs(b), 1.0)

    def test_reports_offending_coordinate(self):
        thin = Box(0, 0, 2e-6, 1)
        with pytest.raises(InvalidBoxError, match="'w'"):
            finite_diff_grad(lambda b: gcd_squared(b, T), thin, step=1e-5)

    def test_rejects_bad_step(self):
        with pytest.raises(InvalidBoxError, match="step"):
            finite_diff_grad(lambda b: 0.0, P, step=0.0)


class TestLossAndGrad:
    def test_gcd_at_optimum_is_exactly_zero(self):
        b = Box(3, 3, 5, 5)
        loss, g = loss_and_grad(MetricKind.GCD, b, b)
        assert loss == 0.0
        assert g.as_tuple() == (0.0, 0.0, 0.0, 0.0)

    def test_gcd_golden(self):
        loss, g = loss_and_grad(MetricKind.GCD, P, T)
        assert loss == pytest.approx(0.393469340287367, abs=1e-12)  # 1 - exp(-1/2)
        assert g.d_cx == pytest.approx(-0.303265329856317, abs=1e-12)  # -exp(-1/2)/2

    def test_gcd_chain_rule_consistency(self):
        rng = np.random.default_rng(239)
        checked = 0
        while checked < 300:
            p, t = random_pair(rng)
            if gcd_squared(p, t) < 1e-2:
                continue  # keep clear of the sqrt kink, where FD degrades
            checked += 1
            loss, g = loss_and_grad(MetricKind.GCD, p, t)
            assert loss == pytest.approx(1.0 - gcd_metric(p, t), abs=1e-15)
            numeric = finite_diff_grad(lambda b: 1.0 - gcd_metric(b, t), p)
            for a, n in zip(g.as_tuple(), numeric.as_tuple()):
                assert abs(a - n) <= max(1e-5 * abs(a), 1e-7)

    def test_wd_golden(self):
        loss, g = loss_and_grad(MetricKind.WD, P, T)
        assert loss == 1.0
        assert g.as_tuple() == (-2.0, 0.0, 0.0, 0.0)

    def test_finite_difference_kinds(self):
        p, t = Box(2, 2, 4, 4), Box(3, 2, 4, 4)
        for kind in (MetricKind.NWD, MetricKind.KLD, MetricKind.IOU, MetricKind.GIOU, MetricKind.DIOU):
            loss, g = loss_and_grad(kind, p, t)
            assert loss == pytest.approx(1.0 - metric_eval(kind, p, t), abs=1e-15)
            assert all(math.isfinite(v) for v in g.as_tuple())

    def test_nonvanishing_supervision_without_overlap(self):
        # disjoint boxes: IoU supplies no center gradient, the GCD loss does
        rng = np.random.default_rng(241)
        found = 0
        for _ in range(200):
            w = float(rng.uniform(1.0, 8.0))
            gap = float(rng.uniform(2.0, 20.0))
            p = Box(0, 0, w, w)
            t = Box(w + gap, 0, w, w)
            assert iou(p, t) == 0.0
            _, g = loss_and_grad(MetricKind.GCD, p, t)
            assert g.d_cx != 0.0
            _, g_iou = loss_and_grad(MetricKind.IOU, p, t)
            if g_iou.as_tuple() == (0.0, 0.0, 0.0, 0.0):
                found += 1
        assert found == 200  # IoU numeric gradient is identically zero out there

    def test_unknown_kind(self):
        with pytest.raises(Exception):
            loss_and_grad("not-a-kind", P, T)
