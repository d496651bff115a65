import numpy as np
import pytest
from hypothesis import given, strategies as st

from rarewave.burgers import (BurgersWave, evaluate, fan, foot_point,
                              lp_norm_of_derivative, sup_distance_to_fan)

speeds = st.tuples(st.floats(-3.0, 3.0), st.floats(-3.0, 3.0)).filter(
    lambda p: p[1] - p[0] > 0.05)
times = st.floats(min_value=0.0, max_value=1000.0)
positions = st.floats(min_value=-500.0, max_value=500.0)


def bisect_foot(wave, t, x, tol=1e-12):
    # independent oracle for the characteristic foot point
    lo, hi = x - t * wave.w_plus, x - t * wave.w_minus
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid + t * wave.initial(mid) - x > 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


class TestBurgersWave:
    def test_requires_expanding_speeds(self):
        with pytest.raises(ValueError):
            BurgersWave(1.0, 1.0)

    def test_initial_profile(self):
        w = BurgersWave(-1.0, 3.0)
        assert w.mid == 1.0 and w.half_gap == 2.0 and w.gap == 4.0
        x = np.linspace(-5, 5, 101)
        assert np.all(np.diff(w.initial(x)) > 0.0)
        assert np.allclose(w.initial_dx(x), w.half_gap / np.cosh(x) ** 2, rtol=1e-12)


class TestFan:
    def test_branches(self):
        w = BurgersWave(-1.0, 1.0)
        assert fan(w, 2.0, 1.0) == pytest.approx(0.5)
        assert fan(w, 1.0, -3.0) == -1.0
        assert fan(BurgersWave(0.0, 2.0), 1.0, 5.0) == 2.0

    def test_requires_positive_time(self):
        with pytest.raises(ValueError):
            fan(BurgersWave(-1.0, 1.0), 0.0, 1.0)


class TestEvaluate:
    def test_odd_symmetry_pins_origin(self):
        w = BurgersWave(-1.0, 1.0)
        for t in (0.0, 0.5, 3.0, 50.0):
            assert evaluate(w, t, 0.0)[0] == pytest.approx(0.0, abs=1e-12)

    def test_initial_data_at_t0(self):
        w = BurgersWave(0.2, 1.7)
        x = np.linspace(-3, 3, 11)
        val, dx1, _, _ = evaluate(w, 0.0, x)
        assert np.allclose(val, w.initial(x), rtol=1e-14)
        assert np.allclose(dx1, w.initial_dx(x), rtol=1e-14)

    def test_against_bisection_oracle(self):
        w = BurgersWave(0.0, 1.0)
        x0 = bisect_foot(w, 1.0, 1.0)
        assert evaluate(w, 1.0, 1.0)[0] == pytest.approx(w.initial(x0), abs=1e-10)

    def test_rejects_bad_tolerance_and_time(self):
        w = BurgersWave(-1.0, 1.0)
        with pytest.raises(ValueError):
            evaluate(w, 1.0, 0.0, tol=0.0)
        with pytest.raises(ValueError):
            evaluate(w, -0.5, 0.0)

    @given(speeds, times, st.floats(-15.0, 15.0))
    def test_bounds_and_expansion(self, sp, t, offset):
        # probe through the foot point so strictness is representable:
        # beyond |x0| ~ 19 the tanh profile saturates to the end speeds in
        # double precision
        w = BurgersWave(*sp)
        x = offset + t * w.initial(offset)
        val, dx1, _, _ = evaluate(w, t, x)
        assert w.w_minus < val < w.w_plus
        assert dx1 > 0.0

    @given(speeds, times, positions)
    def test_bounds_inclusive_globally(self, sp, t, x):
        w = BurgersWave(*sp)
        val, dx1, _, _ = evaluate(w, t, x)
        assert w.w_minus <= val <= w.w_plus
        assert dx1 >= 0.0

    def test_derivatives_match_finite_differences(self):
        w = BurgersWave(-0.7, 1.3)
        t, x = 3.7, 1.1
        val, d1, d2, d3 = evaluate(w, t, x)
        h = 1e-3
        stencil = [evaluate(w, t, x + k * h)[0] for k in (-2, -1, 0, 1, 2)]
        fd1 = (stencil[3] - stencil[1]) / (2 * h)
        fd2 = (stencil[3] - 2 * stencil[2] + stencil[1]) / h ** 2
        fd3 = (stencil[4] - 2 * stencil[3] + 2 * stencil[1] - stencil[0]) / (2 * h ** 3)
        assert d1 == pytest.approx(fd1, abs=5e-6)
        assert d2 == pytest.approx(fd2, abs=5e-6)
        assert d3 == pytest.approx(fd3, abs=5e-4)

    def test_solves_the_conservation_law(self):
        # centered time differencing of the solution gives w_t = -w w_x at O(dt^2)
        w = BurgersWave(-1.0, 1.0)
        t, x = 2.0, 0.7
        val, d1, _, _ = evaluate(w, t, x)
        resid = []
        for dt in (1e-3, 5e-4):
            wt = (evaluate(w, t + dt, x)[0] - evaluate(w, t - dt, x)[0]) / (2 * dt)
            resid.append(abs(wt + val * d1))
        assert resid[0] < 1e-6
        assert resid[1] < 0.3 * resid[0]  # shrinks roughly like dt^2

    def test_foot_point_bracket(self):
        w = BurgersWave(-1.0, 1.0)
        t = 7.0
        x = np.linspace(-20, 20, 41)
        x0 = foot_point(w, t, x)
        assert np.all(x0 >= x - t * w.w_plus)
        assert np.all(x0 <= x - t * w.w_minus)


class TestLpNorms:
    def test_total_variation_identity(self):
        w = BurgersWave(-1.0, 1.0)
        for t in (0.0, 1.0, 37.0):
            assert lp_norm_of_derivative(w, t, 1, 1) == pytest.approx(w.gap, rel=1e-10)

    def test_sup_of_initial_slope(self):
        w = BurgersWave(-1.5, 0.5)
        assert lp_norm_of_derivative(w, 0.0, 1, np.inf) == pytest.approx(
            w.half_gap, rel=1e-9)

    def test_rejects_small_exponent(self):
        with pytest.raises(ValueError):
            lp_norm_of_derivative(BurgersWave(-1.0, 1.0), 1.0, 1, 0.5)

    def test_rejects_bad_order(self):
        with pytest.raises(ValueError):
            lp_norm_of_derivative(BurgersWave(-1.0, 1.0), 1.0, 4, 2)

    def test_l2_against_midpoint_rule_oracle(self):
        # independent quadrature path: uniform midpoint rule in physical x
        w = BurgersWave(-1.0, 1.0)
        t = 100.0
        lo = w.w_minus * (1 + t) - 45.0
        hi = w.w_plus * (1 + t) + 45.0
        n = 400_000
        xs = lo + (np.arange(n) + 0.5) * (hi - lo) / n
        wx = evaluate(w, t, xs)[1]
        oracle = np.sqrt(np.sum(wx ** 2) * (hi - lo) / n)
        assert lp_norm_of_derivative(w, t, 1, 2) == pytest.approx(oracle, rel=1e-8)

    def test_order23_sup_against_dense_scan(self):
        w = BurgersWave(-1.0, 1.0)
        t = 25.0
        xs = np.linspace(w.w_minus * (1 + t) - 45, w.w_plus * (1 + t) + 45, 800_001)
        _, _, wxx, wxxx = evaluate(w, t, xs)
        assert lp_norm_of_derivative(w, t, 2, np.inf) == pytest.approx(
            np.max(np.abs(wxx)), rel=1e-6)
        assert lp_norm_of_derivative(w, t, 3, np.inf) == pytest.approx(
            np.max(np.abs(wxxx)), rel=1e-6)


def test_sup_distance_to_fan_shrinks():
    w = BurgersWave(-1.0, 1.0)
    sups = [sup_distance_to_fan(w, t, n=400_001) for t in (1.0, 4.0, 16.0, 64.0)]
    assert all(b < a for a, b in zip(sups, sups[1:]))
