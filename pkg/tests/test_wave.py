import numpy as np
import pytest
from hypothesis import given, strategies as st

from rarewave import burgers
from rarewave.euler import (GasModel, char_speed, connect_riemann_data,
                            make_riemann_data, riemann_invariant)
from rarewave.wave import (PROFILE_CSV_COLUMNS, derivative_norms, euler_residual,
                           evaluate_wave, sample_profile, sup_distance_to_fan)


def wave_case(gamma=1.4, rho_plus=2.0):
    model = GasModel(gamma)
    return model, connect_riemann_data(model, 1.0, 0.0, rho_plus)


class TestEvaluateWave:
    def test_far_field_limits(self):
        model, data = wave_case(3.0)
        left = evaluate_wave(model, data, 2.0, -1e6)
        right = evaluate_wave(model, data, 2.0, 1e6)
        assert left.rho == pytest.approx(data.rho_minus, abs=1e-12)
        assert left.u == pytest.approx(data.u_minus, abs=1e-12)
        assert right.rho == pytest.approx(data.rho_plus, abs=1e-12)
        assert right.u == pytest.approx(data.u_plus, abs=1e-12)

    def test_midfan_closed_form_gamma3(self):
        # gamma=3 wave (1,0)->(2,1): w spans [1,3]; at the point where w=2 the
        # inversion gives rho=(w+1)/2, u=(w-1)/2
        model, data = wave_case(3.0)
        t = 1.0
        x = (1.0 + t) * 2.0  # odd symmetry puts w=2 at foot point 0
        f = evaluate_wave(model, data, t, x)
        assert f.rho == pytest.approx(1.5, abs=1e-12)
        assert f.u == pytest.approx(0.5, abs=1e-12)

    @given(st.sampled_from([1.0, 1.4, 2.0, 3.0]),
           st.floats(0.0, 100.0), st.floats(-200.0, 300.0))
    def test_slope_identities(self, gamma, t, x):
        model, data = wave_case(gamma)
        f = evaluate_wave(model, data, t, x)
        w, wx, _, _ = burgers.evaluate(
            burgers.BurgersWave(data.w_minus, data.w_plus), 1.0 + t, x)
        assert f.u_x == pytest.approx(2.0 / (gamma + 1.0) * wx, rel=1e-10)
        assert f.rho_x == pytest.approx(f.rho ** (0.5 * (3.0 - gamma)) * f.u_x,
                                        rel=1e-10)
        assert f.u_x > 0.0
        assert data.rho_minus <= f.rho <= data.rho_plus

    @given(st.sampled_from([1.0, 1.4, 2.0]), st.floats(0.0, 50.0),
           st.floats(-100.0, 150.0))
    def test_frozen_invariant_and_speed(self, gamma, t, x):
        model, data = wave_case(gamma)
        f = evaluate_wave(model, data, t, x)
        z0 = riemann_invariant(model, 2, data.rho_minus, data.u_minus)
        assert riemann_invariant(model, 2, f.rho, f.u) == pytest.approx(z0, abs=1e-10)
        w = burgers.evaluate(burgers.BurgersWave(data.w_minus, data.w_plus),
                             1.0 + t, x)[0]
        assert char_speed(model, 2, f.rho, f.u) == pytest.approx(w, abs=1e-10)

    @pytest.mark.parametrize("gamma", [1.0, 1.4, 2.4])
    def test_derivatives_match_finite_differences(self, gamma):
        model, data = wave_case(gamma)
        t, x, h = 2.0, 0.8, 1e-4
        f = evaluate_wave(model, data, t, x)
        fp = evaluate_wave(model, data, t, x + h)
        fm = evaluate_wave(model, data, t, x - h)
        fp2 = evaluate_wave(model, data, t, x + 2 * h)
        fm2 = evaluate_wave(model, data, t, x - 2 * h)
        for name, v, d in (("rho", (fm2.rho, fm.rho, f.rho, fp.rho, fp2.rho),
                            (f.rho_x, f.rho_xx, f.rho_xxx)),
                           ("u", (fm2.u, fm.u, f.u, fp.u, fp2.u),
                            (f.u_x, f.u_xx, f.u_xxx))):
            assert (v[3] - v[1]) / (2 * h) == pytest.approx(d[0], rel=1e-6, abs=1e-9)
            assert (v[3] - 2 * v[2] + v[1]) / h ** 2 == pytest.approx(
                d[1], rel=1e-4, abs=1e-7)
            assert (v[4] - 2 * v[3] + 2 * v[1] - v[0]) / (2 * h ** 3) == pytest.approx(
                d[2], rel=1e-2, abs=1e-3)

    def test_degenerate_data_is_constant(self):
        model = GasModel(1.4)
        data = make_riemann_data(model, 1.5, 0.2, 1.5, 0.2)
        f = evaluate_wave(model, data, 3.0, np.linspace(-5, 5, 11))
        assert np.all(f.rho == 1.5) and np.all(f.u == 0.2)
        assert np.all(f.rho_x == 0.0) and np.all(f.u_x == 0.0)

    def test_rejects_invalid_or_mismatched(self):
        model = GasModel(1.4)
        compress = make_riemann_data(model, 3.0, 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            evaluate_wave(model, compress, 1.0, 0.0)
        _, data = wave_case(1.4)
        with pytest.raises(ValueError):
            evaluate_wave(GasModel(2.0), data, 1.0, 0.0)


class TestSampleProfile:
    def test_far_field_two_point_grid(self):
        model, data = wave_case(2.0, rho_plus=4.0)
        prof = sample_profile(model, data, 1.0, [-1e6, 1e6])
        assert prof.rho_bar[0] == pytest.approx(data.rho_minus, abs=1e-12)
        assert prof.rho_bar[1] == pytest.approx(data.rho_plus, abs=1e-12)

    def test_singleton_grid_allowed(self):
        model, data = wave_case()
        prof = sample_profile(model, data, 0.5, [0.3])
        assert prof.rho_bar.shape == (1,)

    def test_rejects_non_monotone_grid(self):
        model, data = wave_case()
        with pytest.raises(ValueError):
            sample_profile(model, data, 0.5, [0.0, 1.0, 0.5])

    def test_velocity_strictly_increasing_at_t0(self):
        model, data = wave_case()
        prof = sample_profile(model, data, 0.0, np.linspace(-10, 10, 401))
        assert np.all(np.diff(prof.u_bar) > 0.0)

    def test_profile_invariants(self):
        model, data = wave_case(1.4)
        prof = sample_profile(model, data, 2.0, np.linspace(-30, 60, 500))
        assert np.all(prof.rho_bar >= data.rho_minus - 1e-12)
        assert np.all(prof.rho_bar <= data.rho_plus + 1e-12)
        assert np.all(prof.u_bar_x > 0.0)
        lhs = prof.rho_bar_x
        rhs = prof.rho_bar ** (0.5 * (3.0 - 1.4)) * prof.u_bar_x
        assert np.max(np.abs(lhs - rhs)) <= 1e-10 * np.max(np.abs(prof.u_bar_x))

    def test_csv_round_trip(self, tmp_path):
        model, data = wave_case()
        prof = sample_profile(model, data, 1.0, np.linspace(-5, 10, 7))
        path = tmp_path / "profile.csv"
        prof.write_csv(path)
        rows = path.read_text().strip().splitlines()
        assert rows[0] == ",".join(PROFILE_CSV_COLUMNS)
        got = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
        assert np.allclose(got[:, 1], prof.rho_bar, rtol=1e-15)
        assert np.allclose(got[:, 8], prof.u_bar_xxx, rtol=1e-15)


class TestEulerResidual:
    def test_degenerate_is_exact(self):
        model = GasModel(1.4)
        data = make_riemann_data(model, 1.0, 0.0, 1.0, 0.0)
        r_mass, r_mom = euler_residual(model, data, 1.0, np.linspace(-5, 5, 50), 1e-3)
        assert r_mass == 0.0 and r_mom == 0.0

    def test_second_order_in_probe(self):
        model, data = wave_case(2.0, rho_plus=4.0)
        grid = np.linspace(-10, 25, 301)
        r1 = max(euler_residual(model, data, 1.0, grid, 2e-3))
        r2 = max(euler_residual(model, data, 1.0, grid, 1e-3))
        assert r1 / r2 == pytest.approx(4.0, rel=0.25)

    def test_residual_floor(self):
        model, data = wave_case(2.0, rho_plus=4.0)
        grid = np.linspace(-10, 25, 301)
        assert max(euler_residual(model, data, 1.0, grid, 1e-4)) < 1e-6 * data.alpha

    def test_requires_probe_inside_time(self):
        model, data = wave_case()
        with pytest.raises(ValueError):
            euler_residual(model, data, 1.0, [0.0], 1.0)


class TestDerivativeNorms:
    def test_total_variation_of_velocity(self):
        model, data = wave_case(1.4, rho_plus=3.0)
        for t in (0.0, 5.0):
            norms = derivative_norms(model, data, t, 1, 1)
            assert norms.u == pytest.approx(data.u_plus - data.u_minus, rel=1e-9)
            assert norms.rho == pytest.approx(data.rho_plus - data.rho_minus, rel=1e-9)

    def test_degenerate_is_zero(self):
        model = GasModel(1.4)
        data = make_riemann_data(model, 1.0, 0.0, 1.0, 0.0)
        assert derivative_norms(model, data, 1.0, 1, 2) == (0.0, 0.0)

    def test_sup_norm_against_dense_scan(self):
        model, data = wave_case(1.4)
        t = 3.0
        prof = sample_profile(model, data, t, np.linspace(-80, 160, 600_001))
        norms = derivative_norms(model, data, t, 1, np.inf)
        assert norms.u == pytest.approx(np.max(prof.u_bar_x), rel=1e-7)
        assert norms.rho == pytest.approx(np.max(prof.rho_bar_x), rel=1e-7)

    def test_large_time_sup_decays_inversely(self):
        model, data = wave_case()
        n200 = derivative_norms(model, data, 200.0, 1, np.inf).u
        n400 = derivative_norms(model, data, 401.0, 1, np.inf).u
        assert n200 / n400 == pytest.approx(2.0, rel=0.05)


def test_sup_distance_to_fan_shrinks():
    model, data = wave_case(1.4)
    sups = [sup_distance_to_fan(model, data, t, n=400_001) for t in (1.0, 4.0, 16.0)]
    assert all(b < a for a, b in zip(sups, sups[1:]))
