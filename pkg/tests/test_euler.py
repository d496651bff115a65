import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from rarewave.euler import (GasModel, char_speed, connect_end_states,
                            connect_riemann_data, make_riemann_data,
                            rarefaction_fan, riemann_invariant)

gammas = st.floats(min_value=1.0, max_value=3.0)
densities = st.floats(min_value=0.1, max_value=10.0)
velocities = st.floats(min_value=-5.0, max_value=5.0)


class TestGasModel:
    def test_rejects_gamma_below_one(self):
        with pytest.raises(ValueError):
            GasModel(0.9)

    def test_pressure_values(self):
        assert GasModel(2.0).pressure(2.0) == pytest.approx(2.0)
        assert GasModel(1.4).pressure(0.0) == 0.0
        assert GasModel(3.0).pressure(1.0) == pytest.approx(1.0 / 3.0)

    def test_pressure_rejects_negative_density(self):
        with pytest.raises(ValueError):
            GasModel(1.4).pressure(-0.1)

    @given(gammas, densities, densities)
    def test_pressure_strictly_increasing(self, g, r1, r2):
        model = GasModel(g)
        lo, hi = sorted((r1, r2))
        if hi > lo:
            assert model.pressure(hi) > model.pressure(lo)

    @given(gammas, densities)
    def test_sound_speed_squares_to_dp(self, g, rho):
        model = GasModel(g)
        assert model.sound_speed(rho) ** 2 == pytest.approx(model.dp(rho), rel=1e-12)


class TestCharSpeed:
    def test_values(self):
        assert char_speed(GasModel(2.0), 2, 1.0, 0.0) == pytest.approx(1.0)
        assert char_speed(GasModel(3.0), 2, 2.0, -1.0) == pytest.approx(1.0)
        assert char_speed(GasModel(1.4), 1, 1.0, 0.0) == pytest.approx(-1.0)

    def test_rejects_nonpositive_density(self):
        with pytest.raises(ValueError):
            char_speed(GasModel(1.4), 2, 0.0, 1.0)

    def test_rejects_bad_field_index(self):
        with pytest.raises(ValueError):
            char_speed(GasModel(1.4), 3, 1.0, 0.0)

    @given(gammas, densities, velocities)
    def test_speed_gap(self, g, rho, u):
        model = GasModel(g)
        gap = char_speed(model, 2, rho, u) - char_speed(model, 1, rho, u)
        assert gap == pytest.approx(2.0 * rho ** (0.5 * (g - 1.0)), rel=1e-12)
        assert gap > 0.0


class TestRiemannInvariant:
    def test_closed_form_values(self):
        # antiderivative of sqrt(p')/s is rho for gamma=3, 2*sqrt(rho) for
        # gamma=2, ln(rho) at gamma=1
        assert riemann_invariant(GasModel(3.0), 2, 1.0, 0.0) == pytest.approx(-1.0)
        assert riemann_invariant(GasModel(2.0), 2, 4.0, 0.0) == pytest.approx(-4.0)
        assert riemann_invariant(GasModel(1.0), 2, 1.0, 0.0) == pytest.approx(0.0)

    @given(gammas, densities, densities, velocities)
    def test_difference_antisymmetry(self, g, r1, r2, u):
        model = GasModel(g)
        d12 = riemann_invariant(model, 2, r2, u) - riemann_invariant(model, 2, r1, u)
        d21 = riemann_invariant(model, 2, r1, u) - riemann_invariant(model, 2, r2, u)
        assert d12 == -d21

    def test_rejects_nonpositive_density(self):
        with pytest.raises(ValueError):
            riemann_invariant(GasModel(1.4), 2, -1.0, 0.0)


class TestConnectEndStates:
    def test_closed_forms(self):
        assert connect_end_states(GasModel(2.0), 1.0, 0.0, 4.0) == pytest.approx(2.0)
        assert connect_end_states(GasModel(3.0), 1.0, 0.0, 2.0) == pytest.approx(1.0)
        assert connect_end_states(GasModel(1.7), 2.5, 0.7, 2.5) == pytest.approx(0.7)

    def test_rejects_nonpositive_density(self):
        with pytest.raises(ValueError):
            connect_end_states(GasModel(1.4), -1.0, 0.0, 2.0)

    @given(st.floats(min_value=1.01, max_value=3.0), densities, densities, velocities)
    def test_matches_adaptive_quadrature(self, g, rm, rp, um):
        model = GasModel(g)
        quad, _ = integrate.quad(lambda s: np.sqrt(model.dp(s)) / s, rm, rp,
                                 epsabs=1e-13, epsrel=1e-13)
        assert connect_end_states(model, rm, um, rp) == pytest.approx(
            um + quad, abs=1e-10)

    @given(densities, densities, velocities)
    def test_gamma_one_uses_log(self, rm, rp, um):
        got = connect_end_states(GasModel(1.0), rm, um, rp)
        assert got == pytest.approx(um + np.log(rp / rm), rel=1e-12, abs=1e-12)

    @given(st.floats(min_value=1.0, max_value=3.0), densities, densities, velocities)
    def test_connection_is_expansive_iff_density_rises(self, g, rm, rp, um):
        data = connect_riemann_data(GasModel(g), rm, um, rp)
        if rp > rm:
            assert data.w_plus > data.w_minus
        elif rp < rm:
            assert data.w_plus < data.w_minus


class TestMakeRiemannData:
    def test_valid_connection(self):
        data = make_riemann_data(GasModel(2.0), 1.0, 0.0, 4.0, 2.0)
        assert data.valid
        assert data.alpha == pytest.approx(5.0)
        assert data.w_minus == pytest.approx(1.0)
        assert data.w_plus == pytest.approx(4.0)

    def test_degenerate_states_flagged_invalid(self):
        data = make_riemann_data(GasModel(2.0), 1.0, 0.0, 1.0, 0.0)
        assert not data.valid
        assert data.degenerate
        assert data.alpha == 0.0

    def test_compression_flagged_invalid(self):
        data = make_riemann_data(GasModel(2.0), 4.0, 2.0, 1.0, 0.0)
        assert not data.valid
        assert data.w_plus < data.w_minus

    def test_rejects_nonpositive_density(self):
        with pytest.raises(ValueError):
            make_riemann_data(GasModel(1.4), 0.0, 0.0, 1.0, 0.0)


class TestRarefactionFan:
    def test_interior_inversion_gamma3(self):
        model = GasModel(3.0)
        data = connect_riemann_data(model, 1.0, 0.0, 2.0)
        rho, u = rarefaction_fan(model, data, 2.0)
        assert rho == pytest.approx(1.5)
        assert u == pytest.approx(0.5)

    def test_constant_states_outside(self):
        model = GasModel(1.4)
        data = connect_riemann_data(model, 1.0, 0.0, 3.0)
        rho, u = rarefaction_fan(model, data, data.w_minus - 5.0)
        assert (rho, u) == (data.rho_minus, data.u_minus)
        rho, u = rarefaction_fan(model, data, data.w_plus + 5.0)
        assert (rho, u) == (data.rho_plus, data.u_plus)

    def test_rejects_invalid_data(self):
        model = GasModel(1.4)
        data = make_riemann_data(model, 3.0, 1.0, 1.0, 0.0)
        with pytest.raises(ValueError):
            rarefaction_fan(model, data, 0.0)

    def test_degenerate_data_gives_constant(self):
        model = GasModel(1.4)
        data = make_riemann_data(model, 1.5, 0.3, 1.5, 0.3)
        rho, u = rarefaction_fan(model, data, np.linspace(-3, 3, 7))
        assert np.all(rho == 1.5) and np.all(u == 0.3)

    @pytest.mark.parametrize("gamma,rp", [(1.0, 2.0), (1.4, 2.0), (2.0, 4.0), (3.0, 2.5)])
    def test_invariant_constant_and_inversion_consistent(self, gamma, rp):
        model = GasModel(gamma)
        data = connect_riemann_data(model, 1.0, 0.0, rp)
        rng = np.random.default_rng(7)
        xi = rng.uniform(data.w_minus, data.w_plus, 1000)
        rho, u = rarefaction_fan(model, data, xi)
        z0 = riemann_invariant(model, 2, data.rho_minus, data.u_minus)
        assert np.max(np.abs(riemann_invariant(model, 2, rho, u) - z0)) <= 1e-10
        assert np.max(np.abs(char_speed(model, 2, rho, u) - xi)) <= 1e-10

    def test_monotone_and_continuous_in_xi(self):
        model = GasModel(1.4)
        data = connect_riemann_data(model, 1.0, 0.0, 3.0)
        xi = np.linspace(data.w_minus - 1.0, data.w_plus + 1.0, 4001)
        rho, u = rarefaction_fan(model, data, xi)
        assert np.all(np.diff(rho) >= 0.0) and np.all(np.diff(u) >= 0.0)
        # no jump bigger than the local grid scale anywhere
        assert np.max(np.abs(np.diff(rho))) < 5e-3
