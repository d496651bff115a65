"""Exact wave algebra for the 1D isentropic Euler system.

Thermodynamics of the polytropic gas, characteristic speeds, Riemann
invariants, the 2-rarefaction connection between two constant states,
and the self-similar rarefaction fan.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Relative tolerance on matching the 2-invariant of the two end states;
# double-precision noise floor.
INVARIANT_MATCH_RTOL = 1e-12


def _as_float(x):
    """Return a plain float for scalar input, ndarray otherwise."""
    if np.isscalar(x) or (isinstance(x, np.ndarray) and x.ndim == 0):
        return float(x)
    return x


@dataclass(frozen=True)
class GasModel:
    """Polytropic gas with pressure rho**gamma / gamma, gamma >= 1."""

    gamma: float

    def __post_init__(self):
        if not self.gamma >= 1.0:
            raise ValueError(f"adiabatic exponent must satisfy gamma >= 1, got {self.gamma}")

    def pressure(self, rho):
        """Pressure p(rho) = rho**gamma / gamma (vacuum rho=0 allowed)."""
        rho = np.asarray(rho, dtype=float)
        if np.any(rho < 0.0):
            raise ValueError("density must be nonnegative")
        return _as_float(rho ** self.gamma / self.gamma)

    def dp(self, rho):
        """Derivative p'(rho) = rho**(gamma-1), rho > 0."""
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0.0):
            raise ValueError("density must be positive")
        return _as_float(rho ** (self.gamma - 1.0))

    def sound_speed(self, rho):
        """Sound speed c(rho) = sqrt(p'(rho)) = rho**((gamma-1)/2)."""
        rho = np.asarray(rho, dtype=float)
        if np.any(rho <= 0.0):
            raise ValueError("density must be positive")
        return _as_float(rho ** (0.5 * (self.gamma - 1.0)))


def char_speed(model: GasModel, i: int, rho, u):
    """Characteristic speed of field i: u - c for i=1, u + c for i=2."""
    if i not in (1, 2):
        raise ValueError(f"field index must be 1 or 2, got {i}")
    c = model.sound_speed(rho)
    return _as_float(u + c if i == 2 else u - c)


def _invariant_integral(model: GasModel, rho):
    """Antiderivative of sqrt(p'(s))/s: 2/(gamma-1)*rho**((gamma-1)/2), ln(rho) at gamma=1.

    The additive constant is fixed by this choice; only differences enter
    the wave connection, so the convention is free.
    """
    rho = np.asarray(rho, dtype=float)
    if np.any(rho <= 0.0):
        raise ValueError("density must be positive")
    g = model.gamma
    if g > 1.0:
        return 2.0 / (g - 1.0) * rho ** (0.5 * (g - 1.0))
    return np.log(rho)


def riemann_invariant(model: GasModel, i: int, rho, u):
    """i-Riemann invariant: z1 = u + Q(rho), z2 = u - Q(rho), Q the speed integral."""
    if i not in (1, 2):
        raise ValueError(f"field index must be 1 or 2, got {i}")
    q = _invariant_integral(model, rho)
    return _as_float(u + q if i == 1 else u - q)


def connect_end_states(model: GasModel, rho_minus: float, u_minus: float, rho_plus: float) -> float:
    """Velocity u_plus that puts (rho_plus, u_plus) on the 2-wave curve of (rho_minus, u_minus).

    The returned pair has equal 2-invariants; the connection is expansive
    (w_plus > w_minus) exactly when rho_plus > rho_minus.
    """
    if rho_minus <= 0.0 or rho_plus <= 0.0:
        raise ValueError("densities must be positive")
    return float(u_minus + _invariant_integral(model, rho_plus)
                 - _invariant_integral(model, rho_minus))


@dataclass(frozen=True)
class RiemannData:
    """Two constant states and derived 2-rarefaction quantities.

    alpha is the wave strength |rho_plus - rho_minus| + |u_plus - u_minus|;
    w_minus/w_plus are the second characteristic speeds of the end states.
    valid is True only when the states sit on a common 2-wave curve with
    expanding speeds. Degenerate coinciding states (alpha = 0) are flagged
    invalid but admitted downstream as the constant-wave limit.
    """

    gamma: float
    rho_minus: float
    u_minus: float
    rho_plus: float
    u_plus: float
    alpha: float
    w_minus: float
    w_plus: float
    valid: bool

    @property
    def degenerate(self) -> bool:
        return self.alpha == 0.0


def make_riemann_data(model: GasModel, rho_minus, u_minus, rho_plus, u_plus) -> RiemannData:
    """Assemble RiemannData; invalid connections are flagged, not rejected."""
    if rho_minus <= 0.0 or rho_plus <= 0.0:
        raise ValueError("densities must be positive")
    alpha = abs(rho_plus - rho_minus) + abs(u_plus - u_minus)
    w_minus = char_speed(model, 2, rho_minus, u_minus)
    w_plus = char_speed(model, 2, rho_plus, u_plus)
    z_minus = riemann_invariant(model, 2, rho_minus, u_minus)
    z_plus = riemann_invariant(model, 2, rho_plus, u_plus)
    valid = (abs(z_plus - z_minus) <= INVARIANT_MATCH_RTOL * (1.0 + abs(z_minus))
             and w_plus > w_minus)
    return RiemannData(model.gamma, float(rho_minus), float(u_minus),
                       float(rho_plus), float(u_plus),
                       float(alpha), float(w_minus), float(w_plus), bool(valid))


def connect_riemann_data(model: GasModel, rho_minus, u_minus, rho_plus) -> RiemannData:
    """RiemannData with u_plus generated by the exact connection condition."""
    u_plus = connect_end_states(model, rho_minus, u_minus, rho_plus)
    return make_riemann_data(model, rho_minus, u_minus, rho_plus, u_plus)


def _check_data(model: GasModel, data: RiemannData):
    if model.gamma != data.gamma:
        raise ValueError("gas model does not match the one the wave data was built with")


def rarefaction_fan(model: GasModel, data: RiemannData, xi):
    """Self-similar fan (rho, u) at similarity variable xi = x/t.

    Constant end states outside [w_minus, w_plus]; inside, the state is the
    inversion of {second speed = xi, second invariant fixed}. Continuous and
    componentwise nondecreasing in xi.
    """
    _check_data(model, data)
    if data.degenerate:
        xi_arr = np.asarray(xi, dtype=float)
        rho = np.full_like(xi_arr, data.rho_minus)
        u = np.full_like(xi_arr, data.u_minus)
        return _as_float(rho), _as_float(u)
    if not data.valid:
        raise ValueError("end states are not connected by a 2-rarefaction")
    xi_arr = np.asarray(xi, dtype=float)
    g = model.gamma
    z0 = riemann_invariant(model, 2, data.rho_minus, data.u_minus)
    # interior inversion on the clipped variable; end states pass through
    # exactly on the closed complement
    xin = np.clip(xi_arr, data.w_minus, data.w_plus)
    if g > 1.0:
        c = (g - 1.0) / (g + 1.0) * (xin - z0)
        rho_in = c ** (2.0 / (g - 1.0))
        u_in = xin - c
    else:
        u_in = xin - 1.0
        rho_in = np.exp(xin - 1.0 - z0)
    rho = np.where(xi_arr <= data.w_minus, data.rho_minus,
                   np.where(xi_arr >= data.w_plus, data.rho_plus, rho_in))
    u = np.where(xi_arr <= data.w_minus, data.u_minus,
                 np.where(xi_arr >= data.w_plus, data.u_plus, u_in))
    return _as_float(rho), _as_float(u)
