"""Smooth approximate 2-rarefaction wave of the isentropic Euler system.

The profile transports the smooth Burgers solution (at shifted time 1 + t)
through the Riemann-invariant inversion: the second characteristic speed of
(rho_bar, u_bar) equals the Burgers value and the second invariant is frozen
at the end-state value. The pair solves the 1D Euler system exactly.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import integrate

from . import burgers
from .burgers import BurgersWave
from .euler import GasModel, RiemannData, _as_float, riemann_invariant


class WaveFields(NamedTuple):
    rho: object
    u: object
    rho_x: object
    u_x: object
    rho_xx: object
    u_xx: object
    rho_xxx: object
    u_xxx: object


class NormPair(NamedTuple):
    rho: float
    u: float


PROFILE_CSV_COLUMNS = ("x", "rho_bar", "u_bar", "rho_bar_x", "u_bar_x",
                       "rho_bar_xx", "u_bar_xx", "rho_bar_xxx", "u_bar_xxx")


def burgers_wave_of(data: RiemannData) -> BurgersWave:
    return BurgersWave(data.w_minus, data.w_plus)


def _require_usable(model: GasModel, data: RiemannData):
    if model.gamma != data.gamma:
        raise ValueError("gas model does not match the one the wave data was built with")
    if not (data.valid or data.degenerate):
        raise ValueError("end states are not connected by a 2-rarefaction")


def _fields_from_w(model: GasModel, data: RiemannData, w, wx, wxx, wxxx) -> WaveFields:
    """Invert the frozen-invariant relations and push derivatives through the chain rule."""
    g = model.gamma
    z0 = riemann_invariant(model, 2, data.rho_minus, data.u_minus)
    if g > 1.0:
        beta = (g - 1.0) / (g + 1.0)
        q = 2.0 / (g - 1.0)
        cbar = beta * (w - z0)          # = rho_bar**((gamma-1)/2) > 0 since w > w_minus - slack
        rho = cbar ** q
        u = w - cbar
        cu = 2.0 / (g + 1.0)
        ux, uxx, uxxx = cu * wx, cu * wxx, cu * wxxx
        cx, cxx, cxxx = beta * wx, beta * wxx, beta * wxxx
        rho_x = q * cbar ** (q - 1.0) * cx
        rho_xx = q * (q - 1.0) * cbar ** (q - 2.0) * cx ** 2 + q * cbar ** (q - 1.0) * cxx
        rho_xxx = (q * (q - 1.0) * (q - 2.0) * cbar ** (q - 3.0) * cx ** 3
                   + 3.0 * q * (q - 1.0) * cbar ** (q - 2.0) * cx * cxx
                   + q * cbar ** (q - 1.0) * cxxx)
    else:
        # gamma = 1: sound speed is 1, the invariant uses ln(rho)
        u = w - 1.0
        ux, uxx, uxxx = wx, wxx, wxxx
        rho = np.exp(w - 1.0 - z0)
        rho_x = rho * wx
        rho_xx = rho * (wx ** 2 + wxx)
        rho_xxx = rho * (wx ** 3 + 3.0 * wx * wxx + wxxx)
    return WaveFields(*(_as_float(v) for v in
                        (rho, u, rho_x, ux, rho_xx, uxx, rho_xxx, uxxx)))


def evaluate_wave(model: GasModel, data: RiemannData, t: float, x,
                  tol: float = 1e-13) -> WaveFields:
    """Profile fields and x-derivatives up to third order at (t, x), t >= 0.

    The smooth profile never clamps: the interior inversion applies for all x
    and tends to the end states as x -> -/+ infinity. Degenerate data (alpha=0)
    yields the constant state with zero derivatives.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    _require_usable(model, data)
    x = np.asarray(x, dtype=float)
    if data.degenerate:
        z = np.zeros_like(x)
        return WaveFields(_as_float(np.full_like(x, data.rho_minus)),
                          _as_float(np.full_like(x, data.u_minus)),
                          _as_float(z), _as_float(z.copy()), _as_float(z.copy()),
                          _as_float(z.copy()), _as_float(z.copy()), _as_float(z.copy()))
    w, wx, wxx, wxxx = burgers.evaluate(burgers_wave_of(data), 1.0 + t, x, tol)
    return _fields_from_w(model, data, w, wx, wxx, wxxx)


@dataclass
class WaveProfile:
    """Profile fields sampled on a strictly increasing 1D grid at one time."""

    time: float
    grid_x: np.ndarray
    rho_bar: np.ndarray
    u_bar: np.ndarray
    rho_bar_x: np.ndarray
    u_bar_x: np.ndarray
    rho_bar_xx: np.ndarray
    u_bar_xx: np.ndarray
    rho_bar_xxx: np.ndarray
    u_bar_xxx: np.ndarray

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(PROFILE_CSV_COLUMNS)
            cols = (self.grid_x, self.rho_bar, self.u_bar, self.rho_bar_x, self.u_bar_x,
                    self.rho_bar_xx, self.u_bar_xx, self.rho_bar_xxx, self.u_bar_xxx)
            for row in zip(*cols):
                writer.writerow([f"{v:.17g}" for v in row])


def sample_profile(model: GasModel, data: RiemannData, t: float, grid_x,
                   tol: float = 1e-13) -> WaveProfile:
    """Element-wise wave evaluation over a strictly increasing grid."""
    grid_x = np.atleast_1d(np.asarray(grid_x, dtype=float))
    if grid_x.size > 1 and not np.all(np.diff(grid_x) > 0.0):
        raise ValueError("grid must be strictly increasing")
    f = evaluate_wave(model, data, t, grid_x, tol)
    return WaveProfile(t, grid_x, *(np.atleast_1d(v) for v in f))


def euler_residual(model: GasModel, data: RiemannData, t: float, grid_x,
                   dt_probe: float, tol: float = 1e-13):
    """Max-norm residuals of the mass and momentum laws for the profile.

    x-derivatives are exact (chain rule); time derivatives use centered
    differencing over dt_probe, so the residuals vanish at second order as
    dt_probe -> 0.
    """
    if not (t > dt_probe > 0.0):
        raise ValueError("need t > dt_probe > 0")
    grid_x = np.asarray(grid_x, dtype=float)

    def fluxes(ts):
        f = evaluate_wave(model, data, ts, grid_x, tol)
        mass = f.rho * f.u
        mom = f.rho * f.u ** 2 + model.pressure(f.rho)
        return f, mass, mom

    fm, mass_m, mom_m = fluxes(t - dt_probe)
    fp, mass_p, mom_p = fluxes(t + dt_probe)
    f0, _, _ = fluxes(t)

    rho_t = (fp.rho - fm.rho) / (2.0 * dt_probe)
    m_t = (mass_p - mass_m) / (2.0 * dt_probe)
    mass_x = f0.rho_x * f0.u + f0.rho * f0.u_x
    mom_x = f0.rho_x * f0.u ** 2 + 2.0 * f0.rho * f0.u * f0.u_x + model.dp(f0.rho) * f0.rho_x
    r_mass = float(np.max(np.abs(rho_t + mass_x)))
    r_mom = float(np.max(np.abs(m_t + mom_x)))
    return r_mass, r_mom


def derivative_norms(model: GasModel, data: RiemannData, t: float,
                     order: int, p) -> NormPair:
    """L^p norms over x of the order-th derivatives of (rho_bar, u_bar).

    Same foot-point quadrature as the Burgers norms; zero for degenerate data.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    if order not in (1, 2, 3):
        raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")
    if p != np.inf and float(p) < 1.0:
        raise ValueError("norm exponent must be >= 1")
    _require_usable(model, data)
    if data.degenerate:
        return NormPair(0.0, 0.0)
    bw = burgers_wave_of(data)
    T = 1.0 + t
    idx = {1: (2, 3), 2: (4, 5), 3: (6, 7)}[order]

    def both(x0):
        w, wx, wxx, wxxx, D = burgers.values_at_foot(bw, T, x0)
        f = _fields_from_w(model, data, w, wx, wxx, wxxx)
        return f[idx[0]], f[idx[1]], D

    if p == np.inf:
        r = burgers.refined_max(lambda x0: both(x0)[0])
        u = burgers.refined_max(lambda x0: both(x0)[1])
        return NormPair(r, u)
    p = float(p)

    def integrand(x0, which):
        vals = both(x0)
        return np.abs(vals[which]) ** p * vals[2]

    r, _ = integrate.quad(integrand, -burgers.FOOT_CUTOFF, burgers.FOOT_CUTOFF,
                          args=(0,), limit=200, epsabs=1e-14, epsrel=1e-12)
    u, _ = integrate.quad(integrand, -burgers.FOOT_CUTOFF, burgers.FOOT_CUTOFF,
                          args=(1,), limit=200, epsabs=1e-14, epsrel=1e-12)
    return NormPair(float(r ** (1.0 / p)), float(u ** (1.0 / p)))


def sup_distance_to_fan(model: GasModel, data: RiemannData, t: float,
                        n: int = 2_000_001) -> float:
    """sup over x of |rho_bar - rho_fan| + |u_bar - u_fan| at time t > 0."""
    from .euler import rarefaction_fan

    if not t > 0.0:
        raise ValueError("fan comparison needs t > 0")
    _require_usable(model, data)
    if data.degenerate:
        return 0.0
    bw = burgers_wave_of(data)
    x0 = np.linspace(-60.0, 60.0, n)
    w = bw.initial(x0)
    wx = bw.initial_dx(x0)
    x = x0 + (1.0 + t) * w
    f = _fields_from_w(model, data, w, wx, wx, wx)  # higher derivatives unused
    rho_f, u_f = rarefaction_fan(model, data, x / t)
    return float(np.max(np.abs(f.rho - rho_f) + np.abs(f.u - u_f)))
