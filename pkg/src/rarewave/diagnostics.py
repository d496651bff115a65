"""Perturbation fields and monitored energy functionals.

Everything here is a pure reduction over an immutable flow snapshot:
Sobolev norms of the perturbation around the smooth wave, the expansion-
weighted norm, the relative potential energy, dissipation functionals,
sup-distance to the exact fan, and power-law rate fitting.

Discrete conventions: midpoint quadrature; centered differences in the
interior with periodic wrap in y and second-order one-sided stencils at the
x edges; repeated/mixed derivatives by composing the first-derivative
operators (mixed multi-indices counted once in H^k sums).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, fields as dc_fields

import numpy as np

from . import wave
from .euler import GasModel, RiemannData, rarefaction_fan

CSV_HEADER = ("t", "l2_pert", "h1_pert", "h2_pert", "wgt", "grad_diss", "d3",
              "pot", "sup_fan", "sup_pert", "cum_wgt", "cum_grad")


def ddx(f: np.ndarray, dx: float) -> np.ndarray:
    """d/dx: centered interior, second-order one-sided at the two x edges."""
    out = np.empty_like(f)
    out[1:-1] = (f[2:] - f[:-2]) / (2.0 * dx)
    out[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx)
    out[-1] = (3.0 * f[-1] - 4.0 * f[-2] + f[-3]) / (2.0 * dx)
    return out


def ddy(f: np.ndarray, dy: float) -> np.ndarray:
    """d/dy with periodic wrap."""
    return (np.roll(f, -1, axis=1) - np.roll(f, 1, axis=1)) / (2.0 * dy)


def l2_sq(f: np.ndarray, dx: float, dy: float) -> float:
    return float(np.sum(f * f) * dx * dy)


def _as_tuple(fields):
    if isinstance(fields, np.ndarray):
        return (fields,)
    return tuple(fields)


def _check_grid(fields):
    for f in fields:
        if f.ndim != 2 or f.shape[0] < 3 or f.shape[1] < 3:
            raise ValueError("fields need at least 3 cells in each direction")


def sobolev_norms(fields, dx: float, dy: float):
    """(L2, H1, H2) of a field or tuple of fields, squared-sum-then-sqrt."""
    fields = _as_tuple(fields)
    _check_grid(fields)
    s0 = s1 = s2 = 0.0
    for f in fields:
        fx, fy = ddx(f, dx), ddy(f, dy)
        s0 += l2_sq(f, dx, dy)
        s1 += l2_sq(fx, dx, dy) + l2_sq(fy, dx, dy)
        s2 += (l2_sq(ddx(fx, dx), dx, dy) + l2_sq(ddy(fx, dy), dx, dy)
               + l2_sq(ddy(fy, dy), dx, dy))
    return float(np.sqrt(s0)), float(np.sqrt(s0 + s1)), float(np.sqrt(s0 + s1 + s2))


def gradient_h1_sq(fields, dx: float, dy: float) -> float:
    """Squared H1 norm of the stacked gradients (all first plus second derivatives).

    Mixed second derivatives appear once per gradient component, i.e. twice in
    total, matching the gradient-of-gradient convention.
    """
    fields = _as_tuple(fields)
    _check_grid(fields)
    total = 0.0
    for f in fields:
        for g in (ddx(f, dx), ddy(f, dy)):
            total += l2_sq(g, dx, dy)
            total += l2_sq(ddx(g, dx), dx, dy) + l2_sq(ddy(g, dy), dx, dy)
    return float(total)


def third_derivative_sq(fields, dx: float, dy: float) -> float:
    """Squared L2 norm of all third derivatives (multi-indices once each)."""
    fields = _as_tuple(fields)
    _check_grid(fields)
    total = 0.0
    for f in fields:
        fx, fy = ddx(f, dx), ddy(f, dy)
        fxx, fxy, fyy = ddx(fx, dx), ddy(fx, dy), ddy(fy, dy)
        for g in (ddx(fxx, dx), ddy(fxx, dy), ddy(fxy, dy), ddy(fyy, dy)):
            total += l2_sq(g, dx, dy)
    return float(total)


def sup_product_bound(f: np.ndarray, dx: float, dy: float) -> float:
    """sqrt(2)*(||f||^{1/2}||f_y||^{1/2} + ||f_x||^{1/2}||f_xy||^{1/2}).

    Discrete form of the strip Sobolev product bound; valid for fields with
    zero mean in the periodic direction (a purely y-independent field has a
    vanishing right side).
    """
    fx, fy = ddx(f, dx), ddy(f, dy)
    fxy = ddy(fx, dy)
    n = lambda g: np.sqrt(l2_sq(g, dx, dy))
    return float(np.sqrt(2.0) * (np.sqrt(n(f) * n(fy)) + np.sqrt(n(fx) * n(fxy))))


def potential_energy_density(model: GasModel, rho, rho_bar):
    """Relative pressure potential: integral of (p(s)-p(rho_bar))/s^2 from rho_bar to rho.

    Closed form (p(rho)-p(rho_bar)-p'(rho_bar)(rho-rho_bar))/((gamma-1) rho)
    for gamma > 1 and ln(rho/rho_bar) + rho_bar/rho - 1 at gamma = 1.
    Nonnegative by convexity, zero only at rho = rho_bar.
    """
    rho = np.asarray(rho, dtype=float)
    rho_bar = np.asarray(rho_bar, dtype=float)
    if np.any(rho <= 0.0) or np.any(rho_bar <= 0.0):
        raise ValueError("densities must be positive")
    g = model.gamma
    if g > 1.0:
        phi = rho - rho_bar
        val = (model.pressure(rho) - model.pressure(rho_bar)
               - model.dp(rho_bar) * phi) / ((g - 1.0) * rho)
    else:
        val = np.log(rho / rho_bar) + rho_bar / rho - 1.0
    return val


def perturbation_fields(state, model: GasModel, data: RiemannData):
    """(phi, varphi, psi): flow minus the smooth wave, evaluated at cell centers."""
    prof = wave.evaluate_wave(model, data, state.time, state.xc)
    rho_bar = np.atleast_1d(prof.rho)[:, None]
    u_bar = np.atleast_1d(prof.u)[:, None]
    phi = state.rho - rho_bar
    varphi = state.mx / state.rho - u_bar
    psi = state.my / state.rho
    return phi, varphi, psi


def potential_energy(state, model: GasModel, data: RiemannData) -> float:
    """Integral of rho * Phi(rho, rho_bar) over the strip."""
    prof = wave.evaluate_wave(model, data, state.time, state.xc)
    rho_bar = np.atleast_1d(prof.rho)[:, None]
    dens = potential_energy_density(model, state.rho, rho_bar)
    return float(np.sum(state.rho * dens) * state.dx * state.dy)


def weighted_norm(phi: np.ndarray, varphi: np.ndarray, profile: wave.WaveProfile,
                  dx: float, dy: float) -> float:
    """Expansion-weighted norm: integral of u_bar_x * (phi^2 + varphi^2)."""
    if profile.grid_x.shape[0] != phi.shape[0]:
        raise ValueError("profile grid does not match the field grid")
    w = profile.u_bar_x[:, None]
    return float(np.sum(w * (phi * phi + varphi * varphi)) * dx * dy)


def sup_error_vs_fan(state, model: GasModel, data: RiemannData) -> float:
    """Grid max of |rho - rho_fan(x/t)| + |u - u_fan(x/t)| + |v|; t > 0 required."""
    if not state.time > 0.0:
        raise ValueError("fan comparison is undefined at t = 0")
    rho_f, u_f = rarefaction_fan(model, data, state.xc / state.time)
    rho_f = np.atleast_1d(rho_f)[:, None]
    u_f = np.atleast_1d(u_f)[:, None]
    err = (np.abs(state.rho - rho_f)
           + np.abs(state.mx / state.rho - u_f)
           + np.abs(state.my / state.rho))
    return float(np.max(err))


def decay_rate_fit(t, values, window):
    """OLS fit of log(value) against log(t) inside window; returns (slope, r^2)."""
    t = np.asarray(t, dtype=float)
    values = np.asarray(values, dtype=float)
    lo, hi = window
    mask = (t >= lo) & (t <= hi)
    if np.any(values[mask] <= 0.0):
        raise ValueError("values in the fit window must be positive")
    if np.count_nonzero(mask) < 5:
        raise ValueError("need at least 5 points inside the fit window")
    lt, lv = np.log(t[mask]), np.log(values[mask])
    slope, intercept = np.polyfit(lt, lv, 1)
    resid = lv - (slope * lt + intercept)
    ss_tot = float(np.sum((lv - lv.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - float(np.sum(resid ** 2)) / ss_tot
    return float(slope), float(r2)


@dataclass
class DiagnosticsRecord:
    """One time sample of every monitored functional (see CSV_HEADER order)."""

    t: float
    l2_pert: float
    h1_pert: float
    h2_pert: float
    wgt: float
    grad_diss: float
    d3: float
    pot: float
    sup_fan: float
    sup_pert: float
    cum_wgt: float
    cum_grad: float

    def row(self):
        return [getattr(self, name) for name in CSV_HEADER]


def compute_record(state, model: GasModel, data: RiemannData,
                   prev: DiagnosticsRecord | None = None) -> DiagnosticsRecord:
    """Assemble the full record; cumulative integrals extend prev by trapezoid rule.

    sup_fan is NaN at t = 0 where the self-similar variable is undefined.
    """
    phi, varphi, psi = perturbation_fields(state, model, data)
    l2p, h1p, h2p = sobolev_norms((phi, varphi, psi), state.dx, state.dy)
    prof = wave.sample_profile(model, data, state.time, state.xc)
    wgt = weighted_norm(phi, varphi, prof, state.dx, state.dy)
    grad = gradient_h1_sq((phi, varphi, psi), state.dx, state.dy)
    d3 = third_derivative_sq((varphi, psi), state.dx, state.dy)
    pot = potential_energy(state, model, data)
    sup_fan = sup_error_vs_fan(state, model, data) if state.time > 0.0 else float("nan")
    sup_pert = float(np.max(np.abs(phi) + np.abs(varphi) + np.abs(psi)))
    if prev is None:
        cum_wgt, cum_grad = 0.0, 0.0
    else:
        h = state.time - prev.t
        cum_wgt = prev.cum_wgt + 0.5 * h * (prev.wgt + wgt)
        cum_grad = prev.cum_grad + 0.5 * h * (prev.grad_diss + grad)
    return DiagnosticsRecord(state.time, l2p, h1p, h2p, wgt, grad, d3, pot,
                             sup_fan, sup_pert, cum_wgt, cum_grad)


def write_diagnostics_csv(path, records):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for rec in records:
            writer.writerow([f"{v:.17g}" for v in rec.row()])


def read_diagnostics_csv(path):
    """Columns of a diagnostics CSV as a dict of float arrays."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
    cols = np.array(rows, dtype=float).T if rows else np.empty((len(header), 0))
    return {name: cols[i] for i, name in enumerate(header)}


def records_from_columns(cols):
    names = [f.name for f in dc_fields(DiagnosticsRecord)]
    n = len(cols["t"])
    return [DiagnosticsRecord(**{name: float(cols[name][i]) for name in names})
            for i in range(n)]
