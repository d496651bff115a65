"""Finite-volume method-of-lines integrator for 2D isentropic compressible flow.

Truncated strip [-L_x, L_x] x [0, 1), periodic in y. Convective fluxes use a
second-order central-upwind scheme with limited linear reconstruction; the
viscous operator mu*Lap(u) + (mu+lam)*grad(div u) is discretized with centered
differences on the primitive velocities; time stepping is SSP-RK2 (Heun).
Far-field ghost cells carry either the smooth wave profile at the current
time or zero-gradient extrapolation.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from . import diagnostics, wave
from .euler import GasModel, RiemannData

BC_MODES = ("wave-dirichlet", "extrapolation")
LIMITERS = ("minmod", "none")
PERTURBATION_SHAPES = ("gaussian-sine", "zero", "custom-file")


class PositivityError(RuntimeError):
    """Density lost positivity; carries the offending cell and time."""

    def __init__(self, time, cell, message="density lost positivity"):
        super().__init__(f"{message} at t={time:.6g}, cell={cell}")
        self.time = time
        self.cell = cell


@dataclass(frozen=True)
class PerturbationSpec:
    """Initial disturbance added on top of the smooth wave."""

    amplitude: float = 0.0
    shape: str = "gaussian-sine"
    sigma: float = 1.0
    k: int = 1
    path: str | None = None   # .npz with phi/varphi/psi, shape custom-file only

    def __post_init__(self):
        if self.shape not in PERTURBATION_SHAPES:
            raise ValueError(f"unknown perturbation shape {self.shape!r}")
        if not self.sigma > 0.0:
            raise ValueError("perturbation width sigma must be positive")
        if self.k < 0 or int(self.k) != self.k:
            raise ValueError("transverse mode k must be a nonnegative integer")
        if self.shape == "custom-file" and not self.path:
            raise ValueError("custom-file perturbation needs a path")


@dataclass(frozen=True)
class SolverConfig:
    model: GasModel
    data: RiemannData
    mu: float
    lam: float
    L_x: float
    nx: int
    ny: int
    cfl: float = 0.45
    t_end: float = 1.0
    bc_mode: str = "wave-dirichlet"
    limiter: str = "minmod"
    perturbation: PerturbationSpec = field(default_factory=PerturbationSpec)

    def __post_init__(self):
        if not (self.mu > 0.0 and self.mu + self.lam >= 0.0):
            raise ValueError(
                f"viscosities must satisfy mu > 0 and mu + lam >= 0, "
                f"got mu={self.mu}, lam={self.lam}")
        if self.nx < 4 or self.ny < 4:
            raise ValueError("need at least 4 cells in each direction")
        if not self.L_x > 0.0:
            raise ValueError("half-width L_x must be positive")
        if not 0.0 < self.cfl < 1.0:
            raise ValueError("Courant number must lie in (0, 1)")
        if self.t_end < 0.0:
            raise ValueError("final time must be nonnegative")
        if self.bc_mode not in BC_MODES:
            raise ValueError(f"unknown bc_mode {self.bc_mode!r}")
        if self.limiter not in LIMITERS:
            raise ValueError(f"unknown limiter {self.limiter!r}")

    @property
    def dx(self) -> float:
        return 2.0 * self.L_x / self.nx

    @property
    def dy(self) -> float:
        return 1.0 / self.ny


@dataclass
class FlowState:
    """Conserved fields on cell centers plus the time stamp.

    mass_audit holds the relative conservation residual of the last step
    (change of total mass versus the time-integrated boundary flux).
    """

    time: float
    L_x: float
    rho: np.ndarray
    mx: np.ndarray
    my: np.ndarray
    mass_audit: float = 0.0

    @property
    def nx(self) -> int:
        return self.rho.shape[0]

    @property
    def ny(self) -> int:
        return self.rho.shape[1]

    @property
    def dx(self) -> float:
        return 2.0 * self.L_x / self.nx

    @property
    def dy(self) -> float:
        return 1.0 / self.ny

    @property
    def xc(self) -> np.ndarray:
        return -self.L_x + (np.arange(self.nx) + 0.5) * self.dx

    @property
    def yc(self) -> np.ndarray:
        return (np.arange(self.ny) + 0.5) * self.dy

    def velocities(self):
        return self.mx / self.rho, self.my / self.rho

    def check_valid(self):
        if np.min(self.rho) <= 0.0:
            cell = np.unravel_index(int(np.argmin(self.rho)), self.rho.shape)
            raise PositivityError(self.time, tuple(int(c) for c in cell))
        for f in (self.rho, self.mx, self.my):
            if not np.all(np.isfinite(f)):
                raise FloatingPointError(f"non-finite field values at t={self.time:.6g}")


def initialize(config: SolverConfig) -> FlowState:
    """Smooth wave slice plus the configured disturbance, assembled conservatively."""
    xc = -config.L_x + (np.arange(config.nx) + 0.5) * config.dx
    yc = (np.arange(config.ny) + 0.5) * config.dy
    prof = wave.evaluate_wave(config.model, config.data, 0.0, xc)
    rho_b = np.atleast_1d(prof.rho)[:, None]
    u_b = np.atleast_1d(prof.u)[:, None]
    spec = config.perturbation
    ones = np.ones((config.nx, config.ny))
    if spec.shape == "zero" or spec.amplitude == 0.0:
        rho0, u0, v0 = rho_b * ones, u_b * ones, np.zeros_like(ones)
    elif spec.shape == "gaussian-sine":
        bump = spec.amplitude * np.exp(-(xc / spec.sigma) ** 2)[:, None]
        cy = np.cos(2.0 * np.pi * spec.k * yc)[None, :]
        sy = np.sin(2.0 * np.pi * spec.k * yc)[None, :]
        rho0 = rho_b + bump * cy
        u0 = u_b + bump * cy
        v0 = bump * sy
    else:
        with np.load(spec.path) as f:
            phi, varphi, psi = f["phi"], f["varphi"], f["psi"]
        if phi.shape != ones.shape:
            raise ValueError(f"perturbation file grid {phi.shape} does not match "
                             f"({config.nx}, {config.ny})")
        rho0 = rho_b + phi
        u0 = u_b + varphi
        v0 = psi.astype(float).copy()
    if np.min(rho0) <= 0.0:
        raise ValueError("initial density is not positive; reduce the perturbation amplitude")
    return FlowState(0.0, config.L_x, rho0, rho0 * u0, rho0 * v0)


def _minmod(a, b):
    return 0.5 * (np.sign(a) + np.sign(b)) * np.minimum(np.abs(a), np.abs(b))


def _padded(rho, mx, my, config: SolverConfig, t_bc: float):
    """Conserved fields with two ghost layers: far-field in x, periodic wrap in y."""
    nx, ny = rho.shape
    U = np.empty((3, nx + 4, ny + 4))
    U[0, 2:-2, 2:-2] = rho
    U[1, 2:-2, 2:-2] = mx
    U[2, 2:-2, 2:-2] = my
    if config.bc_mode == "wave-dirichlet":
        dxc = config.dx
        x0 = -config.L_x + 0.5 * dxc
        x1 = config.L_x - 0.5 * dxc
        xg = np.array([x0 - 2.0 * dxc, x0 - dxc, x1 + dxc, x1 + 2.0 * dxc])
        prof = wave.evaluate_wave(config.model, config.data, t_bc, xg)
        rg = np.atleast_1d(prof.rho)
        mg = rg * np.atleast_1d(prof.u)
        for row, g in ((0, 0), (1, 1), (-2, 2), (-1, 3)):
            U[0, row, 2:-2] = rg[g]
            U[1, row, 2:-2] = mg[g]
            U[2, row, 2:-2] = 0.0
    else:
        U[:, 0, 2:-2] = U[:, 2, 2:-2]
        U[:, 1, 2:-2] = U[:, 2, 2:-2]
        U[:, -1, 2:-2] = U[:, -3, 2:-2]
        U[:, -2, 2:-2] = U[:, -3, 2:-2]
    U[:, :, 0:2] = U[:, :, -4:-2]
    U[:, :, -2:] = U[:, :, 2:4]
    return U


def _cu_flux(UL, UR, gamma: float, comp: int, time: float):
    """Central-upwind flux; comp is the normal momentum component (1 = x, 2 = y)."""
    rL, rR = UL[0], UR[0]
    if np.min(rL) <= 0.0 or np.min(rR) <= 0.0:
        raise PositivityError(time, "face-reconstruction",
                              "reconstructed face density lost positivity")
    gm1 = gamma - 1.0
    wL = rL ** gm1
    wR = rR ** gm1
    cL, cR = np.sqrt(wL), np.sqrt(wR)
    pL = rL * wL / gamma
    pR = rR * wR / gamma
    vnL = UL[comp] / rL
    vnR = UR[comp] / rR
    ap = np.maximum(np.maximum(vnL + cL, vnR + cR), 0.0)
    am = np.minimum(np.minimum(vnL - cL, vnR - cR), 0.0)
    d = ap - am
    apam = ap * am
    tan = 3 - comp
    H = np.empty_like(UL)
    H[0] = (ap * UL[comp] - am * UR[comp] + apam * (UR[0] - UL[0])) / d
    H[comp] = (ap * (UL[comp] * vnL + pL) - am * (UR[comp] * vnR + pR)
               + apam * (UR[comp] - UL[comp])) / d
    H[tan] = (ap * (UL[tan] * vnL) - am * (UR[tan] * vnR)
              + apam * (UR[tan] - UL[tan])) / d
    return H


def _rhs_numpy(U, gamma, mu, lam, dx, dy, use_minmod, t_bc):
    """Reference vectorized evaluation of the semi-discrete right-hand side."""
    V = U[:, :, 2:-2]
    d = V[:, 1:] - V[:, :-1]
    s = _minmod(d[:, :-1], d[:, 1:]) if use_minmod else 0.5 * (d[:, :-1] + d[:, 1:])
    UL = V[:, 1:-2] + 0.5 * s[:, :-1]
    UR = V[:, 2:-1] - 0.5 * s[:, 1:]
    Hx = _cu_flux(UL, UR, gamma, 1, t_bc)

    W = U[:, 2:-2, :]
    d = W[:, :, 1:] - W[:, :, :-1]
    s = _minmod(d[:, :, :-1], d[:, :, 1:]) if use_minmod else 0.5 * (d[:, :, :-1] + d[:, :, 1:])
    UL = W[:, :, 1:-2] + 0.5 * s[:, :, :-1]
    UR = W[:, :, 2:-1] - 0.5 * s[:, :, 1:]
    Hy = _cu_flux(UL, UR, gamma, 2, t_bc)

    dU = -(Hx[:, 1:] - Hx[:, :-1]) / dx
    dU -= (Hy[:, :, 1:] - Hy[:, :, :-1]) / dy
    boundary_mass_flux = float((np.sum(Hx[0, -1]) - np.sum(Hx[0, 0])) * dy)

    # viscous terms on primitive velocities, centered second order
    u = U[1] / U[0]
    v = U[2] / U[0]
    h2x, h2y = dx * dx, dy * dy
    c = np.s_[2:-2]
    u_xx = (u[3:-1, c] - 2.0 * u[c, c] + u[1:-3, c]) / h2x
    u_yy = (u[c, 3:-1] - 2.0 * u[c, c] + u[c, 1:-3]) / h2y
    v_xx = (v[3:-1, c] - 2.0 * v[c, c] + v[1:-3, c]) / h2x
    v_yy = (v[c, 3:-1] - 2.0 * v[c, c] + v[c, 1:-3]) / h2y
    cross = 1.0 / (4.0 * dx * dy)
    u_xy = (u[3:-1, 3:-1] - u[3:-1, 1:-3] - u[1:-3, 3:-1] + u[1:-3, 1:-3]) * cross
    v_xy = (v[3:-1, 3:-1] - v[3:-1, 1:-3] - v[1:-3, 3:-1] + v[1:-3, 1:-3]) * cross
    dU[1] += mu * (u_xx + u_yy) + (mu + lam) * (u_xx + v_xy)
    dU[2] += mu * (v_xx + v_yy) + (mu + lam) * (u_xy + v_yy)
    return dU, boundary_mass_flux


# compiled kernel toggle; flipped off when numba is unavailable or disabled
USE_NUMBA = os.environ.get("RAREWAVE_DISABLE_NUMBA", "") == ""


def _rhs_core(rho, mx, my, config: SolverConfig, t_bc: float):
    """Time derivatives of the conserved fields plus the net boundary mass flux."""
    global USE_NUMBA
    if np.min(rho) <= 0.0:
        cell = np.unravel_index(int(np.argmin(rho)), rho.shape)
        raise PositivityError(t_bc, tuple(int(c) for c in cell))
    U = _padded(rho, mx, my, config, t_bc)
    use_minmod = config.limiter == "minmod"
    if USE_NUMBA:
        try:
            from ._kernels import rhs_kernel
        except ImportError:
            USE_NUMBA = False
        else:
            dU, flux, min_face_rho = rhs_kernel(
                U, config.model.gamma, config.mu, config.lam,
                config.dx, config.dy, use_minmod)
            if min_face_rho <= 0.0:
                raise PositivityError(t_bc, "face-reconstruction",
                                      "reconstructed face density lost positivity")
            return dU, flux
    return _rhs_numpy(U, config.model.gamma, config.mu, config.lam,
                      config.dx, config.dy, use_minmod, t_bc)


def rhs(state: FlowState, config: SolverConfig, t_bc: float | None = None):
    """Time-derivative fields (drho, dmx, dmy) with boundary data at t_bc."""
    if t_bc is None:
        t_bc = state.time
    dU, _ = _rhs_core(state.rho, state.mx, state.my, config, t_bc)
    return dU[0], dU[1], dU[2]


def stable_dt(state: FlowState, config: SolverConfig) -> float:
    """Explicit step size: convective CFL in both directions plus the viscous limit."""
    rho = state.rho
    u, v = state.velocities()
    c = rho ** (0.5 * (config.model.gamma - 1.0))
    dt_x = state.dx / float(np.max(np.abs(u) + c))
    dt_y = state.dy / float(np.max(np.abs(v) + c))
    dt_visc = (0.25 * float(np.min(rho)) * min(state.dx, state.dy) ** 2
               / (2.0 * config.mu + config.lam))
    return config.cfl * min(dt_x, dt_y, dt_visc)


def _advance(state: FlowState, config: SolverConfig, t1: float) -> FlowState:
    """One Heun step from state.time to exactly t1, with a mass-conservation audit."""
    t0 = state.time
    dt = t1 - t0
    k1, flux1 = _rhs_core(state.rho, state.mx, state.my, config, t0)
    rho_s = state.rho + dt * k1[0]
    mx_s = state.mx + dt * k1[1]
    my_s = state.my + dt * k1[2]
    k2, flux2 = _rhs_core(rho_s, mx_s, my_s, config, t1)
    rho_n = state.rho + 0.5 * dt * (k1[0] + k2[0])
    mx_n = state.mx + 0.5 * dt * (k1[1] + k2[1])
    my_n = state.my + 0.5 * dt * (k1[2] + k2[2])
    if np.min(rho_n) <= 0.0:
        cell = np.unravel_index(int(np.argmin(rho_n)), rho_n.shape)
        raise PositivityError(t1, tuple(int(c) for c in cell))
    cell_area = state.dx * state.dy
    dmass = float(np.sum(rho_n - state.rho)) * cell_area
    predicted = -0.5 * dt * (flux1 + flux2)
    total = float(np.sum(rho_n)) * cell_area
    audit = abs(dmass - predicted) / max(total, 1e-300)
    return FlowState(t1, state.L_x, rho_n, mx_n, my_n, audit)


def step(state: FlowState, config: SolverConfig) -> FlowState:
    """One SSP-RK2 step of the stable step size."""
    return _advance(state, config, state.time + stable_dt(state, config))


@dataclass
class RunResult:
    records: list
    state: FlowState
    status: str                 # "ok" or "positivity-error"
    error: dict | None = None
    max_mass_audit: float = 0.0


def run(config: SolverConfig, diag_times=None, checkpoint_times=(),
        out_dir=None, initial: FlowState | None = None) -> RunResult:
    """Integrate to t_end, emitting diagnostics and checkpoints at scheduled times.

    Scheduled times are hit exactly by clipping the stable step. A positivity
    failure stops the run, keeps the partial CSV, and is reported in the
    result instead of propagating.
    """
    from .checkpoint import write_checkpoint

    state = initial if initial is not None else initialize(config)
    diag_set = sorted(set(float(t) for t in (diag_times if diag_times is not None else [])))
    ck_set = sorted(set(float(t) for t in checkpoint_times))
    events = sorted(set(t for t in diag_set + ck_set if state.time < t <= config.t_end)
                    | {config.t_end})
    records = []
    csv_path = None
    writer = fh = None
    if out_dir is not None:
        import csv as _csv
        import os
        os.makedirs(out_dir, exist_ok=True)
        csv_path = os.path.join(out_dir, "diagnostics.csv")
        fh = open(csv_path, "w", newline="")
        writer = _csv.writer(fh)
        writer.writerow(diagnostics.CSV_HEADER)

    def emit(rec):
        records.append(rec)
        if writer is not None:
            writer.writerow([f"{v:.17g}" for v in rec.row()])
            fh.flush()

    status, error = "ok", None
    max_audit = 0.0
    try:
        if diag_set and state.time in diag_set:
            emit(diagnostics.compute_record(state, config.model, config.data))
        for te in events:
            while state.time < te:
                t1 = min(state.time + stable_dt(state, config), te)
                state = _advance(state, config, t1)
                max_audit = max(max_audit, state.mass_audit)
            if te in diag_set:
                prev = records[-1] if records else None
                emit(diagnostics.compute_record(state, config.model, config.data, prev))
            if te in ck_set and out_dir is not None:
                import os
                write_checkpoint(os.path.join(out_dir, f"checkpoint_t{te:g}.bin"), state)
    except PositivityError as exc:
        status = "positivity-error"
        error = {"time": exc.time, "cell": str(exc.cell), "message": str(exc)}
    finally:
        if fh is not None:
            fh.close()
    return RunResult(records, state, status, error, max_audit)
