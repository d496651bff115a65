"""Compiled inner loops for the flow solver (optional numba acceleration).

The kernel mirrors the numpy reference path in solver.py operation for
operation so both produce the same updates; solver tests check the two
against each other.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True, inline="always")
def _slope(dm, dp, use_minmod):
    if use_minmod:
        # branchless minmod, same values as 0.5*(sign+sign)*min(|a|,|b|)
        sa = (0.0 < dm) - (dm < 0.0)
        sb = (0.0 < dp) - (dp < 0.0)
        return 0.5 * (sa + sb) * min(abs(dm), abs(dp))
    return 0.5 * (dm + dp)


@njit(cache=True)
def rhs_kernel(U, gamma, mu, lam, dx, dy, use_minmod):
    """Time derivatives on the interior cells from a two-ghost padded state.

    Returns (dU, boundary mass flux, min reconstructed face density).
    """
    nxp = U.shape[1]
    nyp = U.shape[2]
    nx = nxp - 4
    ny = nyp - 4
    gm1 = gamma - 1.0
    invg = 1.0 / gamma
    invdx = 1.0 / dx
    invdy = 1.0 / dy
    invh2x = 1.0 / (dx * dx)
    invh2y = 1.0 / (dy * dy)
    cross = 1.0 / (4.0 * dx * dy)

    u = np.empty((nxp, nyp))
    v = np.empty((nxp, nyp))
    for i in range(nxp):
        for j in range(nyp):
            r = U[0, i, j]
            u[i, j] = U[1, i, j] / r
            v[i, j] = U[2, i, j] / r

    min_face_rho = 1e300

    # x sweep: slopes for padded cells 1..nx+2, then fluxes on the nx+1 faces
    sx = np.empty((3, nx + 2, ny))
    for c in range(3):
        for i in range(nx + 2):
            ic = i + 1
            for j in range(ny):
                jj = j + 2
                sx[c, i, j] = _slope(U[c, ic, jj] - U[c, ic - 1, jj],
                                     U[c, ic + 1, jj] - U[c, ic, jj], use_minmod)
    Hx = np.empty((3, nx + 1, ny))
    for j in range(ny):
        jj = j + 2
        for i in range(nx + 1):
            iL = i + 1
            iR = i + 2
            UL0 = U[0, iL, jj] + 0.5 * sx[0, i, j]
            UL1 = U[1, iL, jj] + 0.5 * sx[1, i, j]
            UL2 = U[2, iL, jj] + 0.5 * sx[2, i, j]
            UR0 = U[0, iR, jj] - 0.5 * sx[0, i + 1, j]
            UR1 = U[1, iR, jj] - 0.5 * sx[1, i + 1, j]
            UR2 = U[2, iR, jj] - 0.5 * sx[2, i + 1, j]
            if UL0 < min_face_rho:
                min_face_rho = UL0
            if UR0 < min_face_rho:
                min_face_rho = UR0
            wL = UL0 ** gm1
            wR = UR0 ** gm1
            cL = np.sqrt(wL)
            cR = np.sqrt(wR)
            pL = UL0 * wL * invg
            pR = UR0 * wR * invg
            vnL = UL1 / UL0
            vnR = UR1 / UR0
            ap = max(max(vnL + cL, vnR + cR), 0.0)
            am = min(min(vnL - cL, vnR - cR), 0.0)
            inv = 1.0 / (ap - am)
            apam = ap * am
            Hx[0, i, j] = (ap * UL1 - am * UR1 + apam * (UR0 - UL0)) * inv
            Hx[1, i, j] = (ap * (UL1 * vnL + pL) - am * (UR1 * vnR + pR)
                           + apam * (UR1 - UL1)) * inv
            Hx[2, i, j] = (ap * (UL2 * vnL) - am * (UR2 * vnR)
                           + apam * (UR2 - UL2)) * inv

    # y sweep
    sy = np.empty((3, nx, ny + 2))
    for c in range(3):
        for i in range(nx):
            ii = i + 2
            for j in range(ny + 2):
                jc = j + 1
                sy[c, i, j] = _slope(U[c, ii, jc] - U[c, ii, jc - 1],
                                     U[c, ii, jc + 1] - U[c, ii, jc], use_minmod)
    Hy = np.empty((3, nx, ny + 1))
    for i in range(nx):
        ii = i + 2
        for j in range(ny + 1):
            jL = j + 1
            jR = j + 2
            UL0 = U[0, ii, jL] + 0.5 * sy[0, i, j]
            UL1 = U[1, ii, jL] + 0.5 * sy[1, i, j]
            UL2 = U[2, ii, jL] + 0.5 * sy[2, i, j]
            UR0 = U[0, ii, jR] - 0.5 * sy[0, i, j + 1]
            UR1 = U[1, ii, jR] - 0.5 * sy[1, i, j + 1]
            UR2 = U[2, ii, jR] - 0.5 * sy[2, i, j + 1]
            if UL0 < min_face_rho:
                min_face_rho = UL0
            if UR0 < min_face_rho:
                min_face_rho = UR0
            wL = UL0 ** gm1
            wR = UR0 ** gm1
            cL = np.sqrt(wL)
            cR = np.sqrt(wR)
            pL = UL0 * wL * invg
            pR = UR0 * wR * invg
            vnL = UL2 / UL0
            vnR = UR2 / UR0
            ap = max(max(vnL + cL, vnR + cR), 0.0)
            am = min(min(vnL - cL, vnR - cR), 0.0)
            inv = 1.0 / (ap - am)
            apam = ap * am
            Hy[0, i, j] = (ap * UL2 - am * UR2 + apam * (UR0 - UL0)) * inv
            Hy[1, i, j] = (ap * (UL1 * vnL) - am * (UR1 * vnR)
                           + apam * (UR1 - UL1)) * inv
            Hy[2, i, j] = (ap * (UL2 * vnL + pL) - am * (UR2 * vnR + pR)
                           + apam * (UR2 - UL2)) * inv

    dU = np.empty((3, nx, ny))
    mulam = mu + lam
    for i in range(nx):
        ii = i + 2
        for j in range(ny):
            jj = j + 2
            for c in range(3):
                dU[c, i, j] = (-(Hx[c, i + 1, j] - Hx[c, i, j]) * invdx
                               - (Hy[c, i, j + 1] - Hy[c, i, j]) * invdy)
            u_xx = (u[ii + 1, jj] - 2.0 * u[ii, jj] + u[ii - 1, jj]) * invh2x
            u_yy = (u[ii, jj + 1] - 2.0 * u[ii, jj] + u[ii, jj - 1]) * invh2y
            v_xx = (v[ii + 1, jj] - 2.0 * v[ii, jj] + v[ii - 1, jj]) * invh2x
            v_yy = (v[ii, jj + 1] - 2.0 * v[ii, jj] + v[ii, jj - 1]) * invh2y
            u_xy = (u[ii + 1, jj + 1] - u[ii + 1, jj - 1]
                    - u[ii - 1, jj + 1] + u[ii - 1, jj - 1]) * cross
            v_xy = (v[ii + 1, jj + 1] - v[ii + 1, jj - 1]
                    - v[ii - 1, jj + 1] + v[ii - 1, jj - 1]) * cross
            dU[1, i, j] += mu * (u_xx + u_yy) + mulam * (u_xx + v_xy)
            dU[2, i, j] += mu * (v_xx + v_yy) + mulam * (u_xy + v_yy)

    flux = 0.0
    for j in range(ny):
        flux += Hx[0, nx, j]
    for j in range(ny):
        flux -= Hx[0, 0, j]
    return dU, flux * dy, min_face_rho
