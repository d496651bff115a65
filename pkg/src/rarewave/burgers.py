"""Inviscid Burgers equation: rarefaction fan and the smooth tanh-data solution.

The smooth solution is evaluated by the method of characteristics: the foot
point x0 of the characteristic through (t, x) solves x0 + t*w0(x0) = x, which
is strictly monotone in x0, and spatial derivatives up to third order follow
from implicit differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .euler import _as_float

# Foot points beyond this magnitude contribute below 1e-12 to any derivative
# norm (sech^2(40) ~ 1e-34), so quadrature and grid scans stop there.
FOOT_CUTOFF = 40.0


def _sech2(x):
    # overflow-safe sech^2
    e = np.exp(-2.0 * np.abs(x))
    return 4.0 * e / (1.0 + e) ** 2


@dataclass(frozen=True)
class BurgersWave:
    """End speeds w_minus < w_plus of a Burgers rarefaction.

    The smooth initial profile is mid + half_gap*tanh(x), strictly increasing.
    """

    w_minus: float
    w_plus: float

    def __post_init__(self):
        if not self.w_plus > self.w_minus:
            raise ValueError("w_plus must exceed w_minus")

    @property
    def mid(self) -> float:
        return 0.5 * (self.w_plus + self.w_minus)

    @property
    def half_gap(self) -> float:
        return 0.5 * (self.w_plus - self.w_minus)

    @property
    def gap(self) -> float:
        return self.w_plus - self.w_minus

    def initial(self, x):
        return self.mid + self.half_gap * np.tanh(x)

    def initial_dx(self, x):
        return self.half_gap * _sech2(x)

    def initial_dxx(self, x):
        return -2.0 * self.half_gap * _sech2(x) * np.tanh(x)

    def initial_dxxx(self, x):
        t = np.tanh(x)
        return 2.0 * self.half_gap * _sech2(x) * (3.0 * t * t - 1.0)


def fan(wave: BurgersWave, t, x):
    """Rarefaction fan value: w_minus, x/t, or w_plus; requires t > 0."""
    if not t > 0.0:
        raise ValueError("fan is defined for t > 0 only")
    x = np.asarray(x, dtype=float)
    return _as_float(np.clip(x / t, wave.w_minus, wave.w_plus))


def foot_point(wave: BurgersWave, t: float, x, tol: float = 1e-13):
    """Solve x0 + t*w0(x0) = x for the characteristic foot point.

    Safeguarded Newton on the bracket [x - t*w_plus, x - t*w_minus];
    monotonicity (w0' > 0, t >= 0) makes the root unique. Seeded with one
    fixed-point sweep so saturated tails converge in a couple of steps.
    """
    if tol <= 0.0:
        raise ValueError("root tolerance must be positive")
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    x = np.asarray(x, dtype=float)
    if t == 0.0:
        return x.copy()
    lo = x - t * wave.w_plus
    hi = x - t * wave.w_minus
    scale = 1.0 + np.abs(x) + t * max(abs(wave.w_minus), abs(wave.w_plus))
    x0 = np.clip(x - t * wave.initial(x - t * wave.mid), lo, hi)
    converged = False
    for _ in range(100):
        f = x0 + t * wave.initial(x0) - x
        if np.all(np.abs(f) <= tol * scale):
            converged = True
            break
        hi = np.where(f > 0.0, x0, hi)
        lo = np.where(f > 0.0, lo, x0)
        fp = 1.0 + t * wave.initial_dx(x0)
        x1 = x0 - f / fp
        outside = (x1 < lo) | (x1 > hi) | ~np.isfinite(x1)
        x0 = np.where(outside, 0.5 * (lo + hi), x1)
    if not converged:
        raise RuntimeError("characteristic foot-point iteration failed to converge")
    return x0


def values_at_foot(wave: BurgersWave, t: float, x0):
    """(w, w_x, w_xx, w_xxx, D) at a known foot point, D = 1 + t*w0'(x0)."""
    w0p = wave.initial_dx(x0)
    w0pp = wave.initial_dxx(x0)
    w0ppp = wave.initial_dxxx(x0)
    D = 1.0 + t * w0p
    w = wave.initial(x0)
    wx = w0p / D
    wxx = w0pp / D ** 3
    wxxx = w0ppp / D ** 4 - 3.0 * t * w0pp ** 2 / D ** 5
    return w, wx, wxx, wxxx, D


def evaluate(wave: BurgersWave, t: float, x, tol: float = 1e-13):
    """Smooth solution and x-derivatives (w, w_x, w_xx, w_xxx) at (t, x), t >= 0."""
    x0 = foot_point(wave, t, x, tol)
    w, wx, wxx, wxxx, _ = values_at_foot(wave, t, x0)
    return _as_float(w), _as_float(wx), _as_float(wxx), _as_float(wxxx)


def _derivative_of_order(wave: BurgersWave, t: float, order: int):
    """Closed-form x-derivative of the given order as a function of the foot point."""
    if order == 1:
        return lambda x0: values_at_foot(wave, t, x0)[1]
    if order == 2:
        return lambda x0: values_at_foot(wave, t, x0)[2]
    if order == 3:
        return lambda x0: values_at_foot(wave, t, x0)[3]
    raise ValueError(f"derivative order must be 1, 2 or 3, got {order}")


def refined_max(fn, lo: float = -FOOT_CUTOFF, hi: float = FOOT_CUTOFF,
                n: int = 65537, atol: float = 1e-10) -> float:
    """Global grid maximum of |fn| with local polish until the change is below atol."""
    grid = np.linspace(lo, hi, n)
    vals = np.abs(fn(grid))
    i = int(np.argmax(vals))
    coarse = float(vals[i])
    a = grid[max(i - 1, 0)]
    b = grid[min(i + 1, n - 1)]
    res = optimize.minimize_scalar(lambda s: -abs(float(fn(s))), bounds=(a, b),
                                   method="bounded", options={"xatol": 1e-13})
    best = max(coarse, -float(res.fun))
    # one refinement pass guards against a lobe the coarse grid straddled
    grid2 = np.linspace(lo, hi, 2 * n - 1)
    vals2 = np.abs(fn(grid2))
    j = int(np.argmax(vals2))
    if vals2[j] > best + atol:
        a2, b2 = grid2[max(j - 1, 0)], grid2[min(j + 1, 2 * n - 2)]
        res2 = optimize.minimize_scalar(lambda s: -abs(float(fn(s))), bounds=(a2, b2),
                                        method="bounded", options={"xatol": 1e-13})
        best = max(best, float(vals2[j]), -float(res2.fun))
    return best


def lp_norm_of_derivative(wave: BurgersWave, t: float, order: int, p) -> float:
    """L^p norm over x of the order-th x-derivative of the smooth solution.

    Computed in foot-point coordinates: with x = x0 + t*w0(x0) and
    dx = D dx0, the integral becomes an explicit smooth integrand on
    [-FOOT_CUTOFF, FOOT_CUTOFF] with tail below 1e-12. p = inf returns the
    refined grid maximum.
    """
    if t < 0.0:
        raise ValueError("time must be nonnegative")
    deriv = _derivative_of_order(wave, t, order)
    if p == np.inf:
        return refined_max(deriv)
    p = float(p)
    if p < 1.0:
        raise ValueError("norm exponent must be >= 1")

    def integrand(x0):
        D = 1.0 + t * wave.initial_dx(x0)
        return np.abs(deriv(x0)) ** p * D

    val, _ = integrate.quad(integrand, -FOOT_CUTOFF, FOOT_CUTOFF,
                            limit=200, epsabs=1e-14, epsrel=1e-12)
    return float(val ** (1.0 / p))


def sup_distance_to_fan(wave: BurgersWave, t: float, n: int = 2_000_001) -> float:
    """sup over x of |w(t, x) - fan(x/t)|, sampled densely in foot-point coordinates."""
    if not t > 0.0:
        raise ValueError("fan comparison needs t > 0")
    x0 = np.linspace(-60.0, 60.0, n)
    w = wave.initial(x0)
    x = x0 + t * w
    return float(np.max(np.abs(w - fan(wave, t, x))))
