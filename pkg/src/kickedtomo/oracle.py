"""Numerical ground truth for the closed forms.

Nothing here uses the analytic trajectories. The ODE is integrated directly
with each kick applied as an exact jump; integrals and minima are computed by
adaptive quadrature and by a grid scan refined with golden-section search.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .trajectory import OscillatorParams, TrajectoryPoint, effective_frequency, epsilon_arrays

__all__ = [
    "IntegrationError",
    "QuadratureError",
    "IntegratorConfig",
    "integrate_ode",
    "integrate_ode_series",
    "quadrature",
    "golden_section",
    "minimize_k2_numeric",
]

INV_PHI = (math.sqrt(5) - 1) / 2


class IntegrationError(RuntimeError):
    pass


class QuadratureError(RuntimeError):
    pass


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    method: str = "DOP853"

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0 and self.max_step > 0):
            raise ValueError("tolerances and max_step must be positive")


def _rhs(omega0: float, gamma: float):
    w2 = omega0 * omega0

    # Canonical form of eps'' + 2 g eps' + w0^2 eps = 0 with p = exp(2 g t) eps':
    #   eps' = exp(-2 g t) p,  p' = -w0^2 exp(2 g t) eps.
    # y = (Re eps, Im eps, Re p, Im p)
    def f(t, y):
        down = math.exp(-2 * gamma * t)
        up = w2 / down if w2 else 0.0
        return np.array([down * y[2], down * y[3], -up * y[0], -up * y[1]])

    return f


def integrate_ode_series(params: OscillatorParams, t_grid: Sequence[float], cfg: IntegratorConfig | None = None):
    """Integrate from ``t = 0`` and sample ``(eps, eps_dot)`` on a sorted grid.

    The state at ``t = 0`` is ``(1, i*Omega)`` taken before any kick. A kick at
    ``t_k`` maps ``eps_dot -> eps_dot + 2*kappa*eps``; grid times equal to a
    kick get the post-kick value. Grid times below zero are reached by
    backward integration.

    Returns
    -------
    eps, eps_dot : ndarray of complex
    """
    cfg = cfg or IntegratorConfig()
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size and np.any(np.diff(t_grid) < 0):
        raise ValueError("t_grid must be sorted")
    omega = effective_frequency(params)
    f = _rhs(params.omega0, params.gamma)
    y0 = np.array([1.0, 0.0, 0.0, omega])
    out = np.empty((t_grid.size, 4))

    neg = t_grid < 0
    if neg.any():
        ts = t_grid[neg][::-1]
        out[np.flatnonzero(neg)[::-1]] = _solve(f, y0, 0.0, ts[-1], ts, cfg)

    pos_idx = np.flatnonzero(~neg)
    if pos_idx.size:
        ts = t_grid[pos_idx]
        t_stop = ts[-1]
        y = y0.copy()
        start = 0.0
        kicks = [tk for tk in params.kick_times if tk <= t_stop]
        for tk in kicks + [None]:
            stop = t_stop if tk is None else tk
            # sample grid points strictly before this kick (post-kick value at tk itself)
            mask = (ts >= start) & ((ts < stop) if tk is not None else (ts <= stop))
            if stop > start:
                sol = _solve(f, y, start, stop, ts[mask], cfg, return_end=True)
                vals, y = sol
                out[pos_idx[mask]] = vals
            elif mask.any():
                out[pos_idx[mask]] = y
            if tk is not None:
                y = y.copy()
                lift = 2 * params.kappa * math.exp(2 * params.gamma * tk)
                y[2] += lift * y[0]
                y[3] += lift * y[1]
                start = tk
    eps = out[:, 0] + 1j * out[:, 1]
    eps_dot = np.exp(-2 * params.gamma * t_grid) * (out[:, 2] + 1j * out[:, 3])
    return eps, eps_dot


def _solve(f, y0, t0, t1, t_eval, cfg: IntegratorConfig, return_end=False):
    t_eval = np.asarray(t_eval, dtype=float)
    # t1 is appended so the end state comes out of the same run
    extra = not (t_eval.size and t_eval[-1] == t1)
    if extra:
        t_eval = np.append(t_eval, t1)
    sol = integrate.solve_ivp(
        f, (t0, t1), y0, method=cfg.method, t_eval=t_eval,
        rtol=cfg.rel_tol, atol=cfg.abs_tol, max_step=cfg.max_step,
    )
    if not sol.success:
        raise IntegrationError(f"integration over [{t0}, {t1}] failed: {sol.message}")
    vals = sol.y.T
    sampled = vals[:-1] if extra else vals
    if return_end:
        return sampled, vals[-1].copy()
    return sampled


def integrate_ode(params: OscillatorParams, t_end: float, cfg: IntegratorConfig | None = None) -> TrajectoryPoint:
    """Integrate the kicked damped oscillator from ``t = 0`` to ``t_end``."""
    eps, eps_dot = integrate_ode_series(params, [t_end], cfg)
    return TrajectoryPoint(float(t_end), complex(eps[0]), complex(eps_dot[0]))


def quadrature(f: Callable[[float], float], a: float, b: float, tol: float = 1e-10) -> float:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``."""
    if not a < b:
        raise ValueError(f"need a < b, got [{a}, {b}]")
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, err = integrate.quad(f, a, b, epsabs=0.0, epsrel=tol, limit=500)
        except integrate.IntegrationWarning as exc:
            raise QuadratureError(f"quadrature did not converge: {exc}") from exc
    if not math.isfinite(value) or err > max(tol * abs(value), 1e-14):
        raise QuadratureError(f"quadrature did not converge: value={value}, error estimate={err}")
    return value


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-10, max_iter: int = 500):
    """Minimise a unimodal ``f`` on ``[lo, hi]``; returns ``(x_min, f_min)``."""
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    for _ in range(max_iter):
        if hi - lo < tol:
            break
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
    candidates = [(f1, x1), (f2, x2), (f(lo), lo), (f(hi), hi)]
    fmin, xmin = min(candidates)
    return xmin, fmin


def minimize_k2_numeric(params: OscillatorParams, t_lo: float, t_hi: float, n_grid: int = 1024, tol: float = 1e-10):
    """Global minimum of ``|eps(t)|**2`` on ``[t_lo, t_hi]``.

    A uniform scan of ``n_grid`` points (at least 512) brackets the minimum;
    golden-section search then refines it to ``|dt| < tol``.

    Returns
    -------
    t_star, k2_min : float
    """
    if not t_lo < t_hi:
        raise ValueError(f"need t_lo < t_hi, got [{t_lo}, {t_hi}]")
    n_grid = max(n_grid, 512)
    grid = np.linspace(t_lo, t_hi, n_grid)

    def k2(t):
        eps, _ = epsilon_arrays(params, t)
        return np.abs(eps) ** 2

    values = k2(grid)
    i = int(np.argmin(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, n_grid - 1)]
    t_star, k2_min = golden_section(lambda t: float(k2(t)[0]), lo, hi, tol=tol)
    if values[i] < k2_min:
        t_star, k2_min = float(grid[i]), float(values[i])
    return float(t_star), float(k2_min)
