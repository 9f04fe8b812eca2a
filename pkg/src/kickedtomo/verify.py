"""Oracle-versus-closed-form checks run by ``kickedtomo verify``."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import moments as mom
from . import tomography as tomo
from .oracle import IntegratorConfig, integrate_ode_series, quadrature
from .scenario import Scenario
from .trajectory import (
    OscillatorParams,
    Regime,
    TrajectoryPoint,
    classify_regime,
    det2,
    effective_frequency,
    epsilon_arrays,
    epsilon_closed,
    kick_matrix,
    post_kick_coefficients,
    epsilon_from_coefficients,
    transfer_matrix,
)

__all__ = ["Check", "verify_scenario", "default_scenarios", "wronskian_condition"]


@dataclass(frozen=True)
class Check:
    scenario: str
    name: str
    value: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tolerance)


def wronskian_condition(params: OscillatorParams, t, eps, eps_dot) -> np.ndarray:
    """Scale ``exp(2 g t) |eps| |eps_dot| / Omega`` of the products that cancel in the Wronskian.

    Rounding in the Wronskian and in ``det(cov)`` grows in proportion to it
    (to its square for the determinant).
    """
    omega = effective_frequency(params)
    return np.maximum(1.0, np.exp(2 * params.gamma * np.asarray(t)) * np.abs(eps) * np.abs(eps_dot) / omega)


def default_scenarios() -> list[Scenario]:
    def sc(name, w0, g, k, t_end=10.0, alpha=0.5 + 0.25j):
        return Scenario(OscillatorParams(w0, g, k), alpha=alpha, t_end=t_end, n_time=201, name=name)

    return [
        sc("undamped-unkicked", 1.0, 0.0, 0.0),
        sc("undamped-kick", 1.0, 0.0, 1.0),
        sc("weak", 1.0, 0.2, 1.0),
        sc("weak-heavy", 1.0, 0.5, 2.0),
        sc("strong", 0.5, 2.0, 0.5, t_end=5.0),
        sc("free", 0.0, 0.5, 1.0),
    ]


def verify_scenario(sc: Scenario, cfg: IntegratorConfig | None = None) -> list[Check]:
    p = sc.params
    regime = classify_regime(p)
    omega = effective_frequency(p)
    t = sc.time_grid
    checks: list[Check] = []

    def add(name, value, tol):
        checks.append(Check(sc.name, name, float(value), tol))

    eps, eps_dot = epsilon_arrays(p, t)
    eps_o, eps_dot_o = integrate_ode_series(p, t, cfg)
    add("closed vs ODE |eps|", np.max(np.abs(eps - eps_o)), 1e-7)
    add("closed vs ODE |eps_dot|", np.max(np.abs(eps_dot - eps_dot_o)), 1e-6)

    cond = wronskian_condition(p, t, eps, eps_dot)
    w_closed = 2 * np.exp(2 * p.gamma * t) * (eps_dot * eps.conj()).imag
    w_ode = 2 * np.exp(2 * p.gamma * t) * (eps_dot_o * eps_o.conj()).imag
    add("Wronskian closed (scaled)", np.max(np.abs(w_closed - 2 * omega) / cond), 1e-9)
    add("Wronskian ODE (scaled)", np.max(np.abs(w_ode - 2 * omega) / cond), 1e-7)

    dets = []
    for ti, e, d in zip(t, eps, eps_dot):
        s = mom.second_moments(TrajectoryPoint(ti, e, d), p.gamma, omega)
        dets.append(abs(s.determinant - 0.25))
    add("uncertainty defect (scaled)", np.max(np.array(dets) / cond**2), 1e-10)

    m = transfer_matrix(p)
    add("transfer det - 1", abs(det2(m) - 1), 1e-14)
    for tk in p.kick_times:
        before = epsilon_closed(p, float(np.nextafter(tk, -np.inf)))
        after = epsilon_closed(p, tk)
        add(f"continuity at t={tk:g}", abs(after.eps - before.eps), 1e-12 * max(1, abs(before.eps)))
        jump = after.eps_dot - before.eps_dot - 2 * p.kappa * before.eps
        add(f"jump at t={tk:g}", abs(jump), 1e-12 * max(1, abs(before.eps_dot), abs(before.eps)))
        add(f"kick matrix det at t={tk:g}", abs(det2(kick_matrix(p, tk)) - 1), 1e-12)

    after_last = t[t >= (p.kick_times[-1] if p.kick_times else -np.inf)]
    if after_last.size:
        e_c, d_c = epsilon_from_coefficients(p, post_kick_coefficients(p), after_last)
        e_r, d_r = epsilon_arrays(p, after_last)
        add("coefficient vs trajectory form", np.max(np.abs(e_c - e_r) / np.maximum(1, np.abs(e_r))), 1e-12)

    grid = t[(t > 0) & ~np.isin(t, p.kick_times)]
    add("means follow equations of motion", mom.check_equations_of_motion(p, sc.alpha, grid[:: max(1, grid.size // 25)]), 1e-5)

    if p.single_kick_at_zero:
        post = t[t >= 0]
        k2 = np.abs(epsilon_arrays(p, post)[0]) ** 2
        if regime is Regime.WEAK:
            add("weak dispersion identity", np.max(np.abs(mom.dispersion_weak_closed(p, post) - k2 / 2)), 1e-12)
            bound = mom.min_squeezing_weak(p, sc.period)
            if p.gamma == 0:
                add("min squeezing vs closed bound", abs(bound.closed_form - bound.numeric), 1e-6)
        elif regime is Regime.STRONG:
            rel = np.abs(mom.dispersion_strong_closed(p, post) - k2 / 2) / np.maximum(1, k2 / 2)
            add("strong dispersion identity", np.max(rel), 1e-12)
        else:
            add("free k2 identity", np.max(np.abs(mom.k2_free_closed(p, post) - k2)), 1e-12)

    # tomograms at the scenario's tomogram time
    pt = epsilon_closed(p, sc.tomogram_t)
    state = mom.GaussianState.from_point(pt, sc.alpha, p.gamma, omega)
    norm = 0.0
    homog = 0.0
    for f in sc.frames:
        sl = tomo.gaussian_slice(state, f)
        sd = math.sqrt(sl.variance)
        total = quadrature(lambda x: tomo.tomogram_value(sl, x), sl.mean - 12 * sd, sl.mean + 12 * sd, 1e-10)
        norm = max(norm, abs(total - 1))
        for lam in (-2.5, 0.5, 3.0):
            homog = max(homog, tomo.homogeneity_check(state, f, lam, sl.mean + 0.7 * sd))
    add("tomogram normalisation", norm, 1e-6)
    add("tomogram homogeneity", homog, 1e-12)
    deficit = 0.0
    for theta in np.linspace(0, math.pi, 16, endpoint=False):
        res = tomo.entropic_check(state, float(theta))
        deficit = max(deficit, res.bound - res.sum)
    add("entropic inequality deficit", max(deficit, 0.0), 1e-9)
    return checks
