import math

import numpy as np
import pytest

from kickedtomo.oracle import (
    IntegrationError,
    IntegratorConfig,
    QuadratureError,
    golden_section,
    integrate_ode,
    integrate_ode_series,
    minimize_k2_numeric,
    quadrature,
)
from kickedtomo.trajectory import OscillatorParams, epsilon_arrays, epsilon_closed, wronskian, effective_frequency


def test_full_period_returns_to_start():
    pt = integrate_ode(OscillatorParams(1, 0, 0), 2 * math.pi)
    assert abs(pt.eps - 1) < 1e-9
    assert abs(pt.eps_dot - 1j) < 1e-9


def test_weak_kick_matches_closed_form():
    p = OscillatorParams(1, 0.2, 1)
    assert abs(integrate_ode(p, 1.0).eps - epsilon_closed(p, 1.0).eps) < 1e-8


@pytest.mark.parametrize(
    "p, t_end",
    [(OscillatorParams(1, 0.2, 1), 7.0), (OscillatorParams(0.5, 2, 0.5), 1.0), (OscillatorParams(0, 0.5, 1), 9.0)],
)
def test_oracle_wronskian(p, t_end):
    pt = integrate_ode(p, t_end)
    assert abs(wronskian(pt, p.gamma) - 2j * effective_frequency(p)) < 1e-7


def test_negative_times_integrate_backwards():
    p = OscillatorParams(1, 0.2, 1)
    t = np.array([-3.0, -1.0, 0.0, 2.0])
    eps, eps_dot = integrate_ode_series(p, t)
    e, d = epsilon_arrays(p, t)
    np.testing.assert_allclose(eps, e, atol=1e-8)
    np.testing.assert_allclose(eps_dot, d, atol=1e-8)


def test_grid_point_on_kick_takes_post_kick_value():
    p = OscillatorParams(1, 0.1, 0.7, (0.0, 1.0, 2.5))
    t = np.array([0.0, 0.5, 1.0, 2.5, 2.5000001, 4.0])
    eps, eps_dot = integrate_ode_series(p, t)
    e, d = epsilon_arrays(p, t)
    np.testing.assert_allclose(eps, e, atol=1e-8)
    np.testing.assert_allclose(eps_dot, d, atol=1e-8)


def test_multi_kick_against_coefficient_propagation():
    p = OscillatorParams(1.3, 0.25, -0.6, (0.0, 0.8, 1.9, 3.3))
    t = np.linspace(0, 6, 61)
    eps, _ = integrate_ode_series(p, t)
    e, _ = epsilon_arrays(p, t)
    assert np.max(np.abs(eps - e)) < 1e-8


def test_unsorted_grid_rejected():
    with pytest.raises(ValueError):
        integrate_ode_series(OscillatorParams(1, 0.2, 1), [1.0, 0.5])


def test_invalid_config():
    with pytest.raises(ValueError):
        IntegratorConfig(max_step=0.0)
    with pytest.raises(ValueError):
        IntegratorConfig(rel_tol=-1.0)


def test_solver_failure_reported(monkeypatch):
    from scipy.optimize import OptimizeResult

    from kickedtomo import oracle

    def failing(*args, **kwargs):
        return OptimizeResult(success=False, message="Required step size is less than spacing between numbers.")

    monkeypatch.setattr(oracle.integrate, "solve_ivp", failing)
    with pytest.raises(IntegrationError, match="step size"):
        integrate_ode(OscillatorParams(1, 0.2, 1), 1.0)


def test_tighter_tolerance_reduces_error():
    # compare at matched tolerance pairs on a small test matrix
    params = [OscillatorParams(1, 0.2, 1), OscillatorParams(1.5, 0.5, -1.2), OscillatorParams(0.5, 2, 0.5)]
    t = np.linspace(0, 8, 41)
    for p in params:
        errs = []
        for tol in (1e-6, 1e-8, 1e-10):
            eps, _ = integrate_ode_series(p, t, IntegratorConfig(rel_tol=tol, abs_tol=tol * 1e-2))
            errs.append(np.max(np.abs(eps - epsilon_arrays(p, t)[0])))
        assert errs[0] > errs[1] > errs[2]


def test_quadrature_examples():
    assert quadrature(lambda x: 1.0, 0, 1) == pytest.approx(1, abs=1e-14)
    s = 0.7
    gauss = lambda x: math.exp(-x * x / (2 * s * s)) / math.sqrt(2 * math.pi * s * s)
    assert abs(quadrature(gauss, -12 * s, 12 * s) - 1) < 1e-9
    var = 0.5
    w = lambda x: math.exp(-x * x / (2 * var)) / math.sqrt(2 * math.pi * var)
    entropy = quadrature(lambda x: -w(x) * math.log(w(x)), -12 * math.sqrt(var), 12 * math.sqrt(var))
    assert abs(entropy - 0.5 * math.log(math.pi * math.e)) < 1e-6


def test_quadrature_errors():
    with pytest.raises(ValueError):
        quadrature(lambda x: x, 1, 0)
    with pytest.raises(QuadratureError):
        quadrature(lambda x: 1 / abs(x - 0.3) if x != 0.3 else 0.0, 0, 1)


def test_golden_section_parabola():
    x, fx = golden_section(lambda x: (x - 0.3) ** 2, -1, 2, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-9)
    # with a non-zero floor the argmin is only resolvable to ~sqrt(machine eps)
    x, fx = golden_section(lambda x: (x - 0.3) ** 2 + 2, -1, 2, tol=1e-10)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(2, abs=1e-15)


def test_minimizer_flat_when_unkicked():
    t_star, k2 = minimize_k2_numeric(OscillatorParams(1, 0, 0), 0, math.pi)
    assert k2 == pytest.approx(1, abs=1e-14)


def test_minimizer_undamped_kick():
    t_star, k2 = minimize_k2_numeric(OscillatorParams(1, 0, 1), 0, math.pi)
    assert abs(k2 - (3 - 2 * math.sqrt(2))) < 1e-10
    # 1 + 4 sin^2 t + 2 sin 2t is stationary where tan 2t = -1; 3pi/8 is the maximum, 7pi/8 the minimum
    assert t_star == pytest.approx(7 * math.pi / 8, abs=1e-6)


def test_minimizer_below_random_samples(rng):
    p = OscillatorParams(1, 0.1, 2)
    t_hi = math.pi / effective_frequency(p)
    t_star, k2 = minimize_k2_numeric(p, 0, t_hi)
    samples = rng.uniform(0, t_hi, 10_000)
    assert k2 <= np.min(np.abs(epsilon_arrays(p, samples)[0]) ** 2)
    # brute force on 2e6 uniform points over the same half-period
    brute = 0.02940221232551319
    assert k2 <= brute and brute - k2 < 1e-10
