"""Classical trajectory of a Caldirola-Kanai damped oscillator with delta-kicked frequency.

The frequency profile is ``omega(t)**2 = omega0**2 - 2*kappa*sum_k delta(t - t_k)``.
Between kicks the complex trajectory ``eps(t)`` solves

    eps'' + 2*gamma*eps' + omega0**2 * eps = 0,

and at each kick ``eps`` is continuous while ``eps'`` jumps by ``2*kappa*eps``.
The state before the first kick is anchored at ``eps(0) = 1``,
``eps'(0) = 1j * Omega``.

In every regime the solution is a combination of two real exponentials
``exp(r1*t)`` and ``exp(r2*t)`` (complex rates for weak damping), so a kick is
a 2x2 unimodular map on the mode coefficients ``(A, B)``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

__all__ = [
    "Regime",
    "RegimeError",
    "OscillatorParams",
    "TrajectoryPoint",
    "classify_regime",
    "effective_frequency",
    "mode_rates",
    "transfer_matrix",
    "kick_matrix",
    "det2",
    "pre_kick_coefficients",
    "post_kick_coefficients",
    "epsilon_from_coefficients",
    "epsilon_closed",
    "epsilon_arrays",
    "wronskian",
    "trajectory_series",
]


class Regime(enum.Enum):
    WEAK = "weak"
    STRONG = "strong"
    FREE = "free"
    CRITICAL = "critical"


class RegimeError(ValueError):
    """Raised for parameter sets with no closed-form trajectory (critical damping,
    or the undamped free particle)."""


@dataclass(frozen=True)
class OscillatorParams:
    """Physical configuration; dimensionless units with hbar = m = 1.

    ``kick_times`` must be strictly increasing and non-negative: the initial
    data ``eps(0) = 1, eps'(0) = i*Omega`` is taken just before ``t = 0``.
    """

    omega0: float
    gamma: float
    kappa: float = 0.0
    kick_times: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "kick_times", tuple(float(t) for t in self.kick_times))
        for name in ("omega0", "gamma", "kappa"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
        if self.omega0 < 0:
            raise ValueError(f"omega0 must be >= 0, got {self.omega0}")
        if self.gamma < 0:
            raise ValueError(f"gamma must be >= 0, got {self.gamma}")
        kicks = self.kick_times
        if any(not math.isfinite(t) or t < 0 for t in kicks):
            raise ValueError(f"kick times must be finite and >= 0, got {kicks}")
        if any(b <= a for a, b in zip(kicks, kicks[1:])):
            raise ValueError(f"kick times must be strictly increasing, got {kicks}")

    @property
    def regime(self) -> Regime:
        return classify_regime(self)

    @property
    def single_kick_at_zero(self) -> bool:
        return self.kick_times == (0.0,)


@dataclass(frozen=True)
class TrajectoryPoint:
    t: float
    eps: complex
    eps_dot: complex


def classify_regime(params: OscillatorParams) -> Regime:
    """Damping regime of ``params``.

    Raises
    ------
    RegimeError
        For critical damping (``omega0 == gamma > 0``) and for
        ``omega0 == gamma == 0``.
    """
    w0, g = params.omega0, params.gamma
    if w0 == 0 and g == 0:
        raise RegimeError("omega0 = gamma = 0: undamped free particle has no squeezed-state trajectory")
    if w0 == g:
        raise RegimeError(f"critical damping (omega0 = gamma = {g}) is not supported: transfer matrices divide by Omega = 0")
    if w0 == 0:
        return Regime.FREE
    if w0 > g:
        return Regime.WEAK
    return Regime.STRONG


def effective_frequency(params: OscillatorParams) -> float:
    """Frequency ``Omega`` fixing the Wronskian ``2j*Omega`` of the trajectory.

    Weak: ``sqrt(omega0**2 - gamma**2)``; strong: ``sqrt(gamma**2 - omega0**2)``;
    free particle: ``gamma``.
    """
    regime = classify_regime(params)
    w0, g = params.omega0, params.gamma
    if regime is Regime.WEAK:
        return math.sqrt((w0 - g) * (w0 + g))
    if regime is Regime.STRONG:
        return math.sqrt((g - w0) * (g + w0))
    return g


def mode_rates(params: OscillatorParams) -> tuple[complex, complex]:
    """Exponents ``(r1, r2)`` of the two fundamental solutions ``exp(r*t)``."""
    regime = classify_regime(params)
    om = effective_frequency(params)
    g = params.gamma
    if regime is Regime.WEAK:
        return complex(-g, om), complex(-g, -om)
    # strong and free share the form -gamma +/- Omega (free: Omega = gamma)
    return complex(-g + om), complex(-g - om)


def transfer_matrix(params: OscillatorParams) -> np.ndarray:
    """Coefficient map ``(A0, B0) -> (A1, B1)`` for a kick at ``t = 0``.

    Weak damping::

        [[1 - i k/W, -i k/W],
         [i k/W,  1 + i k/W]]

    Strong damping (and free particle with ``W = gamma``)::

        [[1 + k/W,  k/W],
         [-k/W,  1 - k/W]]
    """
    regime = classify_regime(params)
    x = params.kappa / effective_frequency(params)
    if regime is Regime.WEAK:
        return np.array([[1 - 1j * x, -1j * x], [1j * x, 1 + 1j * x]], dtype=complex)
    return np.array([[1 + x, x], [-x, 1 - x]], dtype=complex)


def det2(m) -> complex:
    """Determinant of a 2x2 matrix by the direct formula."""
    return m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]


def kick_matrix(params: OscillatorParams, kick_time: float) -> np.ndarray:
    """Coefficient map for a kick at an arbitrary time.

    Solves ``dA*phi1 + dB*phi2 = 0`` and ``dA*phi1' + dB*phi2' = 2*kappa*eps``
    with ``phi_j = exp(r_j * kick_time)``. Reduces to :func:`transfer_matrix`
    at ``kick_time = 0``.
    """
    if kick_time == 0.0:
        return transfer_matrix(params)
    r1, r2 = mode_rates(params)
    p1, p2 = np.exp(r1 * kick_time), np.exp(r2 * kick_time)
    # Wronskian of the basis: phi1*phi2' - phi1'*phi2 = (r2 - r1) * p1 * p2
    c = 2 * params.kappa / (r2 - r1)
    # dA = -c*eps/p1, dB = c*eps/p2 with eps = A*p1 + B*p2
    return np.array(
        [[1 - c, -c * p2 / p1], [c * p1 / p2, 1 + c]],
        dtype=complex,
    )


def pre_kick_coefficients(params: OscillatorParams) -> tuple[complex, complex]:
    """Mode coefficients ``(A0, B0)`` of the trajectory before the first kick."""
    regime = classify_regime(params)
    om = effective_frequency(params)
    g = params.gamma
    if regime is Regime.WEAK:
        return complex(1, -g / (2 * om)), complex(0, g / (2 * om))
    if regime is Regime.STRONG:
        return 0.5 * complex(1 + g / om, 1), 0.5 * complex(1 - g / om, -1)
    return complex(1, 0.5), complex(0, -0.5)


def post_kick_coefficients(params: OscillatorParams) -> tuple[complex, complex]:
    """Coefficients after every kick in ``params.kick_times``."""
    coeffs = np.array(pre_kick_coefficients(params))
    for tk in params.kick_times:
        coeffs = kick_matrix(params, tk) @ coeffs
    return complex(coeffs[0]), complex(coeffs[1])


def epsilon_from_coefficients(params: OscillatorParams, coeffs, t):
    """Evaluate ``A exp(r1 t) + B exp(r2 t)`` and its derivative (vectorised in t)."""
    r1, r2 = mode_rates(params)
    a, b = coeffs
    t = np.asarray(t, dtype=float)
    e1, e2 = a * np.exp(r1 * t), b * np.exp(r2 * t)
    return e1 + e2, r1 * e1 + r2 * e2


def _pre_kick_closed(params: OscillatorParams, t: np.ndarray):
    regime = classify_regime(params)
    om = effective_frequency(params)
    g = params.gamma
    if regime is Regime.WEAK:
        s, c = np.sin(om * t), np.cos(om * t)
        damp = np.exp(-g * t)
        eps = damp * (c + 1j * s + (g / om) * s)
        # derivative of exp(i W t) + (g/W) sin(W t), then the product rule
        inner_dot = 1j * om * (c + 1j * s) + g * c
        return eps, damp * inner_dot - g * eps
    if regime is Regime.STRONG:
        return _strong_form(g, om, g / om + 1j, t)
    decay = np.exp(-2 * g * t)
    eps = 1 - 0.5j * np.expm1(-2 * g * t)
    return eps, 1j * g * decay


def _strong_form(g: float, om: float, slope, t: np.ndarray):
    # eps = exp(-g t) [cosh(W t) + slope * sinh(W t)]
    ch, sh = np.cosh(om * t), np.sinh(om * t)
    damp = np.exp(-g * t)
    eps = damp * (ch + slope * sh)
    inner_dot = om * (sh + slope * ch)
    return eps, damp * inner_dot - g * eps


def _post_kick_closed(params: OscillatorParams, t: np.ndarray):
    # single kick at t = 0
    regime = classify_regime(params)
    om = effective_frequency(params)
    g, k = params.gamma, params.kappa
    if regime is Regime.WEAK:
        s, c = np.sin(om * t), np.cos(om * t)
        damp = np.exp(-g * t)
        lift = (2 * k + g) / om
        eps = damp * (c + 1j * s + lift * s)
        inner_dot = 1j * om * (c + 1j * s) + lift * om * c
        return eps, damp * inner_dot - g * eps
    if regime is Regime.STRONG:
        return _strong_form(g, om, 1j + g / om + 2 * k / om, t)
    # 1 - exp(-2 g t) and exp(-2 g t) kept separate: neither may cancel
    u = -np.expm1(-2 * g * t)
    eps = 1 + (k / g) * u + 0.5j * u
    return eps, (2 * k + 1j * g) * np.exp(-2 * g * t)


def epsilon_arrays(params: OscillatorParams, t) -> tuple[np.ndarray, np.ndarray]:
    """Vectorised closed-form ``(eps, eps_dot)`` on an array of times.

    Times equal to a kick instant take the post-kick value.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    eps = np.empty(t.shape, dtype=complex)
    eps_dot = np.empty(t.shape, dtype=complex)
    kicks = params.kick_times
    first = kicks[0] if kicks else math.inf
    before = t < first
    if before.any():
        eps[before], eps_dot[before] = _pre_kick_closed(params, t[before])
    if params.single_kick_at_zero:
        after = ~before
        if after.any():
            eps[after], eps_dot[after] = _post_kick_closed(params, t[after])
        return eps, eps_dot
    coeffs = np.array(pre_kick_coefficients(params))
    for i, tk in enumerate(kicks):
        coeffs = kick_matrix(params, tk) @ coeffs
        upper = kicks[i + 1] if i + 1 < len(kicks) else math.inf
        seg = (t >= tk) & (t < upper)
        if seg.any():
            eps[seg], eps_dot[seg] = epsilon_from_coefficients(params, coeffs, t[seg])
    return eps, eps_dot


def epsilon_closed(params: OscillatorParams, t: float) -> TrajectoryPoint:
    """Closed-form trajectory point at time ``t``.

    For the default single kick at ``t = 0`` the post-kick branches are

    * weak:   ``exp(-g t) [exp(i W t) + ((2k + g)/W) sin(W t)]``
    * strong: ``exp(-g t) [cosh(W t) + sinh(W t) (i + g/W + 2k/W)]``
    * free:   ``1 + (k/g)(1 - exp(-2 g t)) + (i/2)(1 - exp(-2 g t))``

    Other kick schedules are handled by composing kick matrices in
    coefficient space.
    """
    eps, eps_dot = epsilon_arrays(params, t)
    return TrajectoryPoint(float(t), complex(eps[0]), complex(eps_dot[0]))


def wronskian(point: TrajectoryPoint, gamma: float) -> complex:
    """``exp(2 g t) (eps_dot conj(eps) - conj(eps_dot) eps)``; equals ``2j*Omega``."""
    # z - conj(z) = 2i Im z
    return 2j * math.exp(2 * gamma * point.t) * (point.eps_dot * point.eps.conjugate()).imag


def trajectory_series(params: OscillatorParams, t_grid: Sequence[float]) -> list[TrajectoryPoint]:
    if len(t_grid) == 0:
        return []
    eps, eps_dot = epsilon_arrays(params, t_grid)
    return [TrajectoryPoint(float(t), complex(e), complex(d)) for t, e, d in zip(t_grid, eps, eps_dot)]
