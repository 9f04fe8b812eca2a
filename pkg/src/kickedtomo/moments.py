"""Quadrature moments and squeezing of the Gaussian state built on ``eps(t)``.

Units follow the trajectory normalisation: the coherent initial state has
``sigma_qq = sigma_pp = 1/2``. With these units the classical equation for the
means reads ``d<q>/dt = Omega * exp(-2 g t) * <p>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .oracle import minimize_k2_numeric
from .trajectory import (
    OscillatorParams,
    Regime,
    TrajectoryPoint,
    classify_regime,
    effective_frequency,
    epsilon_closed,
)

__all__ = [
    "FirstMoments",
    "SecondMoments",
    "GaussianState",
    "SqueezingBound",
    "ConventionError",
    "second_moments",
    "first_moments",
    "check_equations_of_motion",
    "squeezing_coefficient",
    "dispersion_weak_closed",
    "min_squeezing_weak",
    "strong_damping_bracket",
    "dispersion_strong_closed",
    "k2_free_closed",
    "k2_free_variant",
]


class ConventionError(RuntimeError):
    """The means violate the classical equations of motion."""


@dataclass(frozen=True)
class FirstMoments:
    mean_q: float
    mean_p: float


@dataclass(frozen=True)
class SecondMoments:
    sigma_qq: float
    sigma_pp: float
    sigma_qp: float

    @property
    def determinant(self) -> float:
        return self.sigma_qq * self.sigma_pp - self.sigma_qp**2

    def as_matrix(self) -> np.ndarray:
        return np.array([[self.sigma_qq, self.sigma_qp], [self.sigma_qp, self.sigma_pp]])


@dataclass(frozen=True)
class GaussianState:
    """First and second moments of one pure Gaussian state."""

    first: FirstMoments
    second: SecondMoments

    @classmethod
    def from_point(cls, point: TrajectoryPoint, alpha: complex, gamma: float, omega_eff: float) -> "GaussianState":
        return cls(first_moments(point, alpha, gamma, omega_eff), second_moments(point, gamma, omega_eff))

    @classmethod
    def coherent(cls, alpha: complex = 0j) -> "GaussianState":
        """The t = 0 coherent state (``eps = 1``, ``eps_dot = i*Omega``)."""
        point = TrajectoryPoint(0.0, 1 + 0j, 1j)
        return cls.from_point(point, alpha, 0.0, 1.0)


def second_moments(point: TrajectoryPoint, gamma: float, omega_eff: float) -> SecondMoments:
    """Covariance block of ``(q, p)``.

    ``sigma_qp`` is signed: ``exp(2 g t) Re(eps_dot conj(eps)) / (2 Omega)``.
    Its square equals ``(exp(4 g t) |eps eps_dot|**2 / Omega**2 - 1) / 4``.
    """
    scale = math.exp(2 * gamma * point.t) / omega_eff
    p_amp = scale * point.eps_dot
    return SecondMoments(
        sigma_qq=abs(point.eps) ** 2 / 2,
        sigma_pp=abs(p_amp) ** 2 / 2,
        sigma_qp=(p_amp * point.eps.conjugate()).real / 2,
    )


def first_moments(point: TrajectoryPoint, alpha: complex, gamma: float, omega_eff: float) -> FirstMoments:
    """Quadrature means of the state labelled by ``alpha``.

    ``<q> = (alpha conj(eps) + conj(alpha) eps) / sqrt(2)`` and
    ``<p> = sqrt(2) exp(2 g t) Re(alpha conj(eps_dot)) / Omega``, so that
    ``alpha = (q + i p) / sqrt(2)`` at ``t = 0``.
    """
    alpha = complex(alpha)
    q = alpha * point.eps.conjugate() + alpha.conjugate() * point.eps
    p = math.exp(2 * gamma * point.t) * (alpha * point.eps_dot.conjugate() + alpha.conjugate() * point.eps_dot)
    if abs(q.imag) > 1e-12 * max(1.0, abs(q)) or abs(p.imag) > 1e-12 * max(1.0, abs(p)):
        raise ConventionError(f"non-real quadrature means: q={q}, p={p}")
    return FirstMoments(q.real / math.sqrt(2), p.real / (math.sqrt(2) * omega_eff))


def check_equations_of_motion(
    params: OscillatorParams,
    alpha: complex,
    t_grid,
    h: float = 1e-5,
    tol: float = 1e-5,
) -> float:
    """Largest ``|d<q>/dt - Omega exp(-2 g t) <p>|`` by central differences.

    Raises :class:`ConventionError` beyond ``tol``.
    """
    omega = effective_frequency(params)
    worst = 0.0
    for t in t_grid:
        # keep the stencil on one side of every kick
        if any(abs(t - tk) <= h for tk in params.kick_times):
            continue
        mq = [first_moments(epsilon_closed(params, s), alpha, params.gamma, omega).mean_q for s in (t - h, t + h)]
        dq = (mq[1] - mq[0]) / (2 * h)
        mp = first_moments(epsilon_closed(params, t), alpha, params.gamma, omega).mean_p
        worst = max(worst, abs(dq - omega * math.exp(-2 * params.gamma * t) * mp))
    if worst > tol:
        raise ConventionError(f"means violate the classical equations of motion: defect {worst:.3e}")
    return worst


def squeezing_coefficient(point: TrajectoryPoint) -> float:
    """``sigma_qq(t) / sigma_qq(0) = |eps(t)|**2``; below 1 means squeezing."""
    return abs(point.eps) ** 2


def _require(params: OscillatorParams, regime: Regime) -> float:
    actual = classify_regime(params)
    if actual is not regime:
        raise ValueError(f"expected {regime.value} damping, got {actual.value}")
    if not params.single_kick_at_zero:
        raise ValueError("closed-form dispersions assume a single kick at t = 0")
    return effective_frequency(params)


def dispersion_weak_closed(params: OscillatorParams, t):
    """Position dispersion after the kick, weak damping::

        exp(-2 g t)/2 * [1 + (2k + g)**2 sin(W t)**2 / W**2 + (2k + g) sin(2 W t) / W]
    """
    om = _require(params, Regime.WEAK)
    t = np.asarray(t, dtype=float)
    lift = (2 * params.kappa + params.gamma) / om
    s = np.sin(om * t)
    bracket = 1 + lift**2 * s**2 + lift * np.sin(2 * om * t)
    return np.exp(-2 * params.gamma * t) / 2 * bracket


@dataclass(frozen=True)
class SqueezingBound:
    closed_form: float
    numeric: float
    t_star: float
    period: int

    @property
    def relative_deviation(self) -> float:
        return abs(self.closed_form - self.numeric) / abs(self.numeric)


def min_squeezing_weak(params: OscillatorParams, n: int = 1) -> SqueezingBound:
    """Lower limit of ``k**2`` in the ``n``-th half-period, with a numeric check.

    Closed form, ``a = k + g/2``::

        [1 + 2 a**2/W**2 - (2a/W**2) sqrt(a**2 + W**2)]
          * exp[(g/W) arccos(W / sqrt(a**2 + W**2)) - (pi g / W)(2n - 1)]

    ``numeric`` is the minimum of ``|eps(t)|**2`` over
    ``[(n - 1) pi / W, n pi / W]``, the ``n``-th period of the oscillating bracket.
    """
    if n < 1:
        raise ValueError(f"period index must be >= 1, got {n}")
    om = _require(params, Regime.WEAK)
    g = params.gamma
    a = params.kappa + g / 2
    root = math.hypot(a, om)
    bracket = 1 + 2 * a**2 / om**2 - 2 * a / om**2 * root
    closed = bracket * math.exp(g / om * math.acos(om / root) - math.pi * g / om * (2 * n - 1))
    t_star, k2 = minimize_k2_numeric(params, (n - 1) * math.pi / om, n * math.pi / om)
    return SqueezingBound(closed, k2, t_star, n)


def strong_damping_bracket(params: OscillatorParams, t):
    """``2 exp(2 g t) sigma_qq(t)`` after the kick, strong damping::

        cosh(2Wt) + ((2k + g)/W)**2 (cosh(2Wt) - 1)/2 + ((2k + g)/W) sqrt(cosh(2Wt)**2 - 1)
    """
    om = _require(params, Regime.STRONG)
    t = np.asarray(t, dtype=float)
    lift = (2 * params.kappa + params.gamma) / om
    x = 2 * om * t
    # cosh(x) - 1 = 2 sinh(x/2)**2 and sqrt(cosh(x)**2 - 1) = |sinh x|, free of cancellation
    return np.cosh(x) + lift**2 * np.sinh(x / 2) ** 2 + lift * np.abs(np.sinh(x))


def dispersion_strong_closed(params: OscillatorParams, t):
    """Position dispersion after the kick, strong damping: ``exp(-2 g t)/2 * bracket``."""
    return np.exp(-2 * params.gamma * np.asarray(t, dtype=float)) / 2 * strong_damping_bracket(params, t)


def k2_free_closed(params: OscillatorParams, t):
    """Squeezing coefficient of the kicked free particle.

    ``[1 + (k/g) u]**2 + u**2 / 4`` with ``u = 1 - exp(-2 g t)``.
    """
    _require(params, Regime.FREE)
    u = -np.expm1(-2 * params.gamma * np.asarray(t, dtype=float))
    return (1 + params.kappa / params.gamma * u) ** 2 + u**2 / 4


def k2_free_variant(params: OscillatorParams, t):
    """Variant ``1 + (k/g)**2 u**2 + 2 k / (g u)`` of the free-particle coefficient.

    It is not ``|eps|**2``: the cross term is divided by ``u`` and the
    ``u**2/4`` term is missing, so it diverges as ``t -> 0+``. Kept only for
    comparison with :func:`k2_free_closed`.
    """
    _require(params, Regime.FREE)
    u = -np.expm1(-2 * params.gamma * np.asarray(t, dtype=float))
    ratio = params.kappa / params.gamma
    return 1 + ratio**2 * u**2 + 2 * ratio / u
