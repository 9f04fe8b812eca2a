"""Symplectic and optical tomograms of squeezed correlated Gaussian states.

The symplectic tomogram ``w(X, mu, nu)`` is the probability density of the
observable ``mu*q + nu*p``. For a Gaussian state it is a 1-D Gaussian with
mean ``mu<q> + nu<p>`` and variance ``mu**2 s_qq + nu**2 s_pp + 2 mu nu s_qp``.
The optical tomogram is the slice ``mu = cos(theta)``, ``nu = sin(theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .moments import GaussianState
from .oracle import quadrature

__all__ = [
    "FrameParams",
    "GaussianSlice",
    "EntropicResult",
    "frame_from_angle",
    "gaussian_slice",
    "tomogram_value",
    "optical_tomogram",
    "homogeneity_check",
    "slice_entropy",
    "slice_entropy_quadrature",
    "entropic_check",
    "tomogram_grid",
]

ENTROPY_BOUND = math.log(math.pi * math.e)


@dataclass(frozen=True)
class FrameParams:
    mu: float
    nu: float

    def __post_init__(self):
        if self.mu == 0 and self.nu == 0:
            raise ValueError("reference frame (mu, nu) = (0, 0) is degenerate")


@dataclass(frozen=True)
class GaussianSlice:
    mean: float
    variance: float


@dataclass(frozen=True)
class EntropicResult:
    sum: float
    sum_quadrature: float
    bound: float
    satisfied: bool

    @property
    def excess(self) -> float:
        return self.sum - self.bound


def frame_from_angle(theta: float) -> FrameParams:
    return FrameParams(math.cos(theta), math.sin(theta))


def gaussian_slice(state: GaussianState, frame: FrameParams) -> GaussianSlice:
    mu, nu = frame.mu, frame.nu
    s = state.second
    mean = mu * state.first.mean_q + nu * state.first.mean_p
    variance = mu * mu * s.sigma_qq + nu * nu * s.sigma_pp + 2 * mu * nu * s.sigma_qp
    if not variance > 0:
        raise ValueError(f"non-positive tomogram variance {variance} at frame {frame}")
    return GaussianSlice(mean, variance)


def tomogram_value(sl: GaussianSlice, x):
    """Gaussian density ``(2 pi var)**-1/2 exp(-(x - mean)**2 / (2 var))``; vectorised in ``x``."""
    x = np.asarray(x, dtype=float)
    out = np.exp(-((x - sl.mean) ** 2) / (2 * sl.variance)) / math.sqrt(2 * math.pi * sl.variance)
    return float(out) if out.ndim == 0 else out


def optical_tomogram(state: GaussianState, theta: float, x):
    return tomogram_value(gaussian_slice(state, frame_from_angle(theta)), x)


def homogeneity_check(state: GaussianState, frame: FrameParams, lam: float, x: float) -> float:
    """Residual ``|w(lam X, lam mu, lam nu) - w(X, mu, nu) / |lam||``."""
    if lam == 0:
        raise ValueError("scale factor must be non-zero")
    scaled = FrameParams(lam * frame.mu, lam * frame.nu)
    lhs = tomogram_value(gaussian_slice(state, scaled), lam * x)
    rhs = tomogram_value(gaussian_slice(state, frame), x) / abs(lam)
    return abs(lhs - rhs)


def slice_entropy(sl: GaussianSlice) -> float:
    """Differential entropy ``ln(2 pi e var) / 2``."""
    return 0.5 * math.log(2 * math.pi * math.e * sl.variance)


def slice_entropy_quadrature(sl: GaussianSlice, width: float = 12.0, tol: float = 1e-9) -> float:
    """``-int w ln w dX`` over ``mean +/- width * sd`` by adaptive quadrature."""
    sd = math.sqrt(sl.variance)

    def integrand(x):
        w = tomogram_value(sl, x)
        return -w * math.log(w) if w > 0 else 0.0

    # integrate in the standardised variable so the window is O(1) wide
    return quadrature(lambda z: sd * integrand(sl.mean + sd * z), -width, width, tol)


def entropic_check(state: GaussianState, theta: float, agreement: float = 1e-6) -> EntropicResult:
    """Entropy sum of the conjugate optical slices at ``theta`` and ``theta + pi/2``.

    The analytic sum decides ``satisfied`` (``sum >= ln(pi e) - 1e-9``);
    the quadrature value must agree with it to ``agreement``.
    """
    slices = [gaussian_slice(state, frame_from_angle(a)) for a in (theta, theta + math.pi / 2)]
    analytic = sum(slice_entropy(s) for s in slices)
    numeric = sum(slice_entropy_quadrature(s) for s in slices)
    if abs(analytic - numeric) > agreement:
        raise ArithmeticError(f"entropy quadrature {numeric} disagrees with analytic value {analytic}")
    return EntropicResult(analytic, numeric, ENTROPY_BOUND, analytic >= ENTROPY_BOUND - 1e-9)


def tomogram_grid(state: GaussianState, frames: Sequence[FrameParams], x_grid: Sequence[float]) -> np.ndarray:
    """Tomogram values with one row per frame and one column per ``X``."""
    if len(frames) == 0 or len(x_grid) == 0:
        raise ValueError("frames and x_grid must be non-empty")
    x = np.asarray(x_grid, dtype=float)
    return np.vstack([np.atleast_1d(tomogram_value(gaussian_slice(state, f), x)) for f in frames])
