"""Path generation: exact solution and Euler-Maruyama on a shared Brownian path.

Negative spot values are possible once ``beta > 0`` and are returned as is.
Clipping them would break agreement with the closed-form prices; payoffs
apply the ``max(., 0)`` instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError
from .mathutil import RandomStream, gaussian_draws
from .pricing import MarketParams

_GRID_SNAP = 1e-9


@dataclass(frozen=True)
class TimeGrid:
    """Uniform grid from 0 to ``t_end``; the last step is shortened if needed."""

    t_end: float
    dt: float
    times: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def build(cls, t_end: float, dt: float) -> TimeGrid:
        if not (math.isfinite(t_end) and t_end > 0.0):
            raise ValidationError(f"t_end must be > 0, got {t_end}", key="t_end")
        if not (math.isfinite(dt) and dt > 0.0):
            raise ValidationError(f"dt must be > 0, got {dt}", key="dt")
        ratio = t_end / dt
        n = round(ratio)
        if n < 1 or abs(ratio - n) > _GRID_SNAP * max(1.0, ratio):
            n = max(1, math.ceil(ratio))
        times = np.arange(n + 1, dtype=float) * dt
        times[-1] = t_end
        if n > 1 and times[-2] >= t_end:
            raise ValidationError("dt too close to t_end to form a grid", key="dt")
        times.setflags(write=False)
        return cls(float(t_end), float(dt), times)

    @property
    def n_steps(self) -> int:
        return len(self.times) - 1

    @property
    def steps(self) -> np.ndarray:
        return np.diff(self.times)


@dataclass(frozen=True)
class Trajectory:
    grid: TimeGrid
    values: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        if len(self.values) != len(self.grid.times):
            raise ValidationError("trajectory length does not match its grid", key="values")


def brownian_increments(stream: RandomStream, grid: TimeGrid) -> np.ndarray:
    """One increment per step, ``sqrt(dt_i) * Z_i``; advances ``stream``."""
    return np.sqrt(grid.steps) * gaussian_draws(stream, grid.n_steps)


def exact_value(params: MarketParams, t, w):
    """Closed-form spot at time ``t`` given Brownian level ``w``; vectorizes."""
    mu = params.carry
    shift = params.shift
    return (params.spot + shift) * np.exp(
        (mu - 0.5 * params.sigma**2) * t + params.sigma * w
    ) - shift * np.exp(mu * t)


def _check_increments(grid: TimeGrid, increments) -> np.ndarray:
    increments = np.asarray(increments, dtype=float)
    if increments.shape[-1] != grid.n_steps:
        raise ValidationError(
            f"expected {grid.n_steps} increments, got {increments.shape[-1]}", key="increments"
        )
    return increments


def exact_path(
    params: MarketParams, grid: TimeGrid, increments, label: str = "exact"
) -> Trajectory:
    increments = _check_increments(grid, increments)
    w = np.concatenate(([0.0], np.cumsum(increments)))
    values = exact_value(params, grid.times, w)
    values[0] = params.spot
    return Trajectory(grid, values, label)


def euler_steps(params: MarketParams, times: np.ndarray, increments: np.ndarray) -> np.ndarray:
    """Euler-Maruyama recursion along the last axis of ``increments``.

    Returns the states at every grid point, shape ``increments.shape[:-1] + (N + 1,)``.
    Coefficients are frozen at the left endpoint of each step.
    """
    mu, sigma, beta = params.carry, params.sigma, params.beta
    dts = np.diff(times)
    crunch = beta * np.exp(mu * times[:-1])
    out = np.empty(increments.shape[:-1] + (len(times),))
    s = np.full(increments.shape[:-1], params.spot)
    out[..., 0] = s
    for i in range(len(dts)):
        s = s + mu * s * dts[i] + (sigma * s + crunch[i]) * increments[..., i]
        out[..., i + 1] = s
    return out


def euler_path(
    params: MarketParams, grid: TimeGrid, increments, label: str = "euler"
) -> Trajectory:
    increments = _check_increments(grid, increments)
    return Trajectory(grid, euler_steps(params, grid.times, increments), label)


def sample_terminal(
    params: MarketParams, maturity: float, n: int, stream: RandomStream
) -> np.ndarray:
    """``n`` independent draws of the spot at ``maturity`` (one Gaussian each)."""
    if not maturity > 0.0:
        raise ValidationError(f"maturity must be > 0, got {maturity}", key="maturity")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}", key="n")
    w = math.sqrt(maturity) * gaussian_draws(stream, n)
    return exact_value(params, maturity, w)
