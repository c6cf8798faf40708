"""Monte Carlo estimators used as an independent check on the closed forms.

Samples are split into fixed blocks of ``BLOCK_SIZE`` paths. Block ``b`` draws
from ``stream.spawn(b)`` and block statistics are folded in block order, so
the result does not depend on how many workers ran the blocks.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ValidationError
from .mathutil import RandomStream, gaussian_draws
from .pricing import MarketParams, OptionSpec
from .simulation import TimeGrid, euler_steps, exact_value, sample_terminal

BLOCK_SIZE = 2**16
MIN_PATHS = 100
Z95 = 1.96


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    n: int
    ci95_low: float
    ci95_high: float

    def contains(self, value: float, n_stderr: float = 3.0) -> bool:
        return abs(value - self.mean) <= n_stderr * self.stderr


@dataclass(frozen=True)
class ConvergenceRow:
    dt: float
    strong_error: float
    n_paths: int


def _block_sizes(n: int) -> list[int]:
    full, rest = divmod(n, BLOCK_SIZE)
    return [BLOCK_SIZE] * full + ([rest] if rest else [])


def _blocked_estimate(
    n: int,
    stream: RandomStream,
    sample_block: Callable[[int, RandomStream], np.ndarray],
    workers: int,
) -> McEstimate:
    if n < MIN_PATHS:
        raise ValidationError(f"n must be >= {MIN_PATHS}, got {n}", key="n")
    if workers < 1:
        raise ValidationError("workers must be >= 1", key="workers")

    def run(job):
        block, size = job
        x = sample_block(size, stream.spawn(block))
        mean = float(np.mean(x))
        return size, mean, float(np.sum((x - mean) ** 2))

    jobs = list(enumerate(_block_sizes(n)))
    if workers == 1:
        stats = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(run, jobs))

    # Chan et al. pairwise update, folded in block order
    count, mean, m2 = 0, 0.0, 0.0
    for size, b_mean, b_m2 in stats:
        total = count + size
        delta = b_mean - mean
        mean += delta * size / total
        m2 += b_m2 + delta * delta * count * size / total
        count = total

    stderr = math.sqrt(m2 / (count - 1)) / math.sqrt(count)
    return McEstimate(mean, stderr, count, mean - Z95 * stderr, mean + Z95 * stderr)


def mc_price(
    params: MarketParams,
    spec: OptionSpec,
    n: int,
    stream: RandomStream,
    workers: int = 1,
) -> McEstimate:
    """Discounted mean payoff over exact terminal samples.

    The payoff floor is applied literally, so negative terminal spots (possible
    when ``beta > 0``) contribute zero to a call.
    """
    discount = math.exp(-params.rd * spec.maturity)
    sign = 1.0 if spec.side == "call" else -1.0

    def sample_block(size, block_stream):
        s_t = sample_terminal(params, spec.maturity, size, block_stream)
        return discount * np.maximum(sign * (s_t - spec.strike), 0.0)

    return _blocked_estimate(n, stream, sample_block, workers)


def mc_forward_check(
    params: MarketParams,
    maturity: float,
    n: int,
    stream: RandomStream,
    workers: int = 1,
) -> McEstimate:
    """Estimate ``exp(-(rd - rf) T) E[S_T]``, which equals ``S0`` for any beta."""
    growth = math.exp(-params.carry * maturity)

    def sample_block(size, block_stream):
        return growth * sample_terminal(params, maturity, size, block_stream)

    return _blocked_estimate(n, stream, sample_block, workers)


def convergence_study(
    params: MarketParams,
    maturity: float,
    dt_levels: Sequence[float],
    n_paths: int,
    stream: RandomStream,
) -> list[ConvergenceRow]:
    """Mean terminal error of Euler against the exact solution, per step size.

    One Brownian path per sample is drawn on the union of all level grids, so
    every level (and the exact solution) sees the same path. Draws are consumed
    from ``stream`` in path-major order.
    """
    levels = [float(dt) for dt in dt_levels]
    if not levels:
        raise ValidationError("dt_levels is empty", key="dt_levels")
    if any(dt <= 0.0 or not math.isfinite(dt) for dt in levels):
        raise ValidationError("dt_levels must be positive and finite", key="dt_levels")
    if any(b >= a for a, b in zip(levels, levels[1:])):
        raise ValidationError("dt_levels must be strictly decreasing", key="dt_levels")
    if n_paths < MIN_PATHS:
        raise ValidationError(f"n_paths must be >= {MIN_PATHS}, got {n_paths}", key="n_paths")

    grids = [TimeGrid.build(maturity, dt) for dt in levels]
    union = grids[0].times
    for g in grids[1:]:
        union = np.union1d(union, g.times)

    z = gaussian_draws(stream, n_paths * (len(union) - 1)).reshape(n_paths, -1)
    w = np.cumsum(np.sqrt(np.diff(union)) * z, axis=1)
    w = np.concatenate([np.zeros((n_paths, 1)), w], axis=1)
    exact_terminal = exact_value(params, maturity, w[:, -1])

    rows = []
    for dt, grid in zip(levels, grids):
        idx = np.searchsorted(union, grid.times)
        increments = np.diff(w[:, idx], axis=1)
        euler_terminal = euler_steps(params, grid.times, increments)[:, -1]
        err = float(np.mean(np.abs(euler_terminal - exact_terminal)))
        rows.append(ConvergenceRow(dt, err, n_paths))
    return rows


def strong_order(rows: Sequence[ConvergenceRow]) -> float:
    """Least-squares slope of log(strong_error) against log(dt)."""
    dts = np.log([r.dt for r in rows])
    errs = np.log([r.strong_error for r in rows])
    return float(np.polyfit(dts, errs, 1)[0])
