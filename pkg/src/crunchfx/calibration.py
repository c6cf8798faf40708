"""Implied sigma / implied beta by bisection on the closed-form premium.

No derivative of the premium in beta is available, so bisection is used for
both parameters. Monotonicity is not assumed; the sign check on the bracket is
the only gate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

from .errors import BracketError, ConvergenceError, ValidationError
from .pricing import MarketParams, OptionSpec, price

DEFAULT_SIGMA_BRACKET = (1e-4, 5.0)
DEFAULT_BETA_BRACKET = (0.0, 10.0)
DEFAULT_TOL = 1e-10
MIN_WIDTH = 1e-12
MAX_ITER = 200


@dataclass(frozen=True)
class CalibrationResult:
    parameter: float
    residual: float
    iterations: int
    bracket_low: float
    bracket_high: float


def bisect(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    tol: float = DEFAULT_TOL,
    max_iter: int = MAX_ITER,
) -> CalibrationResult:
    """Find a root of ``f`` on ``[lo, hi]``.

    Stops once ``|f(mid)| <= tol`` or the bracket is narrower than ``MIN_WIDTH``.
    Raises :class:`BracketError` when ``f(lo)`` and ``f(hi)`` share a sign.
    """
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ValidationError(f"invalid bracket [{lo}, {hi}]", key="bracket")
    f_lo, f_hi = f(lo), f(hi)
    if f_lo * f_hi > 0.0 or math.isnan(f_lo) or math.isnan(f_hi):
        raise BracketError(
            f"no sign change on [{lo}, {hi}]: f(lo)={f_lo:.6g}, f(hi)={f_hi:.6g}"
        )

    if f_lo == 0.0:
        return CalibrationResult(lo, f_lo, 0, lo, hi)
    if f_hi == 0.0:
        return CalibrationResult(hi, f_hi, 0, lo, hi)

    a, b = lo, hi
    for it in range(1, max_iter + 1):
        mid = 0.5 * (a + b)
        f_mid = f(mid)
        if abs(f_mid) <= tol or b - a <= MIN_WIDTH:
            return CalibrationResult(mid, f_mid, it, lo, hi)
        if (f_mid < 0.0) == (f_lo < 0.0):
            a, f_lo = mid, f_mid
        else:
            b = mid
    raise ConvergenceError(f"bisection did not converge in {max_iter} iterations")


def _check_target(target_price: float) -> float:
    target_price = float(target_price)
    if not math.isfinite(target_price) or target_price <= 0.0:
        raise ValidationError(f"target price must be finite and > 0, got {target_price}", key="target")
    return target_price


def implied_sigma(
    target_price: float,
    params: MarketParams,
    spec: OptionSpec,
    bracket: tuple[float, float] = DEFAULT_SIGMA_BRACKET,
    tol: float = DEFAULT_TOL,
) -> CalibrationResult:
    """Volatility reproducing ``target_price`` with beta held fixed.

    ``params.sigma`` is ignored.
    """
    target_price = _check_target(target_price)
    lo, hi = bracket
    if not lo > 0.0:
        raise ValidationError("sigma bracket must be strictly positive", key="bracket")
    return bisect(
        lambda s: price(replace(params, sigma=s), spec).premium - target_price, lo, hi, tol
    )


def implied_beta(
    target_price: float,
    params: MarketParams,
    spec: OptionSpec,
    bracket: tuple[float, float] = DEFAULT_BETA_BRACKET,
    tol: float = DEFAULT_TOL,
) -> CalibrationResult:
    """Crunch parameter reproducing ``target_price`` with sigma held fixed.

    ``params.beta`` is ignored.
    """
    target_price = _check_target(target_price)
    lo, hi = bracket
    if not lo >= 0.0:
        raise ValidationError("beta bracket must be nonnegative", key="bracket")
    return bisect(
        lambda b: price(replace(params, beta=b), spec).premium - target_price, lo, hi, tol
    )
