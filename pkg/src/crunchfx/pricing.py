"""Closed-form premiums for European currency options with a crunch term.

The spot follows

    dS = (rd - rf) S dt + (sigma S + beta exp((rd - rf) t)) dW,

whose solution is a lognormal variable minus the deterministic shift
``(beta / sigma) exp((rd - rf) t)``. Pricing therefore reduces to a
Garman-Kohlhagen style formula on the shifted spot ``S0 + beta / sigma``
and shifted strike ``K + (beta / sigma) exp((rd - rf) T)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

from .errors import ValidationError
from .mathutil import norm_cdf

Side = Literal["call", "put"]


def _finite(name: str, value) -> float:
    if isinstance(value, bool):
        raise ValidationError(f"{name} must be a real number", key=name)
    try:
        value = float(value)
    except (TypeError, ValueError):
        raise ValidationError(f"{name} must be a real number", key=name) from None
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value}", key=name)
    return value


@dataclass(frozen=True)
class MarketParams:
    """Model state: spot, volatility, domestic/foreign rates and crunch ``beta``.

    ``beta`` is in currency units per square-root year. ``beta = 0`` is the
    standard Garman-Kohlhagen limit; negative values are rejected.
    """

    spot: float
    sigma: float
    rd: float
    rf: float
    beta: float = 0.0

    def __post_init__(self):
        for name in ("spot", "sigma", "rd", "rf", "beta"):
            object.__setattr__(self, name, _finite(name, getattr(self, name)))
        if self.spot <= 0.0:
            raise ValidationError(f"spot must be > 0, got {self.spot}", key="spot")
        if self.sigma <= 0.0:
            raise ValidationError(f"sigma must be > 0, got {self.sigma}", key="sigma")
        if self.beta < 0.0:
            raise ValidationError(f"beta must be >= 0, got {self.beta}", key="beta")

    @property
    def shift(self) -> float:
        """beta / sigma, the additive shift of the lognormal factor."""
        return self.beta / self.sigma

    @property
    def carry(self) -> float:
        return self.rd - self.rf


@dataclass(frozen=True)
class OptionSpec:
    strike: float
    maturity: float
    side: Side = "call"

    def __post_init__(self):
        object.__setattr__(self, "strike", _finite("strike", self.strike))
        object.__setattr__(self, "maturity", _finite("maturity", self.maturity))
        if self.strike <= 0.0:
            raise ValidationError(f"strike must be > 0, got {self.strike}", key="strike")
        if self.maturity <= 0.0:
            raise ValidationError(f"maturity must be > 0, got {self.maturity}", key="maturity")
        if self.side not in ("call", "put"):
            raise ValidationError(f"side must be 'call' or 'put', got {self.side!r}", key="side")


@dataclass(frozen=True)
class PricingResult:
    premium: float
    d1: float
    d2: float
    discount_domestic: float
    discount_foreign: float


def d1_beta(params: MarketParams, spec: OptionSpec) -> float:
    T = spec.maturity
    vol_sqrt_t = params.sigma * math.sqrt(T)
    shifted_spot = params.spot + params.shift
    shifted_strike = spec.strike + params.shift * math.exp(params.carry * T)
    log_moneyness = math.log(shifted_spot / shifted_strike)
    return (log_moneyness + (params.carry + 0.5 * params.sigma**2) * T) / vol_sqrt_t


def d2_beta(params: MarketParams, spec: OptionSpec) -> float:
    return d1_beta(params, spec) - params.sigma * math.sqrt(spec.maturity)


def _call(params: MarketParams, spec: OptionSpec) -> PricingResult:
    T = spec.maturity
    df_d = math.exp(-params.rd * T)
    df_f = math.exp(-params.rf * T)
    d1 = d1_beta(params, spec)
    d2 = d1 - params.sigma * math.sqrt(T)
    premium = (params.spot + params.shift) * df_f * norm_cdf(d1) - (
        spec.strike * df_d + params.shift * df_f
    ) * norm_cdf(d2)
    return PricingResult(premium, d1, d2, df_d, df_f)


def price_call(params: MarketParams, spec: OptionSpec) -> PricingResult:
    if spec.side != "call":
        raise ValidationError("price_call needs a call spec", key="side")
    return _call(params, spec)


def price_put(params: MarketParams, spec: OptionSpec) -> PricingResult:
    """Put premium as the call premium plus ``K e^{-rd T} - S0 e^{-rf T}``."""
    if spec.side != "put":
        raise ValidationError("price_put needs a put spec", key="side")
    call = _call(params, spec)
    premium = (
        call.premium
        + spec.strike * call.discount_domestic
        - params.spot * call.discount_foreign
    )
    return PricingResult(premium, call.d1, call.d2, call.discount_domestic, call.discount_foreign)


def price(params: MarketParams, spec: OptionSpec) -> PricingResult:
    """Dispatch on ``spec.side``."""
    return price_call(params, spec) if spec.side == "call" else price_put(params, spec)


def parity_gap(params: MarketParams, strike: float, maturity: float) -> float:
    call = price_call(params, OptionSpec(strike, maturity, "call")).premium
    put = price_put(params, OptionSpec(strike, maturity, "put")).premium
    forward_value = params.spot * math.exp(-params.rf * maturity) - strike * math.exp(
        -params.rd * maturity
    )
    return (call - put) - forward_value


def garman_kohlhagen_reference(params: MarketParams, spec: OptionSpec) -> float:
    """Classical currency-option premium; ``params.beta`` is ignored.

    Written independently of the shifted formula (put side uses the
    ``N(-d)`` form, not parity) so it can serve as a cross-check.
    """
    S, K, T, sigma = params.spot, spec.strike, spec.maturity, params.sigma
    vol_sqrt_t = sigma * math.sqrt(T)
    d1 = (math.log(S / K) + (params.rd - params.rf + 0.5 * sigma * sigma) * T) / vol_sqrt_t
    d2 = d1 - vol_sqrt_t
    fwd_leg = S * math.exp(-params.rf * T)
    strike_leg = K * math.exp(-params.rd * T)
    if spec.side == "call":
        return fwd_leg * norm_cdf(d1) - strike_leg * norm_cdf(d2)
    return strike_leg * norm_cdf(-d2) - fwd_leg * norm_cdf(-d1)
