"""Currency option pricing under a Black-Scholes model with a crunch term."""

from .calibration import CalibrationResult, implied_beta, implied_sigma
from .errors import BracketError, ConfigFormatError, ConvergenceError, CrunchError, ValidationError
from .mathutil import RandomStream, gaussian_draws, norm_cdf
from .montecarlo import ConvergenceRow, McEstimate, convergence_study, mc_forward_check, mc_price
from .pricing import (
    MarketParams,
    OptionSpec,
    PricingResult,
    d1_beta,
    d2_beta,
    garman_kohlhagen_reference,
    parity_gap,
    price,
    price_call,
    price_put,
)
from .simulation import TimeGrid, Trajectory, brownian_increments, euler_path, exact_path, sample_terminal

__version__ = "0.1.0"
