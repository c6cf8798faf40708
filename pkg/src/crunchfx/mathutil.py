"""Normal CDF and a reproducible Gaussian sampler.

The sampler is counter based so any implementation can reproduce a stream
bit for bit:

1. ``key = mix64(seed ^ mix64(stream_index + 0xD1B54A32D192ED03))``
2. the k-th raw word (k = 0, 1, ...) is ``mix64(key + (k + 1) * 0x9E3779B97F4A7C15)``
   modulo 2**64, where ``mix64`` is the SplitMix64 finalizer
3. the word becomes a uniform ``u = ((word >> 12) + 0.5) * 2**-52`` in (0, 1)
4. ``z = ppnd16(u)``, Wichura's AS 241 inverse normal CDF

Because draw k depends only on (key, k), a stream can be resumed at any
cursor and split into blocks without changing the sequence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
STREAM_SALT = 0xD1B54A32D192ED03

_U64 = np.uint64


def mix64(z: int) -> int:
    """SplitMix64 finalizer on a Python int."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def _mix64_array(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _U64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> _U64(27))) * _U64(0x94D049BB133111EB)
    return z ^ (z >> _U64(31))


def stream_key(seed: int, stream_index: int) -> int:
    return mix64(seed ^ mix64(stream_index + STREAM_SALT))


def norm_cdf(x: float) -> float:
    """Standard normal CDF, ``0.5 * erfc(-x / sqrt(2))``."""
    x = float(x)
    if not math.isfinite(x):
        raise ValidationError(f"norm_cdf needs a finite argument, got {x}", key="x")
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


# Wichura (1988), algorithm AS 241, PPND16. Coefficients lowest order first.
_A = (3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3)
_B = (1.0, 4.2313330701600911252e1, 6.8718700749205790830e2, 5.3941960214247511077e3,
      2.1213794301586595867e4, 3.9307895800092710610e4, 2.8729085735721942674e4,
      5.2264952788528545610e3)
_C = (1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4)
_D = (1.0, 2.05319162663775882187e0, 1.67638483018380384940e0, 6.89767334985100004550e-1,
      1.48103976427480074590e-1, 1.51986665636164571966e-2, 5.47593808499534494600e-4,
      1.05075007164441684324e-9)
_E = (6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7)
_F = (1.0, 5.99832206555887937690e-1, 1.36929880922735805310e-1, 1.48753612908506148525e-2,
      7.86869131145613259100e-4, 1.84631831751005468180e-5, 1.42151175831644588870e-7,
      2.04426310338993978564e-15)


def _poly(coef, r):
    acc = coef[-1]
    for c in reversed(coef[:-1]):
        acc = acc * r + c
    return acc


def norm_ppf(u) -> np.ndarray:
    """Inverse standard normal CDF for ``u`` strictly inside (0, 1)."""
    u = np.asarray(u, dtype=float)
    q = u - 0.5
    out = np.empty_like(u)

    central = np.abs(q) <= 0.425
    if central.any():
        qc = q[central]
        r = 0.180625 - qc * qc
        out[central] = qc * _poly(_A, r) / _poly(_B, r)

    tail = ~central
    if tail.any():
        qt = q[tail]
        r = np.sqrt(-np.log(np.where(qt < 0.0, u[tail], 1.0 - u[tail])))
        near = r <= 5.0
        x = np.empty_like(r)
        rn = r[near] - 1.6
        x[near] = _poly(_C, rn) / _poly(_D, rn)
        rf = r[~near] - 5.0
        x[~near] = _poly(_E, rf) / _poly(_F, rf)
        out[tail] = np.where(qt < 0.0, -x, x)
    return out


@dataclass
class RandomStream:
    """Single-owner handle on one Gaussian sequence.

    ``cursor`` counts draws already consumed; :func:`gaussian_draws` advances
    it. Use :meth:`spawn` to derive independent child streams for blocks of
    parallel work instead of sharing one stream.
    """

    seed: int
    stream_index: int = 0
    cursor: int = 0

    def __post_init__(self):
        for name in ("seed", "stream_index", "cursor"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise ValidationError(f"{name} must be an integer", key=name)
            if not 0 <= int(value) <= MASK64:
                raise ValidationError(f"{name} must fit in 64 unsigned bits", key=name)
            setattr(self, name, int(value))

    @property
    def key(self) -> int:
        return stream_key(self.seed, self.stream_index)

    def spawn(self, block: int) -> RandomStream:
        """Child stream for ``block``; depends only on (seed, stream_index, block)."""
        return RandomStream(seed=self.key, stream_index=block)


def uniform_draws(stream: RandomStream, n: int) -> np.ndarray:
    """``n`` uniforms in (0, 1); advances the stream cursor."""
    if n < 0:
        raise ValidationError("n must be nonnegative", key="n")
    counters = np.arange(stream.cursor + 1, stream.cursor + n + 1, dtype=np.uint64)
    with np.errstate(over="ignore"):
        words = _mix64_array(_U64(stream.key) + counters * _U64(GOLDEN_GAMMA))
    stream.cursor += n
    return ((words >> _U64(12)).astype(np.float64) + 0.5) * 2.0**-52


def gaussian_draws(stream: RandomStream, n: int) -> np.ndarray:
    """``n`` standard normal draws; advances the stream cursor."""
    return norm_ppf(uniform_draws(stream, n))
