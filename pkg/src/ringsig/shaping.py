"""Shared-secret ring shaping: factor streams, the shaping transform, and
its analytic power/error-rate companions.

Each symbol k is multiplied by ``M_k * exp(j*theta_k)`` where ``theta_k`` is
drawn from the ``2**phase_intensity``-level rotation grid and ``M_k`` is
uniform on ``[magnitude_intensity, 1]``. Both streams are pure functions of
(seed, stream id, symbol index), so the receiver regenerates them exactly and
disjoint index ranges can be produced independently.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np
from scipy import special
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import DegenerateFactor, DomainError, LengthMismatch, NotFitted
from .validation import as_complex_samples, check_unit_interval

MAGNITUDE_FLOOR = 1e-6

_TWO_PI = 2.0 * np.pi


def _stream_key(seed: int, stream_id: str) -> np.ndarray:
    """128-bit Philox key from the shared seed and a stream label."""
    salt = int.from_bytes(
        hashlib.blake2b(stream_id.encode(), digest_size=8).digest(), "little"
    )
    return np.array([np.uint64(seed & 0xFFFFFFFFFFFFFFFF), np.uint64(salt)], dtype=np.uint64)


def _uniform_stream(seed: int, stream_id: str, count: int) -> np.ndarray:
    """Counter-based uniform [0, 1) draws; draw k is the factor for symbol k."""
    gen = np.random.Generator(np.random.Philox(key=_stream_key(seed, stream_id)))
    return gen.random(count)


@dataclass(frozen=True)
class ShapingConfig:
    """The shared secret: seed plus phase/magnitude intensity levels."""

    seed: int
    phase_intensity: int = 0
    magnitude_intensity: float = 1.0

    def __post_init__(self):
        if not (0 <= int(self.phase_intensity) <= 16):
            raise DomainError("phase_intensity must lie in [0, 16]")
        check_unit_interval("magnitude_intensity", self.magnitude_intensity, open_low=True)


@dataclass(frozen=True)
class FactorStream:
    """Per-symbol phase rotations (radians) and magnitude scalings."""

    thetas: np.ndarray
    magnitudes: np.ndarray

    def __post_init__(self):
        if self.thetas.shape != self.magnitudes.shape or self.thetas.ndim != 1:
            raise LengthMismatch("thetas and magnitudes must be equal-length 1-D arrays")

    def __len__(self) -> int:
        return self.thetas.size


def gen_phase_factors(cfg: ShapingConfig, count: int) -> np.ndarray:
    """Rotation angles: uniform over {2*pi*d / 2**I_p : d in [0, 2**I_p)}.

    The top ``I_p`` bits of one uniform draw per symbol form the level ``d``;
    ``I_p = 0`` disables rotation entirely.
    """
    if count < 0:
        raise DomainError("count must be non-negative")
    ip = int(cfg.phase_intensity)
    if ip == 0:
        return np.zeros(count)
    levels = 1 << ip
    u = _uniform_stream(cfg.seed, "phase", count)
    d = np.floor(u * levels)
    return d * (_TWO_PI / levels)


def gen_magnitude_factors(cfg: ShapingConfig, count: int) -> np.ndarray:
    """Magnitude scalings: i.i.d. uniform on [magnitude_intensity, 1]."""
    if count < 0:
        raise DomainError("count must be non-negative")
    im = cfg.magnitude_intensity
    if im == 1.0:
        return np.ones(count)
    u = _uniform_stream(cfg.seed, "magnitude", count)
    return im + (1.0 - im) * u


def gen_factor_stream(cfg: ShapingConfig, count: int) -> FactorStream:
    return FactorStream(gen_phase_factors(cfg, count), gen_magnitude_factors(cfg, count))


def apply_shaping(samples, factors: FactorStream) -> np.ndarray:
    """Multiply sample k by ``M_k * exp(j*theta_k)``."""
    x = as_complex_samples(samples)
    if x.size != len(factors):
        raise LengthMismatch(f"{x.size} samples vs {len(factors)} factors")
    return x * factors.magnitudes * np.exp(1j * factors.thetas)


def invert_shaping(samples, factors: FactorStream) -> np.ndarray:
    """Undo :func:`apply_shaping`; requires every magnitude above the floor."""
    x = as_complex_samples(samples)
    if x.size != len(factors):
        raise LengthMismatch(f"{x.size} samples vs {len(factors)} factors")
    if len(factors) and factors.magnitudes.min() < MAGNITUDE_FLOOR:
        raise DegenerateFactor(f"magnitude factor below {MAGNITUDE_FLOOR}")
    return x * np.exp(-1j * factors.thetas) / factors.magnitudes


class RingShaper(BaseEstimator, TransformerMixin):
    """Stateless transformer wrapping the shaping transform.

    ``transform`` shapes a block of complex symbols, ``inverse_transform``
    recovers it; both regenerate the factor streams from the configured
    secret, so a fitted instance is interchangeable between transmitter and
    receiver. ``fit`` only validates parameters.
    """

    def __init__(self, seed: int = 0, phase_intensity: int = 0,
                 magnitude_intensity: float = 1.0):
        self.seed = seed
        self.phase_intensity = phase_intensity
        self.magnitude_intensity = magnitude_intensity

    def _config(self) -> ShapingConfig:
        return ShapingConfig(self.seed, self.phase_intensity, self.magnitude_intensity)

    def fit(self, X=None, y=None):
        self._cfg_ = self._config()
        return self

    def _check_fitted(self) -> ShapingConfig:
        if not hasattr(self, "_cfg_"):
            raise NotFitted("call fit() before transform()")
        return self._cfg_

    def transform(self, X) -> np.ndarray:
        cfg = self._check_fitted()
        x = as_complex_samples(X)
        return apply_shaping(x, gen_factor_stream(cfg, x.size))

    def inverse_transform(self, X) -> np.ndarray:
        cfg = self._check_fitted()
        x = as_complex_samples(X)
        return invert_shaping(x, gen_factor_stream(cfg, x.size))


def q_function(x) -> np.ndarray | float:
    """Gaussian tail probability Q(x) = 0.5 * erfc(x / sqrt(2))."""
    x = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(x)):
        raise DomainError("q_function requires finite input")
    out = 0.5 * special.erfc(x / np.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def ring_power(amplitude: float, magnitude_intensity: float) -> float:
    """Average ring power per the squared-mean-amplitude formula:
    ``(A * (I_m + 1) / 2)**2``."""
    if not (np.isfinite(amplitude) and amplitude > 0):
        raise DomainError("amplitude must be positive")
    im = check_unit_interval("magnitude_intensity", magnitude_intensity, open_low=True)
    return (amplitude * (im + 1.0) / 2.0) ** 2


def theoretical_ber_ring(es_n0: float, magnitude_intensity: float,
                         mode: str = "literal", n_draws: int = 200_000,
                         seed: int = 0) -> float:
    """Ring error-rate prediction ``2*Q(sqrt(((I_m+1)/2)**2 * E0/N0))``.

    ``mode='literal'`` evaluates the formula with the mean magnitude
    ``(I_m+1)/2``; ``mode='averaged'`` instead Monte-Carlo averages
    ``2*Q(sqrt(M**2 * E0/N0))`` over ``M ~ Uniform[I_m, 1]``, which upper
    bounds the literal value because Q is convex on positive arguments.
    """
    if not (np.isfinite(es_n0) and es_n0 >= 0):
        raise DomainError("es_n0 must be a non-negative linear ratio")
    im = check_unit_interval("magnitude_intensity", magnitude_intensity, open_low=True)
    if mode == "literal":
        mean_mag = (im + 1.0) / 2.0
        return 2.0 * q_function(np.sqrt(mean_mag**2 * es_n0))
    if mode == "averaged":
        mean, _ = _averaged_ring_ber(es_n0, im, n_draws, seed)
        return mean
    raise DomainError(f"unknown mode {mode!r}")


def _averaged_ring_ber(es_n0: float, im: float, n_draws: int, seed: int):
    """Monte Carlo mean and standard error of 2*Q(sqrt(M^2 * es_n0))."""
    rng = np.random.Generator(np.random.Philox(key=_stream_key(seed, "ber-avg")))
    m = im + (1.0 - im) * rng.random(n_draws)
    vals = 2.0 * q_function(m * np.sqrt(es_n0))
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(n_draws))
