"""Symbol-rate channel impairments: AWGN, carrier frequency offset, and a
static phase offset.

Noise power is referenced to the measured mean power of the input block, not
a nominal value — shaping lowers the radiated power, and the covertness
argument depends on the actual Es.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, EmptyInput
from .validation import as_complex_samples, check_positive


@dataclass(frozen=True)
class ChannelConfig:
    """Es/N0 in dB (+inf for noiseless), CFO in cycles/symbol, phase in radians."""

    es_n0_db: float = np.inf
    cfo: float = 0.0
    phase_offset: float = 0.0
    noise_seed: int = 0

    def __post_init__(self):
        if not abs(self.cfo) < 0.5:
            raise DomainError("|cfo| must be below 0.5 cycles/symbol")

    @property
    def es_n0(self) -> float:
        return 10.0 ** (self.es_n0_db / 10.0)


def noise_variance(samples, cfg: ChannelConfig) -> float:
    """Per-complex-sample noise variance N0 = Es / (Es/N0) for this block."""
    x = as_complex_samples(samples, allow_empty=False)
    if np.isinf(cfg.es_n0_db):
        return 0.0
    es = float(np.mean(np.abs(x) ** 2))
    return es / cfg.es_n0

def complex_awgn(n: int, variance: float, rng: np.random.Generator) -> np.ndarray:
    """Circularly symmetric complex Gaussian noise with E|n|^2 = variance."""
    scale = np.sqrt(variance / 2.0)
    return scale * (rng.standard_normal(n) + 1j * rng.standard_normal(n))


def apply_awgn(samples, cfg: ChannelConfig) -> np.ndarray:
    """Add complex AWGN at the configured Es/N0; exact copy when noiseless."""
    x = as_complex_samples(samples, allow_empty=False)
    if np.isinf(cfg.es_n0_db):
        return x.copy()
    n0 = noise_variance(x, cfg)
    rng = np.random.default_rng(cfg.noise_seed)
    return x + complex_awgn(x.size, n0, rng)


def apply_cfo(samples, cfg: ChannelConfig) -> np.ndarray:
    """Rotate sample k by ``exp(j*(2*pi*cfo*k + phase_offset))``."""
    x = as_complex_samples(samples)
    if cfg.cfo == 0.0 and cfg.phase_offset == 0.0:
        return x.copy()
    k = np.arange(x.size)
    return x * np.exp(1j * (2.0 * np.pi * cfg.cfo * k + cfg.phase_offset))


def transmit(samples, cfg: ChannelConfig, pad: int = 0,
             es_ref: float | None = None) -> np.ndarray:
    """Full channel: CFO/phase rotation plus AWGN, optionally embedding the
    block between ``pad`` noise-only guard samples on each side.

    ``es_ref`` pins the noise floor to a reference symbol energy instead of
    the block's measured power — shaping lowers the radiated power while the
    channel noise stays put, so factor sweeps reference the unshaped energy.
    Guard noise shares the block's N0 so the padded capture looks like a
    frame arriving mid-stream. Deterministic given ``noise_seed``.
    """
    x = as_complex_samples(samples, allow_empty=False)
    if pad < 0:
        raise DomainError("pad must be non-negative")
    rotated = apply_cfo(x, cfg)
    if np.isinf(cfg.es_n0_db):
        noisy = rotated
        if pad:
            return np.concatenate([np.zeros(pad, complex), noisy, np.zeros(pad, complex)])
        return noisy
    if es_ref is None:
        n0 = noise_variance(x, cfg)
    else:
        n0 = check_positive("es_ref", es_ref) / cfg.es_n0
    rng = np.random.default_rng(cfg.noise_seed)
    noisy = rotated + complex_awgn(rotated.size, n0, rng)
    if pad:
        return np.concatenate([
            complex_awgn(pad, n0, rng), noisy, complex_awgn(pad, n0, rng),
        ])
    return noisy
