"""MPSK modulation, nearest-point demodulation, and Gray bit mapping.

PSK is the only transmit family; the QAM constellations exist solely as
training classes for the eavesdropper classifier and are never pushed
through the shaping/framing path.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DomainError, IndexOutOfRange, LengthNotDivisible
from .validation import as_bits, as_complex_samples, check_positive


@dataclass(frozen=True)
class ModScheme:
    """One modulation scheme: family ('psk' or 'qam') plus constellation order."""

    name: str
    family: str
    order: int

    def __post_init__(self):
        if self.family not in ("psk", "qam"):
            raise DomainError(f"unknown modulation family {self.family!r}")
        if not (2 <= self.order <= 64) or self.order & (self.order - 1):
            raise DomainError(f"order must be a power of two in [2, 64], got {self.order}")

    @property
    def bits_per_symbol(self) -> int:
        return self.order.bit_length() - 1

    @property
    def is_psk(self) -> bool:
        return self.family == "psk"


SCHEMES = {
    s.name: s
    for s in (
        ModScheme("BPSK", "psk", 2),
        ModScheme("QPSK", "psk", 4),
        ModScheme("8PSK", "psk", 8),
        ModScheme("16PSK", "psk", 16),
        ModScheme("32PSK", "psk", 32),
        ModScheme("64PSK", "psk", 64),
        ModScheme("8QAM", "qam", 8),
        ModScheme("16QAM", "qam", 16),
        ModScheme("32QAM", "qam", 32),
        ModScheme("64QAM", "qam", 64),
    )
}

# Canonical class ordering used by the classifier, its reports, and the CSV schema.
CLASSIFIER_CLASSES = (
    "BPSK", "QPSK", "8PSK", "16PSK", "32PSK", "64PSK",
    "8QAM", "16QAM", "32QAM", "64QAM",
)


def scheme(name: str) -> ModScheme:
    """Look up a scheme by name, case-insensitively."""
    key = name.upper()
    if key not in SCHEMES:
        raise DomainError(f"unknown modulation scheme {name!r}")
    return SCHEMES[key]


@dataclass(frozen=True)
class ModConfig:
    """Transmit configuration: scheme plus base symbol magnitude."""

    scheme: ModScheme
    amplitude: float = 1.0

    def __post_init__(self):
        check_positive("amplitude", self.amplitude)


def gray_code(n: np.ndarray | int) -> np.ndarray | int:
    """Reflected Gray code of ``n``."""
    return n ^ (n >> 1)


def gray_decode(g, width: int):
    """Inverse of :func:`gray_code` for values below ``2**width``."""
    n = np.asarray(g).copy()
    for shift in range(1, width + 1):
        n ^= np.asarray(g) >> shift
    return n


def bits_to_symbol_indices(bits, mod_scheme: ModScheme) -> np.ndarray:
    """Pack bits big-endian into symbol indices with Gray placement.

    The bit pattern ``v`` lands at the constellation position whose Gray code
    is ``v``, so angularly adjacent PSK points always differ in exactly one
    bit.
    """
    bits = as_bits(bits)
    bps = mod_scheme.bits_per_symbol
    if bits.size % bps:
        raise LengthNotDivisible(
            f"{bits.size} bits not divisible by {bps} bits/symbol for {mod_scheme.name}"
        )
    values = bits.reshape(-1, bps)
    weights = 1 << np.arange(bps - 1, -1, -1, dtype=np.int64)
    packed = values.astype(np.int64) @ weights
    return gray_decode(packed, bps).astype(np.int64)


def symbol_indices_to_bits(indices, mod_scheme: ModScheme) -> np.ndarray:
    """Exact inverse of :func:`bits_to_symbol_indices`."""
    idx = _check_indices(indices, mod_scheme)
    bps = mod_scheme.bits_per_symbol
    values = gray_code(idx)
    shifts = np.arange(bps - 1, -1, -1, dtype=np.int64)
    return ((values[:, None] >> shifts) & 1).astype(np.uint8).reshape(-1)


@lru_cache(maxsize=None)
def _unit_constellation(name: str) -> np.ndarray:
    s = SCHEMES[name]
    if s.is_psk:
        angles = 2.0 * np.pi * np.arange(s.order) / s.order
        return np.exp(1j * angles)
    # QAM grids, unit average power. 8QAM is the 4x2 rectangle, 32QAM the
    # 6x6 cross (corners removed), 16/64QAM the usual squares.
    if s.order == 8:
        ii, qq = np.meshgrid([-3, -1, 1, 3], [-1, 1])
        pts = (ii + 1j * qq).ravel()
    elif s.order == 32:
        levels = np.array([-5, -3, -1, 1, 3, 5])
        ii, qq = np.meshgrid(levels, levels)
        pts = (ii + 1j * qq).ravel()
        pts = pts[~((np.abs(pts.real) == 5) & (np.abs(pts.imag) == 5))]
    else:
        side = int(np.sqrt(s.order))
        levels = np.arange(-(side - 1), side, 2)
        ii, qq = np.meshgrid(levels, levels)
        pts = (ii + 1j * qq).ravel()
    return pts / np.sqrt(np.mean(np.abs(pts) ** 2))


def constellation(mod_scheme: ModScheme, amplitude: float = 1.0) -> np.ndarray:
    """Ideal constellation points, index order matching the modulator."""
    check_positive("amplitude", amplitude)
    return amplitude * _unit_constellation(mod_scheme.name)


def _check_indices(indices, mod_scheme: ModScheme) -> np.ndarray:
    idx = np.asarray(indices, dtype=np.int64)
    if idx.ndim != 1:
        raise DomainError(f"expected 1-D index array, got shape {idx.shape}")
    if idx.size and (idx.min() < 0 or idx.max() >= mod_scheme.order):
        raise IndexOutOfRange(f"indices must lie in [0, {mod_scheme.order})")
    return idx


def modulate(indices, cfg: ModConfig) -> np.ndarray:
    """Map symbol indices to I/Q samples; PSK index k sits at angle 2*pi*k/M."""
    idx = _check_indices(indices, cfg.scheme)
    return constellation(cfg.scheme, cfg.amplitude)[idx]


def demodulate(samples, cfg: ModConfig) -> np.ndarray:
    """Nearest-constellation-point decision; ties resolve to the lowest index."""
    x = as_complex_samples(samples)
    points = constellation(cfg.scheme, cfg.amplitude)
    # |x - c|^2 expanded; argmin returns the first (lowest) index on ties.
    d2 = np.abs(x[:, None] - points[None, :]) ** 2
    return np.argmin(d2, axis=1).astype(np.int64)


def psk_ber_theory(es_n0: float, mod_scheme: ModScheme) -> float:
    """Closed-form (BPSK/QPSK) or standard high-SNR approximate Gray MPSK BER.

    ``es_n0`` is the linear symbol-energy ratio.
    """
    from .shaping import q_function

    if not mod_scheme.is_psk:
        raise DomainError("theory curve defined for PSK schemes")
    if es_n0 < 0:
        raise DomainError("es_n0 must be non-negative")
    m = mod_scheme.order
    if m == 2:
        return q_function(np.sqrt(2.0 * es_n0))
    if m == 4:
        return q_function(np.sqrt(es_n0))
    ser = 2.0 * q_function(np.sqrt(2.0 * es_n0) * np.sin(np.pi / m))
    return min(ser / mod_scheme.bits_per_symbol, 0.5)
