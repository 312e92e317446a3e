"""Frame construction: fixed antipodal header plus shaped data symbols.

The header is generated independently of the data path and is never shaped,
so its length and content are identical for every (scheme, phase intensity)
combination — that is what lets the receiver correlate before it can strip
the modifying factors.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, EmptyMessage, PayloadTooLarge
from .modem import ModConfig, ModScheme, bits_to_symbol_indices, modulate
from .shaping import ShapingConfig, apply_shaping, gen_factor_stream
from .validation import as_bits, check_positive

# 12-chip antipodal pattern; aperiodic autocorrelation peak 12, max sidelobe 2.
HEADER_PATTERN = np.array([+1, +1, +1, -1, -1, -1, +1, -1, -1, +1, -1, +1], dtype=np.float64)

DEFAULT_MESSAGE = b"hello world ###"


@dataclass(frozen=True)
class FrameSpec:
    """Frame geometry: header length, data-bit budget, payload message."""

    header_symbols: int = 12
    data_bits: int = 10_000
    message: bytes = DEFAULT_MESSAGE

    def __post_init__(self):
        if self.header_symbols < 4:
            raise DomainError("header_symbols must be at least 4")
        if self.data_bits < 0:
            raise DomainError("data_bits must be non-negative")

    def padded_data_bits(self, scheme: ModScheme) -> int:
        """Data bits rounded up to a whole number of symbols."""
        bps = scheme.bits_per_symbol
        return -(-self.data_bits // bps) * bps

    def data_symbols(self, scheme: ModScheme) -> int:
        return self.padded_data_bits(scheme) // scheme.bits_per_symbol

    def total_symbols(self, scheme: ModScheme) -> int:
        return self.header_symbols + self.data_symbols(scheme)


@dataclass(frozen=True)
class Frame:
    """Built frame: unshaped header, shaped data, and the padded payload."""

    header: np.ndarray
    data: np.ndarray
    payload_bits: np.ndarray

    def symbols(self) -> np.ndarray:
        return np.concatenate([self.header, self.data])


def build_header(spec: FrameSpec, amplitude: float = 1.0) -> np.ndarray:
    """Antipodal header symbols ``A * p_k * (1, 0)`` from the fixed pattern."""
    check_positive("amplitude", amplitude)
    if spec.header_symbols == HEADER_PATTERN.size:
        pattern = HEADER_PATTERN
    else:
        # Non-default lengths tile/truncate the base pattern.
        reps = -(-spec.header_symbols // HEADER_PATTERN.size)
        pattern = np.tile(HEADER_PATTERN, reps)[: spec.header_symbols]
    return (amplitude * pattern).astype(np.complex128)


def expand_message_to_bits(message: bytes, data_bits: int) -> np.ndarray:
    """Big-endian bit-unpack of the message, repeated cyclically to length."""
    if len(message) == 0:
        raise EmptyMessage("message must contain at least one byte")
    if data_bits < 0:
        raise DomainError("data_bits must be non-negative")
    if data_bits == 0:
        return np.zeros(0, dtype=np.uint8)
    bits = np.unpackbits(np.frombuffer(message, dtype=np.uint8))
    reps = -(-data_bits // bits.size)
    return np.tile(bits, reps)[:data_bits]


def build_frame(bits, spec: FrameSpec, mod_cfg: ModConfig,
                shaping_cfg: ShapingConfig) -> Frame:
    """Assemble header + shaped data from payload bits (zero-padded)."""
    bits = as_bits(bits)
    budget = spec.padded_data_bits(mod_cfg.scheme)
    if bits.size > budget:
        raise PayloadTooLarge(f"{bits.size} bits exceed the {budget}-bit data budget")
    payload = np.zeros(budget, dtype=np.uint8)
    payload[: bits.size] = bits
    indices = bits_to_symbol_indices(payload, mod_cfg.scheme)
    data = modulate(indices, mod_cfg)
    factors = gen_factor_stream(shaping_cfg, data.size)
    return Frame(
        header=build_header(spec, mod_cfg.amplitude),
        data=apply_shaping(data, factors),
        payload_bits=payload,
    )
