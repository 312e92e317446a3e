"""Receiver-side synchronization: frequency-offset estimation, carrier phase
tracking, header correlation, and the assembled frame receiver.

All loops key off the *effective* PSK order — the angle set actually occupied
by the shaped constellation — because phase rotation turns base-order MPSK
into a higher-order one and a mismatched loop cannot strip the modulation.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import (DegenerateFactor, DomainError, LengthMismatch, NoFrame,
                     NotPsk, TooFewSamples)
from .framing import FrameSpec, build_header
from .modem import (ModConfig, ModScheme, bits_to_symbol_indices, demodulate,
                    modulate, symbol_indices_to_bits)
from .shaping import (MAGNITUDE_FLOOR, ShapingConfig, apply_shaping,
                      gen_factor_stream)
from .validation import as_complex_samples

PLL_DAMPING = 0.707


def effective_order(scheme: ModScheme, phase_intensity: int) -> int:
    """Smallest PSK order containing every rotation of the base constellation
    by multiples of ``2*pi / 2**phase_intensity``."""
    if not scheme.is_psk:
        raise NotPsk(f"{scheme.name} has no PSK angle set")
    if not (0 <= int(phase_intensity) <= 16):
        raise DomainError("phase_intensity must lie in [0, 16]")
    return 1 << max(scheme.bits_per_symbol, int(phase_intensity))


@dataclass(frozen=True)
class SyncConfig:
    """Loop configuration bound to one effective PSK order."""

    effective_order: int
    pll_loop_bandwidth: float = 0.01
    detect_threshold: float = 0.6
    estimate_cfo: bool = True
    refine_data_phase: bool = True

    def __post_init__(self):
        m = self.effective_order
        if m < 2 or m > 64 or m & (m - 1):
            raise DomainError("effective_order must be a power of two in [2, 64]")
        if not (0 < self.detect_threshold < 1):
            raise DomainError("detect_threshold must lie in (0, 1)")

    @classmethod
    def for_link(cls, scheme: ModScheme, phase_intensity: int, **kwargs) -> "SyncConfig":
        return cls(effective_order(scheme, phase_intensity), **kwargs)


@dataclass(frozen=True)
class SyncResult:
    frame_start: int
    cfo_estimate: float
    phase_estimate: float
    correlation_peak: float


def estimate_freq_offset(samples, cfg: SyncConfig) -> float:
    """CFO from the peak of the zero-padded spectrum of the M-th power signal.

    Raising to the effective order collapses every (shaped) PSK symbol onto a
    common ray, leaving a tone at ``M * cfo``. Capture range is
    ``|cfo| < 1/(2M)``; offsets beyond it alias undetectably.
    """
    x = as_complex_samples(samples)
    if x.size < 512:
        raise TooFewSamples(f"need at least 512 samples, got {x.size}")
    m = cfg.effective_order
    raised = x**m
    nfft = 1 << int(np.ceil(np.log2(8 * raised.size)))
    mag = np.abs(np.fft.fft(raised, nfft))
    peak = int(np.argmax(mag))
    alpha, beta, gamma = mag[peak - 1], mag[peak], mag[(peak + 1) % nfft]
    denom = alpha - 2.0 * beta + gamma
    delta = 0.0 if denom == 0 else 0.5 * (alpha - gamma) / denom
    delta = float(np.clip(delta, -0.5, 0.5))
    freq = (peak + delta) / nfft
    if freq >= 0.5:
        freq -= 1.0
    return freq / m


def _loop_gains(loop_bandwidth: float, damping: float = PLL_DAMPING):
    """Proportional/integrator gains for the standard second-order loop."""
    theta = loop_bandwidth / (damping + 1.0 / (4.0 * damping))
    denom = 1.0 + 2.0 * damping * theta + theta * theta
    k1 = 4.0 * damping * theta / denom
    k2 = 4.0 * theta * theta / denom
    return k1, k2


def carrier_sync_pll(samples, cfg: SyncConfig):
    """Second-order decision-directed PLL with the M-th power phase detector.

    Returns the corrected samples and the NCO phase trajectory. The detector
    measures the angle to the nearest multiple of ``2*pi/M``, so the loop
    converges modulo ``2*pi/M`` — the header correlation resolves that
    ambiguity downstream.
    """
    x = as_complex_samples(samples)
    m = cfg.effective_order
    k1, k2 = _loop_gains(cfg.pll_loop_bandwidth)
    out = np.empty_like(x)
    trajectory = np.empty(x.size)
    phase = 0.0
    freq = 0.0
    for k in range(x.size):
        y = x[k] * np.exp(-1j * phase)
        out[k] = y
        err = np.angle(y**m) / m
        freq += k2 * err
        phase += k1 * err + freq
        trajectory[k] = phase
    return out, trajectory


def frame_detect(samples, header, threshold: float = 0.6,
                 max_lag: int | None = None) -> SyncResult:
    """Locate the header by normalized cross-correlation.

    ``correlation_peak`` is the windowed correlation coefficient (1.0 for an
    exact scaled copy); its argument at the peak estimates the carrier phase,
    which the antipodal header pins down without the M-fold ambiguity.
    ``max_lag`` bounds the search to starts where a full frame still fits.
    """
    x = as_complex_samples(samples)
    h = as_complex_samples(header)
    if h.size == 0:
        raise DomainError("header must be non-empty")
    if x.size < h.size:
        raise LengthMismatch("input shorter than header")
    corr = np.correlate(x, h, mode="valid")
    power = np.abs(x) ** 2
    csum = np.concatenate([[0.0], np.cumsum(power)])
    window_energy = csum[h.size :] - csum[: x.size - h.size + 1]
    h_norm = np.linalg.norm(h)
    norm = h_norm * np.sqrt(np.maximum(window_energy, 1e-300))
    coeff = np.abs(corr) / norm
    if max_lag is not None:
        if max_lag < 0:
            raise LengthMismatch("no feasible frame start in the capture")
        coeff = coeff[: max_lag + 1]
        corr = corr[: max_lag + 1]
    lag = int(np.argmax(coeff))
    peak = float(min(coeff[lag], 1.0))
    if peak < threshold:
        raise NoFrame(f"correlation peak {peak:.3f} below threshold {threshold}")
    return SyncResult(
        frame_start=lag,
        cfo_estimate=0.0,
        phase_estimate=float(np.angle(corr[lag])),
        correlation_peak=peak,
    )


def _evm(received: np.ndarray, reference: np.ndarray) -> float:
    ref_rms = np.sqrt(np.mean(np.abs(reference) ** 2))
    if ref_rms == 0:
        return float("nan")
    return float(np.sqrt(np.mean(np.abs(received - reference) ** 2)) / ref_rms)


def receive_frame(samples, mod_cfg: ModConfig, shaping_cfg: ShapingConfig,
                  frame_spec: FrameSpec, sync_cfg: SyncConfig | None = None,
                  reference_bits=None):
    """Full receive pipeline for one frame.

    Order of operations: frequency-offset estimate on the raw capture,
    derotation, header correlation, coarse phase correction, header strip,
    factor regeneration and phase de-rotation, block phase refinement on the
    de-rotated data (base-order power law; the 12-symbol header alone leaves
    too much phase noise), magnitude inversion, and nearest-point
    demodulation with Gray unmapping.

    Returns ``(bits, SyncResult, stats)``; ``stats`` carries pre/post-recovery
    EVM plus error counts when ``reference_bits`` are supplied.
    """
    x = as_complex_samples(samples)
    scheme = mod_cfg.scheme
    if sync_cfg is None:
        sync_cfg = SyncConfig.for_link(scheme, shaping_cfg.phase_intensity)

    cfo = estimate_freq_offset(x, sync_cfg) if sync_cfg.estimate_cfo else 0.0
    y = x * np.exp(-2j * np.pi * cfo * np.arange(x.size))

    header = build_header(frame_spec, mod_cfg.amplitude)
    max_lag = y.size - frame_spec.total_symbols(scheme)
    det = frame_detect(y, header, sync_cfg.detect_threshold, max_lag=max_lag)
    det = replace(det, cfo_estimate=cfo)
    y = y * np.exp(-1j * det.phase_estimate)

    n_data = frame_spec.data_symbols(scheme)
    start = det.frame_start + frame_spec.header_symbols
    if start + n_data > y.size:
        raise LengthMismatch("captured data region is truncated")
    data = y[start : start + n_data]

    factors = gen_factor_stream(shaping_cfg, n_data)
    derotated = data * np.exp(-1j * factors.thetas)
    if sync_cfg.refine_data_phase and n_data:
        residual = float(np.angle(np.sum(derotated**scheme.order)) / scheme.order)
        derotated = derotated * np.exp(-1j * residual)
    if n_data and factors.magnitudes.min() < MAGNITUDE_FLOOR:
        raise DegenerateFactor("regenerated magnitude factor below floor")
    recovered = derotated / factors.magnitudes

    indices = demodulate(recovered, mod_cfg)
    bits = symbol_indices_to_bits(indices, scheme)

    if reference_bits is not None:
        ref = np.zeros(frame_spec.padded_data_bits(scheme), dtype=np.uint8)
        ref_in = np.asarray(reference_bits, dtype=np.uint8)
        ref[: ref_in.size] = ref_in
        ref_idx = bits_to_symbol_indices(ref, scheme)
    else:
        ref_idx = indices
    ideal = modulate(ref_idx, mod_cfg)
    stats = {
        "pre_evm": _evm(data, apply_shaping(ideal, factors)),
        "post_evm": _evm(recovered, ideal),
        "n_symbols": int(n_data),
        "n_bits": int(bits.size),
    }
    if reference_bits is not None:
        stats["bit_errors"] = int(np.count_nonzero(bits != ref))
        stats["ber"] = stats["bit_errors"] / max(bits.size, 1)
        stats["symbol_errors"] = int(np.count_nonzero(indices != ref_idx))
        stats["ser"] = stats["symbol_errors"] / max(n_data, 1)
    return bits, det, stats
