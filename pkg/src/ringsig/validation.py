"""Input validation helpers shared by the estimators and the functional API.

Complex baseband blocks are represented as 1-D ``complex128`` arrays; bit
streams as 1-D ``uint8`` arrays of 0/1. These helpers coerce friendly input
forms (lists, ``(n, 2)`` I/Q column arrays) into those canonical shapes and
enforce finiteness so downstream math never sees NaN/Inf.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, EmptyInput


def as_complex_samples(x, *, allow_empty: bool = True) -> np.ndarray:
    """Coerce ``x`` to a finite 1-D complex128 array.

    Accepts complex arrays/lists and real ``(n, 2)`` arrays holding I and Q
    columns.
    """
    arr = np.asarray(x)
    if arr.ndim == 2 and arr.shape[1] == 2 and not np.iscomplexobj(arr):
        arr = arr[:, 0] + 1j * arr[:, 1]
    arr = np.ascontiguousarray(arr, dtype=np.complex128)
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-D sample block, got shape {arr.shape}")
    if not allow_empty and arr.size == 0:
        raise EmptyInput("sample block is empty")
    if arr.size and not np.all(np.isfinite(arr.view(np.float64))):
        raise DomainError("sample block contains NaN or Inf")
    return arr


def as_bits(x) -> np.ndarray:
    """Coerce ``x`` to a 1-D uint8 array of 0/1 values."""
    arr = np.asarray(x)
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-D bit array, got shape {arr.shape}")
    arr = arr.astype(np.uint8, copy=False)
    if arr.size and arr.max() > 1:
        raise DomainError("bit array contains values other than 0/1")
    return arr


def as_block_matrix(X) -> np.ndarray:
    """Coerce a batch of equal-length sample blocks to a 2-D complex128 array."""
    if isinstance(X, np.ndarray) and X.ndim == 2 and np.iscomplexobj(X):
        M = np.ascontiguousarray(X, dtype=np.complex128)
    else:
        rows = [as_complex_samples(row) for row in X]
        if not rows:
            raise EmptyInput("no sample blocks given")
        n = rows[0].size
        if any(r.size != n for r in rows):
            raise DomainError("sample blocks differ in length")
        M = np.vstack(rows)
    if M.size and not np.all(np.isfinite(M.view(np.float64))):
        raise DomainError("sample blocks contain NaN or Inf")
    return M


def check_positive(name: str, value: float) -> float:
    value = float(value)
    if not np.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


def check_unit_interval(name: str, value: float, *, open_low: bool = False) -> float:
    """Validate ``value`` in [0, 1] (or (0, 1] with ``open_low``)."""
    value = float(value)
    low_ok = value > 0 if open_low else value >= 0
    if not (low_ok and value <= 1):
        bound = "(0, 1]" if open_low else "[0, 1]"
        raise DomainError(f"{name} must lie in {bound}, got {value!r}")
    return value
