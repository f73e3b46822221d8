"""OFDM multiplexing: carrier allocation, unitary IFFT/FFT, cyclic prefix.

The active carriers sit symmetrically around DC (half below, half above);
DC and the outer band edges stay null.  Both transform directions use the
unitary convention, so time-domain and carrier-domain energies agree and
white noise keeps its per-sample variance per carrier.
"""

from __future__ import annotations

import numpy as np


def carrier_layout(n_fft: int, n_carriers: int) -> np.ndarray:
    """FFT bin indices of the active carriers, strictly increasing, no DC."""
    if n_carriers % 2 != 0 or not 0 < n_carriers < n_fft:
        raise ValueError("n_carriers must be even and smaller than n_fft")
    half = n_carriers // 2
    if half + 1 > n_fft - half:
        raise ValueError("carriers would collide around the Nyquist bin")
    return np.concatenate([np.arange(1, half + 1),
                           np.arange(n_fft - half, n_fft)])


def _check_layout(active: np.ndarray, n_fft: int) -> np.ndarray:
    active = np.asarray(active, dtype=np.int64)
    if active.ndim != 1 or active.size == 0:
        raise ValueError("active carrier index list must be 1-D, non-empty")
    if np.any((active <= 0) | (active >= n_fft)):
        raise ValueError("carrier index out of range (DC and beyond excluded)")
    if np.any(np.diff(active) <= 0):
        raise ValueError("carrier indices must be strictly increasing")
    return active


def ofdm_modulate(values: np.ndarray, active: np.ndarray, n_fft: int,
                  guard_len: int) -> np.ndarray:
    """Carrier values -> time samples with cyclic prefix.

    ``values`` holds the active-carrier amplitudes along the last axis;
    output length is ``n_fft + guard_len`` per symbol.
    """
    active = _check_layout(active, n_fft)
    values = np.asarray(values, dtype=np.complex128)
    if values.shape[-1] != active.size:
        raise ValueError(f"expected {active.size} carrier values")
    grid = np.zeros(values.shape[:-1] + (n_fft,), dtype=np.complex128)
    grid[..., active] = values
    body = np.fft.ifft(grid, norm="ortho")
    if guard_len == 0:
        return body
    return np.concatenate([body[..., n_fft - guard_len:], body], axis=-1)


def ofdm_demodulate(samples: np.ndarray, active: np.ndarray, n_fft: int,
                    guard_len: int) -> np.ndarray:
    """Strip the prefix, transform, extract the active carriers."""
    active = _check_layout(active, n_fft)
    samples = np.asarray(samples, dtype=np.complex128)
    if samples.shape[-1] != n_fft + guard_len:
        raise ValueError(f"expected {n_fft + guard_len} samples per symbol")
    grid = np.fft.fft(samples[..., guard_len:], norm="ortho")
    return grid[..., active]
