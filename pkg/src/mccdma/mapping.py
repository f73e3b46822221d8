"""Gray-mapped QPSK / 16-QAM tables and max-log soft demapping.

Mapping tables (bit 0 of a group is listed first):

* QPSK: (b0, b1) -> ((1 - 2*b0) + 1j*(1 - 2*b1)) / sqrt(2), so 00 maps to
  (+1+1j)/sqrt(2).
* 16-QAM: (b0, b1) select the I level and (b2, b3) the Q level through the
  per-rail Gray table 00->+3, 01->+1, 11->-1, 10->-3, scaled by 1/sqrt(10).

Both constellations have unit mean symbol energy.  LLR convention:
positive LLR means bit 0 is more likely.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np


@dataclass(frozen=True)
class Constellation:
    name: str
    points: np.ndarray      # (M,) complex, index = bits as a binary number
    labels: np.ndarray      # (M, bits_per_symbol) int
    bits_per_symbol: int

    @property
    def hull_radius(self) -> float:
        """Largest per-rail coordinate (soft-clipping bound)."""
        return float(np.max(np.abs(self.points.real)))


_RAIL4 = np.array([3.0, 1.0, -3.0, -1.0])  # index b_hi*2 + b_lo, Gray per rail


@lru_cache(maxsize=None)
def qpsk() -> Constellation:
    idx = np.arange(4)
    labels = np.stack([(idx >> 1) & 1, idx & 1], axis=1)
    points = ((1 - 2 * labels[:, 0]) + 1j * (1 - 2 * labels[:, 1])) / np.sqrt(2)
    return Constellation("QPSK", points, labels, 2)


@lru_cache(maxsize=None)
def qam16() -> Constellation:
    idx = np.arange(16)
    labels = np.stack([(idx >> s) & 1 for s in (3, 2, 1, 0)], axis=1)
    i_level = _RAIL4[labels[:, 0] * 2 + labels[:, 1]]
    q_level = _RAIL4[labels[:, 2] * 2 + labels[:, 3]]
    points = (i_level + 1j * q_level) / np.sqrt(10)
    return Constellation("QAM16", points, labels, 4)


def constellation(modulation: str) -> Constellation:
    try:
        return {"QPSK": qpsk, "QAM16": qam16}[modulation]()
    except KeyError:
        raise ValueError(f"unknown modulation '{modulation}'") from None


def map_bits(bits: np.ndarray, const: Constellation) -> np.ndarray:
    """Map a bit sequence to unit-energy symbols (table lookup)."""
    bits = np.asarray(bits, dtype=np.int64)
    bps = const.bits_per_symbol
    if bits.shape[-1] % bps != 0:
        raise ValueError(f"bit count not a multiple of {bps}")
    groups = bits.reshape(bits.shape[:-1] + (-1, bps))
    idx = np.zeros(groups.shape[:-1], dtype=np.int64)
    for b in range(bps):
        idx = (idx << 1) | groups[..., b]
    return const.points[idx]


def soft_demap(symbols: np.ndarray, noise_var: np.ndarray,
               const: Constellation) -> np.ndarray:
    """Max-log LLR per bit.

    ``noise_var`` is the post-detection distortion variance per symbol
    (broadcast against ``symbols``).  LLR_b = min over points labelled 1 of
    |y－p|^2/var minus the same min over points labelled 0.
    """
    symbols = np.asarray(symbols, dtype=np.complex128)
    noise_var = np.broadcast_to(np.asarray(noise_var, dtype=np.float64),
                                symbols.shape)
    if np.any(noise_var <= 0):
        raise ValueError("noise variance must be positive")
    d2 = np.abs(symbols[..., None] - const.points) ** 2 / noise_var[..., None]
    bps = const.bits_per_symbol
    llrs = np.empty(symbols.shape + (bps,), dtype=np.float64)
    for b in range(bps):
        ones = const.labels[:, b] == 1
        llrs[..., b] = d2[..., ones].min(axis=-1) - d2[..., ~ones].min(axis=-1)
    return llrs.reshape(symbols.shape[:-1] + (symbols.shape[-1] * bps,))


def hard_decision(symbols: np.ndarray, const: Constellation) -> np.ndarray:
    """Nearest constellation point for each estimate."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    d2 = np.abs(symbols[..., None] - const.points) ** 2
    return const.points[d2.argmin(axis=-1)]


def hard_bits(symbols: np.ndarray, const: Constellation) -> np.ndarray:
    """Nearest-point bit decisions, flattened like :func:`soft_demap`."""
    symbols = np.asarray(symbols, dtype=np.complex128)
    d2 = np.abs(symbols[..., None] - const.points) ** 2
    labels = const.labels[d2.argmin(axis=-1)]
    return labels.reshape(symbols.shape[:-1] +
                          (symbols.shape[-1] * const.bits_per_symbol,))


def clip_to_hull(symbols: np.ndarray, const: Constellation) -> np.ndarray:
    """Component-wise clipping to the constellation's convex hull."""
    r = const.hull_radius
    symbols = np.asarray(symbols, dtype=np.complex128)
    return (np.clip(symbols.real, -r, r) + 1j * np.clip(symbols.imag, -r, r))
