"""Walsh-Hadamard spreading, fast-transform despreading and the regular
chip-to-carrier frequency interleaver.

Each sub-band carries one block of ``n_users`` symbols spread over
``spreading_factor`` chips.  Chip j of sub-band m lands on carrier
``j * n_subbands + m``, which maximally separates the chips of one symbol
across the occupied band.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def fwht(x: np.ndarray) -> np.ndarray:
    """Unnormalized fast Walsh-Hadamard transform along the last axis.

    Equals the Sylvester-ordered Hadamard matrix applied to ``x``;
    O(n log n).
    """
    x = np.asarray(x)
    n = x.shape[-1]
    if n & (n - 1) != 0:
        raise ValueError("length must be a power of two")
    y = np.array(x, dtype=np.result_type(x, np.float64))
    h = 1
    while h < n:
        y = y.reshape(y.shape[:-1] + (-1, 2, h))
        a = y[..., 0, :] + y[..., 1, :]
        b = y[..., 0, :] - y[..., 1, :]
        y = np.stack([a, b], axis=-2).reshape(x.shape)
        h *= 2
    return y


def sylvester_hadamard(n: int) -> np.ndarray:
    """Dense +-1 Hadamard matrix in natural (Sylvester) order."""
    if n & (n - 1) != 0:
        raise ValueError("order must be a power of two")
    h = np.array([[1.0]])
    while h.shape[0] < n:
        h = np.block([[h, h], [h, -h]])
    return h


@dataclass(frozen=True)
class CodeMatrix:
    """Normalized spreading codes: columns of the Hadamard matrix / sqrt(S_F).

    ``columns`` records which Hadamard columns are active, enabling the
    fast-transform spread/despread paths at partial load.
    """

    matrix: np.ndarray   # (spreading_factor, n_users), entries +-1/sqrt(S_F)
    columns: np.ndarray  # (n_users,) Hadamard column indices

    @property
    def spreading_factor(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_users(self) -> int:
        return self.matrix.shape[1]


def hadamard_codes(spreading_factor: int, n_users: int,
                   subset: str = "natural", seed: int | None = None) -> CodeMatrix:
    """First ``n_users`` normalized Walsh-Hadamard codes.

    ``subset="natural"`` takes columns 0..n_users-1 (the all-ones code is
    always user 0).  ``subset="random"`` keeps column 0 as user 0 and draws
    the remaining columns uniformly per ``seed`` for sensitivity studies.
    """
    sf = spreading_factor
    if sf & (sf - 1) != 0:
        raise ValueError("spreading_factor must be a power of two")
    if not 1 <= n_users <= sf:
        raise ValueError("need 1 <= n_users <= spreading_factor")
    if subset == "natural":
        cols = np.arange(n_users)
    elif subset == "random":
        rng = np.random.default_rng(seed)
        rest = rng.permutation(np.arange(1, sf))[: n_users - 1]
        cols = np.concatenate([[0], np.sort(rest)]).astype(np.int64)
    else:
        raise ValueError("subset must be 'natural' or 'random'")
    dense = sylvester_hadamard(sf) / np.sqrt(sf)
    return CodeMatrix(matrix=dense[:, cols], columns=cols)


def spread(symbols: np.ndarray, code: CodeMatrix) -> np.ndarray:
    """Chips of one (or a batch of) symbol blocks: C @ d via the FWHT."""
    symbols = np.asarray(symbols)
    if symbols.shape[-1] != code.n_users:
        raise ValueError(f"expected {code.n_users} symbols per block")
    ext = np.zeros(symbols.shape[:-1] + (code.spreading_factor,),
                   dtype=np.result_type(symbols, np.complex128))
    ext[..., code.columns] = symbols
    return fwht(ext) / np.sqrt(code.spreading_factor)


def despread(chips: np.ndarray, code: CodeMatrix) -> np.ndarray:
    """Adjoint of :func:`spread`: C^H @ chips via the inverse FWHT."""
    chips = np.asarray(chips)
    if chips.shape[-1] != code.spreading_factor:
        raise ValueError(f"expected {code.spreading_factor} chips per block")
    full = fwht(chips) / np.sqrt(code.spreading_factor)
    return full[..., code.columns]


def freq_interleave(chips: np.ndarray) -> np.ndarray:
    """(..., n_subbands, spreading_factor) chips -> (..., n_carriers) vector.

    Chip j of sub-band m goes to carrier j * n_subbands + m.
    """
    chips = np.asarray(chips)
    n_sub, sf = chips.shape[-2], chips.shape[-1]
    return np.swapaxes(chips, -1, -2).reshape(chips.shape[:-2] + (n_sub * sf,))


def freq_deinterleave(carriers: np.ndarray, n_subbands: int) -> np.ndarray:
    """Inverse of :func:`freq_interleave`."""
    carriers = np.asarray(carriers)
    n_c = carriers.shape[-1]
    if n_c % n_subbands != 0:
        raise ValueError("carrier count not a multiple of n_subbands")
    sf = n_c // n_subbands
    grid = carriers.reshape(carriers.shape[:-1] + (sf, n_subbands))
    return np.swapaxes(grid, -1, -2)
