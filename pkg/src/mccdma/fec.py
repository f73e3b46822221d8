"""Convolutional coding, puncturing, bit interleaving and Viterbi decoding.

The mother code is the 3GPP TS 25.212 rate-1/3 convolutional code
(constraint length 9, generators 557/663/711 octal), terminated with
``constraint_length - 1`` zero tail bits.  Target rates:

* 1/2 - keep the first two output streams (pattern ``[[1, 1, 0]]``);
* 3/4 - period-3 pattern ``[[1, 1, 0], [1, 0, 0], [1, 0, 0]]`` keeping
  4 of every 9 mother bits.

Soft values follow the convention positive LLR <=> bit 0 more likely.
Path-metric ties are broken toward the smaller predecessor state, which
makes the all-zero path win when every input is neutral.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class ConvCode:
    """Terminated feedforward convolutional code with optional puncturing.

    ``generators`` are octal polynomials whose most significant bit taps the
    current input bit.  ``puncture_pattern`` has shape (period, n_streams);
    entry [t % period, j] keeps output j of input step t.
    """

    constraint_length: int
    generators: tuple[int, ...]
    puncture_pattern: np.ndarray | None = None

    def __post_init__(self):
        if self.constraint_length < 2:
            raise ValueError("constraint_length must be >= 2")
        if not self.generators:
            raise ValueError("at least one generator required")
        if self.puncture_pattern is not None:
            pat = np.asarray(self.puncture_pattern, dtype=bool)
            if pat.ndim != 2 or pat.shape[1] != len(self.generators):
                raise ValueError("pattern must be (period, n_streams)")
            if not pat.any(axis=1).all():
                raise ValueError("pattern must keep >= 1 bit per period row")
            object.__setattr__(self, "puncture_pattern", pat)

    @property
    def n_streams(self) -> int:
        return len(self.generators)

    @property
    def tail_bits(self) -> int:
        return self.constraint_length - 1

    @property
    def rate(self) -> float:
        """Punctured code rate (info bits per kept coded bit, tail ignored)."""
        if self.puncture_pattern is None:
            return 1.0 / self.n_streams
        pat = self.puncture_pattern
        return pat.shape[0] / pat.sum()

    def kept_length(self, n_info: int) -> int:
        """Number of coded bits after termination and puncturing."""
        n_mother = (n_info + self.tail_bits) * self.n_streams
        if self.puncture_pattern is None:
            return n_mother
        return int(_keep_mask(self.puncture_pattern, n_mother).sum())


TOY_CODE = ConvCode(constraint_length=3, generators=(0o7, 0o5))


def umts_cc(code_rate: str = "1/3") -> ConvCode:
    """The 25.212 rate-1/3 code, punctured to the requested rate."""
    patterns = {
        "1/3": None,
        "1/2": np.array([[1, 1, 0]], dtype=bool),
        "3/4": np.array([[1, 1, 0], [1, 0, 0], [1, 0, 0]], dtype=bool),
    }
    if code_rate not in patterns:
        raise ValueError(f"unsupported code rate '{code_rate}'")
    return ConvCode(constraint_length=9, generators=(0o557, 0o663, 0o711),
                    puncture_pattern=patterns[code_rate])


def _parity_tables(code: ConvCode) -> np.ndarray:
    """(n_streams, 2**K) lookup: output bit of each register content."""
    regs = np.arange(1 << code.constraint_length, dtype=np.int64)
    tables = np.empty((code.n_streams, regs.size), dtype=np.int8)
    for j, gen in enumerate(code.generators):
        masked = regs & gen
        par = masked
        shift = 1
        while shift < code.constraint_length:
            par ^= par >> shift
            shift *= 2
        tables[j] = par & 1
    return tables


def conv_encode(bits: np.ndarray, code: ConvCode) -> np.ndarray:
    """Encode and terminate; puncture if the code carries a pattern.

    ``bits`` may have leading batch axes; encoding runs along the last one.
    Output length is ``code.kept_length(n_info)``.
    """
    bits = np.asarray(bits, dtype=np.int64)
    n_info = bits.shape[-1]
    tables = _parity_tables(code)
    tail = np.zeros(bits.shape[:-1] + (code.tail_bits,), dtype=np.int64)
    stream = np.concatenate([bits, tail], axis=-1)
    n_steps = stream.shape[-1]

    state = np.zeros(bits.shape[:-1], dtype=np.int64)
    out = np.empty(bits.shape[:-1] + (n_steps, code.n_streams), dtype=np.int8)
    msb = code.constraint_length - 1
    for t in range(n_steps):
        reg = (stream[..., t] << msb) | state
        for j in range(code.n_streams):
            out[..., t, j] = tables[j][reg]
        state = reg >> 1
    mother = out.reshape(bits.shape[:-1] + (n_steps * code.n_streams,))
    if code.puncture_pattern is None:
        return mother
    return puncture(mother, code.puncture_pattern)


def _keep_mask(pattern: np.ndarray, n_mother: int) -> np.ndarray:
    """Boolean keep mask for a mother stream, pattern cycled and truncated."""
    flat = np.asarray(pattern, dtype=bool).reshape(-1)
    reps = -(-n_mother // flat.size)
    return np.tile(flat, reps)[:n_mother]


def puncture(coded: np.ndarray, pattern: np.ndarray) -> np.ndarray:
    """Drop the masked positions of a stream-interleaved coded sequence."""
    coded = np.asarray(coded)
    mask = _keep_mask(pattern, coded.shape[-1])
    return coded[..., mask]


def depuncture(llrs: np.ndarray, pattern: np.ndarray, mother_len: int) -> np.ndarray:
    """Re-insert neutral (zero) soft values at the punctured positions."""
    llrs = np.asarray(llrs, dtype=np.float64)
    mask = _keep_mask(pattern, mother_len)
    if llrs.shape[-1] != int(mask.sum()):
        raise ValueError(
            f"expected {int(mask.sum())} kept values, got {llrs.shape[-1]}")
    out = np.zeros(llrs.shape[:-1] + (mother_len,), dtype=np.float64)
    out[..., mask] = llrs
    return out


def make_interleaver(n: int, seed: int) -> np.ndarray:
    """Seeded uniform random permutation of ``n`` coded-bit indices."""
    return np.random.default_rng(seed).permutation(n)


def interleave(x: np.ndarray, permutation: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    if x.shape[-1] != permutation.size:
        raise ValueError("permutation size does not match input length")
    return x[..., permutation]


def deinterleave(x: np.ndarray, permutation: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    if x.shape[-1] != permutation.size:
        raise ValueError("permutation size does not match input length")
    out = np.empty_like(x)
    out[..., permutation] = x
    return out


def viterbi_decode(llrs: np.ndarray, code: ConvCode) -> np.ndarray:
    """Maximum-likelihood decoding of a terminated, unpunctured LLR stream.

    ``llrs`` has one soft value per mother-code bit (depuncture first);
    the returned message excludes the tail. Trellis starts and ends in the
    zero state; the tail steps only admit zero inputs.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    if llrs.ndim != 1:
        raise ValueError("viterbi_decode expects a 1-D LLR sequence")
    ns = code.n_streams
    if llrs.size % ns != 0:
        raise ValueError("LLR length not a multiple of the stream count")
    n_steps = llrs.size // ns
    if n_steps <= code.tail_bits:
        raise ValueError("LLR sequence shorter than the termination tail")

    k = code.constraint_length
    n_states = 1 << (k - 1)
    states = np.arange(n_states)
    input_bit = states >> (k - 2)          # input on every branch into state
    pred_base = (states & ((1 << (k - 2)) - 1)) << 1
    pred0 = pred_base                       # smaller predecessor (tie winner)
    pred1 = pred_base | 1

    # cost(s, b) = sum_j llr_j * (2*out_j(s, b) - 1) / 2, minimized by ML
    tables = _parity_tables(code)
    regs = (np.arange(2)[:, None] << (k - 1)) | states[None, :]
    signs = np.empty((n_states, 2, ns), dtype=np.float64)
    for j in range(ns):
        signs[:, :, j] = (2 * tables[j][regs] - 1).T

    soft = llrs.reshape(n_steps, ns)
    big = np.inf
    pm = np.full(n_states, big)
    pm[0] = 0.0
    choice = np.zeros((n_steps, n_states), dtype=bool)
    for t in range(n_steps):
        cost = 0.5 * signs @ soft[t]        # (n_states, 2) by (pred, input)
        b = input_bit
        cand0 = pm[pred0] + cost[pred0, b]
        cand1 = pm[pred1] + cost[pred1, b]
        take1 = cand1 < cand0
        pm = np.where(take1, cand1, cand0)
        choice[t] = take1
        if t >= n_steps - code.tail_bits:   # termination: forbid input 1
            pm[input_bit == 1] = big

    decoded = np.empty(n_steps, dtype=np.int8)
    state = 0
    for t in range(n_steps - 1, -1, -1):
        decoded[t] = input_bit[state]
        state = pred1[state] if choice[t, state] else pred0[state]
    return decoded[: n_steps - code.tail_bits]


@dataclass(frozen=True)
class FrameLayout:
    """Exact per-frame bit accounting for one user.

    ``n_info`` is the largest message size whose terminated, punctured
    output fits the frame's coded-bit capacity; the remainder (``pad``)
    is zero-filled at the tail and stripped after decoding.
    """

    n_info: int
    n_mother: int
    n_kept: int
    capacity: int
    pad: int
    code: ConvCode | None = field(default=None, compare=False)

    @property
    def coded(self) -> bool:
        return self.code is not None


def frame_layout(params) -> FrameLayout:
    """Compute the frame bit budget for a validated parameter set."""
    capacity = params.coded_bits_per_frame
    if params.code_rate == "uncoded":
        return FrameLayout(n_info=capacity, n_mother=capacity,
                           n_kept=capacity, capacity=capacity, pad=0, code=None)
    code = umts_cc(params.code_rate)
    n_info = int(capacity * params.rate_fraction) - code.tail_bits
    while n_info > 0 and code.kept_length(n_info) > capacity:
        n_info -= 1
    if n_info <= 0:
        raise ValueError("frame too small for the terminated code")
    kept = code.kept_length(n_info)
    return FrameLayout(n_info=n_info,
                       n_mother=(n_info + code.tail_bits) * code.n_streams,
                       n_kept=kept, capacity=capacity,
                       pad=capacity - kept, code=code)
