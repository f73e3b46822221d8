"""System configuration, derived dimensions and the frame model.

All static parameters of the link live in :class:`SystemParams`.  The
instance is immutable after :func:`validate`, so it can be shared freely
across concurrent trial workers.  Every other module consumes these types
and never mutates them.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

C_LIGHT = 299_792_458.0  # m/s

MODULATIONS = ("QPSK", "QAM16")
CODE_RATES = ("uncoded", "1/2", "3/4")
FADING_MODES = ("jakes", "none")


class ConfigError(ValueError):
    """Raised when a configuration violates a dimensional invariant."""


@dataclass(frozen=True)
class SystemParams:
    """Full static configuration of the downlink.

    Attributes
    ----------
    fft_size : int
        Number of IFFT points per OFDM symbol.
    n_carriers : int
        Number of modulated carriers (must be divisible by the spreading
        factor; the quotient is the number of sub-bands).
    spreading_factor : int
        Chips per data symbol, power of two (Walsh-Hadamard codes).
    n_users : int
        Number of active spreading codes, 1 <= n_users <= spreading_factor.
    guard_len : int
        Cyclic-prefix length in samples; must absorb all channel echoes.
    sampling_freq : float
        Sample rate in Hz.
    modulation : str
        "QPSK" or "QAM16".
    code_rate : str
        "uncoded", "1/2" or "3/4" (convolutional mother code, punctured).
    frame_ofdm_symbols : int
        OFDM symbols per frame; coding and interleaving span one frame.
    carrier_freq : float
        RF carrier in Hz, used only to derive the Doppler frequency.
    velocity : float
        Terminal speed in m/s.
    seed : int
        Master seed (64-bit); all randomness derives from it.
    pdp : str
        Power-delay profile: a built-in name ("flat", "desk4", "urban17")
        or a path to a profile file (see `channel.PowerDelayProfile`).
    fading : str
        "jakes" for Rayleigh taps with Jakes Doppler, "none" for a
        deterministic channel with the profile's tap amplitudes.
    """

    fft_size: int = 64
    n_carriers: int = 32
    spreading_factor: int = 8
    n_users: int = 8
    guard_len: int = 16
    sampling_freq: float = 20e6
    modulation: str = "QPSK"
    code_rate: str = "1/2"
    frame_ofdm_symbols: int = 8
    carrier_freq: float = 5.0e9
    velocity: float = 0.0
    seed: int = 1
    pdp: str = "flat"
    fading: str = "jakes"

    @property
    def n_subbands(self) -> int:
        return self.n_carriers // self.spreading_factor

    @property
    def bits_per_symbol(self) -> int:
        return {"QPSK": 2, "QAM16": 4}[self.modulation]

    @property
    def rate_fraction(self) -> Fraction:
        """Code rate as a fraction; 1 for the uncoded mode."""
        if self.code_rate == "uncoded":
            return Fraction(1, 1)
        num, den = self.code_rate.split("/")
        return Fraction(int(num), int(den))

    @property
    def coded_bits_per_frame(self) -> int:
        """Coded-bit capacity of one frame for one user."""
        return self.n_subbands * self.frame_ofdm_symbols * self.bits_per_symbol

    @property
    def symbols_per_frame(self) -> int:
        """Data symbols per frame for one user."""
        return self.n_subbands * self.frame_ofdm_symbols

    @property
    def symbol_duration(self) -> float:
        """OFDM symbol duration in seconds, cyclic prefix included."""
        return (self.fft_size + self.guard_len) / self.sampling_freq

    @property
    def doppler_hz(self) -> float:
        return self.velocity * self.carrier_freq / C_LIGHT


@dataclass(frozen=True)
class Frame:
    """One transmitted frame: per-user information bits and carrier grids."""

    user_bits: np.ndarray  # (n_users, info_bits)
    ofdm_symbols: np.ndarray  # (frame_ofdm_symbols, n_carriers) complex


def validate(params: SystemParams) -> SystemParams:
    """Check every invariant of the parameter set and return it unchanged.

    Raises :class:`ConfigError` naming the violated invariant.
    """
    p = params
    for name in ("fft_size", "n_carriers", "spreading_factor", "n_users",
                 "frame_ofdm_symbols"):
        if int(getattr(p, name)) < 1:
            raise ConfigError(f"{name} must be a positive integer")
    if p.guard_len < 0:
        raise ConfigError("guard_len must be non-negative")
    sf = p.spreading_factor
    if sf & (sf - 1) != 0:
        raise ConfigError("spreading_factor must be a power of two")
    if p.n_carriers % sf != 0:
        raise ConfigError(
            f"spreading_factor {sf} does not divide n_carriers {p.n_carriers}")
    if not 1 <= p.n_users <= sf:
        raise ConfigError(
            f"n_users must satisfy 1 <= n_users <= spreading_factor ({sf})")
    if p.guard_len >= p.fft_size:
        raise ConfigError("guard_len must be smaller than fft_size")
    if p.n_carriers % 2 != 0 or p.n_carriers >= p.fft_size:
        raise ConfigError(
            "n_carriers must be even and smaller than fft_size "
            "(carriers sit symmetrically around the null DC carrier)")
    if p.sampling_freq <= 0:
        raise ConfigError("sampling_freq must be positive")
    if p.modulation not in MODULATIONS:
        raise ConfigError(f"modulation must be one of {MODULATIONS}")
    if p.code_rate not in CODE_RATES:
        raise ConfigError(f"code_rate must be one of {CODE_RATES}")
    if p.carrier_freq <= 0:
        raise ConfigError("carrier_freq must be positive")
    if p.velocity < 0:
        raise ConfigError("velocity must be non-negative")
    if p.fading not in FADING_MODES:
        raise ConfigError(f"fading must be one of {FADING_MODES}")
    return p


_FIELD_TYPES = {f.name: f.type for f in dataclasses.fields(SystemParams)}
_INT_FIELDS = {"fft_size", "n_carriers", "spreading_factor", "n_users",
               "guard_len", "frame_ofdm_symbols", "seed"}
_FLOAT_FIELDS = {"sampling_freq", "carrier_freq", "velocity"}


def parse_config(text: str) -> SystemParams:
    """Parse a flat key/value configuration.

    One ``key = value`` per line, ``#`` starts a comment; keys are named
    exactly as the :class:`SystemParams` fields.
    """
    values: dict[str, object] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _FIELD_TYPES:
            raise ConfigError(f"line {lineno}: unknown key '{key}'")
        try:
            if key in _INT_FIELDS:
                values[key] = int(val)
            elif key in _FLOAT_FIELDS:
                values[key] = float(val)
            else:
                values[key] = val
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for '{key}': {val}") from exc
    return validate(SystemParams(**values))


def load_config(path: str) -> SystemParams:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def desk_preset(**overrides) -> SystemParams:
    """Small configuration for fast statistically meaningful runs."""
    base = dict(
        fft_size=64, n_carriers=32, spreading_factor=8, n_users=8,
        guard_len=16, sampling_freq=20e6, modulation="QPSK", code_rate="1/2",
        frame_ofdm_symbols=8, carrier_freq=5.0e9, velocity=60 / 3.6,
        seed=1, pdp="desk4", fading="jakes",
    )
    base.update(overrides)
    return validate(SystemParams(**base))


def paper_preset(**overrides) -> SystemParams:
    """Broadband configuration: 1024-point FFT, 736 carriers, 32-chip codes."""
    base = dict(
        fft_size=1024, n_carriers=736, spreading_factor=32, n_users=32,
        guard_len=216, sampling_freq=57.6e6, modulation="QPSK", code_rate="1/2",
        frame_ofdm_symbols=30, carrier_freq=5.0e9, velocity=60 / 3.6,
        seed=1, pdp="urban17", fading="jakes",
    )
    base.update(overrides)
    return validate(SystemParams(**base))
