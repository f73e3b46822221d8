"""Link-level simulator for the downlink of a broadband MC-CDMA system.

Transmit chain: convolutional coding / puncturing / bit interleaving,
QPSK or 16-QAM mapping, Walsh-Hadamard spreading per sub-band, regular
frequency interleaving, OFDM with cyclic prefix.  Receive chain: perfect-CSI
multi-user detection (EGC, MMSEC, GMMSE, polynomial GMMSE, PIC, SIC),
soft demapping and soft-input Viterbi decoding.  `simkit` wires the chain
into a Monte-Carlo BER/FER engine with CSV output and a CLI.
"""

__version__ = "0.1.0"

from .sysmodel import SystemParams, ConfigError, validate, desk_preset, paper_preset

__all__ = [
    "SystemParams",
    "ConfigError",
    "validate",
    "desk_preset",
    "paper_preset",
    "__version__",
]
