"""End-to-end Monte-Carlo engine: frame chain, BER/FER counting, sweeps,
required-Eb/N0 extraction and CSV output.

Seeding (documented): every operating point of a sweep derives its seed
from the master seed through ``numpy.random.SeedSequence(master,
spawn_key=(point_index,))``; inside a point, frame f draws its bit,
channel and noise streams from ``SeedSequence(point_seed, spawn_key=(f,
j))`` with j = 0, 1, 2.  Results therefore do not depend on worker count
or execution order.  Error rates are measured on user 0's information
bits while all active codes transmit data.

CSV schema: ``detector,K,ebn0_db,bits,bit_errors,frames,frame_errors,
ber,fer,seed`` (header row, comma separated, UTF-8).
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import io
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import channel, fec, mapping, ofdm, spreading
from .detectors import DetectorSpec, SubbandProblem, detect
from .sysmodel import ConfigError, Frame, SystemParams, validate

CSV_FIELDS = ("detector", "K", "ebn0_db", "bits", "bit_errors", "frames",
              "frame_errors", "ber", "fer", "seed")


@dataclass(frozen=True)
class StopRule:
    """Stop a point at ``min_bit_errors`` or ``min_frame_errors`` or
    ``max_frames``, whichever comes first (but never before ``min_frames``)."""

    min_bit_errors: int = 200
    min_frame_errors: int = 50
    max_frames: int = 20000
    min_frames: int = 1

    def __post_init__(self):
        if self.max_frames < self.min_frames:
            raise ValueError("max_frames must be >= min_frames")

    def done(self, bit_errors: int, frame_errors: int, frames: int) -> bool:
        if frames < self.min_frames:
            return False
        return (bit_errors >= self.min_bit_errors
                or frame_errors >= self.min_frame_errors
                or frames >= self.max_frames)


@dataclass(frozen=True)
class SimRecord:
    """One measured operating point."""

    detector: str
    n_users: int
    ebn0_db: float
    bits: int
    bit_errors: int
    frames: int
    frame_errors: int
    ber: float
    fer: float
    seed: int
    elapsed: float = field(default=0.0, compare=False)  # wall s, not in CSV

    def csv_row(self) -> list[str]:
        return [self.detector, str(self.n_users), str(self.ebn0_db),
                str(self.bits), str(self.bit_errors), str(self.frames),
                str(self.frame_errors), str(self.ber), str(self.fer),
                str(self.seed)]


class LinkSimulator:
    """Immutable per-point machinery for the full transmit/receive chain."""

    def __init__(self, params: SystemParams, spec: DetectorSpec):
        params = validate(params)
        self.params = params
        self.spec = spec
        self.layout = fec.frame_layout(params)
        self.const = mapping.constellation(params.modulation)
        self.code = spreading.hadamard_codes(params.spreading_factor,
                                             params.n_users)
        self.active = ofdm.carrier_layout(params.fft_size, params.n_carriers)
        self.profile = channel.resolve_profile(params.pdp)
        if self.profile.max_delay > params.guard_len:
            raise ConfigError(
                f"power-delay profile echoes ({self.profile.max_delay} samples)"
                f" exceed guard_len ({params.guard_len})")
        if self.layout.coded:
            self.permutation = fec.make_interleaver(params.coded_bits_per_frame,
                                                    params.seed)
        else:
            self.permutation = None

    def run_frame(self, point_seed: int, frame_idx: int, noise_var: float
                  ) -> tuple[int, int]:
        """Simulate one frame; returns (info bits, bit errors) for user 0."""
        p, lay = self.params, self.layout
        bit_rng = np.random.default_rng(
            np.random.SeedSequence(point_seed, spawn_key=(frame_idx, 0)))
        chan_seed = np.random.SeedSequence(point_seed, spawn_key=(frame_idx, 1))
        noise_rng = np.random.default_rng(
            np.random.SeedSequence(point_seed, spawn_key=(frame_idx, 2)))

        info = bit_rng.integers(0, 2, size=(p.n_users, lay.n_info))
        if lay.coded:
            coded = fec.conv_encode(info, lay.code)
            if lay.pad:
                pad = np.zeros((p.n_users, lay.pad), dtype=coded.dtype)
                coded = np.concatenate([coded, pad], axis=-1)
            coded = fec.interleave(coded, self.permutation)
        else:
            coded = info
        symbols = mapping.map_bits(coded, self.const)
        grid = symbols.reshape(p.n_users, p.frame_ofdm_symbols,
                               p.n_subbands).transpose(1, 2, 0)
        chips = spreading.spread(grid, self.code)
        frame = Frame(user_bits=info,
                      ofdm_symbols=spreading.freq_interleave(chips))
        tx = ofdm.ofdm_modulate(frame.ofdm_symbols, self.active, p.fft_size,
                                p.guard_len)

        realization = channel.realize(
            self.profile, p.doppler_hz, p.frame_ofdm_symbols, chan_seed,
            symbol_duration=p.symbol_duration, fading=p.fading,
        ).with_noise(noise_var)
        rx = channel.apply(tx, realization, noise_rng)

        rx_carriers = ofdm.ofdm_demodulate(rx, self.active, p.fft_size,
                                           p.guard_len)
        rx_chips = spreading.freq_deinterleave(rx_carriers, p.n_subbands)
        gains = spreading.freq_deinterleave(
            realization.freq_response(p.fft_size, bins=self.active),
            p.n_subbands)
        problem = SubbandProblem(chips=rx_chips, gains=gains, code=self.code,
                                 noise_var=noise_var)
        result = detect(problem, self.spec, self.const,
                        true_symbols=grid if self.spec.genie else None)

        est = result.symbols[..., 0].reshape(-1)
        var = np.maximum(result.noise_var[..., 0].reshape(-1), 1e-30)
        llrs = mapping.soft_demap(est, var, self.const)
        if lay.coded:
            llrs = fec.deinterleave(llrs, self.permutation)[: lay.n_kept]
            soft = fec.depuncture(llrs, lay.code.puncture_pattern, lay.n_mother)
            decoded = fec.viterbi_decode(soft, lay.code)
        else:
            decoded = (llrs < 0).astype(np.int64)
        errors = int(np.count_nonzero(decoded != info[0]))
        return lay.n_info, errors


def run_point(params: SystemParams, detector_spec: DetectorSpec,
              ebn0_db: float, stop: StopRule, seed: int) -> SimRecord:
    """Simulate whole frames at one operating point until the stop rule hits.

    Deterministic for a fixed seed regardless of worker count.
    """
    sim = LinkSimulator(params, detector_spec)
    noise_var = channel.ebn0_to_noisevar(ebn0_db, params)
    t0 = time.perf_counter()
    bits = bit_errors = frames = frame_errors = 0
    while not stop.done(bit_errors, frame_errors, frames):
        n, errs = sim.run_frame(seed, frames, noise_var)
        bits += n
        bit_errors += errs
        frames += 1
        frame_errors += int(errs > 0)
    return SimRecord(
        detector=detector_spec.label, n_users=params.n_users,
        ebn0_db=float(ebn0_db), bits=bits, bit_errors=bit_errors,
        frames=frames, frame_errors=frame_errors,
        ber=bit_errors / bits, fer=frame_errors / frames, seed=int(seed),
        elapsed=time.perf_counter() - t0)


def point_seed(master_seed: int, point_index: int) -> int:
    """Counter-style per-point seed derivation from the master seed."""
    ss = np.random.SeedSequence(master_seed, spawn_key=(point_index,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _run_point_task(args):
    params, spec, ebn0_db, stop, seed = args
    return run_point(params, spec, ebn0_db, stop, seed)


def sweep(params: SystemParams, detectors, ebn0_grid, load_grid=None,
          stop: StopRule | None = None, seed: int | None = None,
          workers: int = 1) -> list[SimRecord]:
    """Cartesian product of detectors x loads x Eb/N0 values.

    Points execute independently (optionally in a process pool); records
    come back in canonical nested order, identical for any worker count.
    """
    stop = stop or StopRule()
    seed = params.seed if seed is None else seed
    load_grid = [params.n_users] if load_grid is None else list(load_grid)
    detectors = list(detectors)
    tasks = []
    idx = 0
    for spec in detectors:
        for k in load_grid:
            point_params = validate(dataclasses.replace(params, n_users=int(k)))
            for ebn0 in ebn0_grid:
                tasks.append((point_params, spec, float(ebn0), stop,
                              point_seed(seed, idx)))
                idx += 1
    if workers <= 1:
        return [_run_point_task(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_point_task, tasks))


def write_csv(records, path_or_file, append: bool = False) -> None:
    """Emit records in the documented schema; append skips the header."""
    def _write(fh, header: bool):
        writer = csv.writer(fh)
        if header:
            writer.writerow(CSV_FIELDS)
        for rec in records:
            writer.writerow(rec.csv_row())

    if isinstance(path_or_file, io.IOBase):
        _write(path_or_file, header=not append)
        return
    mode = "a" if append else "w"
    header = not (append and os.path.exists(path_or_file)
                  and os.path.getsize(path_or_file) > 0)
    with open(path_or_file, mode, encoding="utf-8", newline="") as fh:
        _write(fh, header)


def read_csv(path) -> list[SimRecord]:
    """Parse a results CSV back into records (elapsed is not stored)."""
    out = []
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(CSV_FIELDS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"CSV misses required columns: {sorted(missing)}")
        for row in reader:
            out.append(SimRecord(
                detector=row["detector"], n_users=int(row["K"]),
                ebn0_db=float(row["ebn0_db"]), bits=int(row["bits"]),
                bit_errors=int(row["bit_errors"]), frames=int(row["frames"]),
                frame_errors=int(row["frame_errors"]), ber=float(row["ber"]),
                fer=float(row["fer"]), seed=int(row["seed"])))
    return out


def required_ebn0(records, target: float, metric: str = "ber") -> float:
    """Eb/N0 (dB) where the smoothed metric curve crosses ``target``.

    ``records`` belong to one detector and load.  The curve is forced
    monotone by a running minimum, zero estimates are floored at half an
    error, and the crossing is log-linear in the metric.  Returns NaN when
    the curve never reaches the target (error floor); if even the first
    point is below target, that grid value is returned as an upper bound.
    """
    if not 0 < target < 1:
        raise ValueError("target must lie in (0, 1)")
    if metric not in ("ber", "fer"):
        raise ValueError("metric must be 'ber' or 'fer'")
    pts = sorted(records, key=lambda r: r.ebn0_db)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    x = np.array([r.ebn0_db for r in pts])
    denom = np.array([r.bits if metric == "ber" else r.frames for r in pts])
    v = np.array([getattr(r, metric) for r in pts], dtype=float)
    v = np.where(v > 0, v, 0.5 / denom)      # floor zero estimates
    v = np.minimum.accumulate(v)             # smoothing: running minimum
    exact = np.flatnonzero(v == target)
    if exact.size:
        return float(x[exact[0]])
    if v[0] < target:
        return float(x[0])
    below = np.flatnonzero(v < target)
    if below.size == 0:
        return float("nan")                   # never reached (error floor)
    i = below[0]
    lx0, lx1 = np.log10(v[i - 1]), np.log10(v[i])
    frac = (np.log10(target) - lx0) / (lx1 - lx0)
    return float(x[i - 1] + frac * (x[i] - x[i - 1]))


EXTRACT_FIELDS = ("detector", "K", "metric", "target", "required_ebn0_db",
                  "reached")


def extract_required(records, target: float, metric: str = "ber") -> list[dict]:
    """Required Eb/N0 per (detector, load) group, in first-seen order."""
    groups: dict[tuple[str, int], list[SimRecord]] = {}
    for rec in records:
        groups.setdefault((rec.detector, rec.n_users), []).append(rec)
    rows = []
    for (det, k), group in groups.items():
        value = required_ebn0(group, target, metric)
        reached = not np.isnan(value)
        rows.append({"detector": det, "K": k, "metric": metric,
                     "target": target,
                     "required_ebn0_db": value if reached else None,
                     "reached": reached})
    return rows


def write_extraction_csv(rows, path) -> None:
    """Extraction schema: ``detector,K,metric,target,required_ebn0_db,reached``
    with an empty value and reached=0 for error-floor cases."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(EXTRACT_FIELDS)
        for row in rows:
            val = row["required_ebn0_db"]
            writer.writerow([row["detector"], str(row["K"]), row["metric"],
                             str(row["target"]),
                             "" if val is None else str(val),
                             "1" if row["reached"] else "0"])
