"""Render BER/FER waterfall curves and required-Eb/N0-vs-load figures.

Both entry points are pure functions of the CSV content and the
:class:`FigureSpec`: series are the CSV numbers without resampling, input
files are never touched, and the output is a static (preferably vector)
image decided by the output path's extension.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend pinned first)

RESULT_FIELDS = ("detector", "K", "ebn0_db", "bits", "bit_errors", "frames",
                 "frame_errors", "ber", "fer", "seed")
EXTRACT_FIELDS = ("detector", "K", "metric", "target", "required_ebn0_db",
                  "reached")


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: inputs, metric, optional target line, output, filter."""

    inputs: tuple[str, ...]
    output: str
    metric: str = "ber"
    target: float | None = None
    detectors: tuple[str, ...] | None = field(default=None)

    def __post_init__(self):
        if isinstance(self.inputs, str):
            object.__setattr__(self, "inputs", (self.inputs,))
        else:
            object.__setattr__(self, "inputs", tuple(self.inputs))
        if self.detectors is not None:
            object.__setattr__(self, "detectors", tuple(self.detectors))
        if self.metric not in ("ber", "fer"):
            raise ValueError("metric must be 'ber' or 'fer'")
        if self.target is not None and not 0 < self.target < 1:
            raise ValueError("target must lie in (0, 1)")


def _read_rows(path: str, fields) -> list[dict]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(fields) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(
                f"{path}: CSV misses required columns {sorted(missing)}")
        return list(reader)


def _selected(rows, detectors):
    if detectors is None:
        return rows
    keep = set(detectors)
    return [r for r in rows if r["detector"] in keep]


def plot_curves(spec: FigureSpec):
    """One log-scale metric-vs-Eb/N0 series per (detector, K) pair.

    Returns (figure, axes) and writes ``spec.output``.  Zero error rates
    cannot sit on the log axis and render as gaps.
    """
    rows = []
    for path in spec.inputs:
        rows.extend(_read_rows(path, RESULT_FIELDS))
    rows = _selected(rows, spec.detectors)
    if not rows:
        raise ValueError("no rows left after detector filtering")

    series: dict[tuple[str, int], list[tuple[float, float]]] = {}
    for row in rows:
        key = (row["detector"], int(row["K"]))
        series.setdefault(key, []).append(
            (float(row["ebn0_db"]), float(row[spec.metric])))

    fig, ax = plt.subplots(figsize=(7, 5))
    for (det, k), pts in sorted(series.items()):
        pts.sort(key=lambda p: p[0])
        x = [p[0] for p in pts]
        y = [p[1] if p[1] > 0 else math.nan for p in pts]  # gaps at zero
        ax.semilogy(x, y, marker="o", label=f"{det}, K={k}")
    if spec.target is not None:
        ax.axhline(spec.target, color="grey", linestyle=":", linewidth=1,
                   label=f"target {spec.target:g}")
    ax.set_xlabel(r"$E_b/N_0$ (dB)")
    ax.set_ylabel(spec.metric.upper())
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)
    return fig, ax


def plot_load(spec: FigureSpec):
    """Required Eb/N0 versus number of active codes, one series per detector.

    Consumes the extraction CSV; rows with ``reached = 0`` (error floor)
    render as gaps.  Returns (figure, axes) and writes ``spec.output``.
    """
    rows = []
    for path in spec.inputs:
        rows.extend(_read_rows(path, EXTRACT_FIELDS))
    rows = _selected(rows, spec.detectors)
    if not rows:
        raise ValueError("no rows left after detector filtering")

    series: dict[str, list[tuple[int, float]]] = {}
    targets = set()
    metric = rows[0]["metric"]
    for row in rows:
        reached = row["reached"] not in ("0", "", "false", "False")
        value = float(row["required_ebn0_db"]) if reached else math.nan
        series.setdefault(row["detector"], []).append((int(row["K"]), value))
        targets.add(row["target"])

    fig, ax = plt.subplots(figsize=(7, 5))
    for det, pts in sorted(series.items()):
        pts.sort(key=lambda p: p[0])
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="s",
                label=det)
    ax.set_xlabel("active codes K")
    target_note = f" at {metric.upper()} = {'/'.join(sorted(targets))}" \
        if targets else ""
    ax.set_ylabel(r"required $E_b/N_0$ (dB)" + target_note)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(spec.output)
    plt.close(fig)
    return fig, ax
