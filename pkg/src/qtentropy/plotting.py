"""Single-panel SVG line charts from simulation CSV files."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402


class MissingColumnError(KeyError):
    pass


@dataclass
class PlotSpec:
    x: str
    y: Sequence[str]
    labels: Sequence[str] = ()
    xlabel: str | None = None
    ylabel: str | None = None
    title: str | None = None
    hlines: Sequence[float] = ()
    vlines: Sequence[float] = ()
    styles: Sequence[str] = field(default_factory=lambda: ("-", "--", ":", "-."))


def read_columns(path: str | Path) -> dict[str, np.ndarray]:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader if row]
    data = np.array(rows, dtype=float).reshape(len(rows), len(header))
    return {name: data[:, i] for i, name in enumerate(header)}


def plot_csv(csv_paths: Sequence[str | Path], spec: PlotSpec, out_path: str | Path) -> Path:
    """Draw ``spec.y`` against ``spec.x`` for every CSV file into one SVG.

    Traces are labelled from ``spec.labels`` in file-major order; a missing
    column raises :class:`MissingColumnError` naming it.
    """
    if not spec.y:
        raise ValueError("at least one y column is required")
    tables = [read_columns(p) for p in csv_paths]
    for path, table in zip(csv_paths, tables):
        for col in (spec.x, *spec.y):
            if col not in table:
                raise MissingColumnError(f"column {col!r} not found in {path}")

    with plt.rc_context({"svg.hashsalt": "qtentropy", "svg.fonttype": "none"}):
        fig, ax = plt.subplots(figsize=(6.4, 4.0))
        k = 0
        for table in tables:
            for col in spec.y:
                label = spec.labels[k] if k < len(spec.labels) else col
                ax.plot(table[spec.x], table[col], spec.styles[k % len(spec.styles)], color="black", lw=1.0, label=label)
                k += 1
        for y in spec.hlines:
            ax.axhline(y, color="gray", lw=0.6)
        for x in spec.vlines:
            ax.axvline(x, color="gray", lw=0.6)
        ax.set_xlabel(spec.xlabel or spec.x)
        ax.set_ylabel(spec.ylabel or ", ".join(spec.y))
        if spec.title:
            ax.set_title(spec.title)
        if k > 1 or spec.labels:
            ax.legend(frameon=False)
        fig.tight_layout()
        out_path = Path(out_path)
        fig.savefig(out_path, format="svg", metadata={"Date": None})
        plt.close(fig)
    return out_path
