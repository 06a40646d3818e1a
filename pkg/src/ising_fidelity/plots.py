"""Figure rendering for the CLI report path.

Every function takes already-computed data and writes one figure file
(format chosen by the path suffix); nothing here recomputes physics.
"""

from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .analysis import FitResult, SweepTable  # noqa: E402

__all__ = [
    "figure_sweep",
    "figure_scaling_function",
    "figure_crossover",
    "figure_field_scan",
]

_AXIS_LABEL = {"size": "system size N", "delta": r"half-difference $|\delta|$",
               "field": "field g"}


def _finish(fig, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, bbox_inches="tight", dpi=150)
    plt.close(fig)
    return path


def figure_sweep(tables: Mapping[str, SweepTable], path: str | Path) -> Path:
    """Log-log decay curves -ln F vs the sweep axis, one per label."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    axis = None
    for label, table in tables.items():
        axis = table.axis.value
        xs = np.abs(table.xs)
        ax.loglog(xs, -table.log_fs, marker=".", lw=1.2, label=label)
    ax.set_xlabel(_AXIS_LABEL.get(axis, axis))
    ax.set_ylabel(r"$-\ln F$")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    return _finish(fig, path)


def figure_scaling_function(
    c: Sequence[float],
    analytic: Sequence[float],
    derivative: Sequence[float],
    path: str | Path,
    numeric: Sequence[float] | None = None,
) -> Path:
    """Scaling function (with optional mode-product crosses) and its slope."""
    fig, (top, bottom) = plt.subplots(
        2, 1, figsize=(6, 7), sharex=True, height_ratios=[3, 2]
    )
    top.plot(c, analytic, "k-", lw=1.5, label="analytic")
    if numeric is not None:
        top.plot(c, numeric, "rx", ms=5, label="mode product")
    top.set_ylabel("A(c)")
    top.grid(alpha=0.3)
    top.legend()
    finite = np.isfinite(derivative)
    bottom.plot(np.asarray(c)[finite], np.asarray(derivative)[finite], "k-", lw=1.2)
    bottom.set_xlabel(r"$c = (g - 1)/|\delta|$")
    bottom.set_ylabel("dA/dc")
    bottom.grid(alpha=0.3)
    return _finish(fig, path)


def figure_crossover(
    data: Mapping[str, tuple[Sequence[float], Sequence[float], FitResult]],
    path: str | Path,
) -> Path:
    """Crossover size vs half-difference with the fitted power laws."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    for label, (deltas, sizes, fit) in data.items():
        deltas = np.abs(np.asarray(deltas, dtype=float))
        ax.loglog(deltas, sizes, "x", ms=7,
                  label=f"{label}: a={fit.prefactor_a:.2f}, b={fit.exponent_b:.3f}")
        line = np.geomspace(deltas.min(), deltas.max(), 50)
        ax.loglog(line, fit.prefactor_a * line ** (-fit.exponent_b), "-", lw=1.0,
                  color=ax.lines[-1].get_color())
    ax.set_xlabel(r"$|\delta|$")
    ax.set_ylabel(r"$N_{3/2}$")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=8)
    return _finish(fig, path)


def figure_field_scan(
    fields: Sequence[float],
    fidelities: Sequence[float],
    path: str | Path,
    predicted: Sequence[float] | None = None,
) -> Path:
    """Fidelity against the field through the critical region."""
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if predicted is not None:
        ax.plot(fields, predicted, "k-", lw=1.5, label="scaling law")
    ax.plot(fields, fidelities, "rx", ms=5, label="mode product")
    ax.set_xlabel("field g")
    ax.set_ylabel("F")
    ax.grid(alpha=0.3)
    ax.legend()
    return _finish(fig, path)
