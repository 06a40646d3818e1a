"""Parameter sweeps, crossover detection and power-law fits.

Reproduces the chain's two fidelity regimes empirically: sweeps of
``ln F`` against size, half-difference or field; local log-log slopes
(which drift from 2 in the small-system regime to 1 in the thermodynamic
regime); the size at which the slope crosses a target value; and the
power law that crossover size follows as a function of the
half-difference.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .chain import ChainSpec, log_fidelity
from .errors import (
    DataQualityError,
    DegenerateDataError,
    DomainError,
    FidelityError,
    RangeError,
    RegimeError,
)
from .scaling import SCALING_MAX_DELTA, SCALING_MAX_DISTANCE, scaling_a

__all__ = [
    "Axis",
    "GMode",
    "SweepTable",
    "FitResult",
    "resolve_field",
    "sweep",
    "local_slope",
    "slope_crossing",
    "find_crossover",
    "fit_power_law",
    "collapse_residuals",
    "worker_count",
]

THREADS_ENV_VAR = "FIDELITY_THREADS"

# crossover sweeps: geometric grid density and span around 1/|delta|
CROSSOVER_POINTS_PER_DECADE_PAIR = 25
CROSSOVER_SPAN = 1e2


class Axis(enum.Enum):
    SIZE = "size"
    DELTA = "delta"
    FIELD = "field"


class GMode(enum.Enum):
    """How the field is chosen for each sweep point, relative to the
    critical point and the point's half-difference."""

    AT_CRITICAL = "critical"
    PLUS_DELTA = "plus_delta"
    PLUS_5DELTA = "plus_5delta"


def resolve_field(g_mode: GMode | str | float, delta: float) -> float:
    """Field value for one sweep point; numbers are taken as explicit g."""
    if isinstance(g_mode, (int, float)) and not isinstance(g_mode, bool):
        if not math.isfinite(g_mode):
            raise DomainError(f"explicit field must be finite, got {g_mode!r}")
        return float(g_mode)
    mode = GMode(g_mode)
    if mode is GMode.AT_CRITICAL:
        return 1.0
    if mode is GMode.PLUS_DELTA:
        return 1.0 + delta
    return 1.0 + 5.0 * delta


@dataclass(frozen=True)
class SweepTable:
    """One ln F evaluation per grid point, in grid order."""

    axis: Axis
    points: tuple[tuple[float, float], ...]
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.points) < 3:
            raise DomainError(f"a sweep needs >= 3 points, got {len(self.points)}")
        xs = [x for x, _ in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise DomainError("sweep grid must be strictly increasing")
        if any(lf > 0.0 for _, lf in self.points):
            raise DomainError("ln F must be <= 0 everywhere")

    @property
    def xs(self) -> np.ndarray:
        return np.array([x for x, _ in self.points])

    @property
    def log_fs(self) -> np.ndarray:
        return np.array([lf for _, lf in self.points])


@dataclass(frozen=True)
class FitResult:
    """Power law y = a x^(-b) fitted by least squares in log-log space."""

    prefactor_a: float
    exponent_b: float
    stderr_b: float
    residuals: tuple[float, ...]


def worker_count(n_items: int) -> int:
    """Worker cap: FIDELITY_THREADS if set, else available parallelism."""
    raw = os.environ.get(THREADS_ENV_VAR)
    if raw is not None:
        try:
            cap = int(raw)
        except ValueError:
            raise DomainError(
                f"{THREADS_ENV_VAR} must be an integer, got {raw!r}"
            ) from None
        if cap < 1:
            raise DomainError(f"{THREADS_ENV_VAR} must be >= 1, got {cap}")
    else:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_items))


def _ordered_map(fn, items: Sequence):
    """Map preserving input order; sweep points are independent, and each
    point's own reduction runs in a fixed order, so results are
    bit-identical at any worker count."""
    workers = worker_count(len(items))
    if workers == 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sweep(
    axis: Axis | str,
    fixed: Mapping,
    grid: Sequence[float],
    g_mode: GMode | str | float = GMode.AT_CRITICAL,
) -> SweepTable:
    """Evaluate ln F along one axis, all other parameters held fixed.

    ``fixed`` supplies ``delta`` for size sweeps, ``size`` for
    half-difference sweeps, and both for field sweeps (where the grid
    itself provides g and ``g_mode`` is ignored).
    """
    axis = Axis(axis)
    grid = list(grid)
    if len(grid) < 3:
        raise DomainError(f"a sweep needs >= 3 grid points, got {len(grid)}")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("sweep grid must be strictly increasing")

    def require(key: str) -> float:
        if key not in fixed:
            raise DomainError(f"{axis.value} sweep requires fixed parameter {key!r}")
        return fixed[key]

    if axis is Axis.SIZE:
        delta = require("delta")
    elif axis is Axis.DELTA:
        size = require("size")
    else:
        size, delta = require("size"), require("delta")

    def make_spec(x) -> ChainSpec:
        if axis is Axis.SIZE:
            return ChainSpec(int(x), resolve_field(g_mode, delta), delta)
        if axis is Axis.DELTA:
            return ChainSpec(int(size), resolve_field(g_mode, x), x)
        return ChainSpec(int(size), float(x), delta)

    def evaluate(x):
        try:
            return (float(x), log_fidelity(make_spec(x)).log_f)
        except FidelityError as exc:
            raise type(exc)(f"at grid point {axis.value}={x}: {exc}") from exc

    points = tuple(_ordered_map(evaluate, grid))
    meta = dict(fixed)
    meta["axis"] = axis.value
    if axis is not Axis.FIELD:
        meta["g_mode"] = g_mode.value if isinstance(g_mode, GMode) else g_mode
    return SweepTable(axis=axis, points=points, meta=meta)


def local_slope(table: SweepTable) -> list[tuple[float, float]]:
    """d ln(-ln F) / d ln x by centered differences on the log-log grid
    (one-sided at the endpoints)."""
    if any(lf == 0.0 for _, lf in table.points):
        raise DegenerateDataError(
            "local slope undefined where ln F = 0 (identical states)"
        )
    lx = np.log(table.xs)
    ly = np.log(-table.log_fs)
    slopes = np.empty_like(lx)
    slopes[1:-1] = (ly[2:] - ly[:-2]) / (lx[2:] - lx[:-2])
    slopes[0] = (ly[1] - ly[0]) / (lx[1] - lx[0])
    slopes[-1] = (ly[-1] - ly[-2]) / (lx[-1] - lx[-2])
    return list(zip(table.xs.tolist(), slopes.tolist()))


def crossover_size_grid(delta: float) -> list[int]:
    """Geometric size grid spanning [1e-2, 1e2] / |delta|, 25 points per
    decade pair, clamped to even integers."""
    lo = max(2.0, 1e-2 / abs(delta))
    hi = CROSSOVER_SPAN / abs(delta)
    decades = math.log10(hi / lo)
    count = max(3, round(CROSSOVER_POINTS_PER_DECADE_PAIR * decades / 2.0))
    raw = np.geomspace(lo, hi, count)
    evens = np.unique(np.maximum(2, 2 * np.round(raw / 2.0).astype(np.int64)))
    return [int(n) for n in evens]


def slope_crossing(
    slopes: Sequence[tuple[float, float]], target_slope: float
) -> float:
    """x at which a decreasing slope sequence crosses ``target_slope``,
    by linear interpolation in (ln x, slope).

    The slope must be monotone (non-increasing, ties allowed at the
    asymptotes) across the crossing window; wobbles there mean the data
    cannot locate the crossover reliably.
    """
    values = [s for _, s in slopes]
    xs = [x for x, _ in slopes]
    for i in range(len(values) - 1):
        if values[i] >= target_slope > values[i + 1]:
            window = values[max(0, i - 1): i + 3]
            if any(b > a for a, b in zip(window, window[1:])):
                raise DataQualityError(
                    f"slope not monotone decreasing around the crossing at "
                    f"x~{xs[i]:g} (window {window})"
                )
            t = (target_slope - values[i]) / (values[i + 1] - values[i])
            ln_x = math.log(xs[i]) + t * (math.log(xs[i + 1]) - math.log(xs[i]))
            return math.exp(ln_x)
    raise RangeError(
        f"no slope crossing of {target_slope} inside [{xs[0]:g}, {xs[-1]:g}]"
    )


def find_crossover(
    delta: float,
    g_mode: GMode | str | float = GMode.AT_CRITICAL,
    target_slope: float = 1.5,
) -> float:
    """Size at which the local slope of -ln F vs N crosses ``target_slope``.

    Sweeps a geometric grid around N ~ 1/|delta|, requires the slope to
    decrease monotonically through the crossing window, and interpolates
    linearly in (ln N, slope).
    """
    if not 1e-6 <= abs(delta) <= 1e-2:
        raise DomainError(
            f"crossover detection requires 1e-6 <= |delta| <= 1e-2, got {delta!r}"
        )
    if not 1.0 < target_slope < 2.0:
        raise DomainError(f"target slope must lie in (1, 2), got {target_slope!r}")
    grid = crossover_size_grid(delta)
    table = sweep(Axis.SIZE, {"delta": delta}, grid, g_mode)
    return slope_crossing(local_slope(table), target_slope)


def fit_power_law(points: Sequence[tuple[float, float]]) -> FitResult:
    """Ordinary least squares of ln y on ln x; returns y = a x^(-b)."""
    if len(points) < 3:
        raise DomainError(f"power-law fit needs >= 3 points, got {len(points)}")
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise DomainError("power-law fit requires strictly positive points")
    lx, ly = np.log(x), np.log(y)
    sxx = float(np.sum((lx - lx.mean()) ** 2))
    if sxx == 0.0:
        raise DegenerateDataError("zero variance in ln x; exponent undefined")
    slope = float(np.sum((lx - lx.mean()) * (ly - ly.mean())) / sxx)
    intercept = float(ly.mean() - slope * lx.mean())
    residuals = ly - (intercept + slope * lx)
    dof = max(1, len(points) - 2)
    stderr = math.sqrt(float(np.sum(residuals**2)) / dof / sxx)
    return FitResult(
        prefactor_a=math.exp(intercept),
        exponent_b=-slope,
        stderr_b=stderr,
        residuals=tuple(residuals.tolist()),
    )


def collapse_residuals(
    delta_list: Sequence[float], c_grid: Sequence[float], size: int
) -> float:
    """Worst deviation of the measured per-site decay from the scaling
    function: max over (delta, c) of |(-ln F / (N |delta|)) - A(c)|."""
    for delta in delta_list:
        if delta == 0.0 or abs(delta) > SCALING_MAX_DELTA:
            raise RegimeError(
                f"collapse requires 0 < |delta| <= {SCALING_MAX_DELTA}, got {delta!r}"
            )
        if size * abs(delta) < 10.0:
            raise RegimeError(
                f"collapse requires N |delta| >= 10 (thermodynamic regime), "
                f"got {size * abs(delta):g} at delta={delta}"
            )
        for c in c_grid:
            if abs(c * delta) > SCALING_MAX_DISTANCE:
                raise RegimeError(
                    f"collapse requires |c delta| <= {SCALING_MAX_DISTANCE}, "
                    f"violated at c={c}, delta={delta}"
                )

    tasks = [(delta, c) for delta in delta_list for c in c_grid]

    def residual(task):
        delta, c = task
        spec = ChainSpec(size=size, field=1.0 + float(c) * abs(delta), half_diff=delta)
        measured = -log_fidelity(spec).log_f / (size * abs(delta))
        return abs(measured - scaling_a(c).a_value)

    return float(max(_ordered_map(residual, tasks)))
