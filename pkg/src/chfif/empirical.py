"""Empirical box-counting dimension and modulus of continuity."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateScales, GridTooCoarse, TooFewPoints
from .evaluator import SampledFunction

__all__ = [
    "BoxCountEstimate",
    "ModulusEstimate",
    "normalize_to_unit_square",
    "box_counts",
    "box_dimension",
    "modulus_of_continuity",
    "MIN_BOX_POINTS",
]

MIN_BOX_POINTS = 1000
_TRIM = 2  # scales dropped at each end of an exponent fit
_TRIM_MIN_LEVELS = 7


def _trimmed(a):
    a = np.asarray(a)
    if len(a) >= _TRIM_MIN_LEVELS:
        return a[_TRIM:-_TRIM]
    return a


def _fit(logx, logy):
    slope, intercept = np.polyfit(logx, logy, 1)
    if len(logx) > 2:
        r = np.corrcoef(logx, logy)[0, 1]
        r2 = float(r * r) if np.isfinite(r) else 1.0
    else:
        r2 = 1.0
    return float(slope), float(intercept), r2


@dataclass(frozen=True, eq=False)
class BoxCountEstimate:
    scales: np.ndarray
    counts: np.ndarray
    slope: float
    fit_r2: float
    intercept: float


@dataclass(frozen=True, eq=False)
class ModulusEstimate:
    t_values: np.ndarray
    omega_values: np.ndarray
    fitted_exponent: float


def normalize_to_unit_square(x, y) -> np.ndarray:
    """Affinely rescale each coordinate to ``[0, 1]`` (constant coordinates map to 0)."""
    cols = []
    for c in (np.asarray(x, dtype=float), np.asarray(y, dtype=float)):
        lo, hi = c.min(), c.max()
        cols.append((c - lo) / (hi - lo) if hi > lo else np.zeros_like(c))
    return np.column_stack(cols)


def box_counts(points: np.ndarray, scale: float) -> int:
    """Occupied boxes of side ``scale`` on a grid anchored at the origin of the unit square."""
    nb = int(np.ceil(1.0 / scale))
    idx = np.floor(points / scale).astype(np.int64)
    np.clip(idx, 0, nb - 1, out=idx)
    return int(np.unique(idx[:, 0] * nb + idx[:, 1]).size)


def box_dimension(points, min_scale: float = 2.0**-10, max_scale: float = 0.5,
                  levels: int = 10) -> BoxCountEstimate:
    """Box-counting dimension of a planar point set in the unit square.

    Boxes of ``levels`` geometrically spaced sizes from ``max_scale`` down to
    ``min_scale`` (dyadic for the defaults) are counted and
    ``log count`` is fitted against ``log(1/scale)``.  With seven or more levels
    the two largest and two smallest scales are left out of the fit.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"points must have shape (n, 2), got {pts.shape}")
    if len(pts) < MIN_BOX_POINTS:
        raise TooFewPoints(f"need at least {MIN_BOX_POINTS} points, got {len(pts)}")
    if not (0 < min_scale < max_scale) or levels < 2:
        raise DegenerateScales(
            f"need 0 < min_scale < max_scale and levels >= 2, got "
            f"{min_scale!r}, {max_scale!r}, {levels!r}"
        )
    scales = np.geomspace(max_scale, min_scale, levels)
    counts = np.array([box_counts(pts, s) for s in scales])
    slope, intercept, r2 = _fit(np.log(1.0 / _trimmed(scales)), np.log(_trimmed(counts)))
    return BoxCountEstimate(scales, counts, slope, r2, intercept)


def _window_ranges(f: np.ndarray, starts: np.ndarray, stops: np.ndarray) -> np.ndarray:
    """``max(f[s:e]) - min(f[s:e])`` for each half-open window, via a level-by-level sparse table."""
    lengths = stops - starts
    level = np.floor(np.log2(lengths)).astype(np.int64)
    out = np.empty(len(starts))
    hi = f.copy()
    lo = f.copy()
    span = 1
    for k in range(int(level.max()) + 1):
        sel = level == k
        if np.any(sel):
            s = starts[sel]
            e = stops[sel] - span
            out[sel] = np.maximum(hi[s], hi[e]) - np.minimum(lo[s], lo[e])
        if span * 2 > len(f):
            break
        hi = np.maximum(hi[:-span], hi[span:])
        lo = np.minimum(lo[:-span], lo[span:])
        span *= 2
    return out


def modulus_of_continuity(samples: SampledFunction, component: str, t_values) -> ModulusEstimate:
    """Estimate ``omega(f; t) = sup_{|h| <= t} sup_x |f(x + h) - f(x)|`` on the sample grid.

    Each value is increased by twice the table's error bound, so the estimate
    is conservative.  The exponent is the slope of ``log omega`` against
    ``log t``.

    Raises
    ------
    GridTooCoarse
        Largest grid spacing is not below ``min(t_values) / 10``.
    """
    x = np.asarray(samples.grid, dtype=float)
    f = np.asarray(samples.component(component), dtype=float)
    t = np.sort(np.asarray(t_values, dtype=float))
    if t.size == 0 or t[0] <= 0:
        raise ValueError("t_values must be positive and non-empty")
    spacing = float(np.max(np.diff(x))) if len(x) > 1 else np.inf
    if not spacing < t[0] / 10:
        raise GridTooCoarse(f"grid spacing {spacing:.3g} not below min(t)/10 = {t[0] / 10:.3g}")
    n = len(x)
    omega = np.empty(len(t))
    starts = np.arange(n)
    for j, tj in enumerate(t):
        stops = np.searchsorted(x, x + tj + 1e-12 * (np.abs(x) + tj), side="right")
        omega[j] = float(np.max(_window_ranges(f, starts, stops)))
    omega = np.maximum.accumulate(omega) + 2.0 * samples.error_bound
    tt, oo = _trimmed(t), _trimmed(omega)
    positive = oo > 0
    if positive.sum() >= 2:
        exponent, _, _ = _fit(np.log(tt[positive]), np.log(oo[positive]))
    else:
        exponent = float("nan")
    return ModulusEstimate(t, omega, exponent)
