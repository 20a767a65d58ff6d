"""Evaluation of the attractor function ``f = (f1, f2)``.

Three routes are provided:

* :func:`refine` / :func:`sample_graph` push the data forward through all maps.
  Every produced point lies on the attractor, so the values are exact up to
  rounding.
* :func:`evaluate_at` / :func:`evaluate_many` pull an arbitrary abscissa
  backward through the ``L_n^{-1}``, seed with the piecewise-linear
  interpolant of the data and fold forward again.  The result carries a
  certified sup-norm error bound.
* :func:`chaos_game` samples the attractor by random iteration.

Error bounds
------------
Let ``PL`` be the piecewise-linear interpolant of the data and ``T`` the
Read-Bajraktarevic operator.  ``T(PL)`` is the piecewise-linear interpolant of
the first refinement, so ``D = |T(PL) - PL|`` is attained at refinement-1
abscissae.  Per component the errors obey
``e2 <- |gamma_n| e2`` and ``e1 <- |alpha_n| e1 + |beta_n| e2`` under one map,
which gives the seed bounds ``M2 = D2 / (1 - max|gamma|)`` and
``M1 = (D1 + max|beta| M2) / (1 - max|alpha|)``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from .errors import AbscissaOutOfDomain, DepthTooLarge, LengthMismatch
from .model import ChfifSystem

__all__ = [
    "RefinedPointSet",
    "SampledFunction",
    "refine",
    "refined_size",
    "seed_error_bounds",
    "propagate_bound",
    "evaluate_at",
    "evaluate_many",
    "sample_graph",
    "chaos_game",
    "composition_check",
    "functional_equation_residual",
    "DEFAULT_MAX_DEPTH",
    "DEFAULT_EVAL_DEPTH",
    "CHAOS_BURN_IN",
]

DEFAULT_MAX_DEPTH = 12
DEFAULT_EVAL_DEPTH = 60
CHAOS_BURN_IN = 20
DEFAULT_MAX_POINTS = 5_000_000
_EPS = np.finfo(float).eps
# rounding of one pull-back x -> L_n^{-1}(x), in ulps of the domain magnitude
_PULLBACK_ULPS = 4
# pulled-back points within their rounding envelope of a node snap to it while
# the envelope is below this fraction of the domain width
SNAP_FRACTION = 1e-9


def max_points() -> int:
    """Refinement point budget; ``CHFIF_MAX_POINTS`` overrides the default."""
    raw = os.environ.get("CHFIF_MAX_POINTS")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_POINTS
    return int(raw)


@dataclass(frozen=True, eq=False)
class RefinedPointSet:
    """The depth-``j`` node set: images of the data under all length-``j`` map codes."""

    depth: int
    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist(), self.z.tolist()))

    def __len__(self) -> int:
        return len(self.x)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """A table of ``f1``, ``f2`` on a sorted grid.

    ``error_bound`` bounds the sup-norm distance between ``f`` and the
    piecewise-linear interpolant of the table.
    """

    grid: np.ndarray
    f1_values: np.ndarray
    f2_values: np.ndarray
    error_bound: float = 0.0
    depth: int | None = None

    def __post_init__(self):
        n = len(self.grid)
        if len(self.f1_values) != n or len(self.f2_values) != n:
            raise LengthMismatch(
                f"grid/f1/f2 lengths differ: {n}, {len(self.f1_values)}, {len(self.f2_values)}"
            )

    def __len__(self) -> int:
        return len(self.grid)

    def interpolate(self, x):
        """Piecewise-linear interpolation of both components."""
        return np.interp(x, self.grid, self.f1_values), np.interp(x, self.grid, self.f2_values)

    def component(self, which: str) -> np.ndarray:
        if which == "f1":
            return self.f1_values
        if which == "f2":
            return self.f2_values
        raise ValueError(f"component must be 'f1' or 'f2', got {which!r}")


def refined_size(system: ChfifSystem, depth: int) -> int:
    """Number of distinct points at refinement depth ``depth``: ``N**(depth+1) + 1``."""
    return system.N ** (depth + 1) + 1


def _apply_all_maps(system: ChfifSystem, X, Y, Z):
    """Images of sorted points under every map, concatenated in abscissa order.

    Adjacent blocks share an endpoint (join-up); the duplicate is dropped and
    the block endpoints are set to the data values they must equal.
    """
    c = system.arrays()
    nodes, yn, zn = c["nodes"], c["ynodes"], c["znodes"]
    x0 = nodes[0]
    width = nodes[-1] - nodes[0]
    w = ((X - x0) / width)[None, :]
    a = c["alpha"][:, None]
    b = c["beta"][:, None]
    g = c["gamma"][:, None]
    bx = (1.0 - w) * nodes[:-1, None] + w * nodes[1:, None]
    by = a * Y[None, :] + b * Z[None, :] + ((1.0 - w) * c["p0"][:, None] + w * c["pN"][:, None])
    bz = g * Z[None, :] + ((1.0 - w) * c["q0"][:, None] + w * c["qN"][:, None])
    by[:, 0] = yn[:-1]
    by[:, -1] = yn[1:]
    bz[:, 0] = zn[:-1]
    bz[:, -1] = zn[1:]
    bx[:, 0] = nodes[:-1]
    bx[:, -1] = nodes[1:]
    keep = np.ones(bx.shape, dtype=bool)
    keep[1:, 0] = False
    return bx[keep], by[keep], bz[keep]


def refine(
    system: ChfifSystem,
    depth: int,
    *,
    max_depth: int = DEFAULT_MAX_DEPTH,
    point_budget: int | None = None,
) -> RefinedPointSet:
    """Compute the depth-``depth`` refinement of the data.

    Depth 0 is the data itself; each round applies all ``N`` maps to the
    previous set.  Consecutive depths are nested bit-for-bit.

    Raises
    ------
    DepthTooLarge
        ``depth`` exceeds ``max_depth`` or the point budget.
    """
    if depth < 0:
        raise DepthTooLarge(f"depth must be non-negative, got {depth}")
    budget = max_points() if point_budget is None else point_budget
    size = refined_size(system, depth)
    if depth > max_depth:
        raise DepthTooLarge(f"depth {depth} exceeds maximum {max_depth}")
    if size > budget:
        raise DepthTooLarge(f"depth {depth} needs {size} points, budget is {budget}")
    d = system.data
    X, Y, Z = np.array(d.x), np.array(d.y), np.array(d.z)
    for _ in range(depth):
        X, Y, Z = _apply_all_maps(system, X, Y, Z)
    return RefinedPointSet(depth, X, Y, Z)


def seed_error_bounds(system: ChfifSystem) -> tuple[float, float]:
    """Certified bounds ``(M1, M2)`` on ``|f1 - PL1|`` and ``|f2 - PL2|``."""
    d = system.data
    r1 = refine(system, 1)
    D1 = float(np.max(np.abs(r1.y - np.interp(r1.x, d.x, d.y))))
    D2 = float(np.max(np.abs(r1.z - np.interp(r1.x, d.x, d.z))))
    scale = float(max(np.max(np.abs(r1.y)), np.max(np.abs(r1.z)), 1.0))
    slack = 64 * _EPS * scale
    D1 += slack
    D2 += slack
    pa = system.params
    amax = max(abs(v) for v in pa.alpha)
    bmax = max(abs(v) for v in pa.beta)
    gmax = max(abs(v) for v in pa.gamma)
    M2 = D2 / (1.0 - gmax)
    M1 = (D1 + bmax * M2) / (1.0 - amax)
    return M1, M2


def propagate_bound(system: ChfifSystem, e1: float, e2: float, steps: int) -> tuple[float, float]:
    """Worst-case propagation of componentwise errors through ``steps`` arbitrary maps."""
    pa = system.params
    for _ in range(steps):
        e1, e2 = (
            max(abs(a) * e1 + abs(b) * e2 for a, b in zip(pa.alpha, pa.beta)),
            max(abs(g) for g in pa.gamma) * e2,
        )
    return e1, e2


def _rounding_allowance(system: ChfifSystem, depth: int, M1: float, M2: float) -> float:
    d = system.data
    scale = float(max(np.max(np.abs(d.y)), np.max(np.abs(d.z)), 1.0)) + M1 + M2
    return 16 * _EPS * scale * (depth + 1)


def evaluate_many(system: ChfifSystem, xs, depth: int = DEFAULT_EVAL_DEPTH):
    """Vectorised :func:`evaluate_at`: returns arrays ``f1, f2, error_bound``."""
    xs = np.ascontiguousarray(np.atleast_1d(np.asarray(xs, dtype=float)))
    d = system.data
    if xs.size and (np.min(xs) < d.x0 or np.max(xs) > d.xN or not np.all(np.isfinite(xs))):
        bad = xs[(xs < d.x0) | (xs > d.xN) | ~np.isfinite(xs)][0]
        raise AbscissaOutOfDomain(f"x = {bad!r} outside [{d.x0!r}, {d.xN!r}]")
    if depth < 0:
        raise ValueError(f"depth must be non-negative, got {depth}")
    M1, M2 = seed_error_bounds(system)
    c = system.arrays()
    step_ulp = _PULLBACK_ULPS * _EPS * max(abs(d.x0), abs(d.xN))
    f1, f2, e1, e2 = kernels.evaluate_batch(
        xs, int(depth), c["nodes"], c["ynodes"], c["znodes"], c["alpha"], c["beta"],
        c["gamma"], c["p0"], c["pN"], c["q0"], c["qN"], M1, M2,
        step_ulp, SNAP_FRACTION * d.width,
    )
    bound = np.maximum(e1, e2)
    on_node = np.isin(xs, d.x)
    bound = np.where(on_node, 0.0, bound + _rounding_allowance(system, depth, M1, M2))
    return f1, f2, bound


def evaluate_at(system: ChfifSystem, x: float, depth: int = DEFAULT_EVAL_DEPTH):
    """Evaluate ``(f1(x), f2(x))`` with a certified sup-norm error bound.

    The functional equation ``f(x) = F_n(L_n^{-1}(x), f(L_n^{-1}(x)))`` is
    unwound ``depth`` times.  Data nodes are returned exactly.

    A pulled-back abscissa that lands within its accumulated rounding
    envelope of a data node is taken to be that node, so refinement
    abscissae reproduce the refinement values.  ``f`` is only Hoelder
    continuous, so without this a few ulps of drift in ``x`` can move the
    value far more than the error bound.  The bound certifies ``f`` at the
    address found this way.

    Returns
    -------
    tuple
        ``(f1, f2, error_bound)``.
    """
    f1, f2, b = evaluate_many(system, [x], depth)
    return float(f1[0]), float(f2[0]), float(b[0])


def sample_graph(system: ChfifSystem, depth: int, **kwargs) -> SampledFunction:
    """Function table on the depth-``depth`` refinement abscissae."""
    r = refine(system, depth, **kwargs)
    M1, M2 = seed_error_bounds(system)
    e1, e2 = propagate_bound(system, M1, M2, depth)
    return SampledFunction(r.x, r.y, r.z, float(max(e1, e2)), depth)


def chaos_game(system: ChfifSystem, count: int, seed: int) -> np.ndarray:
    """Random-iteration sample of the attractor.

    Starts at ``(x_0, y_0, z_0)``, picks maps uniformly with
    ``numpy.random.default_rng(seed)`` and discards the first
    :data:`CHAOS_BURN_IN` iterates.  Returns an array of shape ``(count, 3)``.
    """
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    rng = np.random.default_rng(seed)
    choices = rng.integers(0, system.N, size=count + CHAOS_BURN_IN, dtype=np.int64)
    c = system.arrays()
    d = system.data
    xs, ys, zs = kernels.chaos_game(
        c["nodes"], c["alpha"], c["beta"], c["gamma"], c["p0"], c["pN"], c["q0"], c["qN"],
        choices, CHAOS_BURN_IN, d.x0, float(d.y[0]), float(d.z[0]),
    )
    return np.column_stack([xs, ys, zs])


def composition_check(system: ChfifSystem, grid: SampledFunction, depth: int = DEFAULT_EVAL_DEPTH) -> float:
    """Largest residual of the two-map composition identities over all code pairs.

    For every ``(i1, i2)`` and grid abscissa ``x``:

        f1(L_i2(L_i1(x))) = a2 (a1 f1(x) + b1 f2(x) + p_i1(x)) + b2 (g1 f2(x) + q_i1(x)) + p_i2(L_i1(x))
        f2(L_i2(L_i1(x))) = g2 (g1 f2(x) + q_i1(x)) + q_i2(L_i1(x))

    Left sides come from :func:`evaluate_many`; right sides use the table.
    """
    d = system.data
    x = np.asarray(grid.grid, dtype=float)
    F1 = np.asarray(grid.f1_values, dtype=float)
    F2 = np.asarray(grid.f2_values, dtype=float)
    x0, xN = d.x0, d.xN
    pa = system.params
    worst = 0.0
    for i1 in range(system.N):
        w1 = (x - x0) / (xN - x0)
        u = (1.0 - w1) * d.x[i1] + w1 * d.x[i1 + 1]
        wu = (u - x0) / (xN - x0)
        p1 = system.p[i1].evaluate(x, x0, xN)
        q1 = system.q[i1].evaluate(x, x0, xN)
        inner1 = pa.alpha[i1] * F1 + pa.beta[i1] * F2 + p1
        inner2 = pa.gamma[i1] * F2 + q1
        for i2 in range(system.N):
            v = (1.0 - wu) * d.x[i2] + wu * d.x[i2 + 1]
            lhs1, lhs2, _ = evaluate_many(system, v, depth)
            p2 = system.p[i2].evaluate(u, x0, xN)
            q2 = system.q[i2].evaluate(u, x0, xN)
            rhs1 = pa.alpha[i2] * inner1 + pa.beta[i2] * inner2 + p2
            rhs2 = pa.gamma[i2] * inner2 + q2
            worst = max(worst, float(np.max(np.abs(lhs1 - rhs1))), float(np.max(np.abs(lhs2 - rhs2))))
    return worst


def functional_equation_residual(system: ChfifSystem, depth: int) -> float:
    """Max of ``|f(L_n(x)) - F_n(x, f(x))|`` over the depth-``(depth-1)`` grid.

    ``f(L_n(x))`` is read from the depth-``depth`` refinement, which contains
    the image of every coarser point.
    """
    if depth < 1:
        raise ValueError(f"depth must be >= 1, got {depth}")
    fine = refine(system, depth)
    coarse = refine(system, depth - 1)
    d = system.data
    pa = system.params
    tol = 1e-12 * d.width
    worst = 0.0
    for n in range(1, system.N + 1):
        i = n - 1
        w = (coarse.x - d.x0) / d.width
        lx = (1.0 - w) * d.x[i] + w * d.x[i + 1]
        img1 = pa.alpha[i] * coarse.y + pa.beta[i] * coarse.z + system.p[i].evaluate(coarse.x, d.x0, d.xN)
        img2 = pa.gamma[i] * coarse.z + system.q[i].evaluate(coarse.x, d.x0, d.xN)
        idx = np.clip(np.searchsorted(fine.x, lx), 0, len(fine.x) - 1)
        lo = np.clip(idx - 1, 0, len(fine.x) - 1)
        idx = np.where(np.abs(fine.x[lo] - lx) < np.abs(fine.x[idx] - lx), lo, idx)
        miss = np.abs(fine.x[idx] - lx) > tol
        if np.any(miss):
            raise AssertionError(f"{int(miss.sum())} images of map {n} missing from the refinement")
        worst = max(
            worst,
            float(np.max(np.abs(fine.y[idx] - img1))),
            float(np.max(np.abs(fine.z[idx] - img2))),
        )
    return worst
