"""Inserting one point into the data and rebuilding the IFS.

Inserting ``(x_hat, y_hat, z_hat)`` with ``x_{k-1} < x_hat < x_k`` splits
``I_k`` into ``[x_{k-1}, x_hat]`` and ``[x_hat, x_k]`` and replaces map ``k``
by a left and a right map.  The other maps keep their parameters, and since
the data endpoints do not move their ``p_n``, ``q_n`` are unchanged.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import (
    AbscissaCollision,
    AbscissaOutOfDomain,
    DegenerateOrdinates,
    EvaluationTooCoarse,
    ParameterConstraintViolation,
)
from .evaluator import DEFAULT_EVAL_DEPTH, evaluate_at
from .model import ChfifSystem, IfsParameters, build_system, validate_data

__all__ = [
    "SplitParameters",
    "InsertionSpec",
    "Kind",
    "InsertionKind",
    "make_spec",
    "split_parameters",
    "classify_insertion",
    "insert",
    "split_L_identity_check",
    "split_pq_relation_check",
    "DEFAULT_KNOT_TOL",
]

DEFAULT_KNOT_TOL = 1e-6
_MAX_CLASSIFY_DEPTH = 4000


@dataclass(frozen=True)
class SplitParameters:
    """Parameters of the left and right maps replacing map ``k``."""

    alpha_l: float
    alpha_r: float
    beta_l: float
    beta_r: float
    gamma_l: float
    gamma_r: float

    def validate(self) -> None:
        for side in ("l", "r"):
            a = getattr(self, f"alpha_{side}")
            b = getattr(self, f"beta_{side}")
            g = getattr(self, f"gamma_{side}")
            if abs(a) >= 1:
                raise ParameterConstraintViolation(f"|alpha_{side}| = {abs(a):.2f} >= 1")
            if abs(g) >= 1:
                raise ParameterConstraintViolation(f"|gamma_{side}| = {abs(g):.2f} >= 1")
            if abs(b) + abs(g) >= 1:
                raise ParameterConstraintViolation(
                    f"|beta_{side}|+|gamma_{side}| = {abs(b) + abs(g):.2f} >= 1"
                )


@dataclass(frozen=True)
class InsertionSpec:
    x_hat: float
    y_hat: float
    z_hat: float
    k: int
    rho_x: float
    rho_y: float | None
    rho_z: float | None
    overrides: SplitParameters | None = None


def make_spec(
    system: ChfifSystem,
    x_hat: float,
    y_hat: float,
    z_hat: float,
    overrides: SplitParameters | None = None,
    tol: float = 0.0,
) -> InsertionSpec:
    """Locate ``x_hat`` and compute the split ratios.

    ``rho_y`` / ``rho_z`` are ``None`` when the enclosing ordinates are equal.

    Raises
    ------
    AbscissaOutOfDomain
        ``x_hat`` not strictly inside ``(x_0, x_N)``.
    AbscissaCollision
        ``x_hat`` within ``tol`` of an existing node.
    """
    d = system.data
    x_hat, y_hat, z_hat = float(x_hat), float(y_hat), float(z_hat)
    if not (d.x0 < x_hat < d.xN):
        if x_hat in (d.x0, d.xN):
            raise AbscissaCollision(f"x_hat = {x_hat!r} coincides with an endpoint node")
        raise AbscissaOutOfDomain(f"x_hat = {x_hat!r} outside ({d.x0!r}, {d.xN!r})")
    gap = np.min(np.abs(d.x - x_hat))
    if gap <= tol or x_hat in d.x:
        raise AbscissaCollision(f"x_hat = {x_hat!r} coincides with an existing node")
    k = d.locate(x_hat)
    a, b = float(d.x[k - 1]), float(d.x[k])
    rho_x = (x_hat - a) / (b - a)
    dy = float(d.y[k] - d.y[k - 1])
    dz = float(d.z[k] - d.z[k - 1])
    rho_y = (y_hat - float(d.y[k - 1])) / dy if dy != 0 else None
    rho_z = (z_hat - float(d.z[k - 1])) / dz if dz != 0 else None
    if overrides is not None:
        overrides.validate()
    return InsertionSpec(x_hat, y_hat, z_hat, k, rho_x, rho_y, rho_z, overrides)


def split_parameters(system: ChfifSystem, spec: InsertionSpec) -> SplitParameters:
    """Overrides when given, else the proportional split ``alpha_l = rho_x alpha_k`` etc."""
    if spec.overrides is not None:
        return spec.overrides
    i = spec.k - 1
    pa = system.params
    r = spec.rho_x
    return SplitParameters(
        r * pa.alpha[i], (1 - r) * pa.alpha[i],
        r * pa.beta[i], (1 - r) * pa.beta[i],
        r * pa.gamma[i], (1 - r) * pa.gamma[i],
    )


def insert(system: ChfifSystem, spec: InsertionSpec) -> ChfifSystem:
    """Return the ``N + 1``-map system through the enlarged data.

    Map ``k`` becomes maps ``k`` (left half) and ``k + 1`` (right half) of the
    new system; the split ``p``, ``q`` come from the join-up conditions.
    """
    sp = split_parameters(system, spec)
    sp.validate()
    d = system.data
    k = spec.k
    pts = d.points
    pts.insert(k, (spec.x_hat, spec.y_hat, spec.z_hat))
    new_data = validate_data(pts)
    pa = system.params
    i = k - 1
    params = IfsParameters(
        pa.alpha[:i] + (sp.alpha_l, sp.alpha_r) + pa.alpha[i + 1:],
        pa.beta[:i] + (sp.beta_l, sp.beta_r) + pa.beta[i + 1:],
        pa.gamma[:i] + (sp.gamma_l, sp.gamma_r) + pa.gamma[i + 1:],
    )
    return build_system(new_data, params)


class Kind(enum.Enum):
    NODE_NODE = "node-node"
    NODE_KNOT = "node-knot"
    KNOT_NODE = "knot-node"
    KNOT_KNOT = "knot-knot"


@dataclass(frozen=True)
class InsertionKind:
    kind: Kind
    tolerance_used: float
    f1: float
    f2: float
    error_bound: float


def classify_insertion(
    system: ChfifSystem,
    x_hat: float,
    y_hat: float,
    z_hat: float,
    tol: float = DEFAULT_KNOT_TOL,
) -> InsertionKind:
    """Decide whether ``(y_hat, z_hat)`` are knots of ``f1`` / ``f2`` at ``x_hat``.

    The evaluation depth starts at the default and doubles until the certified
    bound drops below ``tol / 10``.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    make_spec(system, x_hat, y_hat, z_hat, tol=tol)
    depth = DEFAULT_EVAL_DEPTH
    while True:
        f1, f2, bound = evaluate_at(system, float(x_hat), depth)
        if bound <= tol / 10:
            break
        if depth >= _MAX_CLASSIFY_DEPTH:
            raise EvaluationTooCoarse(
                f"error bound {bound:.3g} above tol/10 = {tol / 10:.3g} at depth {depth}"
            )
        depth *= 2
    y_knot = abs(y_hat - f1) <= tol
    z_knot = abs(z_hat - f2) <= tol
    if y_knot and z_knot:
        kind = Kind.KNOT_KNOT
    elif z_knot:
        kind = Kind.NODE_KNOT
    elif y_knot:
        kind = Kind.KNOT_NODE
    else:
        kind = Kind.NODE_NODE
    return InsertionKind(kind, tol, f1, f2, bound)


def split_L_identity_check(system: ChfifSystem, spec: InsertionSpec, points: int = 100) -> float:
    """Residual of ``L_k^l = rho L_k + (1 - rho) x_{k-1}`` and ``L_k^r = (1 - rho) L_k + rho x_k``."""
    new = insert(system, spec)
    d = system.data
    k, r = spec.k, spec.rho_x
    worst = 0.0
    for x in np.linspace(d.x0, d.xN, points):
        lk = system.L(k, x)
        worst = max(
            worst,
            abs(new.L(k, x) - (r * lk + (1 - r) * d.x[k - 1])),
            abs(new.L(k + 1, x) - ((1 - r) * lk + r * d.x[k])),
        )
    return float(worst)


def split_pq_relation_check(
    system: ChfifSystem,
    spec: InsertionSpec,
    points: int = 100,
    beta_ratio: str = "y",
) -> float:
    """Compare the closed-form split ``p``, ``q`` with the join-up solution.

    With ``Y(x)``, ``Z(x)`` the linear interpolants of ``(y_0, y_N)`` and
    ``(z_0, z_N)`` on ``I``::

        q_l = rz q_k + (1 - rz) z_{k-1} + (rz g_k - g_l) Z
        q_r = (1 - rz) q_k + rz z_k + ((1 - rz) g_k - g_r) Z
        p_l = ry p_k + (1 - ry) y_{k-1} + (ry a_k - a_l) Y + (r* b_k - b_l) Z
        p_r = (1 - ry) p_k + ry y_k + ((1 - ry) a_k - a_r) Y + ((1 - r*) b_k - b_r) Z

    ``r*`` is ``rho_y`` (``beta_ratio="y"``, which satisfies the join-up
    conditions exactly) or ``rho_z`` (``beta_ratio="z"``, off by
    ``(rho_z - rho_y) b_k Z`` whenever the ratios differ).

    Raises
    ------
    DegenerateOrdinates
        ``y_k == y_{k-1}`` or ``z_k == z_{k-1}``.
    """
    if spec.rho_y is None or spec.rho_z is None:
        raise DegenerateOrdinates(
            f"ordinates at x_{spec.k - 1} and x_{spec.k} coincide; split ratio undefined"
        )
    if beta_ratio not in ("y", "z"):
        raise ValueError(f"beta_ratio must be 'y' or 'z', got {beta_ratio!r}")
    new = insert(system, spec)
    sp = split_parameters(system, spec)
    d = system.data
    pa = system.params
    k, i = spec.k, spec.k - 1
    ry, rz = spec.rho_y, spec.rho_z
    rb = ry if beta_ratio == "y" else rz
    x0, xN = d.x0, d.xN
    x = np.linspace(x0, xN, points)
    Y = (d.y[-1] * (x - x0) + d.y[0] * (xN - x)) / (xN - x0)
    Z = (d.z[-1] * (x - x0) + d.z[0] * (xN - x)) / (xN - x0)
    qk = system.q[i].evaluate(x, x0, xN)
    pk = system.p[i].evaluate(x, x0, xN)
    a, b, g = pa.alpha[i], pa.beta[i], pa.gamma[i]
    ql = rz * qk + (1 - rz) * d.z[k - 1] + (rz * g - sp.gamma_l) * Z
    qr = (1 - rz) * qk + rz * d.z[k] + ((1 - rz) * g - sp.gamma_r) * Z
    pl = ry * pk + (1 - ry) * d.y[k - 1] + (ry * a - sp.alpha_l) * Y + (rb * b - sp.beta_l) * Z
    pr = (1 - ry) * pk + ry * d.y[k] + ((1 - ry) * a - sp.alpha_r) * Y + ((1 - rb) * b - sp.beta_r) * Z
    res = [
        np.abs(ql - new.q[k - 1].evaluate(x, x0, xN)),
        np.abs(qr - new.q[k].evaluate(x, x0, xN)),
        np.abs(pl - new.p[k - 1].evaluate(x, x0, xN)),
        np.abs(pr - new.p[k].evaluate(x, x0, xN)),
    ]
    return float(max(np.max(r) for r in res))
