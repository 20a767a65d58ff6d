"""Domain types and construction of the coalescence hidden-variable IFS.

A system is built from generalized data ``(x_i, y_i, z_i)`` and per-map
parameters ``alpha, beta, gamma``.  Map ``n`` (1-based, ``1 <= n <= N``) is

    omega_n(x, y, z) = (L_n(x), alpha_n*y + beta_n*z + p_n(x), gamma_n*z + q_n(x))

where ``L_n`` sends ``[x_0, x_N]`` onto ``[x_{n-1}, x_n]`` and the affine
functions ``p_n``, ``q_n`` are fixed by the join-up conditions.

Affine functions on ``I = [x_0, x_N]`` are stored by their endpoint values and
evaluated as convex combinations, so endpoint values are reproduced exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    AbscissaOutOfDomain,
    IndexOutOfRange,
    LengthMismatch,
    NonFiniteValue,
    NonIncreasingAbscissae,
    ParameterConstraintViolation,
    TooFewPoints,
)

__all__ = [
    "GeneralizedDataSet",
    "IfsParameters",
    "AffineCoefficientPair",
    "ChfifSystem",
    "validate_data",
    "build_system",
    "eval_L",
    "eval_F",
]


def lerp(a: float, b: float, w: float) -> float:
    """Convex combination ``(1 - w) a + w b``; exact at ``w = 0`` and ``w = 1``."""
    return (1.0 - w) * a + w * b


def _frozen(values) -> np.ndarray:
    arr = np.array(values, dtype=float)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class GeneralizedDataSet:
    """Interpolation points ``(x_i, y_i, z_i)`` with strictly increasing ``x``."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray

    @property
    def N(self) -> int:
        """Number of subintervals (points minus one)."""
        return len(self.x) - 1

    @property
    def points(self) -> list[tuple[float, float, float]]:
        return [(float(a), float(b), float(c)) for a, b, c in zip(self.x, self.y, self.z)]

    @property
    def x0(self) -> float:
        return float(self.x[0])

    @property
    def xN(self) -> float:
        return float(self.x[-1])

    @property
    def width(self) -> float:
        return float(self.x[-1] - self.x[0])

    def interval_lengths(self) -> np.ndarray:
        return np.diff(self.x)

    def locate(self, x: float) -> int:
        """1-based index ``n`` with ``x`` in ``[x_{n-1}, x_n]``.

        Shared endpoints resolve to the left interval, so ``locate(x_n) == n``
        and ``locate(x_0) == 1``.
        """
        if not (self.x[0] <= x <= self.x[-1]):
            raise AbscissaOutOfDomain(f"x = {x!r} outside [{self.x0!r}, {self.xN!r}]")
        return max(int(np.searchsorted(self.x, x, side="left")), 1)

    def node_index(self, x: float) -> int | None:
        """Index ``i`` with ``x_i == x`` exactly, else ``None``."""
        i = int(np.searchsorted(self.x, x, side="left"))
        if i <= self.N and self.x[i] == x:
            return i
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GeneralizedDataSet):
            return NotImplemented
        return (
            np.array_equal(self.x, other.x)
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.z, other.z)
        )

    def __len__(self) -> int:
        return len(self.x)


def validate_data(points: Iterable[Sequence[float]]) -> GeneralizedDataSet:
    """Validate raw ``(x, y, z)`` triples and return a data set.

    Raises
    ------
    TooFewPoints
        Fewer than two points.
    NonFiniteValue
        Any coordinate is NaN or infinite.
    NonIncreasingAbscissae
        Abscissae are not strictly increasing.
    """
    rows = [tuple(p) for p in points]
    for i, row in enumerate(rows):
        if len(row) != 3:
            raise LengthMismatch(f"data[{i}] has {len(row)} coordinates, expected 3")
    if len(rows) < 2:
        raise TooFewPoints(f"need at least 2 points, got {len(rows)}")
    arr = np.array(rows, dtype=float)
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        i, j = bad[0]
        raise NonFiniteValue(f"data[{i}][{j}] = {arr[i, j]!r} is not finite")
    dx = np.diff(arr[:, 0])
    if np.any(dx <= 0):
        i = int(np.argmax(dx <= 0))
        raise NonIncreasingAbscissae(
            f"x[{i + 1}] = {arr[i + 1, 0]!r} is not greater than x[{i}] = {arr[i, 0]!r}"
        )
    return GeneralizedDataSet(_frozen(arr[:, 0]), _frozen(arr[:, 1]), _frozen(arr[:, 2]))


@dataclass(frozen=True)
class IfsParameters:
    """Vertical scaling parameters, one entry per map.

    ``alpha`` and ``gamma`` are free (magnitude below one); ``beta`` is
    constrained by ``|beta_n| + |gamma_n| < 1``.
    """

    alpha: tuple[float, ...]
    beta: tuple[float, ...]
    gamma: tuple[float, ...]

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma"):
            object.__setattr__(self, name, tuple(float(v) for v in getattr(self, name)))

    def __len__(self) -> int:
        return len(self.alpha)

    def validate(self) -> None:
        """Raise if any contraction constraint fails (messages use 1-based map indices)."""
        if not (len(self.alpha) == len(self.beta) == len(self.gamma)):
            raise LengthMismatch(
                f"alpha, beta, gamma lengths differ: "
                f"{len(self.alpha)}, {len(self.beta)}, {len(self.gamma)}"
            )
        for n, (a, b, g) in enumerate(zip(self.alpha, self.beta, self.gamma), start=1):
            for name, v in (("alpha", a), ("beta", b), ("gamma", g)):
                if not math.isfinite(v):
                    raise NonFiniteValue(f"{name}[{n}] = {v!r} is not finite")
            if abs(a) >= 1:
                raise ParameterConstraintViolation(f"|alpha[{n}]| = {abs(a):.2f} >= 1")
            if abs(g) >= 1:
                raise ParameterConstraintViolation(f"|gamma[{n}]| = {abs(g):.2f} >= 1")
            if abs(b) + abs(g) >= 1:
                raise ParameterConstraintViolation(
                    f"|beta[{n}]|+|gamma[{n}]| = {abs(b) + abs(g):.2f} >= 1"
                )

    def contraction_factor(self) -> float:
        """``max_n max(|alpha_n| + |beta_n|, |gamma_n|)``."""
        return max(
            max(abs(a) + abs(b), abs(g)) for a, b, g in zip(self.alpha, self.beta, self.gamma)
        )


@dataclass(frozen=True)
class AffineCoefficientPair:
    """Affine function on ``[x_0, x_N]`` given by its two endpoint values."""

    value_at_x0: float
    value_at_xN: float

    def evaluate(self, t, x0: float, xN: float):
        w = (t - x0) / (xN - x0)
        return lerp(self.value_at_x0, self.value_at_xN, w)


@dataclass(frozen=True, eq=False)
class ChfifSystem:
    """A validated IFS ``{omega_n}`` together with the data it interpolates.

    Immutable; every operation on it is a pure function.
    """

    data: GeneralizedDataSet
    params: IfsParameters
    L_coeffs: tuple[tuple[float, float], ...]
    p: tuple[AffineCoefficientPair, ...]
    q: tuple[AffineCoefficientPair, ...]

    @property
    def N(self) -> int:
        return self.data.N

    @property
    def n_maps(self) -> int:
        return len(self.p)

    def _check_index(self, n: int) -> None:
        if not (1 <= n <= self.N):
            raise IndexOutOfRange(f"map index {n} outside 1..{self.N}")

    def _check_domain(self, x: float) -> None:
        if not (self.data.x0 <= x <= self.data.xN):
            raise AbscissaOutOfDomain(
                f"x = {x!r} outside [{self.data.x0!r}, {self.data.xN!r}]"
            )

    def L(self, n: int, x: float) -> float:
        self._check_index(n)
        self._check_domain(x)
        w = (x - self.data.x0) / self.data.width
        return lerp(float(self.data.x[n - 1]), float(self.data.x[n]), w)

    def L_inverse(self, n: int, u: float) -> float:
        self._check_index(n)
        a, b = float(self.data.x[n - 1]), float(self.data.x[n])
        if not (a <= u <= b):
            raise AbscissaOutOfDomain(f"u = {u!r} outside I_{n} = [{a!r}, {b!r}]")
        return lerp(self.data.x0, self.data.xN, (u - a) / (b - a))

    def F(self, n: int, x: float, y: float, z: float) -> tuple[float, float]:
        self._check_index(n)
        self._check_domain(x)
        i = n - 1
        x0, xN = self.data.x0, self.data.xN
        pa = self.params
        f1 = pa.alpha[i] * y + pa.beta[i] * z + self.p[i].evaluate(x, x0, xN)
        f2 = pa.gamma[i] * z + self.q[i].evaluate(x, x0, xN)
        return f1, f2

    def omega(self, n: int, x: float, y: float, z: float) -> tuple[float, float, float]:
        f1, f2 = self.F(n, x, y, z)
        return self.L(n, x), f1, f2

    def join_up_residual(self) -> float:
        """Largest deviation of ``F_n`` at the data endpoints from the join-up targets."""
        d = self.data
        worst = 0.0
        for n in range(1, self.N + 1):
            a = self.F(n, d.x0, float(d.y[0]), float(d.z[0]))
            b = self.F(n, d.xN, float(d.y[-1]), float(d.z[-1]))
            worst = max(
                worst,
                abs(a[0] - d.y[n - 1]),
                abs(a[1] - d.z[n - 1]),
                abs(b[0] - d.y[n]),
                abs(b[1] - d.z[n]),
            )
        return float(worst)

    def arrays(self) -> dict[str, np.ndarray]:
        """Per-map coefficient arrays (0-based) consumed by the numeric kernels."""
        return {
            "nodes": np.ascontiguousarray(self.data.x, dtype=float),
            "ynodes": np.ascontiguousarray(self.data.y, dtype=float),
            "znodes": np.ascontiguousarray(self.data.z, dtype=float),
            "alpha": np.array(self.params.alpha, dtype=float),
            "beta": np.array(self.params.beta, dtype=float),
            "gamma": np.array(self.params.gamma, dtype=float),
            "p0": np.array([c.value_at_x0 for c in self.p], dtype=float),
            "pN": np.array([c.value_at_xN for c in self.p], dtype=float),
            "q0": np.array([c.value_at_x0 for c in self.q], dtype=float),
            "qN": np.array([c.value_at_xN for c in self.q], dtype=float),
        }


def build_system(data: GeneralizedDataSet, params: IfsParameters) -> ChfifSystem:
    """Solve the join-up conditions for affine ``p_n``, ``q_n`` and assemble the IFS.

    ``q_n(x_0) = z_{n-1} - gamma_n z_0``, ``q_n(x_N) = z_n - gamma_n z_N``,
    ``p_n(x_0) = y_{n-1} - alpha_n y_0 - beta_n z_0`` and
    ``p_n(x_N) = y_n - alpha_n y_N - beta_n z_N``.
    """
    if len(params.alpha) != data.N or len(params.beta) != data.N or len(params.gamma) != data.N:
        raise LengthMismatch(
            f"parameter lengths ({len(params.alpha)}, {len(params.beta)}, "
            f"{len(params.gamma)}) must all equal N = {data.N}"
        )
    params.validate()
    x, y, z = data.x, data.y, data.z
    width = data.width
    L_coeffs = []
    p = []
    q = []
    for i in range(data.N):
        a, b, g = params.alpha[i], params.beta[i], params.gamma[i]
        scale = float(x[i + 1] - x[i]) / width
        L_coeffs.append((scale, float(x[i]) - scale * float(x[0])))
        q.append(AffineCoefficientPair(float(z[i] - g * z[0]), float(z[i + 1] - g * z[-1])))
        p.append(
            AffineCoefficientPair(
                float(y[i] - a * y[0] - b * z[0]),
                float(y[i + 1] - a * y[-1] - b * z[-1]),
            )
        )
    return ChfifSystem(data, params, tuple(L_coeffs), tuple(p), tuple(q))


def eval_L(system: ChfifSystem, n: int, x: float) -> float:
    return system.L(n, x)


def eval_F(system: ChfifSystem, n: int, x: float, y: float, z: float) -> tuple[float, float]:
    return system.F(n, x, y, z)
