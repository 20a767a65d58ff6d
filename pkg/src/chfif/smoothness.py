"""Smoothness indices, smoothness classes and fractal-dimension bounds.

All quantities are computed on the domain rescaled to ``[0, 1]``; the core
types stay in user coordinates.  For map ``n`` with normalised length
``|I_n|`` and global exponents ``lam = min lambda_n``, ``mu = min mu_n``::

    Omega_n = |alpha_n| / |I_n|**lam
    Gamma_n = |gamma_n| / |I_n|**mu
    Theta_n = |alpha_n| / |I_n|**mu

``Omega``, ``Gamma`` and ``Theta`` are the maxima over maps.  Comparisons with
one use the absolute tolerance :data:`ONE_TOL`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateLogarithm, HypothesisNotMet, LengthMismatch, ValidationError
from .model import ChfifSystem

__all__ = [
    "ONE_TOL",
    "LipschitzData",
    "SmoothnessIndices",
    "Category",
    "FamilyPrediction",
    "HatPrediction",
    "SmoothnessKind",
    "SmoothnessClass",
    "ComparisonOutcome",
    "DimensionBounds",
    "BoundsVerdict",
    "lipschitz_of_affine",
    "compute_indices",
    "categorize",
    "predict_family",
    "predict_hat_category",
    "smoothness_class",
    "classify_smoothness",
    "compare_smoothness",
    "dimension_bounds",
    "compare_bounds",
]

ONE_TOL = 1e-12


@dataclass(frozen=True)
class LipschitzData:
    """Hoelder exponents of ``p_n`` (``lambda_n``) and ``q_n`` (``mu_n``)."""

    lambda_n: tuple[float, ...]
    mu_n: tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "lambda_n", tuple(float(v) for v in self.lambda_n))
        object.__setattr__(self, "mu_n", tuple(float(v) for v in self.mu_n))
        if len(self.lambda_n) != len(self.mu_n):
            raise LengthMismatch("lambda_n and mu_n lengths differ")
        if not self.lambda_n:
            raise LengthMismatch("at least one exponent is required")
        for name, vals in (("lambda", self.lambda_n), ("mu", self.mu_n)):
            for n, v in enumerate(vals, start=1):
                if not (0 < v <= 1):
                    raise ValidationError(f"{name}[{n}] = {v!r} not in (0, 1]")

    @property
    def lam(self) -> float:
        return min(self.lambda_n)

    @property
    def mu(self) -> float:
        return min(self.mu_n)

    @property
    def delta(self) -> float:
        return min(self.lam, self.mu)

    def split(self, k: int) -> "LipschitzData":
        """Exponents after splitting map ``k`` (1-based): both halves inherit entry ``k``."""
        i = k - 1
        return LipschitzData(
            self.lambda_n[: i + 1] + self.lambda_n[i:],
            self.mu_n[: i + 1] + self.mu_n[i:],
        )


def lipschitz_of_affine(system: ChfifSystem, lambda_n=None, mu_n=None) -> LipschitzData:
    """Exponents for ``system``: all ones for affine ``p``, ``q`` unless supplied."""
    n = system.n_maps
    lam = (1.0,) * n if lambda_n is None else tuple(lambda_n)
    mu = (1.0,) * n if mu_n is None else tuple(mu_n)
    if len(lam) != n or len(mu) != n:
        raise LengthMismatch(f"need {n} exponents, got {len(lam)} and {len(mu)}")
    return LipschitzData(lam, mu)


@dataclass(frozen=True, eq=False)
class SmoothnessIndices:
    omega_n: np.ndarray
    gamma_idx_n: np.ndarray
    theta_n: np.ndarray
    normalized_lengths: np.ndarray
    lip: LipschitzData

    @property
    def Omega(self) -> float:
        return float(np.max(self.omega_n))

    @property
    def Gamma(self) -> float:
        return float(np.max(self.gamma_idx_n))

    @property
    def Theta(self) -> float:
        return float(np.max(self.theta_n))

    @property
    def I_max(self) -> float:
        return float(np.max(self.normalized_lengths))


def compute_indices(system: ChfifSystem, lip: LipschitzData) -> SmoothnessIndices:
    if len(lip.lambda_n) != system.n_maps:
        raise LengthMismatch(
            f"Lipschitz data has {len(lip.lambda_n)} entries for {system.n_maps} maps"
        )
    lengths = system.data.interval_lengths() / system.data.width
    alpha = np.abs(np.array(system.params.alpha))
    gamma = np.abs(np.array(system.params.gamma))
    lam, mu = lip.lam, lip.mu
    return SmoothnessIndices(
        omega_n=alpha / lengths**lam,
        gamma_idx_n=gamma / lengths**mu,
        theta_n=alpha / lengths**mu,
        normalized_lengths=lengths,
        lip=lip,
    )


class Category(enum.Enum):
    BELOW_ONE = "below_one"
    EQUAL_ONE = "equal_one"
    ABOVE_ONE = "above_one"


def categorize(value: float, tol: float = ONE_TOL) -> Category:
    if abs(value - 1.0) <= tol:
        return Category.EQUAL_ONE
    return Category.BELOW_ONE if value < 1.0 else Category.ABOVE_ONE


def _eq(a: float, b: float) -> bool:
    return abs(a - b) <= ONE_TOL


@dataclass(frozen=True)
class FamilyPrediction:
    """Predicted category of one post-insertion index and how it was obtained."""

    category: Category | None
    case: str
    argmax: int
    threshold: float


def predict_family(values, k: int, rho_x: float, exponent: float) -> FamilyPrediction:
    """Category of the post-insertion maximum from the pre-insertion index list.

    ``values`` are the per-map indices before splitting map ``k`` (1-based)
    proportionally at ratio ``rho_x``; ``exponent`` is the Hoelder exponent in
    the index denominator.  Only the sufficient conditions of the
    proportional-split comparison are used; anything else raises.

    Raises
    ------
    HypothesisNotMet
        The configuration is not one of the covered cases.
    """
    v = [float(a) for a in values]
    if not (1 <= k <= len(v)):
        raise ValidationError(f"split index {k} outside 1..{len(v)}")
    if not (0 < rho_x < 1):
        raise ValidationError(f"rho_x = {rho_x!r} not in (0, 1)")
    shrink = max(rho_x ** (1 - exponent), (1 - rho_x) ** (1 - exponent))
    threshold = 1.0 / shrink
    top = max(v)
    argmax = int(np.argmax(v)) + 1
    vk = v[k - 1]
    others = [a for n, a in enumerate(v, start=1) if n != k]

    if _eq(exponent, 1.0):
        return FamilyPrediction(categorize(top), "unit-exponent", argmax, threshold)

    if top < 1 - ONE_TOL:
        return FamilyPrediction(Category.BELOW_ONE, "max-below-one", argmax, threshold)
    if vk < threshold - ONE_TOL and all(a < 1 - ONE_TOL for a in others):
        return FamilyPrediction(Category.BELOW_ONE, "split-below-threshold", argmax, threshold)
    if _eq(top, 1.0) and any(_eq(a, 1.0) for a in others):
        return FamilyPrediction(Category.EQUAL_ONE, "one-attained-off-split", argmax, threshold)
    if (top > 1 + ONE_TOL and _eq(top, vk) and _eq(vk, threshold)
            and all(a <= 1 + ONE_TOL for a in others)):
        return FamilyPrediction(Category.EQUAL_ONE, "split-at-threshold", argmax, threshold)
    if top > 1 + ONE_TOL and any(_eq(a, top) for a in others):
        return FamilyPrediction(Category.ABOVE_ONE, "above-one-off-split", argmax, threshold)
    if _eq(top, vk) and vk > threshold + ONE_TOL and threshold > 1 + ONE_TOL:
        return FamilyPrediction(Category.ABOVE_ONE, "split-above-threshold", argmax, threshold)
    raise HypothesisNotMet(
        f"no covered case: max {top:.6g} at map {argmax}, split map {k} value {vk:.6g}, "
        f"threshold {threshold:.6g}"
    )


@dataclass(frozen=True)
class HatPrediction:
    omega: FamilyPrediction | None
    gamma: FamilyPrediction | None
    theta: FamilyPrediction | None


def predict_hat_category(
    indices_pre: SmoothnessIndices,
    k: int,
    rho_x: float,
    lip: LipschitzData | None = None,
    *,
    overrides_in_use: bool = False,
    strict: bool = True,
) -> HatPrediction:
    """Predict the categories of the post-insertion ``Omega``, ``Gamma``, ``Theta``.

    Assumes the proportional split.  With ``strict=False`` uncovered families
    are returned as ``None`` instead of raising.
    """
    if overrides_in_use:
        raise HypothesisNotMet("prediction assumes the proportional split; overrides are in use")
    lip = indices_pre.lip if lip is None else lip
    out = {}
    for name, values, exponent in (
        ("omega", indices_pre.omega_n, lip.lam),
        ("gamma", indices_pre.gamma_idx_n, lip.mu),
        ("theta", indices_pre.theta_n, lip.mu),
    ):
        try:
            out[name] = predict_family(values, k, rho_x, exponent)
        except HypothesisNotMet:
            if strict:
                raise
            out[name] = None
    return HatPrediction(**out)


class SmoothnessKind(enum.Enum):
    LIP_DELTA = "lip-delta"
    LOG_MODULUS = "log-modulus"
    LOG_MODULUS_THETA_ONE = "log-modulus-theta-one"
    LOG_SQUARED_MODULUS = "log-squared-modulus"


@dataclass(frozen=True)
class SmoothnessClass:
    kind: SmoothnessKind
    delta: float

    def describe(self) -> str:
        d = f"{self.delta:g}"
        return {
            SmoothnessKind.LIP_DELTA: f"f1 in Lip {d}",
            SmoothnessKind.LOG_MODULUS: f"omega(f1; t) = O(|t|^{d} log|t|)",
            SmoothnessKind.LOG_MODULUS_THETA_ONE: f"omega(f1; t) = O(|t|^{d} log|t|)",
            SmoothnessKind.LOG_SQUARED_MODULUS: f"omega(f1; t) = O(|t|^{d} (log|t|)^2)",
        }[self.kind]


def smoothness_class(theta: float, omega: float, gamma: float, delta: float) -> SmoothnessClass:
    """Map the pattern of equalities to one onto the four smoothness cases."""
    t1, o1, g1 = _eq(theta, 1.0), _eq(omega, 1.0), _eq(gamma, 1.0)
    if not t1:
        kind = SmoothnessKind.LOG_MODULUS if (o1 or g1) else SmoothnessKind.LIP_DELTA
    else:
        kind = SmoothnessKind.LOG_SQUARED_MODULUS if g1 else SmoothnessKind.LOG_MODULUS_THETA_ONE
    return SmoothnessClass(kind, delta)


def classify_smoothness(indices: SmoothnessIndices) -> SmoothnessClass:
    return smoothness_class(indices.Theta, indices.Omega, indices.Gamma, indices.lip.delta)


class ComparisonOutcome(enum.Enum):
    SAME_LIPSCHITZ_CLASS = "same-lipschitz-class"
    SAME_LOG_MODULUS = "same-log-modulus"
    POST_STRICTLY_SMOOTHER = "post-strictly-smoother"


def compare_smoothness(pre: SmoothnessIndices, post: SmoothnessIndices) -> ComparisonOutcome:
    """Which outcome of the pre/post comparison applies.

    Requires ``Omega, Gamma, Theta <= 1`` before insertion.
    """
    for name, val in (("Omega", pre.Omega), ("Gamma", pre.Gamma), ("Theta", pre.Theta)):
        if val > 1 + ONE_TOL:
            raise HypothesisNotMet(f"pre-insertion {name} = {val:.6g} > 1")
    c_pre = classify_smoothness(pre).kind
    c_post = classify_smoothness(post).kind
    if c_pre == c_post:
        if c_pre == SmoothnessKind.LIP_DELTA:
            return ComparisonOutcome.SAME_LIPSCHITZ_CLASS
        return ComparisonOutcome.SAME_LOG_MODULUS
    if c_post == SmoothnessKind.LIP_DELTA:
        return ComparisonOutcome.POST_STRICTLY_SMOOTHER
    raise HypothesisNotMet(f"pre class {c_pre.value} and post class {c_post.value} not covered")


@dataclass(frozen=True)
class DimensionBounds:
    """Bounds on the box dimension of the graph of ``f1``.

    ``lower`` is the variant in ``variant``; both lower variants are kept.
    ``applicable`` is true when Theta, Omega or Gamma equals one, and
    ``reasons`` lists which did.
    """

    lower: float
    upper: float
    applicable: bool
    reasons: tuple[str, ...]
    variant: str
    lower_alpha: float
    lower_gamma: float
    map_count: int
    I_max: float
    delta: float

    @property
    def consistent(self) -> bool:
        return not self.applicable or self.lower <= self.upper


def _lower(total: float, I_max: float) -> float:
    if total <= 0:
        return math.inf
    return 1.0 - math.log(total) / math.log(I_max)


def dimension_bounds(
    system: ChfifSystem,
    indices: SmoothnessIndices,
    lip: LipschitzData | None = None,
) -> DimensionBounds:
    """Lower ``1 - log(sum|alpha|)/log I_max`` (or ``sum|gamma|``), upper ``1 - delta - log m / log I_max``.

    ``m`` is the number of maps and ``I_max`` the longest normalised interval.

    Raises
    ------
    DegenerateLogarithm
        ``I_max == 1`` (a single map).
    """
    lip = indices.lip if lip is None else lip
    I_max = indices.I_max
    if I_max >= 1.0:
        raise DegenerateLogarithm("longest normalised interval has length 1; log|I_max| = 0")
    m = system.n_maps
    la = _lower(float(np.sum(np.abs(system.params.alpha))), I_max)
    lg = _lower(float(np.sum(np.abs(system.params.gamma))), I_max)
    upper = 1.0 - lip.delta - math.log(m) / math.log(I_max)
    reasons = tuple(
        name for name, v in (("Theta", indices.Theta), ("Omega", indices.Omega), ("Gamma", indices.Gamma))
        if _eq(v, 1.0)
    )
    if "Theta" in reasons or "Omega" in reasons or not reasons:
        variant, lower = "alpha-sum", la
    else:
        variant, lower = "gamma-sum", lg
    return DimensionBounds(lower, upper, bool(reasons), reasons, variant, la, lg, m, I_max, lip.delta)


@dataclass(frozen=True)
class BoundsVerdict:
    upper_decreased: bool
    lower_increased: bool
    upper_margin: float
    lower_margin: float

    @property
    def holds(self) -> bool:
        return self.upper_decreased and self.lower_increased


def compare_bounds(pre: DimensionBounds, post: DimensionBounds, tol: float = ONE_TOL) -> BoundsVerdict:
    """Check ``post.upper <= pre.upper`` and ``post.lower >= pre.lower``.

    Margins are ``pre.upper - post.upper`` and ``post.lower - pre.lower``;
    negative margins are violations.

    Raises
    ------
    HypothesisNotMet
        Either bound set is not applicable.
    """
    if not (pre.applicable and post.applicable):
        raise HypothesisNotMet("dimension bounds apply only when Theta, Omega or Gamma equals 1")
    um = pre.upper - post.upper
    lm = post.lower - pre.lower
    return BoundsVerdict(um >= -tol, lm >= -tol, um, lm)
