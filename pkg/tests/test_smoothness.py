import math

import numpy as np
import pytest

from chfif import insertion, smoothness as sm
from chfif.errors import DegenerateLogarithm, HypothesisNotMet, LengthMismatch, ValidationError
from chfif.model import IfsParameters, build_system, validate_data
from chfif.smoothness import Category, ComparisonOutcome, SmoothnessKind


def _system(lengths, alpha, gamma, beta=None):
    x = np.concatenate([[0.0], np.cumsum(lengths)])
    n = len(lengths)
    pts = list(zip(x, np.linspace(0, 1, n + 1) ** 2, np.cos(np.arange(n + 1))))
    beta = [0.0] * n if beta is None else beta
    return build_system(validate_data(pts), IfsParameters(alpha, beta, gamma))


def test_lipschitz_defaults_and_minima(sample_system):
    lip = sm.lipschitz_of_affine(sample_system)
    assert (lip.lam, lip.mu, lip.delta) == (1.0, 1.0, 1.0)
    lip = sm.lipschitz_of_affine(sample_system, (0.5, 1, 1), (1, 0.7, 1))
    assert (lip.lam, lip.mu, lip.delta) == (0.5, 0.7, 0.5)
    split = lip.split(2)
    assert split.lambda_n == (0.5, 1, 1, 1) and split.mu_n == (1, 0.7, 0.7, 1)
    with pytest.raises(LengthMismatch):
        sm.lipschitz_of_affine(sample_system, (1, 1))
    with pytest.raises(ValidationError):
        sm.LipschitzData((1.5,), (1,))


def test_indices_sample(sample_system):
    ix = sm.compute_indices(sample_system, sm.lipschitz_of_affine(sample_system))
    assert np.allclose(ix.omega_n, [2 / 3, 5 / 3, 3 / 4], atol=1e-15)
    assert np.allclose(ix.gamma_idx_n, [2, 2 / 3, 5 / 4], atol=1e-15)
    assert ix.I_max == 0.4


def test_split_entry_scaling(sample_system):
    lip = sm.lipschitz_of_affine(sample_system, (0.5, 0.5, 0.5), (1, 1, 1))
    pre = sm.compute_indices(sample_system, lip)
    spec = insertion.make_spec(sample_system, 45, 0, 0)
    post = sm.compute_indices(insertion.insert(sample_system, spec), lip.split(2))
    assert post.omega_n[1] == pytest.approx(math.sqrt(0.5) * pre.omega_n[1], rel=1e-12)
    assert post.omega_n[2] == pytest.approx(math.sqrt(0.5) * pre.omega_n[1], rel=1e-12)


def test_categorize_tolerance():
    assert sm.categorize(1 + 5e-13) is Category.EQUAL_ONE
    assert sm.categorize(1 + 5e-12) is Category.ABOVE_ONE
    assert sm.categorize(0.3) is Category.BELOW_ONE


def test_predict_family_cases():
    assert sm.predict_family([0.4, 0.9], 1, 0.3, 0.7).category is Category.BELOW_ONE
    p = sm.predict_family([0.4, 1.0, 0.2], 1, 0.3, 0.7)
    assert (p.category, p.case, p.argmax) == (Category.EQUAL_ONE, "one-attained-off-split", 2)
    p = sm.predict_family([1.3, 0.2], 1, 0.5, 1.0)
    assert (p.category, p.case, p.threshold) == (Category.ABOVE_ONE, "unit-exponent", 1.0)
    thr = 1 / 0.5 ** 0.5
    assert sm.predict_family([thr, 0.2], 1, 0.5, 0.5).category is Category.EQUAL_ONE
    assert sm.predict_family([1.2, 0.2], 1, 0.5, 0.5).category is Category.BELOW_ONE
    assert sm.predict_family([1.6, 0.2], 1, 0.5, 0.5).category is Category.ABOVE_ONE
    with pytest.raises(HypothesisNotMet):
        sm.predict_family([1.2, 1.0], 1, 0.5, 0.5)


def test_predict_requires_proportional(sample_system):
    ix = sm.compute_indices(sample_system, sm.lipschitz_of_affine(sample_system))
    with pytest.raises(HypothesisNotMet):
        sm.predict_hat_category(ix, 2, 0.5, overrides_in_use=True)
    pred = sm.predict_hat_category(ix, 2, 0.5)
    assert pred.omega.category is Category.ABOVE_ONE


@pytest.mark.parametrize(
    "theta, omega, gamma, kind",
    [
        (0.8, 0.9, 0.95, SmoothnessKind.LIP_DELTA),
        (0.9, 1.0, 0.5, SmoothnessKind.LOG_MODULUS),
        (0.9, 0.5, 1.0, SmoothnessKind.LOG_MODULUS),
        (1.0, 0.5, 0.5, SmoothnessKind.LOG_MODULUS_THETA_ONE),
        (1.0, 2.0, 1.0, SmoothnessKind.LOG_SQUARED_MODULUS),
    ],
)
def test_smoothness_class(theta, omega, gamma, kind):
    assert sm.smoothness_class(theta, omega, gamma, 0.7).kind is kind


def test_compare_smoothness_outcomes():
    lip = sm.LipschitzData((1,) * 3, (1,) * 3)
    # all indices below one
    s = _system([0.3, 0.3, 0.4], [0.1, 0.2, 0.1], [0.1, 0.1, 0.2])
    spec = insertion.make_spec(s, 0.45, 0, 0)
    pre = sm.compute_indices(s, lip)
    post = sm.compute_indices(insertion.insert(s, spec), lip.split(2))
    assert sm.compare_smoothness(pre, post) is ComparisonOutcome.SAME_LIPSCHITZ_CLASS
    # Omega = 1 attained off the split map
    s = _system([0.3, 0.3, 0.4], [0.3, 0.2, 0.1], [0.1, 0.1, 0.2])
    pre = sm.compute_indices(s, lip)
    post = sm.compute_indices(insertion.insert(s, spec), lip.split(2))
    assert sm.compare_smoothness(pre, post) is ComparisonOutcome.SAME_LOG_MODULUS
    # Omega = Theta = 1 only at the split map; with exponents below one the split lowers both
    lip = sm.LipschitzData((0.5,) * 3, (0.5,) * 3)
    s = _system([0.25, 0.25, 0.5], [0.2, 0.5, 0.2], [0.1, 0.1, 0.2])
    spec = insertion.make_spec(s, 0.25 + 0.125, 0, 0)
    pre = sm.compute_indices(s, lip)
    post = sm.compute_indices(insertion.insert(s, spec), lip.split(2))
    assert pre.Omega == pytest.approx(1.0, abs=1e-12)
    assert sm.compare_smoothness(pre, post) is ComparisonOutcome.POST_STRICTLY_SMOOTHER


def test_compare_smoothness_rejects_large_indices(sample_system):
    ix = sm.compute_indices(sample_system, sm.lipschitz_of_affine(sample_system))
    with pytest.raises(HypothesisNotMet):
        sm.compare_smoothness(ix, ix)


def test_dimension_bounds_sample(sample_system):
    lip = sm.lipschitz_of_affine(sample_system)
    b = sm.dimension_bounds(sample_system, sm.compute_indices(sample_system, lip))
    assert b.lower == 1.0
    assert b.upper == pytest.approx(1.19898, abs=5e-6)
    assert not b.applicable and b.consistent
    spec = insertion.make_spec(sample_system, 45, 60, 20)
    new = insertion.insert(sample_system, spec)
    bp = sm.dimension_bounds(new, sm.compute_indices(new, lip.split(2)))
    assert bp.upper == pytest.approx(1.51294, abs=5e-6) and bp.lower == 1.0 and bp.map_count == 4


def test_dimension_bounds_gamma_variant():
    s = _system([1, 1, 1], [0.1] * 3, [1 / 3] * 3)
    b = sm.dimension_bounds(s, sm.compute_indices(s, sm.lipschitz_of_affine(s)))
    assert b.variant == "gamma-sum" and b.reasons == ("Gamma",)
    assert b.lower == pytest.approx(1.0) and b.upper == pytest.approx(1.0)


def test_dimension_bounds_degenerate():
    s = _system([1.0], [0.5], [0.5])
    with pytest.raises(DegenerateLogarithm):
        sm.dimension_bounds(s, sm.compute_indices(s, sm.lipschitz_of_affine(s)))


def test_compare_bounds_requires_applicability(sample_system):
    lip = sm.lipschitz_of_affine(sample_system)
    b = sm.dimension_bounds(sample_system, sm.compute_indices(sample_system, lip))
    with pytest.raises(HypothesisNotMet):
        sm.compare_bounds(b, b)
