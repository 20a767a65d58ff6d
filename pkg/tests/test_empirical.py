import numpy as np
import pytest

from chfif import evaluator
from chfif.empirical import (
    box_counts,
    box_dimension,
    modulus_of_continuity,
    normalize_to_unit_square,
)
from chfif.errors import DegenerateScales, GridTooCoarse, TooFewPoints


def test_normalize():
    pts = normalize_to_unit_square([2, 4, 6], [5, 5, 5])
    assert np.array_equal(pts, [[0, 0], [0.5, 0], [1, 0]])


def test_box_counts_grid_anchor():
    pts = np.array([[0.0, 0.0], [0.49, 0.49], [0.5, 0.5], [1.0, 1.0]])
    assert box_counts(pts, 0.5) == 2


def test_line_and_square():
    s = np.linspace(0, 1, 100_001)
    assert box_dimension(np.column_stack([s, s])).slope == pytest.approx(1.0, abs=0.05)
    g = np.linspace(0, 1, 700)
    gx, gy = np.meshgrid(g, g)
    est = box_dimension(np.column_stack([gx.ravel(), gy.ravel()]))
    assert est.slope == pytest.approx(2.0, abs=0.1)
    assert est.fit_r2 > 0.99 and len(est.scales) == 10


def test_box_dimension_errors():
    with pytest.raises(TooFewPoints):
        box_dimension(np.zeros((10, 2)))
    with pytest.raises(DegenerateScales):
        box_dimension(np.random.default_rng(0).random((2000, 2)), min_scale=0.5, max_scale=0.1)


def test_sample_graph_dimension_stable_under_density(sample_system):
    a = evaluator.sample_graph(sample_system, 9)
    b = evaluator.sample_graph(sample_system, 10)
    da = box_dimension(normalize_to_unit_square(a.grid, a.f1_values)).slope
    db = box_dimension(normalize_to_unit_square(b.grid, b.f1_values)).slope
    assert 1.0 <= db <= 2.0
    assert abs(da - db) < 0.02


def test_modulus_affine():
    x = np.linspace(0, 1, 20_001)
    s = evaluator.SampledFunction(x, 3 * x, -x)
    est = modulus_of_continuity(s, "f1", [0.01, 0.05, 0.1])
    assert est.omega_values[-1] == pytest.approx(0.3, abs=1e-9)
    assert est.fitted_exponent == pytest.approx(1.0, abs=1e-6)


def test_modulus_sqrt_exponent():
    x = np.linspace(0, 1, 100_001)
    s = evaluator.SampledFunction(x, np.sqrt(x), x)
    t = np.geomspace(1e-3, 0.5, 12)
    assert modulus_of_continuity(s, "f1", t).fitted_exponent == pytest.approx(0.5, abs=0.02)


def test_modulus_includes_error_bound():
    x = np.linspace(0, 1, 1001)
    s = evaluator.SampledFunction(x, x, x, error_bound=0.25)
    est = modulus_of_continuity(s, "f2", [0.1])
    assert est.omega_values[0] == pytest.approx(0.1 + 0.5, abs=1e-9)


def test_modulus_grid_too_coarse():
    x = np.linspace(0, 1, 101)
    with pytest.raises(GridTooCoarse):
        modulus_of_continuity(evaluator.SampledFunction(x, x, x), "f1", [0.05])
