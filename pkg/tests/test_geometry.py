import math

import numpy as np
import pytest

from heliodsm.geometry import (
    circle_directions,
    circle_surface,
    make_grid,
    sphere_directions,
    sphere_surface,
)
from heliodsm.indicators import moment_2d, moment_3d


def test_circle_directions_small():
    d = circle_directions(4)
    expected = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    assert np.allclose(d.nodes, expected, atol=1e-15)
    assert np.allclose(d.weights, math.pi / 2)


def test_circle_weight_sum_and_unit_nodes():
    d = circle_directions(257)
    assert abs(d.weights.sum() - 2 * math.pi) < 1e-12
    assert np.max(np.abs(np.linalg.norm(d.nodes, axis=1) - 1.0)) < 1e-14


def test_circle_trig_polynomial_exactness():
    # trapezoid kills e^{i m theta} for 0 < |m| < count
    d = circle_directions(64)
    theta = np.arctan2(d.nodes[:, 1], d.nodes[:, 0])
    for m in (1, 2, 7, 31, 63):
        val = np.sum(d.weights * np.exp(1j * m * theta))
        assert abs(val) < 1e-13


def test_circle_monomial_quadrature_matches_closed_form():
    d = circle_directions(256)
    val = np.sum(d.weights * d.nodes[:, 0] ** 2)
    assert abs(val - math.pi) < 1e-13  # closed form of the d1^2 moment at z = 0
    assert abs(val - moment_2d(1, 1, [0.0, 0.0], 1.0).real) < 1e-13


def test_sphere_directions_counts_and_sum():
    d = sphere_directions(42, 43)
    assert len(d) == 1806
    assert abs(d.weights.sum() - 4 * math.pi) < 1e-12
    assert np.max(np.abs(np.linalg.norm(d.nodes, axis=1) - 1.0)) < 1e-14


def test_sphere_monomial_quadrature_matches_closed_forms():
    d = sphere_directions(6, 8)
    z0 = [0.0, 0.0, 0.0]
    for p in range(4):
        for q in range(p, 4):
            mono = np.ones(len(d))
            if p > 0:
                mono = mono * d.nodes[:, p - 1]
            if q > 0:
                mono = mono * d.nodes[:, q - 1]
            val = np.sum(d.weights * mono)
            assert abs(val - moment_3d(p, q, z0, 1.0)) < 1e-12


def test_sphere_d3_squared():
    d = sphere_directions(42, 43)
    val = np.sum(d.weights * d.nodes[:, 2] ** 2)
    assert abs(val - 4 * math.pi / 3) < 1e-12


def test_circle_surface_example_setup():
    s = circle_surface(6.0, 200)
    assert len(s) == 200
    assert np.max(np.abs(np.linalg.norm(s.points, axis=1) - 6.0)) < 1e-12
    assert abs(s.weights.sum() - 2 * math.pi * 6.0) < 1e-10
    assert np.allclose(np.einsum("ij,ij->i", s.points, s.normals), 6.0, atol=1e-12)


def test_sphere_surface_example_setup():
    s = sphere_surface(6.0, 42, 43)
    assert len(s) == 1806
    assert abs(s.weights.sum() - 4 * math.pi * 36.0) < 1e-8
    assert np.allclose(np.einsum("ij,ij->i", s.points, s.normals), 6.0, atol=1e-12)


def test_grid_ordering_first_axis_fastest():
    g = make_grid([0.0, 10.0], [1.0, 12.0], [3, 2])
    assert len(g) == 6
    expected = np.array(
        [[0.0, 10.0], [0.5, 10.0], [1.0, 10.0], [0.0, 12.0], [0.5, 12.0], [1.0, 12.0]]
    )
    assert np.array_equal(g.points, expected)
    assert g.spacing == (0.5, 2.0)


def test_grid_two_point_corners():
    g = make_grid([-1.0, -1.0, -1.0], [1.0, 1.0, 1.0], [2, 2, 2])
    corners = {tuple(p) for p in g.points}
    assert len(corners) == 8
    assert all(abs(x) == 1.0 for p in corners for x in p)


def test_grid_determinism():
    a = make_grid([-3, -3, -3], [3, 3, 3], [7, 5, 6])
    b = make_grid([-3, -3, -3], [3, 3, 3], [7, 5, 6])
    assert np.array_equal(a.points, b.points)


def test_paper_scale_grids():
    assert len(make_grid([-4, -4], [4, 4], [100, 100])) == 10000
    assert len(make_grid([-3, -3, -3], [3, 3, 3], [30, 30, 30])) == 27000


def test_validation_errors():
    with pytest.raises(ValueError):
        circle_directions(3)
    with pytest.raises(ValueError):
        sphere_directions(1, 8)
    with pytest.raises(ValueError):
        sphere_directions(8, 3)
    with pytest.raises(ValueError):
        circle_surface(-1.0, 200)
    with pytest.raises(ValueError):
        circle_surface(1.0, 4)
    with pytest.raises(ValueError):
        sphere_surface(0.0, 42, 43)
    with pytest.raises(ValueError):
        make_grid([0, 0], [1, 1], [1, 5])
    with pytest.raises(ValueError):
        make_grid([0, 0], [0, 1], [5, 5])


def test_immutability():
    d = circle_directions(8)
    with pytest.raises(ValueError):
        d.nodes[0, 0] = 5.0
    g = make_grid([0, 0], [1, 1], [4, 4])
    with pytest.raises(ValueError):
        g.points[0, 0] = 9.0
