import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from submig.scene import (
    CrackScene,
    SearchGrid,
    make_direction_set,
    observation_directions,
    reference_scene,
    rotation,
)


def test_reference_aperture():
    d = make_direction_set(12, math.pi / 4, 3 * math.pi / 4)
    assert d.angles[0] == math.pi / 4
    assert d.angles[-1] == pytest.approx(3 * math.pi / 4, abs=1e-15)
    assert np.allclose(np.diff(d.angles), math.pi / 22, atol=1e-15)
    assert not d.full_view


def test_half_circle_endpoints():
    d = make_direction_set(2, 0.0, math.pi)
    assert np.allclose(d.vectors, [[1, 0], [-1, 0]], atol=1e-15)


def test_full_view_drops_duplicate():
    d = make_direction_set(4, 0.0, 2 * math.pi)
    assert d.full_view
    assert np.allclose(d.angles, [0, math.pi / 2, math.pi, 3 * math.pi / 2])


@pytest.mark.parametrize("args", [(1, 0.0, 1.0), (5, 1.0, 1.0), (5, 2.0, 1.0), (5, 0.0, 7.0)])
def test_invalid_direction_sets(args):
    with pytest.raises(ValueError):
        make_direction_set(*args)


@given(st.integers(2, 64), st.floats(0, 3), st.floats(0.01, 3.2))
def test_direction_set_roundtrip(N, alpha, width):
    beta = alpha + width
    d = make_direction_set(N, alpha, beta)
    n = np.arange(N)
    assert np.array_equal(d.angles, alpha + (beta - alpha) * n / (N - 1))
    assert np.all(np.diff(d.angles) >= 0)
    assert np.allclose(np.linalg.norm(d.vectors, axis=1), 1.0, atol=1e-14)


@given(st.integers(2, 64), st.floats(0, 6), st.floats(0.01, 0.28))
def test_observation_involution(N, alpha, width):
    d = make_direction_set(N, alpha, min(alpha + width, 2 * math.pi))
    twice = observation_directions(observation_directions(d))
    assert np.max(np.abs(twice.vectors - d.vectors)) <= 1e-15


def test_observation_is_negation():
    d = make_direction_set(12, math.pi / 4, 3 * math.pi / 4)
    o = observation_directions(d)
    assert np.array_equal(o.vectors, -d.vectors)
    assert o.alpha == pytest.approx(5 * math.pi / 4) and o.beta == pytest.approx(7 * math.pi / 4)
    assert observation_directions(make_direction_set(2, 0, 1)).vectors[0].tolist() == [-1.0, -0.0]


def test_full_view_negation_is_permutation():
    d = make_direction_set(8, 0, 2 * math.pi)
    o = observation_directions(d)
    a = np.sort(np.mod(np.round(d.angles, 12), 2 * math.pi))
    b = np.sort(np.mod(np.round(o.angles, 12), 2 * math.pi))
    assert np.allclose(a, b)


class TestReferenceScene:
    def test_shape(self):
        sc = reference_scene()
        assert len(sc) == 3 and sc.half_length == 0.05

    def test_centers(self):
        c = reference_scene().centers
        # rotation matrices written out by hand
        r4 = math.sqrt(0.5)
        z2 = (0.4 * r4 - 0.35 * r4, 0.4 * r4 + 0.35 * r4)
        c7, s7 = -math.sqrt(3) / 2, -0.5
        z3 = (0.25 * c7 + 0.6 * s7, 0.25 * s7 - 0.6 * c7)
        assert np.allclose(c[0], (-0.6, -0.2))
        assert np.allclose(c[1], z2, atol=1e-12) and np.allclose(c[1], (0.03536, 0.53033), atol=1e-4)
        assert np.allclose(c[2], z3, atol=1e-12) and np.allclose(c[2], (-0.5165, 0.3946), atol=1e-4)

    def test_rotation_is_orthogonal(self):
        R = rotation(1.234)
        assert np.allclose(R @ R.T, np.eye(2))


@pytest.mark.parametrize("ell", [0.0, -0.1, 2.0, 3.0])
def test_half_length_range(ell):
    with pytest.raises(ValueError):
        CrackScene.from_centers([(0, 0)], ell)


def test_distinct_centers():
    with pytest.raises(ValueError):
        CrackScene.from_centers([(0, 0), (0, 0)], 0.05)


class TestGrid:
    def test_default(self):
        g = SearchGrid()
        assert g.shape == (101, 101)
        assert np.allclose(g.spacing, (0.02, 0.02))

    def test_row_major(self):
        g = SearchGrid(0, 1, 10, 12, nx=2, ny=3)
        assert g.points.tolist() == [[0, 10], [1, 10], [0, 11], [1, 11], [0, 12], [1, 12]]

    def test_nearest_index(self):
        g = SearchGrid()
        row, col = g.nearest_index((-0.6, -0.2))
        assert (g.xs[col], g.ys[row]) == pytest.approx((-0.6, -0.2))

    @pytest.mark.parametrize("kw", [dict(nx=1), dict(ny=0), dict(x_min=1.0, x_max=1.0)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            SearchGrid(**kw)
