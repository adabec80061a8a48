import math
from dataclasses import replace

import numpy as np
import pytest

from submig.bessel import bessel_j, mf_closed_form
from submig.forward import MSRMatrix, assemble_msr, wavenumbers
from submig.imaging import (
    analytic_multi,
    analytic_single,
    image_multi,
    image_single,
    steering_vector,
)
from submig.scene import CrackScene, SearchGrid, make_direction_set
from submig.spectral import EmptySignalError, svd
from submig.verify import quality_metrics

from conftest import K_MAX, K_MIN

J0_ZERO = 2.404825557695773


def systems_for(scene, d, ks, tau=1e-4):
    return [svd(assemble_msr(scene, d, k), tau=tau) for k in ks]


class TestSteering:
    def test_origin(self, limited):
        w = steering_vector((0.0, 0.0), limited, 7.0).values
        assert np.allclose(w, 1 / math.sqrt(12))

    def test_unit_norm(self, limited):
        w = steering_vector((0.3, -0.8), limited, K_MAX).values
        assert np.vdot(w, w).real == pytest.approx(1.0, abs=1e-12)

    def test_cross_correlation_golden(self, scene, limited):
        z1, z2 = scene.centers[:2]
        w1 = steering_vector(z1, limited, K_MAX).values
        w2 = steering_vector(z2, limited, K_MAX).values
        direct = abs(sum(np.exp(1j * K_MAX * (np.cos(t) * (z2[0] - z1[0]) + np.sin(t) * (z2[1] - z1[1])))
                         for t in limited.angles)) / 12
        assert abs(np.vdot(w1, w2)) == pytest.approx(direct, rel=1e-12)
        assert abs(np.vdot(w1, w2)) == pytest.approx(0.151290003540, abs=1e-11)


class TestSingle:
    def test_peak_at_lone_crack(self, full64, grid):
        sc = CrackScene.from_centers([(-0.6, -0.2)], 0.05)
        m = image_single(svd(assemble_msr(sc, full64, K_MAX), tau=1e-4), full64, grid)
        assert m.values.max() == 1.0
        assert np.unravel_index(np.argmax(m.values), m.values.shape) == grid.nearest_index((-0.6, -0.2))

    def test_vanishes_at_bessel_zero(self, full64):
        sc = CrackScene.from_centers([(0.0, 0.0)], 0.05)
        x0 = J0_ZERO / K_MAX
        g = SearchGrid(-x0, x0, -0.5, 0.5, 3, 3)  # middle row holds (+-x0, 0) and the crack
        m = image_single(svd(assemble_msr(sc, full64, K_MAX), tau=1e-4), full64, g)
        assert m.values[1, 1] == 1.0
        assert m.values[1, 0] < 0.05 and m.values[1, 2] < 0.05

    def test_zero_matrix(self, limited, grid):
        sys = svd(MSRMatrix(5.0, np.zeros((12, 12), complex), limited))
        with pytest.raises(EmptySignalError):
            image_single(sys.with_truncation(1), limited, grid)

    def test_missing_truncation(self, scene, limited, grid):
        with pytest.raises(RuntimeError):
            image_single(svd(assemble_msr(scene, limited, 5.0)), limited, grid)

    def test_pair_gauge_invariance(self, scene, limited, grid):
        sys = svd(assemble_msr(scene, limited, K_MAX), tau=1e-4)
        base = image_single(sys, limited, grid).values
        gam = np.exp(1j * np.array([0.3, -1.7, 2.9] + [0.0] * 9))
        rotated = replace(sys, left=sys.left * gam, right=sys.right * gam)
        assert np.allclose(image_single(rotated, limited, grid).values, base, atol=1e-12)

    def test_common_counter_rotation_invariance(self, scene, limited, grid):
        sys = svd(assemble_msr(scene, limited, K_MAX), tau=1e-4)
        base = image_single(sys, limited, grid).values
        g = np.exp(0.8j)
        rotated = replace(sys, left=sys.left * g, right=sys.right / g)
        assert np.allclose(image_single(rotated, limited, grid).values, base, atol=1e-12)

    @pytest.mark.parametrize("c", [3.0, -0.2j, 1e-5 * (1 + 1j)])
    def test_scale_invariance(self, scene, limited, grid, c):
        msr = assemble_msr(scene, limited, K_MAX)
        a = image_single(svd(msr, tau=1e-4), limited, grid).values
        b = image_single(svd(replace(msr, entries=c * msr.entries), tau=1e-4), limited, grid).values
        assert np.max(np.abs(a - b)) < 1e-10

    def test_oracle_agreement_full_view(self, full64, grid):
        sc = CrackScene.from_centers([(-0.6, -0.2)], 0.05)
        m = image_single(svd(assemble_msr(sc, full64, K_MAX), tau=1e-4), full64, grid)
        oracle = analytic_single(sc, grid, K_MAX)
        mask = K_MAX * grid.distances(sc.centers)[0] >= 20
        assert np.sqrt(np.mean((m.values - oracle.values)[mask] ** 2)) < 0.1


class TestMulti:
    def test_repeated_frequency_equals_single(self, scene, limited, grid):
        sys = svd(assemble_msr(scene, limited, K_MAX), tau=1e-4)
        single = image_single(sys, limited, grid).values
        multi = image_multi([sys] * 4, limited, grid).values
        assert np.max(np.abs(single - multi)) < 1e-12

    def test_reference_peaks(self, scene, limited, grid):
        m = image_multi(systems_for(scene, limited, wavenumbers(0.2, 0.6, 10)), limited, grid)
        q = quality_metrics(m, scene, 0.2)
        detected = {grid.nearest_index(p) for p in q.peak_positions}
        assert detected == {grid.nearest_index(z) for z in scene.centers}

    def test_two_frequencies_beat_worse_single(self, scene, limited, grid):
        systems = systems_for(scene, limited, [K_MIN, K_MAX])
        singles = [quality_metrics(image_single(s, limited, grid), scene, 0.2).peak_to_sidelobe
                   for s in systems]
        multi = quality_metrics(image_multi(systems, limited, grid), scene, 0.2).peak_to_sidelobe
        assert multi > min(singles)

    def test_mismatched_directions(self, scene, limited, grid):
        other = make_direction_set(12, 0.0, math.pi)
        systems = systems_for(scene, limited, [K_MIN]) + systems_for(scene, other, [K_MAX])
        with pytest.raises(ValueError):
            image_multi(systems, limited, grid)

    def test_needs_two(self, scene, limited, grid):
        with pytest.raises(ValueError):
            image_multi(systems_for(scene, limited, [K_MAX]), limited, grid)


class TestAnalytic:
    def test_single_peak_and_zero(self):
        sc = CrackScene.from_centers([(0.0, 0.0)], 0.05)
        x0 = J0_ZERO / K_MAX
        g = SearchGrid(-x0, x0, -x0, x0, 3, 3)
        m = analytic_single(sc, g, K_MAX)
        assert m.values[1, 1] == 1.0
        assert m.values[1, 2] < 1e-20

    def test_three_unit_peaks(self):
        sc = CrackScene.from_centers([(-5, 0), (0, 5), (5, 0)], 0.05)
        g = SearchGrid(-5, 5, 0, 5, 3, 2)
        v = analytic_single(sc, g, K_MAX).values
        assert v[0, 0] == pytest.approx(1.0, abs=1e-3)
        assert v[0, 2] == pytest.approx(1.0, abs=1e-3)
        assert v[1, 1] == pytest.approx(1.0, abs=1e-3)

    def test_multi_origin(self):
        sc = CrackScene.from_centers([(0.0, 0.0)], 0.05)
        g = SearchGrid(-0.5, 0.5, -0.5, 0.5, 3, 3)
        m = analytic_multi(sc, g, K_MIN, K_MAX)
        assert m.values[1, 1] == 1.0

    def test_multi_matches_closed_form(self):
        sc = CrackScene.from_centers([(0.0, 0.0)], 0.05)
        g = SearchGrid(0.0, 0.4, 0.0, 0.1, 5, 2)
        v = analytic_multi(sc, g, K_MIN, K_MAX).values
        assert v[0, 3] == pytest.approx(abs(mf_closed_form(K_MIN, K_MAX, 0.3)), abs=1e-12)

    def test_multi_sidelobes_below_single(self):
        r = np.linspace(1.2 * J0_ZERO / K_MAX, 5 * 0.2, 4000)
        single = bessel_j(0, K_MAX * r) ** 2
        multi = np.abs(mf_closed_form(K_MIN, K_MAX, r))
        assert multi.max() < single.max()


def test_csv_and_pgm(tmp_path, scene, limited):
    g = SearchGrid(-1, 1, -1, 1, 5, 4)
    m = image_single(svd(assemble_msr(scene, limited, K_MAX), tau=1e-4), limited, g)
    m.to_csv(tmp_path / "m.csv")
    data = np.loadtxt(tmp_path / "m.csv", delimiter=",", skiprows=1)
    assert data.shape == (20, 3)
    assert np.array_equal(data[:, 2], m.values.ravel())
    assert np.array_equal(data[:, :2], g.points)
    m.to_pgm(tmp_path / "m.pgm")
    lines = (tmp_path / "m.pgm").read_text().splitlines()
    assert lines[0] == "P2" and lines[1].startswith("#") and lines[2] == "5 4" and lines[3] == "255"
    pix = np.array([list(map(int, row.split())) for row in lines[4:]])
    assert np.array_equal(pix[::-1], np.rint(m.values * 255).astype(int))
