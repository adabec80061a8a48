"""Subspace-migration imaging functionals and their Bessel-function predictions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bessel import bessel_j, mf_closed_form
from .scene import CrackScene, DirectionSet, SearchGrid
from .spectral import EmptySignalError, SingularSystem

KINDS = ("single-frequency", "multi-frequency", "analytic-single", "analytic-multi")


@dataclass(frozen=True)
class SteeringVector:
    point: tuple[float, float]
    wavenumber: float
    values: np.ndarray


@dataclass(frozen=True)
class ImagingMap:
    """Max-normalised map; ``values`` has shape ``grid.shape`` (ny, nx)."""

    grid: SearchGrid
    values: np.ndarray
    wavenumbers: tuple[float, ...]
    kind: str

    def to_csv(self, path) -> None:
        pts = self.grid.points
        with open(path, "w") as fh:
            fh.write("x,y,value\n")
            for (x, y), v in zip(pts, self.values.ravel()):
                fh.write(f"{float(x)!r},{float(y)!r},{float(v)!r}\n")

    def to_pgm(self, path) -> None:
        """Plain (P2) PGM, top row = largest y."""
        img = np.rint(np.clip(self.values, 0.0, 1.0) * 255).astype(int)[::-1]
        ny, nx = img.shape
        lines = ["P2", f"# {self.kind}: gray = round(255 * value), value in [0, 1]",
                 f"{nx} {ny}", "255"]
        lines += [" ".join(map(str, row)) for row in img]
        with open(path, "w") as fh:
            fh.write("\n".join(lines) + "\n")


def _normalise(values: np.ndarray) -> np.ndarray:
    peak = values.max()
    if not peak > 0:
        raise EmptySignalError("imaging map is identically zero")
    return values / peak


def steering_matrix(points, d: DirectionSet, k: float) -> np.ndarray:
    """Rows are unit-norm steering vectors exp(i k theta_n . x) / sqrt(N)."""
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    return np.exp(1j * k * (pts @ d.vectors.T)) / np.sqrt(d.count)


def steering_vector(x, d: DirectionSet, k: float) -> SteeringVector:
    w = steering_matrix(x, d, k)[0]
    return SteeringVector((float(x[0]), float(x[1])), float(k), w)


def _subspace_sum(sys: SingularSystem, d: DirectionSet, points: np.ndarray) -> np.ndarray:
    """sum_s <W(x), U_s> <W(x), conj(V_s)> with <a, b> = conj(a) . b."""
    if sys.truncation_index is None:
        raise RuntimeError("singular system has no truncation index; call estimate_signal_dimension")
    if not sys.directions.same_as(d):
        raise ValueError("singular system was computed for a different direction set")
    if sys.singular_values[0] == 0:
        raise EmptySignalError("zero data: no signal subspace")
    S = sys.truncation_index
    Wc = steering_matrix(points, d, sys.wavenumber).conj()
    a = Wc @ sys.left[:, :S]
    b = Wc @ sys.right[:, :S].conj()
    return np.sum(a * b, axis=1)


def image_single(sys: SingularSystem, d: DirectionSet, grid: SearchGrid,
                 k: float | None = None) -> ImagingMap:
    """Single-frequency subspace migration at the system's wavenumber."""
    if k is not None and not np.isclose(k, sys.wavenumber):
        raise ValueError(f"k={k} does not match the system wavenumber {sys.wavenumber}")
    vals = np.abs(_subspace_sum(sys, d, grid.points)).reshape(grid.shape)
    return ImagingMap(grid, _normalise(vals), (sys.wavenumber,), "single-frequency")


def image_multi(systems: Sequence[SingularSystem], d: DirectionSet,
                grid: SearchGrid) -> ImagingMap:
    """Modulus of the frequency average of the single-frequency sums."""
    if len(systems) < 2:
        raise ValueError("multi-frequency imaging needs at least two frequencies")
    pts = grid.points
    total = np.zeros(len(pts), dtype=complex)
    for sys in systems:
        total += _subspace_sum(sys, d, pts)
    vals = (np.abs(total) / len(systems)).reshape(grid.shape)
    return ImagingMap(grid, _normalise(vals), tuple(s.wavenumber for s in systems),
                      "multi-frequency")


def analytic_single(scene: CrackScene, grid: SearchGrid, k: float) -> ImagingMap:
    """sum_s J_0(k |x - z_s|)^2."""
    r = grid.distances(scene.centers)
    vals = np.sum(bessel_j(0, k * r) ** 2, axis=0)
    return ImagingMap(grid, _normalise(vals), (float(k),), "analytic-single")


def analytic_multi(scene: CrackScene, grid: SearchGrid, k1: float, kF: float) -> ImagingMap:
    """|sum_s mf_closed_form(k1, kF, |x - z_s|)|.

    The closed form dips slightly below zero between lobes; the modulus
    keeps the map comparable with the (non-negative) migration functional.
    """
    r = grid.distances(scene.centers)
    vals = np.abs(np.sum(mf_closed_form(k1, kF, r), axis=0))
    return ImagingMap(grid, _normalise(vals), (float(k1), float(kF)), "analytic-multi")
