"""Checks tying the discrete pipeline to the Bessel-function predictions, and
image-quality metrics."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .bessel import arc_plane_wave_integral, bessel_j, j0_squared_antiderivative_check, mf_closed_form
from .forward import assemble_msr
from .imaging import ImagingMap, analytic_multi, analytic_single, image_multi, image_single
from .quadrature import adaptive_quad
from .scene import CrackScene, DirectionSet, SearchGrid
from .spectral import EmptySignalError, svd

EXCLUSION_KR = 20.0
NOISE_FREE_TAU = 1e-4


@dataclass
class DecayReport:
    kr: list[float]
    error: list[float]
    fitted_exponent: float
    # prefactor C of the fitted law error ~ C * kr**fitted_exponent
    constant: float

    def passes(self, lo: float = -0.65, hi: float = -0.35) -> bool:
        return lo <= self.fitted_exponent <= hi

    @property
    def samples(self) -> list[tuple[float, float]]:
        return list(zip(self.kr, self.error))

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class QualityMetrics:
    peak_positions: list[tuple[float, float]]
    peak_values: list[float]
    localization_errors: list[float]
    peak_to_sidelobe: float

    def to_dict(self) -> dict:
        d = asdict(self)
        if math.isinf(self.peak_to_sidelobe):
            d["peak_to_sidelobe"] = None
        return d


@dataclass
class MultiFrequencyCheck:
    rms: float
    # (1/dk) int J_1(k r)^2 dk divided by |closed form| at r = probe_radius
    neglected_ratio: float
    probe_radius: float = field(default=1.0)


def lemma_error(k: float, r: float, alpha: float, beta: float, phi: float) -> float:
    sep = (r * math.cos(phi), r * math.sin(phi))
    arc = arc_plane_wave_integral(k, sep, alpha, beta)
    return abs(arc - (beta - alpha) * bessel_j(0, k * r))


def check_lemma_decay(alpha: float, beta: float, kr_values: Sequence[float],
                      directions_of_separation: int = 72) -> DecayReport:
    """Worst-case (over separation direction) gap between the arc integral and
    (beta - alpha) J_0(kr), with a log-log fit of its decay in kr."""
    kr = np.asarray(kr_values, dtype=float)
    if kr.size < 3:
        raise ValueError("need at least 3 kr samples")
    if np.any(np.diff(kr) <= 0) or np.any(kr < 5):
        raise ValueError("kr values must be increasing and >= 5")
    phis = np.linspace(0.0, 2 * math.pi, int(directions_of_separation), endpoint=False)
    errors = [max(lemma_error(v, 1.0, alpha, beta, p) for p in phis) for v in kr]
    logs = np.log(np.maximum(errors, 1e-300))
    slope, intercept = np.polyfit(np.log(kr), logs, 1)
    return DecayReport(kr.tolist(), errors, float(slope), float(math.exp(intercept)))


def _require_single(scene: CrackScene) -> None:
    if len(scene) != 1:
        raise ValueError(f"theorem checks need exactly one crack, got {len(scene)}")


def rms_difference(a: ImagingMap, b: ImagingMap, mask: np.ndarray) -> float:
    if not mask.any():
        raise ValueError("comparison region is empty")
    diff = a.values[mask] - b.values[mask]
    return float(np.sqrt(np.mean(diff ** 2)))


def single_frequency_maps(scene: CrackScene, d: DirectionSet, k: float, grid: SearchGrid):
    sys = svd(assemble_msr(scene, d, k), tau=NOISE_FREE_TAU)
    return image_single(sys, d, grid), analytic_single(scene, grid, k)


def check_theorem_single(scene: CrackScene, d: DirectionSet, k: float, grid: SearchGrid,
                         exclusion_kr: float = EXCLUSION_KR) -> float:
    """RMS gap between the migration map and sum J_0^2 where k|x - z| >= exclusion_kr."""
    _require_single(scene)
    pipeline, oracle = single_frequency_maps(scene, d, k, grid)
    mask = k * grid.distances(scene.centers)[0] >= exclusion_kr
    return rms_difference(pipeline, oracle, mask)


def blurring_deviation(scene: CrackScene, d: DirectionSet, k: float, grid: SearchGrid,
                       exclusion_kr: float = EXCLUSION_KR) -> tuple[float, float]:
    """(near, far) RMS deviation from the oracle, split at k r = exclusion_kr.

    Uses the distance to the nearest crack, so it accepts any scene.
    """
    pipeline, oracle = single_frequency_maps(scene, d, k, grid)
    kr = k * grid.distances(scene.centers).min(axis=0)
    near = kr < exclusion_kr
    return rms_difference(pipeline, oracle, near), rms_difference(pipeline, oracle, ~near)


def neglected_term_ratio(k1: float, kF: float, r: float) -> float:
    """Size of the dropped (1/dk) int J_1(kr)^2 dk relative to the closed form."""
    dk = kF - k1
    panels = max(8, math.ceil(dk * r / 2.0))
    j1sq = adaptive_quad(lambda k: bessel_j(1, k * r) ** 2, k1, kF, tol=1e-13,
                         initial_panels=panels) / dk
    return float(j1sq / abs(mf_closed_form(k1, kF, r)))


def check_theorem_multi(scene: CrackScene, d: DirectionSet, k_list: Sequence[float],
                        grid: SearchGrid, exclusion_kr: float = EXCLUSION_KR,
                        probe_radius: float = 1.0) -> MultiFrequencyCheck:
    """Multi-frequency map vs. the closed-form band average, on the region
    where k_max |x - z| >= exclusion_kr."""
    _require_single(scene)
    ks = sorted(float(k) for k in k_list)
    if len(ks) < 2:
        raise ValueError("need at least two frequencies")
    systems = [svd(assemble_msr(scene, d, k), tau=NOISE_FREE_TAU) for k in ks]
    pipeline = image_multi(systems, d, grid)
    oracle = analytic_multi(scene, grid, ks[0], ks[-1])
    mask = ks[-1] * grid.distances(scene.centers)[0] >= exclusion_kr
    return MultiFrequencyCheck(rms_difference(pipeline, oracle, mask),
                               neglected_term_ratio(ks[0], ks[-1], probe_radius),
                               probe_radius)


def antiderivative_residuals(pairs: Sequence[tuple[float, float]]) -> list[float]:
    """Residuals for each (a, b); a quadrature that fails to converge counts as inf."""
    out = []
    for a, b in pairs:
        try:
            out.append(j0_squared_antiderivative_check(a, b))
        except RuntimeError:
            out.append(math.inf)
    return out


def _local_maxima(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Row/col indices of strict maxima over the 8-neighbourhood."""
    padded = np.pad(values, 1, constant_values=-np.inf)
    ny, nx = values.shape
    is_max = np.ones(values.shape, dtype=bool)
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy == 0 and dx == 0:
                continue
            neigh = padded[1 + dy:1 + dy + ny, 1 + dx:1 + dx + nx]
            is_max &= values > neigh
    return np.nonzero(is_max)


def quality_metrics(image: ImagingMap, scene: CrackScene, lambda_min: float) -> QualityMetrics:
    """Detect the S strongest peaks (mutual exclusion radius lambda_min / 2)
    and score them against the true crack centers."""
    vals = image.values
    if not vals.max() > 0:
        raise EmptySignalError("imaging map is identically zero")
    rows, cols = _local_maxima(vals)
    if rows.size == 0:
        raise EmptySignalError("imaging map has no strict local maxima")
    xs, ys = image.grid.xs, image.grid.ys
    pos = np.column_stack([xs[cols], ys[rows]])
    peak_vals = vals[rows, cols]
    order = np.argsort(-peak_vals, kind="stable")
    radius = 0.5 * lambda_min
    S = len(scene)

    chosen: list[int] = []
    for i in order:
        if len(chosen) == S:
            break
        if all(np.hypot(*(pos[i] - pos[j])) > radius for j in chosen):
            chosen.append(int(i))
    peaks = pos[chosen]

    centers = scene.centers
    loc_err = [float(np.min(np.hypot(*(peaks - c).T))) for c in centers]

    dist_to_true = np.min(np.hypot(pos[:, None, 0] - centers[None, :, 0],
                                   pos[:, None, 1] - centers[None, :, 1]), axis=1)
    side = peak_vals[dist_to_true > radius]
    weakest = float(peak_vals[chosen].min())
    psr = weakest / float(side.max()) if side.size else math.inf
    return QualityMetrics([tuple(map(float, p)) for p in peaks],
                          [float(peak_vals[i]) for i in chosen], loc_err, psr)
