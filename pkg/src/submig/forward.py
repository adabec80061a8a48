"""Far-field data for small sound-soft cracks from the leading-order asymptotic
expansion, assembled into multi-static response (MSR) matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .scene import CrackScene, DirectionSet, observation_directions


def crack_prefactor(half_length: float) -> float:
    """-2*pi / ln(l/2), the common amplitude of every crack's contribution."""
    if not 0 < half_length < 2:
        raise ValueError(f"half_length must lie in (0, 2), got {half_length}")
    return -2.0 * math.pi / math.log(half_length / 2.0)


@dataclass(frozen=True)
class MSRMatrix:
    """Entry (m, n) is the far field observed at direction m for incidence n."""

    wavenumber: float
    entries: np.ndarray
    directions: DirectionSet

    def __post_init__(self):
        K = self.entries
        if K.ndim != 2 or K.shape[0] != K.shape[1] or K.shape[0] != self.directions.count:
            raise ValueError(f"MSR matrix shape {K.shape} does not match "
                             f"{self.directions.count} directions")

    @property
    def N(self) -> int:
        return self.entries.shape[0]

    def symmetry_residual(self) -> float:
        K = self.entries
        return float(np.linalg.norm(K - K.T) / np.linalg.norm(K))

    def to_csv(self, path) -> None:
        """One matrix row per line, each entry written as ``re,im``."""
        with open(path, "w") as fh:
            for row in self.entries:
                fh.write(",".join(f"{float(z.real)!r},{float(z.imag)!r}" for z in row) + "\n")


def read_msr_csv(path) -> np.ndarray:
    raw = np.loadtxt(path, delimiter=",", ndmin=2)
    return raw[:, 0::2] + 1j * raw[:, 1::2]


def far_field_entry(scene: CrackScene, incident, observation, k: float) -> complex:
    """u_inf(observation, incident; k) ~ c * sum_s exp(i k (incident - observation) . z_s)."""
    if not k > 0:
        raise ValueError("wavenumber must be positive")
    c = crack_prefactor(scene.half_length)
    q = np.asarray(incident, dtype=float) - np.asarray(observation, dtype=float)
    return complex(c * np.sum(np.exp(1j * k * (scene.centers @ q))))


def assemble_msr(scene: CrackScene, d: DirectionSet, k: float,
                 observation: DirectionSet | None = None) -> MSRMatrix:
    """MSR matrix at wavenumber ``k``.

    By default observation direction m is -theta_m, which makes the matrix
    complex symmetric.  An independent observation arc can be passed via
    ``observation``; it must have the same count.
    """
    if not k > 0:
        raise ValueError("wavenumber must be positive")
    obs = observation_directions(d) if observation is None else observation
    if obs.count != d.count:
        raise ValueError("observation and incident sets must have equal size")
    c = crack_prefactor(scene.half_length)
    z = scene.centers
    # phase_inc[n, s] = k theta_n . z_s,  phase_obs[m, s] = k xhat_m . z_s
    E_inc = np.exp(1j * k * (d.vectors @ z.T))
    E_obs = np.exp(-1j * k * (obs.vectors @ z.T))
    K = c * (E_obs @ E_inc.T)
    return MSRMatrix(float(k), K, d)


def add_noise(msr: MSRMatrix, relative_level: float, seed: int) -> MSRMatrix:
    """Add circular complex Gaussian noise.

    Each entry receives noise with E|n|^2 = (relative_level * ||K||_F / N)^2.
    A zero level returns ``msr`` itself.
    """
    if relative_level < 0:
        raise ValueError("noise level must be non-negative")
    if relative_level == 0:
        return msr
    K = msr.entries
    sigma = relative_level * np.linalg.norm(K) / msr.N
    rng = np.random.default_rng(seed)
    noise = rng.standard_normal(K.shape) + 1j * rng.standard_normal(K.shape)
    return replace(msr, entries=K + sigma / math.sqrt(2.0) * noise)


def wavenumbers(lambda_min: float, lambda_max: float, count: int) -> np.ndarray:
    """k_f equally spaced on [2 pi / lambda_max, 2 pi / lambda_min]."""
    if not 0 < lambda_min <= lambda_max:
        raise ValueError("need 0 < lambda_min <= lambda_max")
    if count < 1:
        raise ValueError("need at least one frequency")
    k1, kF = 2 * math.pi / lambda_max, 2 * math.pi / lambda_min
    if count == 1:
        return np.array([kF])
    return np.linspace(k1, kF, count)
