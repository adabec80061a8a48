"""Singular value decomposition of MSR matrices and signal-subspace selection."""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .forward import MSRMatrix
from .scene import DirectionSet


class EmptySignalError(ValueError):
    """Raised when the data carry no signal (sigma_1 == 0)."""


@dataclass(frozen=True)
class SingularSystem:
    """K = U diag(sigma) V^*; columns of ``left``/``right`` are U_s / V_s."""

    singular_values: np.ndarray
    left: np.ndarray
    right: np.ndarray
    wavenumber: float
    directions: DirectionSet
    truncation_index: int | None = None

    def reconstruct(self) -> np.ndarray:
        return (self.left * self.singular_values) @ self.right.conj().T

    def with_truncation(self, index: int) -> "SingularSystem":
        if not 1 <= index <= len(self.singular_values):
            raise ValueError(f"truncation index {index} out of range")
        return replace(self, truncation_index=int(index))

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            fh.write("index,sigma\n")
            for i, s in enumerate(self.singular_values, 1):
                fh.write(f"{i},{float(s)!r}\n")


def _fix_phase(U: np.ndarray, V: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # rotating U_s and V_s by the same unit scalar leaves U_s V_s^* unchanged
    idx = np.argmax(np.abs(U), axis=0)
    lead = U[idx, np.arange(U.shape[1])]
    phase = np.where(np.abs(lead) > 0, lead / np.abs(lead), 1.0)
    return U / phase, V / phase


def svd(msr: MSRMatrix, tau: float | None = None) -> SingularSystem:
    """Full SVD with sigma non-increasing and a deterministic phase per pair:
    the largest-magnitude entry of each U_s is real and positive.

    If ``tau`` is given the truncation index is set via
    :func:`estimate_signal_dimension`.
    """
    K = np.asarray(msr.entries)
    if not np.all(np.isfinite(K)):
        raise ValueError("MSR matrix has non-finite entries")
    U, s, Vh = np.linalg.svd(K)
    U, V = _fix_phase(U, Vh.conj().T)
    sys = SingularSystem(s, U, V, msr.wavenumber, msr.directions)
    if tau is not None:
        sys = sys.with_truncation(estimate_signal_dimension(sys, tau))
    return sys


def estimate_signal_dimension(sys: SingularSystem, tau: float) -> int:
    """Number of singular values with sigma_s >= tau * sigma_1."""
    if not 0 < tau < 1:
        raise ValueError(f"tau must lie in (0, 1), got {tau}")
    s = sys.singular_values
    if s[0] == 0:
        raise EmptySignalError("zero data: sigma_1 = 0")
    return int(np.count_nonzero(s >= tau * s[0]))
