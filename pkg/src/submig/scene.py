"""Array geometry, crack configurations and search grids."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi


def _is_full_view(alpha: float, beta: float) -> bool:
    return math.isclose(alpha, 0.0, abs_tol=1e-12) and math.isclose(beta, TWO_PI, abs_tol=1e-12)


@dataclass(frozen=True)
class DirectionSet:
    """Unit vectors on the arc [alpha, beta] at equally spaced angles.

    ``vectors`` is an (N, 2) array; ``angles`` the matching polar angles.
    On the full circle the duplicate endpoint at 2*pi is dropped so all N
    directions are distinct.
    """

    count: int
    alpha: float
    beta: float
    angles: tuple[float, ...]
    vectors: np.ndarray = field(repr=False, compare=False)

    @property
    def full_view(self) -> bool:
        return _is_full_view(self.alpha, self.beta)

    def __len__(self) -> int:
        return self.count

    def same_as(self, other: "DirectionSet") -> bool:
        return self.count == other.count and np.array_equal(self.vectors, other.vectors)


def make_direction_set(N: int, alpha: float, beta: float) -> DirectionSet:
    if int(N) != N or N < 2:
        raise ValueError(f"need at least 2 directions, got N={N}")
    if not beta > alpha:
        raise ValueError(f"empty arc: alpha={alpha}, beta={beta}")
    if beta - alpha > TWO_PI + 1e-12:
        raise ValueError("arc longer than the full circle")
    N = int(N)
    n = np.arange(N)
    if _is_full_view(alpha, beta):
        theta = alpha + (beta - alpha) * n / N
    else:
        theta = alpha + (beta - alpha) * n / (N - 1)
    vectors = np.column_stack([np.cos(theta), np.sin(theta)])
    vectors.setflags(write=False)
    return DirectionSet(N, float(alpha), float(beta), tuple(theta.tolist()), vectors)


def observation_directions(d: DirectionSet) -> DirectionSet:
    """Antipodal directions -theta_n (backscattering configuration)."""
    shift = -math.pi if d.alpha >= math.pi else math.pi
    vectors = -d.vectors
    vectors.setflags(write=False)
    return DirectionSet(d.count, d.alpha + shift, d.beta + shift,
                        tuple(a + shift for a in d.angles), vectors)


def rotation(phi: float) -> np.ndarray:
    c, s = math.cos(phi), math.sin(phi)
    return np.array([[c, -s], [s, c]])


@dataclass(frozen=True)
class Crack:
    center: tuple[float, float]
    # stored for configuration fidelity; the far-field model only uses centers
    orientation: float = 0.0


@dataclass(frozen=True)
class CrackScene:
    cracks: tuple[Crack, ...]
    half_length: float

    def __post_init__(self):
        if not 0 < self.half_length < 2:
            raise ValueError(f"half_length must lie in (0, 2), got {self.half_length}")
        if not self.cracks:
            raise ValueError("scene needs at least one crack")
        c = self.centers
        if len(c) > 1:
            d = np.linalg.norm(c[:, None, :] - c[None, :, :], axis=-1)
            if np.any(d[np.triu_indices(len(c), 1)] == 0):
                raise ValueError("crack centers must be pairwise distinct")

    @property
    def centers(self) -> np.ndarray:
        return np.array([cr.center for cr in self.cracks], dtype=float).reshape(-1, 2)

    def __len__(self) -> int:
        return len(self.cracks)

    def subset(self, indices) -> "CrackScene":
        return CrackScene(tuple(self.cracks[i] for i in indices), self.half_length)

    def translated(self, t) -> "CrackScene":
        tx, ty = t
        return CrackScene(tuple(Crack((c.center[0] + tx, c.center[1] + ty), c.orientation)
                                for c in self.cracks), self.half_length)

    @classmethod
    def from_centers(cls, centers, half_length: float) -> "CrackScene":
        return cls(tuple(Crack((float(x), float(y))) for x, y in centers), half_length)


def reference_scene() -> CrackScene:
    """Three cracks of half-length 0.05.

    Each crack is the segment {c + t*e : |t| <= l} rotated about the origin;
    its center is the rotated t = 0 point and its orientation the rotated
    direction e.
    """
    segments = [
        ((-0.6, -0.2), (1.0, 0.0), 0.0),
        ((0.4, 0.35), (1.0, 1.0), math.pi / 4),
        ((0.25, -0.6), (1.0, 1.0), 7 * math.pi / 6),
    ]
    cracks = []
    for base, tangent, phi in segments:
        R = rotation(phi)
        cx, cy = R @ np.array(base)
        tx, ty = R @ np.array(tangent)
        cracks.append(Crack((float(cx), float(cy)), math.atan2(ty, tx)))
    return CrackScene(tuple(cracks), 0.05)


@dataclass(frozen=True)
class SearchGrid:
    """Uniform lattice; points are ordered row-major (y outer, x inner)."""

    x_min: float = -1.0
    x_max: float = 1.0
    y_min: float = -1.0
    y_max: float = 1.0
    nx: int = 101
    ny: int = 101

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise ValueError("grid needs nx, ny >= 2")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise ValueError("grid bounds must be increasing")

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(self.y_min, self.y_max, self.ny)

    @property
    def spacing(self) -> tuple[float, float]:
        return ((self.x_max - self.x_min) / (self.nx - 1),
                (self.y_max - self.y_min) / (self.ny - 1))

    @property
    def shape(self) -> tuple[int, int]:
        return (self.ny, self.nx)

    @property
    def points(self) -> np.ndarray:
        X, Y = np.meshgrid(self.xs, self.ys)
        return np.column_stack([X.ravel(), Y.ravel()])

    def nearest_index(self, p) -> tuple[int, int]:
        """(row, col) of the lattice point closest to ``p``."""
        hx, hy = self.spacing
        col = int(np.clip(round((p[0] - self.x_min) / hx), 0, self.nx - 1))
        row = int(np.clip(round((p[1] - self.y_min) / hy), 0, self.ny - 1))
        return row, col

    def distances(self, centers) -> np.ndarray:
        """Distances from every grid point to each center, shape (S, ny, nx)."""
        c = np.asarray(centers, dtype=float).reshape(-1, 2)
        X, Y = np.meshgrid(self.xs, self.ys)
        return np.hypot(X[None] - c[:, 0, None, None], Y[None] - c[:, 1, None, None])
