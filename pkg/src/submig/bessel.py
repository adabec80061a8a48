"""Integer-order Bessel functions of the first kind and the Bessel closed forms
used as analytic oracles for the imaging functionals.

``bessel_j`` uses the ascending power series for small arguments and Miller's
downward recurrence, normalised with the Neumann sum
``J_0(x) + 2 * sum_k J_{2k}(x) = 1``, elsewhere.  Both paths are vectorised
over the argument.
"""

from __future__ import annotations

import contextlib
import math

import numpy as np

from .quadrature import adaptive_quad, gauss_legendre

# Series is used for x <= SERIES_MAX; above it cancellation between terms
# costs more than the 1e-12 absolute budget.
SERIES_MAX = 4.0
_SERIES_TERMS = 60
_RESCALE = 1e250

# Fault injection for the verification harness: when set, caps the number of
# series terms and the Miller start index.
_truncate: int | None = None


@contextlib.contextmanager
def truncated(terms: int):
    """Deliberately truncate every Bessel expansion to ``terms`` terms.

    Only meant for exercising the verification checks; results inside the
    block are wrong for all but tiny arguments.
    """
    global _truncate
    old, _truncate = _truncate, int(terms)
    try:
        yield
    finally:
        _truncate = old


def _check_order(n) -> int:
    if isinstance(n, bool) or int(n) != n or n < 0:
        raise ValueError(f"Bessel order must be a non-negative integer, got {n!r}")
    return int(n)


def _check_argument(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise ValueError("Bessel argument must be finite")
    if np.any(x < 0):
        raise ValueError("Bessel argument must be non-negative")
    return x


def _series(nmax: int, x: np.ndarray) -> np.ndarray:
    """J_0..J_nmax at 0 < x <= SERIES_MAX by the ascending series."""
    out = np.empty((nmax + 1, x.size))
    q = -0.25 * x * x
    logh = np.log(x) - math.log(2.0)
    K = _SERIES_TERMS if _truncate is None else _truncate
    for n in range(nmax + 1):
        term = np.exp(n * logh - math.lgamma(n + 1))
        total = term.copy()
        for k in range(1, K):
            term = term * q / (k * (k + n))
            total += term
            if np.all(np.abs(term) <= 1e-18 * np.abs(total)):
                break
        out[n] = total
    return out


def _start_index(nmax: int, xmax: float) -> int:
    m = int(max(nmax, xmax) + 15.0 * max(xmax, 1.0) ** (1.0 / 3.0) + 20)
    if _truncate is not None:
        m = min(m, nmax + _truncate)
    return m + (m % 2)


def _miller(nmax: int, x: np.ndarray) -> np.ndarray:
    """J_0..J_nmax at x > 0 by downward recurrence."""
    m = _start_index(nmax, float(x.max()))
    out = np.zeros((nmax + 1, x.size))
    f_next = np.zeros_like(x)
    f = np.full_like(x, 1e-30)
    norm = np.zeros_like(x)
    for j in range(m, 0, -1):
        if j <= nmax:
            out[j] = f
        if j % 2 == 0:
            norm += 2.0 * f
        f_next, f = f, (2.0 * j / x) * f - f_next
        big = np.abs(f) > _RESCALE
        if big.any():
            f[big] /= _RESCALE
            f_next[big] /= _RESCALE
            norm[big] /= _RESCALE
            out[:, big] /= _RESCALE
    out[0] = f
    norm += f
    return out / norm


def bessel_j_orders(nmax: int, x) -> np.ndarray:
    """J_0(x), ..., J_nmax(x) stacked along a new leading axis.

    Parameters
    ----------
    nmax : int
        Highest order, >= 0.
    x : float or array_like
        Non-negative, finite arguments.

    Returns
    -------
    numpy.ndarray of shape ``(nmax + 1,) + np.shape(x)``
    """
    nmax = _check_order(nmax)
    x = _check_argument(x)
    flat = x.ravel()
    out = np.zeros((nmax + 1, flat.size))
    zero = flat == 0.0
    out[0, zero] = 1.0
    small = ~zero & (flat <= SERIES_MAX)
    large = flat > SERIES_MAX
    if small.any():
        out[:, small] = _series(nmax, flat[small])
    if large.any():
        out[:, large] = _miller(nmax, flat[large])
    return out.reshape((nmax + 1,) + x.shape)


def bessel_j(n: int, x):
    """Bessel function of the first kind J_n(x), n integer >= 0, x >= 0.

    Accepts a scalar or an array for ``x``; returns a float for scalar input.
    Absolute error is below 1e-12 on [0, 1e4].
    """
    n = _check_order(n)
    vals = bessel_j_orders(n, x)[n]
    return float(vals) if vals.ndim == 0 else vals


def bessel_j0_asymptotic(x):
    """Leading large-argument form sqrt(2/(pi x)) cos(x - pi/4) of J_0."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise ValueError("asymptotic form needs x > 0")
    val = np.sqrt(2.0 / (np.pi * x)) * np.cos(x - 0.25 * np.pi)
    return float(val) if val.ndim == 0 else val


def _check_arc(alpha: float, beta: float) -> None:
    if not beta > alpha:
        raise ValueError(f"need alpha < beta, got alpha={alpha}, beta={beta}")
    if alpha < 0 or beta > 2 * np.pi + 1e-12:
        raise ValueError("arc must lie in [0, 2*pi]")


def arc_plane_wave_integral(k: float, separation, alpha: float, beta: float,
                            quadrature_points: int | None = None) -> complex:
    """Integral of exp(i k theta . separation) over the unit-circle arc [alpha, beta].

    Evaluated by composite 16-point Gauss-Legendre.  ``quadrature_points`` is
    the total node count; by default it is chosen from the phase range so
    that every panel covers about one radian of phase.
    """
    _check_arc(alpha, beta)
    if not k > 0:
        raise ValueError("wavenumber must be positive")
    sx, sy = np.asarray(separation, dtype=float)
    kr = k * math.hypot(sx, sy)
    if kr == 0.0:
        return complex(beta - alpha)
    if quadrature_points is None:
        panels = max(4, math.ceil(kr * (beta - alpha)))
        order = 16
    else:
        if quadrature_points < 2:
            raise ValueError("quadrature_points must be >= 2")
        order = min(16, int(quadrature_points))
        panels = max(1, int(quadrature_points) // order)

    def integrand(t):
        return np.exp(1j * k * (np.cos(t) * sx + np.sin(t) * sy))

    return complex(gauss_legendre(integrand, alpha, beta, panels, order))


def jacobi_anger_remainder(k: float, r: float, alpha: float, beta: float,
                           terms: int, phi: float = 0.0) -> complex:
    """Partial sum of the arc-integral remainder beyond (beta - alpha) J_0(kr).

    The remainder is

        4 * sum_{n=1}^{terms} (i^n / n) J_n(kr) sin(n (beta - alpha) / 2)
                                          * cos(n ((beta + alpha) / 2 - phi))

    where ``phi`` is the polar angle of the separation vector.  With
    ``phi = 0`` this is the textbook form; for any ``phi`` adding it to the
    leading term reproduces ``arc_plane_wave_integral`` as ``terms`` grows.
    """
    _check_arc(alpha, beta)
    if terms < 1:
        raise ValueError("terms must be >= 1")
    if not k > 0 or r < 0:
        raise ValueError("need k > 0 and r >= 0")
    if r == 0:
        return 0j
    n = np.arange(1, terms + 1)
    J = bessel_j_orders(terms, k * r)[1:]
    i_pow = np.array([1, 1j, -1, -1j])[n % 4]
    s = np.sin(0.5 * n * (beta - alpha))
    c = np.cos(n * (0.5 * (beta + alpha) - phi))
    return complex(4.0 * np.sum(i_pow / n * J * s * c))


def _j0j1_sq(x):
    J = bessel_j_orders(1, x)
    return J[0] ** 2 + J[1] ** 2


def mf_closed_form(k1: float, kF: float, r):
    """Frequency-averaged squared-J_0 profile over the band [k1, kF].

    Returns ``(kF S(kF r) - k1 S(k1 r)) / (kF - k1)`` with
    ``S = J_0^2 + J_1^2``; equal to 1 at r = 0.
    """
    if not 0 < k1 < kF:
        raise ValueError(f"need 0 < k1 < kF, got k1={k1}, kF={kF}")
    r = np.asarray(r, dtype=float)
    val = (kF * _j0j1_sq(kF * r) - k1 * _j0j1_sq(k1 * r)) / (kF - k1)
    return float(val) if val.ndim == 0 else val


def _squared_integral(order: int, a: float, b: float, tol: float) -> float:
    # panels are seeded so each spans roughly one oscillation
    panels = max(8, math.ceil((b - a) / 2.0))
    return adaptive_quad(lambda t: bessel_j(order, t) ** 2, a, b, tol=tol,
                         initial_panels=panels)


def j0_squared_antiderivative_check(a: float, b: float, tol: float = 1e-12) -> float:
    """Residual of int_a^b J_0^2 = [x (J_0^2 + J_1^2)]_a^b + int_a^b J_1^2.

    Both integrals use independent adaptive quadrature, so the residual
    measures quadrature plus Bessel evaluation error.
    """
    if not (0 < a <= b):
        raise ValueError(f"need 0 < a <= b, got a={a}, b={b}")
    if a == b:
        return 0.0
    lhs = _squared_integral(0, a, b, tol)
    rhs = b * _j0j1_sq(b) - a * _j0j1_sq(a) + _squared_integral(1, a, b, tol)
    return abs(lhs - float(rhs))
