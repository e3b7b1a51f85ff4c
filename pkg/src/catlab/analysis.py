"""Observable diagnostics of motional states.

Position convention: ``x = (a + a_dag) / sqrt 2``, so a coherent state
``|alpha>`` with real alpha is centred at ``x = sqrt(2) alpha``. The
alternative coordinate ``R = x / sqrt 2`` puts the same state at ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, TruncationError
from .fock import quadrature_spectrum, required_dim
from .model import ModelParams

DEFAULT_GRID_POINTS = 2001
GRID_MARGIN = 6.0
PEAK_THRESHOLD = 1e-3
_RESCALE_AT = 1e100


def default_grid(alpha_max: float, points: int = DEFAULT_GRID_POINTS) -> np.ndarray:
    half = math.sqrt(2.0) * abs(alpha_max) + GRID_MARGIN
    return np.linspace(-half, half, points)


def hermite_expansion(coeffs: np.ndarray, x: np.ndarray) -> np.ndarray:
    """``sum_n c_n phi_n(x)`` with ``phi_n`` the oscillator eigenfunctions.

    Runs the normalized three-term recurrence
    ``phi_n = sqrt(2/n) x phi_{n-1} - sqrt((n-1)/n) phi_{n-2}`` on a per-point
    rescaled copy, so neither the Gaussian prefactor nor the polynomial growth
    can overflow.
    """
    x = np.asarray(x, dtype=float)
    coeffs = np.asarray(coeffs, dtype=complex)
    log_scale = -0.5 * x * x - 0.25 * math.log(math.pi)
    prev = np.zeros_like(x)
    cur = np.ones_like(x)
    acc = coeffs[0] * cur.astype(complex)
    for n in range(1, coeffs.shape[0]):
        prev, cur = cur, math.sqrt(2.0 / n) * x * cur - math.sqrt((n - 1) / n) * prev
        acc = acc + coeffs[n] * cur
        big = np.abs(cur) > _RESCALE_AT
        if big.any():
            s = np.where(big, np.abs(cur), 1.0)
            cur, prev, acc = cur / s, prev / s, acc / s
            log_scale = log_scale + np.log(s)
    return acc * np.exp(log_scale)


@dataclass(frozen=True)
class DensityProfile:
    grid: np.ndarray
    values: np.ndarray
    grid_step: float
    integral: float
    narrow_grid: bool = False


def position_density(state: np.ndarray, grid: np.ndarray | None = None) -> DensityProfile:
    """``|psi(x)|^2`` on ``grid`` (default: 2001 points over ``+-(sqrt2 |alpha| + 6)``).

    ``narrow_grid`` is set when less than 0.999 of the probability lies on the grid.
    """
    state = np.asarray(state, dtype=complex)
    if grid is None:
        mean_n = number_stats(state)[0]
        grid = default_grid(math.sqrt(mean_n))
    grid = np.asarray(grid, dtype=float)
    if grid.ndim != 1 or grid.size < 3 or np.any(np.diff(grid) <= 0):
        raise ConfigurationError("grid must be a strictly increasing vector with >= 3 points")
    values = np.abs(hermite_expansion(state, grid)) ** 2
    integral = float(np.trapezoid(values, grid))
    step = float((grid[-1] - grid[0]) / (grid.size - 1))
    return DensityProfile(grid=grid, values=values, grid_step=step, integral=integral, narrow_grid=integral < 0.999)


@dataclass(frozen=True)
class PeakSummary:
    peak_positions: np.ndarray
    peak_heights: np.ndarray
    count: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "count", len(self.peak_positions))

    @property
    def r_positions(self) -> np.ndarray:
        """Peak positions in the ``R = x / sqrt 2`` convention."""
        return self.peak_positions / math.sqrt(2.0)


def peak_summary(profile: DensityProfile, threshold: float = PEAK_THRESHOLD) -> PeakSummary:
    """Strict local maxima above ``threshold * max``, refined by a 3-point parabola."""
    y = np.asarray(profile.values, dtype=float)
    x = np.asarray(profile.grid, dtype=float)
    if y.size < 3:
        raise ConfigurationError("profile has fewer than 3 samples")
    floor = threshold * y.max()
    mid = y[1:-1]
    is_peak = (mid > y[:-2]) & (mid > y[2:]) & (mid >= floor)
    positions, heights = [], []
    for i in np.flatnonzero(is_peak) + 1:
        ym, y0, yp = y[i - 1], y[i], y[i + 1]
        curv = ym - 2.0 * y0 + yp
        shift = 0.5 * (ym - yp) / curv if curv != 0 else 0.0
        positions.append(x[i] + shift * (x[i + 1] - x[i]))
        heights.append(y0 - 0.25 * (ym - yp) * shift)
    return PeakSummary(np.array(positions), np.array(heights))


def separation_threshold(xi: float) -> float:
    """Earliest time at which the two cat components are resolvable: ``sqrt(2 pi / xi)``."""
    if not xi > 0:
        raise DomainError(f"xi must be positive, got {xi}")
    return math.sqrt(2.0 * math.pi / xi)


def separation_time_ok(p: ModelParams, t: float) -> tuple[bool, float]:
    threshold = separation_threshold(p.xi)
    return t >= threshold, threshold


def first_observable_time(p: ModelParams) -> float:
    """Smallest ``(2k+1) pi / 2`` that passes :func:`separation_time_ok`."""
    threshold = separation_threshold(p.xi)
    k = max(0, math.ceil((threshold / (math.pi / 2.0) - 1.0) / 2.0 - 1e-12))
    return (2 * k + 1) * math.pi / 2.0


def number_stats(state: np.ndarray) -> tuple[float, float, complex]:
    """``(<n>, Var n, <a>)`` of a normalized motional state."""
    state = np.asarray(state, dtype=complex)
    pops = np.abs(state) ** 2
    n = np.arange(state.size)
    mean_n = float(pops @ n)
    var_n = float(pops @ (n * n)) - mean_n**2
    mean_a = complex(np.vdot(state[:-1], np.sqrt(n[1:]) * state[1:]))
    return mean_n, max(var_n, 0.0), mean_a


def wigner_map(state: np.ndarray, xgrid: np.ndarray, pgrid: np.ndarray) -> np.ndarray:
    """Wigner function ``W[i, j] = W(xgrid[i], pgrid[j])`` as displaced parity.

    ``W = (1/pi) <psi| D(l) Pi D(l)^dag |psi>`` with ``l = (x + i p)/sqrt 2``.
    ``D(l) = R(theta) D(|l|) R(theta)^dag`` with ``R`` a phase rotation, so
    only the spectrum of ``i(a_dag - a)`` is needed.
    """
    state = np.asarray(state, dtype=complex)
    dim = state.size
    xgrid = np.asarray(xgrid, dtype=float)
    pgrid = np.asarray(pgrid, dtype=float)
    lam_max = math.hypot(np.abs(xgrid).max(), np.abs(pgrid).max()) / math.sqrt(2.0)
    reach = lam_max + math.sqrt(number_stats(state)[0])
    need = required_dim(reach)
    if dim < need:
        raise TruncationError(need, dim, reach)

    w, V = quadrature_spectrum("p", dim)
    Vh = V.conj().T
    n = np.arange(dim)
    parity = (-1.0) ** n
    X, P = np.meshgrid(xgrid, pgrid, indexing="ij")
    lam = ((X + 1j * P) / math.sqrt(2.0)).ravel()
    r, theta = np.abs(lam), np.angle(lam)
    rotated = state[None, :] * np.exp(-1j * np.outer(theta, n))  # R(theta)^dag psi
    shifted = ((rotated @ Vh.T) * np.exp(1j * np.outer(r, w))) @ V.T  # D(r)^dag
    values = (np.abs(shifted) ** 2) @ parity / math.pi
    return values.reshape(X.shape)

