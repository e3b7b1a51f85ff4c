"""Truncated Fock-space linear algebra.

Motional operators are dense ``dim x dim`` complex arrays; joint operators on
(two-level) x (Fock) are ``2*dim x 2*dim`` arrays in internal-major order: the
|e> block occupies indices ``0..dim-1`` and the |g> block ``dim..2*dim-1``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import gammaln

from .errors import ConfigurationError, ContractViolation, TruncationError, TruncationWarning

__all__ = [
    "SpaceConfig",
    "ladder_operators",
    "number_operator",
    "quadrature_sum",
    "required_dim",
    "check_truncation",
    "coherent_state",
    "fock_state",
    "unitary_from_generator",
    "exp_x",
    "exp_p",
    "exp_n",
    "sigma_x_exp",
    "embed_blocks",
    "kron_internal",
    "fidelity",
    "interior_projector",
    "joint_interior_projector",
    "unitarity_defect",
    "hermiticity_defect",
    "leakage_margin",
    "interior_indices",
    "quadrature_spectrum",
]

HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class SpaceConfig:
    """Fock truncation and the interior margin used for operator identities.

    ``interior_margin=None`` selects the default ``max(8, dim // 8)``, clipped
    so at least one level stays inside.
    """

    dim: int
    interior_margin: int | None = None

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 2:
            raise ConfigurationError(f"dim must be an integer >= 2, got {self.dim!r}")
        if self.interior_margin is None:
            object.__setattr__(self, "interior_margin", min(max(8, self.dim // 8), self.dim - 1))
        elif self.interior_margin < 0 or self.interior_margin >= self.dim:
            raise ConfigurationError(
                f"interior_margin must satisfy 0 <= margin < dim={self.dim}, got {self.interior_margin}"
            )

    @property
    def joint_dim(self) -> int:
        return 2 * self.dim

    @property
    def interior_levels(self) -> int:
        return self.dim - self.interior_margin


def leakage_margin(xi: float, dim: int) -> int:
    """Interior margin that clears truncation-edge leakage of displacements by ``xi``.

    Displacing by |xi| spreads Fock level n over roughly 2|xi|sqrt(n) levels, so
    operator products built from truncated exponentials are only exact this far
    in from the edge.
    """
    margin = max(8, dim // 8, math.ceil(3.0 * abs(xi) * math.sqrt(dim)) + 10)
    return min(margin, dim - 1)


def ladder_operators(cfg: SpaceConfig) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(a, a_dag)`` on levels ``0..dim-1``."""
    if cfg.dim < 2:
        raise ConfigurationError("dim must be >= 2")
    lower = np.diag(np.sqrt(np.arange(1, cfg.dim, dtype=float)), 1).astype(complex)
    return lower, lower.conj().T


def number_operator(cfg: SpaceConfig) -> np.ndarray:
    return np.diag(np.arange(cfg.dim, dtype=float)).astype(complex)


def quadrature_sum(cfg: SpaceConfig) -> np.ndarray:
    """``a + a_dag`` (twice R = x/sqrt(2), sqrt(2) times x)."""
    a, ad = ladder_operators(cfg)
    return a + ad


def required_dim(alpha_max: float) -> int:
    """Smallest dim passing the adequacy rule ``dim >= |a|^2 + 8 sqrt(|a|^2 + 1) + 10``."""
    n2 = abs(alpha_max) ** 2
    return math.ceil(n2 + 8.0 * math.sqrt(n2 + 1.0) + 10.0 - 1e-9)


def check_truncation(alpha_max: float, cfg: SpaceConfig, strict: bool = True) -> bool:
    """Check ``cfg.dim`` against :func:`required_dim`.

    Raises :class:`TruncationError` when inadequate and ``strict``; otherwise
    warns and returns ``False``.
    """
    need = required_dim(alpha_max)
    if cfg.dim >= need:
        return True
    if strict:
        raise TruncationError(need, cfg.dim, abs(alpha_max))
    warnings.warn(
        f"dim={cfg.dim} below adequacy bound {need} for |alpha|={abs(alpha_max):.4g}",
        TruncationWarning,
        stacklevel=2,
    )
    return False


def coherent_state(alpha: complex, cfg: SpaceConfig, strict: bool = True) -> np.ndarray:
    """Normalized coherent state ``|alpha>`` truncated to ``cfg.dim`` levels.

    Amplitudes are built in log space so they stay finite far beyond n = 170.
    """
    check_truncation(alpha, cfg, strict=strict)
    n = np.arange(cfg.dim)
    r = abs(alpha)
    if r == 0.0:
        state = np.zeros(cfg.dim, dtype=complex)
        state[0] = 1.0
        return state
    log_mag = -0.5 * r * r + n * math.log(r) - 0.5 * gammaln(n + 1)
    state = np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))
    return state / np.linalg.norm(state)


def fock_state(n: int, cfg: SpaceConfig) -> np.ndarray:
    if not 0 <= n < cfg.dim:
        raise ConfigurationError(f"Fock level {n} outside 0..{cfg.dim - 1}")
    state = np.zeros(cfg.dim, dtype=complex)
    state[n] = 1.0
    return state


def hermiticity_defect(G: np.ndarray) -> float:
    return float(np.max(np.abs(G - G.conj().T))) if G.size else 0.0


def unitarity_defect(U: np.ndarray) -> float:
    """``max |U^dag U - I|``."""
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def unitary_from_generator(G: np.ndarray, theta: float) -> np.ndarray:
    """``exp(-i theta G)`` for Hermitian ``G`` via eigendecomposition."""
    G = np.asarray(G)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ContractViolation(f"generator must be square, got shape {G.shape}")
    defect = hermiticity_defect(G)
    if defect > HERMITIAN_TOL:
        raise ContractViolation(f"generator is not Hermitian (defect {defect:.3e})")
    w, V = np.linalg.eigh(G)
    return (V * np.exp(-1j * theta * w)) @ V.conj().T


@lru_cache(maxsize=32)
def quadrature_spectrum(kind: str, dim: int) -> tuple[np.ndarray, np.ndarray]:
    cfg = SpaceConfig(dim, 0)
    a, ad = ladder_operators(cfg)
    if kind == "x":
        G = a + ad
    elif kind == "p":
        G = 1j * (ad - a)
    else:
        raise ValueError(kind)
    w, V = np.linalg.eigh(G)
    w.setflags(write=False)
    V.setflags(write=False)
    return w, V


def exp_x(theta: float, cfg: SpaceConfig) -> np.ndarray:
    """``exp(-i theta (a + a_dag))``; ``exp_x(-xi)`` is the displacement by ``i xi``."""
    w, V = quadrature_spectrum("x", cfg.dim)
    return (V * np.exp(-1j * theta * w)) @ V.conj().T


def exp_p(theta: float, cfg: SpaceConfig) -> np.ndarray:
    """``exp(theta (a_dag - a))``, the displacement by real ``theta``."""
    w, V = quadrature_spectrum("p", cfg.dim)
    return (V * np.exp(-1j * theta * w)) @ V.conj().T


def exp_n(theta: float, cfg: SpaceConfig) -> np.ndarray:
    """``exp(-i theta a_dag a)``."""
    return np.diag(np.exp(-1j * theta * np.arange(cfg.dim)))


def sigma_x_exp(kind: str, theta: float, cfg: SpaceConfig) -> np.ndarray:
    """``exp(-i theta sigma_x (x) G)`` for ``G`` = ``a+a_dag`` ("x"), ``i(a_dag-a)`` ("p") or identity ("1").

    Uses cos/sin of the motional spectrum so only a ``dim``-sized
    eigendecomposition is needed.
    """
    if kind == "1":
        c, s = math.cos(theta), math.sin(theta)
        eye = np.eye(cfg.dim, dtype=complex)
        return embed_blocks(c * eye, -1j * s * eye, -1j * s * eye, c * eye)
    w, V = quadrature_spectrum(kind, cfg.dim)
    Vh = V.conj().T
    C = (V * np.cos(theta * w)) @ Vh
    S = (V * np.sin(theta * w)) @ Vh
    return embed_blocks(C, -1j * S, -1j * S, C)


def embed_blocks(ee, eg, ge, gg) -> np.ndarray:
    """Compose ``[[ee, eg], [ge, gg]]`` in the |e>, |g> ordering."""
    blocks = [np.asarray(b) for b in (ee, eg, ge, gg)]
    shape = blocks[0].shape
    if len(shape) != 2 or shape[0] != shape[1] or any(b.shape != shape for b in blocks):
        raise ConfigurationError(f"blocks must share one square shape, got {[b.shape for b in blocks]}")
    return np.block([[blocks[0], blocks[1]], [blocks[2], blocks[3]]]).astype(complex)


def kron_internal(internal: np.ndarray, motional: np.ndarray) -> np.ndarray:
    """``internal (x) motional`` with the internal index major."""
    return np.kron(np.asarray(internal, dtype=complex), motional)


def fidelity(a: np.ndarray, b: np.ndarray, norm_tol: float = 1e-8) -> float:
    """``|<a|b>|^2`` for two normalized vectors of equal length."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ConfigurationError(f"dimension mismatch: {a.shape} vs {b.shape}")
    for v in (a, b):
        if abs(np.linalg.norm(v) - 1.0) > norm_tol:
            raise ContractViolation("fidelity requires normalized states")
    return float(abs(np.vdot(a, b)) ** 2)


def interior_projector(cfg: SpaceConfig) -> np.ndarray:
    keep = np.arange(cfg.dim) < cfg.interior_levels
    return np.diag(keep.astype(float)).astype(complex)


def joint_interior_projector(cfg: SpaceConfig) -> np.ndarray:
    return kron_internal(np.eye(2), interior_projector(cfg))


def interior_indices(cfg: SpaceConfig) -> np.ndarray:
    """Joint-space indices kept by :func:`joint_interior_projector`."""
    k = cfg.interior_levels
    return np.r_[0:k, cfg.dim : cfg.dim + k]
