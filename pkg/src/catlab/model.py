"""Hamiltonians of the Raman-driven trapped ion and the rotating transformation T."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, RegimeWarning
from .fock import (
    SpaceConfig,
    embed_blocks,
    exp_x,
    interior_indices,
    kron_internal,
    ladder_operators,
    number_operator,
)

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |e><g|
SIGMA_MINUS = SIGMA_PLUS.T.copy()
EYE2 = np.eye(2, dtype=complex)

DEFAULT_WER_THRESHOLD = 0.1


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless model parameters (frequencies in units of the trap frequency).

    eta      effective Lamb-Dicke parameter (sum of the two beam parameters)
    omega    Rabi frequency
    delta    detuning (omega_0 - omega_l) / nu
    """

    eta: float
    omega: float = 0.0
    delta: float = 0.0
    eta_pair: tuple[float, float] | None = None
    nu_hz: float | None = None

    def __post_init__(self):
        if not (self.eta > 0 and math.isfinite(self.eta)):
            raise ConfigurationError(f"eta must be positive, got {self.eta}")
        if not (self.omega >= 0 and math.isfinite(self.omega)):
            raise ConfigurationError(f"omega must be non-negative, got {self.omega}")
        if not math.isfinite(self.delta):
            raise ConfigurationError(f"delta must be finite, got {self.delta}")
        if self.eta_pair is not None:
            if len(self.eta_pair) != 2 or abs(sum(self.eta_pair) - self.eta) > 1e-12:
                raise ConfigurationError(f"eta_pair {self.eta_pair} must sum to eta={self.eta}")
        if self.nu_hz is not None and not self.nu_hz > 0:
            raise ConfigurationError(f"nu_hz must be positive, got {self.nu_hz}")

    @property
    def xi(self) -> float:
        return self.eta / 2.0

    @property
    def epsilon(self) -> float:
        return self.delta / 2.0


@dataclass(frozen=True)
class RegimeFlags:
    wer_ok: bool
    beyond_ldl: bool
    wer_threshold: float = DEFAULT_WER_THRESHOLD


def regime_flags(p: ModelParams, wer_threshold: float = DEFAULT_WER_THRESHOLD) -> RegimeFlags:
    return RegimeFlags(wer_ok=p.omega <= wer_threshold, beyond_ldl=p.xi >= 1.0, wer_threshold=wer_threshold)


def params_new(
    eta: float,
    omega: float = 0.0,
    delta: float = 0.0,
    *,
    eta_pair: tuple[float, float] | None = None,
    nu_hz: float | None = None,
    wer_threshold: float = DEFAULT_WER_THRESHOLD,
    warn: bool = True,
) -> tuple[ModelParams, RegimeFlags]:
    """Validate parameters and classify the regime.

    Leaving the weak-excitation / beyond-LDL regime only emits a
    :class:`RegimeWarning`; the formulas can still be evaluated there.
    """
    p = ModelParams(eta=eta, omega=omega, delta=delta, eta_pair=eta_pair, nu_hz=nu_hz)
    flags = regime_flags(p, wer_threshold)
    if warn and not flags.wer_ok:
        warnings.warn(f"omega={omega} exceeds weak-excitation threshold {wer_threshold}", RegimeWarning, stacklevel=2)
    if warn and not flags.beyond_ldl:
        warnings.warn(f"xi={p.xi} < 1: inside the Lamb-Dicke regime", RegimeWarning, stacklevel=2)
    return p, flags


def displacement_D(p: ModelParams, cfg: SpaceConfig) -> np.ndarray:
    """``D = exp(i xi (a + a_dag))``."""
    return exp_x(-p.xi, cfg)


def h_lab(p: ModelParams, cfg: SpaceConfig) -> np.ndarray:
    """Lab-frame Hamiltonian

    ``(Delta/2) sz + a_dag a + (Omega/2)[s+ exp(i eta X) + s- exp(-i eta X)]``, ``X = a + a_dag``.
    """
    drive = exp_x(-p.eta, cfg)
    eye = np.eye(cfg.dim, dtype=complex)
    return (
        0.5 * p.delta * kron_internal(SIGMA_Z, eye)
        + kron_internal(EYE2, number_operator(cfg))
        + 0.5 * p.omega * (kron_internal(SIGMA_PLUS, drive) + kron_internal(SIGMA_MINUS, drive.conj().T))
    )


def transform_T(p: ModelParams, cfg: SpaceConfig) -> np.ndarray:
    """``T = (1/sqrt 2) [[D^dag, D], [-D^dag, D]]``."""
    D = displacement_D(p, cfg)
    Dd = D.conj().T
    return embed_blocks(Dd, D, -Dd, D) / math.sqrt(2.0)


def h_rotated_reduced(p: ModelParams, cfg: SpaceConfig) -> np.ndarray:
    """``a_dag a - i xi (a_dag - a) sx - eps sx + xi^2``.

    The constant ``xi^2`` is kept in the matrix so propagators carry the
    matching global phase.
    """
    a, ad = ladder_operators(cfg)
    eye = np.eye(cfg.dim, dtype=complex)
    return (
        kron_internal(EYE2, number_operator(cfg))
        - 1j * p.xi * kron_internal(SIGMA_X, ad - a)
        - p.epsilon * kron_internal(SIGMA_X, eye)
        + p.xi**2 * np.eye(cfg.joint_dim)
    )


def h_rotated_full(p: ModelParams, cfg: SpaceConfig) -> np.ndarray:
    """Rotated-frame Hamiltonian, built term by term: reduced form plus ``(Omega/2) sz``."""
    return h_rotated_reduced(p, cfg) + 0.5 * p.omega * kron_internal(SIGMA_Z, np.eye(cfg.dim))


def rotated_frame_defect(p: ModelParams, cfg: SpaceConfig) -> float:
    """``max |P (T H_lab T^dag - H_rot) P|`` on the interior subspace."""
    T = transform_T(p, cfg)
    diff = T @ h_lab(p, cfg) @ T.conj().T - h_rotated_full(p, cfg)
    idx = interior_indices(cfg)
    return float(np.max(np.abs(diff[np.ix_(idx, idx)])))
