"""Evolution operators: the factorized closed form and two spectral oracles.

``u_paper`` multiplies out the five-factor closed form of the rotated-frame
evolution. ``u_exact`` exponentiates the reduced rotated-frame Hamiltonian
spectrally and undoes the frame change; ``u_oracle_lab`` exponentiates the
full lab-frame Hamiltonian. The closed form is compared against ``u_exact``
by :func:`propagator_report`, which reports agreement without presuming it.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import asdict, dataclass

import numpy as np

from .errors import TruncationWarning
from .fock import (
    SpaceConfig,
    check_truncation,
    embed_blocks,
    exp_n,
    exp_p,
    interior_indices,
    ladder_operators,
    sigma_x_exp,
    unitarity_defect,
    unitary_from_generator,
)
from .model import ModelParams, displacement_D, h_lab, h_rotated_reduced, transform_T

AMPLITUDE_MISMATCH_TOL = 0.10


def state_amplitude_bound(p: ModelParams, t: float) -> float:
    """Largest coherent amplitude the protocol states reach, ``max(xi t^2/2, 2 xi)``."""
    return max(0.5 * p.xi * t * t, 2.0 * p.xi)


def paper_amplitude_bound(p: ModelParams, t: float) -> float:
    """Amplitude reached inside the factor chain: ``max(xi t^2/2 + xi|t| + xi, 2 xi)``."""
    return max(0.5 * p.xi * t * t + p.xi * abs(t) + p.xi, 2.0 * p.xi)


def psi1(cfg: SpaceConfig) -> np.ndarray:
    """``(|e> + |g>)|0> / sqrt 2``."""
    state = np.zeros(cfg.joint_dim, dtype=complex)
    state[0] = state[cfg.dim] = 1.0 / math.sqrt(2.0)
    return state


def u_exact(p: ModelParams, t: float, cfg: SpaceConfig, strict: bool = True) -> np.ndarray:
    """``T^dag exp(-i t H_red) T`` with the reduced rotated-frame Hamiltonian."""
    check_truncation(state_amplitude_bound(p, t), cfg, strict=strict)
    T = transform_T(p, cfg)
    return T.conj().T @ unitary_from_generator(h_rotated_reduced(p, cfg), t) @ T


def u_oracle_lab(p: ModelParams, t: float, cfg: SpaceConfig, strict: bool = True) -> np.ndarray:
    """``exp(-i t H_lab)``, keeping the ``(Omega/2) sz`` term the reduced form drops."""
    check_truncation(state_amplitude_bound(p, t), cfg, strict=strict)
    return unitary_from_generator(h_lab(p, cfg), t)


def u_paper(p: ModelParams, t: float, cfg: SpaceConfig, strict: bool = True) -> np.ndarray:
    """Five-factor closed form ``(1/2) e^{-i xi^2 t} M1 M2 M3 M4 M5``.

    M1  rows ``[A, -A]`` and ``[B, B]`` with ``A = e^{-iNt} D e^{-xi t (a_dag - a)}``,
        ``B = e^{-iNt} D^dag e^{xi t (a_dag - a)}``
    M2  ``exp(-xi t (a_dag - a) sx)``       (cosh / -sinh block)
    M3  ``exp(-i (xi/2) t^2 (a + a_dag) sx)`` (cos / -i sin block)
    M4  ``exp(i eps t sx)``
    M5  ``[[D^dag, D], [-D^dag, D]]``

    Every factor is an exact spectral exponential, so the product is unitary
    to rounding whatever the truncation.
    """
    check_truncation(paper_amplitude_bound(p, t), cfg, strict=strict)
    xi, eps = p.xi, p.epsilon
    D = displacement_D(p, cfg)
    Dd = D.conj().T
    rot = exp_n(t, cfg)
    A = rot @ D @ exp_p(-xi * t, cfg)
    B = rot @ Dd @ exp_p(xi * t, cfg)
    m1 = embed_blocks(A, -A, B, B)
    m2 = sigma_x_exp("p", -xi * t, cfg)
    m3 = sigma_x_exp("x", 0.5 * xi * t * t, cfg)
    m4 = sigma_x_exp("1", -eps * t, cfg)
    m5 = embed_blocks(Dd, D, -Dd, D)
    return 0.5 * cmath.exp(-1j * xi * xi * t) * (m1 @ m2 @ m3 @ m4 @ m5)


def free_evolution(p: ModelParams, t: float, cfg: SpaceConfig) -> np.ndarray:
    """``exp(-i t (Delta/2 sz + a_dag a))``; what ``u_exact`` reduces to once the laser term is dropped."""
    rot = exp_n(t, cfg)
    half = 0.5 * p.delta * t
    return embed_blocks(cmath.exp(-1j * half) * rot, np.zeros_like(rot), np.zeros_like(rot), cmath.exp(1j * half) * rot)


def interior_distance(A: np.ndarray, B: np.ndarray, cfg: SpaceConfig) -> float:
    """``max |P (A - B) P|`` over the joint interior subspace."""
    idx = interior_indices(cfg)
    return float(np.max(np.abs((A - B)[np.ix_(idx, idx)])))


def paper_group_defect(p: ModelParams, s: float, cfg: SpaceConfig) -> float:
    """``max |U_paper(2s) - U_paper(s)^2|`` on the interior; nonzero means no one-parameter group."""
    u1 = u_paper(p, s, cfg, strict=False)
    u2 = u_paper(p, 2 * s, cfg, strict=False)
    return interior_distance(u2, u1 @ u1, cfg)


def branch_mean_a(state: np.ndarray, cfg: SpaceConfig) -> tuple[complex, complex]:
    """``<a>`` of the normalized |e> and |g> motional branches (0 for an empty branch)."""
    a, _ = ladder_operators(cfg)
    out = []
    for branch in (state[: cfg.dim], state[cfg.dim :]):
        norm2 = float(np.vdot(branch, branch).real)
        out.append(complex(np.vdot(branch, a @ branch) / norm2) if norm2 > 1e-14 else 0j)
    return out[0], out[1]


@dataclass(frozen=True)
class ComparisonReport:
    """Closed-form vs. exact-oracle diagnostics at one time ``t``."""

    t: float
    unitarity_defect_paper: float
    unitarity_defect_exact: float
    interior_operator_distance: float
    state_infidelity: float
    branch_amplitudes_paper: tuple[complex, complex]
    branch_amplitudes_exact: tuple[complex, complex]
    amplitude_mismatch: bool
    truncation_adequate: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("branch_amplitudes_paper", "branch_amplitudes_exact"):
            d[key] = [[z.real, z.imag] for z in d[key]]
        return d


def amplitudes_disagree(paper: tuple[complex, complex], exact: tuple[complex, complex], tol: float = AMPLITUDE_MISMATCH_TOL) -> bool:
    """True when any branch's ``|<a>|`` differs by more than ``tol`` relative to the larger one."""
    for zp, ze in zip(paper, exact):
        scale = max(abs(zp), abs(ze))
        if scale > 1e-6 and abs(abs(zp) - abs(ze)) > tol * scale:
            return True
    return False


def propagator_report(
    p: ModelParams,
    t: float,
    cfg: SpaceConfig,
    up: np.ndarray | None = None,
    ue: np.ndarray | None = None,
) -> ComparisonReport:
    """Compare ``u_paper`` with ``u_exact`` on the interior subspace and on ``psi1``.

    Never raises on truncation; inadequacy is recorded in ``truncation_adequate``.
    Already-built propagators for the same ``(p, t, cfg)`` may be passed in.
    """
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        adequate = check_truncation(paper_amplitude_bound(p, t), cfg, strict=False)
        if up is None:
            up = u_paper(p, t, cfg, strict=False)
        if ue is None:
            ue = u_exact(p, t, cfg, strict=False)
    start = psi1(cfg)
    sp, se = up @ start, ue @ start
    overlap = abs(np.vdot(sp, se)) ** 2 / (np.vdot(sp, sp).real * np.vdot(se, se).real)
    amp_p = branch_mean_a(sp, cfg)
    amp_e = branch_mean_a(se, cfg)
    return ComparisonReport(
        t=float(t),
        unitarity_defect_paper=unitarity_defect(up),
        unitarity_defect_exact=unitarity_defect(ue),
        interior_operator_distance=interior_distance(up, ue, cfg),
        state_infidelity=float(min(1.0, max(0.0, 1.0 - overlap))),
        branch_amplitudes_paper=amp_p,
        branch_amplitudes_exact=amp_e,
        amplitude_mismatch=amplitudes_disagree(amp_p, amp_e),
        truncation_adequate=adequate,
    )
