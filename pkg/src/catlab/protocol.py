"""Three-pulse cat preparation ``V . U(t) . V`` (or ``V'``) and shelving readout."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .fock import SpaceConfig, check_truncation, coherent_state, fock_state, kron_internal
from .model import ModelParams
from .propagators import psi1, u_exact, u_paper

SQRT2 = math.sqrt(2.0)


class Variant(str, enum.Enum):
    V = "V"
    V_PRIME = "Vprime"


class Engine(str, enum.Enum):
    PAPER = "paper"
    EXACT = "exact"


class CatSign(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


def pulse_v(cfg: SpaceConfig) -> np.ndarray:
    """``(1/sqrt 2)[[1, 1], [-1, 1]] (x) I``."""
    return kron_internal(np.array([[1, 1], [-1, 1]]) / SQRT2, np.eye(cfg.dim))


def pulse_v_prime(cfg: SpaceConfig) -> np.ndarray:
    """``(1/sqrt 2)[[1, -1], [1, 1]] (x) I``."""
    return kron_internal(np.array([[1, -1], [1, 1]]) / SQRT2, np.eye(cfg.dim))


def dark_state(cfg: SpaceConfig) -> np.ndarray:
    """``|g>|0>``."""
    return joint(np.zeros(cfg.dim), fock_state(0, cfg))


def joint(e_part: np.ndarray, g_part: np.ndarray) -> np.ndarray:
    return np.concatenate([e_part, g_part]).astype(complex)


def branch_alpha(p: ModelParams, t: float) -> complex:
    """Coherent amplitude on the |e> branch after ``U(t)``: ``i (xi/2) t^2 e^{-it}``."""
    return 1j * 0.5 * p.xi * t * t * cmath.exp(-1j * t)


def psi2_analytic(p: ModelParams, t: float, cfg: SpaceConfig, strict: bool = True) -> np.ndarray:
    """Closed-form state after ``U(t)`` acts on ``psi1``.

    ``(1/sqrt 2) e^{-i xi^2 t} [e^{-i eps t}|e>|beta> + e^{i eps t}|g>|-beta>]``
    with ``beta = i (xi/2) t^2 e^{-it}``.
    """
    beta = branch_alpha(p, t)
    check_truncation(beta, cfg, strict=strict)
    phase = cmath.exp(-1j * p.xi**2 * t) / SQRT2
    e_part = cmath.exp(-1j * p.epsilon * t) * coherent_state(beta, cfg, strict=False)
    g_part = cmath.exp(1j * p.epsilon * t) * coherent_state(-beta, cfg, strict=False)
    return phase * joint(e_part, g_part)


def branch_phase_diagnostic(p: ModelParams, t: float, cfg: SpaceConfig) -> dict:
    """Branch-by-branch comparison of ``u_paper psi1`` against :func:`psi2_analytic`.

    ``relative_phase`` is the argument of the ratio of the two branch overlaps;
    a nonzero value would mix the two cat parities after the final pulse.
    """
    numeric = u_paper(p, t, cfg) @ psi1(cfg)
    analytic = psi2_analytic(p, t, cfg)
    overlaps, fids = [], []
    for sl in (slice(0, cfg.dim), slice(cfg.dim, None)):
        x, y = numeric[sl], analytic[sl]
        ov = np.vdot(y, x)
        overlaps.append(ov)
        fids.append(float(abs(ov) ** 2 / (np.vdot(x, x).real * np.vdot(y, y).real)))
    ratio = overlaps[0] / overlaps[1]
    return {
        "fidelity_e": fids[0],
        "fidelity_g": fids[1],
        "overlap_e": overlaps[0],
        "overlap_g": overlaps[1],
        "relative_phase": float(cmath.phase(ratio)),
    }


@dataclass(frozen=True)
class ProtocolOutcome:
    """States along the preparation sequence and the extracted (unnormalized) cats.

    ``cat_plus``/``cat_minus`` follow the convention
    ``psi3 = (1/sqrt 2) e^{-i xi^2 t} (cat_plus|e> + cat_minus|g>)`` for variant V and
    ``psi3 = (1/sqrt 2) e^{-i xi^2 t} (-cat_minus|e> + cat_plus|g>)`` for V'.
    """

    psi1: np.ndarray
    psi2: np.ndarray
    psi3: np.ndarray
    variant: Variant
    engine: Engine
    t: float
    xi: float
    cat_plus: np.ndarray
    cat_minus: np.ndarray

    @property
    def weights(self) -> tuple[float, float]:
        """``(|cat_plus|^2 / 2, |cat_minus|^2 / 2)``."""
        return (
            float(np.vdot(self.cat_plus, self.cat_plus).real) / 2.0,
            float(np.vdot(self.cat_minus, self.cat_minus).real) / 2.0,
        )

    @property
    def dim(self) -> int:
        return self.cat_plus.shape[0]

    def branch_weights(self) -> tuple[float, float]:
        """Populations of |e> and |g> in ``psi3``."""
        d = self.dim
        e, g = self.psi3[:d], self.psi3[d:]
        return float(np.vdot(e, e).real), float(np.vdot(g, g).real)


def run_protocol(
    p: ModelParams,
    t: float,
    variant: Variant | str = Variant.V,
    engine: Engine | str = Engine.PAPER,
    cfg: SpaceConfig | None = None,
    strict: bool = True,
    propagator: np.ndarray | None = None,
) -> ProtocolOutcome:
    """Run ``V``, ``U(t)``, then ``V`` or ``V'`` from the dark state ``|g>|0>``.

    ``propagator`` may supply an already-built ``U(t)`` matching ``engine``.
    """
    variant = Variant(variant)
    engine = Engine(engine)
    if cfg is None:
        raise ConfigurationError("a SpaceConfig is required")
    first = pulse_v(cfg) @ dark_state(cfg)
    if propagator is None:
        build = u_paper if engine is Engine.PAPER else u_exact
        propagator = build(p, t, cfg, strict=strict)
    second = propagator @ first
    last_pulse = pulse_v(cfg) if variant is Variant.V else pulse_v_prime(cfg)
    third = last_pulse @ second

    unphase = SQRT2 * cmath.exp(1j * p.xi**2 * t)
    e_part, g_part = unphase * third[: cfg.dim], unphase * third[cfg.dim :]
    if variant is Variant.V:
        cat_plus, cat_minus = e_part, g_part
    else:
        cat_plus, cat_minus = g_part, -e_part
    return ProtocolOutcome(
        psi1=first,
        psi2=second,
        psi3=third,
        variant=variant,
        engine=engine,
        t=float(t),
        xi=p.xi,
        cat_plus=cat_plus,
        cat_minus=cat_minus,
    )


def cat_amplitude(p: ModelParams, k: int) -> float:
    """``(xi/8)(2k+1)^2 pi^2``: the cat amplitude at ``t = (2k+1) pi / 2``."""
    return p.xi * (2 * k + 1) ** 2 * math.pi**2 / 8.0


def cat_analytic(
    p: ModelParams, k: int, sign: CatSign | str, cfg: SpaceConfig, strict: bool = True
) -> tuple[np.ndarray, float]:
    """Normalized cat at ``t = (2k+1) pi / 2`` and its pre-normalization squared norm.

    The unnormalized state is
    ``(1/sqrt 2)[e^{i eps t}|-(-1)^k a_k> +- e^{-i eps t}|(-1)^k a_k>]``
    whose squared norm is ``1 +- cos(eps (2k+1) pi) exp(-2 a_k^2)``.
    """
    if k < 0 or int(k) != k:
        raise DomainError(f"k must be a non-negative integer, got {k}")
    sign = CatSign(sign)
    amp = cat_amplitude(p, k)
    check_truncation(amp, cfg, strict=strict)
    t = (2 * k + 1) * math.pi / 2.0
    s = (-1) ** k
    pm = 1.0 if sign is CatSign.PLUS else -1.0
    state = (
        cmath.exp(1j * p.epsilon * t) * coherent_state(-s * amp, cfg, strict=False)
        + pm * cmath.exp(-1j * p.epsilon * t) * coherent_state(s * amp, cfg, strict=False)
    ) / SQRT2
    norm2 = 1.0 + pm * math.cos(p.epsilon * (2 * k + 1) * math.pi) * math.exp(-2.0 * amp * amp)
    return state / np.linalg.norm(state), norm2


def gauge_fix(state: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate the global phase so the first amplitude above ``tol`` is real positive."""
    mags = np.abs(state)
    idx = np.flatnonzero(mags > tol * max(mags.max(), 1e-300))
    if idx.size == 0:
        return state.copy()
    lead = state[idx[0]]
    return state * (abs(lead) / lead)


@dataclass(frozen=True)
class MeasurementRecord:
    fluorescence: bool
    probability: float
    conditional_state: np.ndarray
    cat_sign: CatSign


def shelving_measure(
    proto: ProtocolOutcome,
    rng: np.random.Generator | None = None,
    forced: bool | None = None,
) -> MeasurementRecord:
    """Project the internal state by fluorescence on the |g> cycling transition.

    Pass either a seeded ``rng`` or a ``forced`` outcome (``True`` =
    fluorescence). ``probability`` is that of the returned outcome.
    """
    if (rng is None) == (forced is None):
        raise ConfigurationError("pass exactly one of rng or forced")
    p_e, p_g = proto.branch_weights()
    total = p_e + p_g
    p_fluor = min(1.0, max(0.0, p_g / total))
    fluor = bool(rng.random() < p_fluor) if rng is not None else bool(forced)
    prob = p_fluor if fluor else 1.0 - p_fluor
    if prob <= 1e-14:
        raise DomainError(f"outcome fluorescence={fluor} has zero probability")
    # |g> carries cat_minus for V and cat_plus for V'; |e> carries the other
    if proto.variant is Variant.V:
        sign = CatSign.MINUS if fluor else CatSign.PLUS
    else:
        sign = CatSign.PLUS if fluor else CatSign.MINUS
    cat = proto.cat_minus if sign is CatSign.MINUS else proto.cat_plus
    state = gauge_fix(cat / np.linalg.norm(cat))
    return MeasurementRecord(fluorescence=fluor, probability=prob, conditional_state=state, cat_sign=sign)


def sample_fluorescence(proto: ProtocolOutcome, seed: int, trials: int) -> np.ndarray:
    """Boolean fluorescence record of ``trials`` independent shelving shots."""
    rng = np.random.default_rng(seed)
    return np.array([shelving_measure(proto, rng=rng).fluorescence for _ in range(trials)])
