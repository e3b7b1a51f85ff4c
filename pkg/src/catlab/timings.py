"""Preparation-time estimates for observable cats under four schemes.

All times are dimensionless (units of 1/nu). Inter-pulse delays are taken to be zero.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import DomainError

# Default inputs: Lamb-Dicke-regime experiment vs. this scheme beyond it.
ETA_LDL = 0.202
OMEGA_LDL = 0.1
NU_HZ = 1e7
LIFETIME_S = 1.0
ETA_BEYOND = (2.0, 3.0)


class Scheme(str, enum.Enum):
    THIS_PAPER = "this_paper"
    REF2_SER = "ref2_SER"
    REF16_WER_LDL = "ref16_WER_LDL"
    REF14_SPONTANEOUS = "ref14_spontaneous"


def _positive(**kw):
    for name, value in kw.items():
        if not (value > 0 and math.isfinite(value)):
            raise DomainError(f"{name} must be positive and finite, got {value}")


def prep_time_this_paper(eta: float) -> float:
    """``sqrt(4 pi / eta)``; identical to the separation threshold ``sqrt(2 pi / xi)``."""
    _positive(eta=eta)
    return math.sqrt(4.0 * math.pi / eta)


def prep_time_ref2(eta: float) -> float:
    """Strong-excitation scheme: ``(pi/4)(sqrt(pi / (2 eta^2)) - 1)``, defined for ``eta <= sqrt(pi/2)``."""
    _positive(eta=eta)
    arg = math.pi / (2.0 * eta * eta)
    if arg < 1.0:
        raise DomainError(f"eta={eta} exceeds sqrt(pi/2); the estimate would be negative")
    return 0.25 * math.pi * (math.sqrt(arg) - 1.0)


def prep_time_ref16(eta: float, omega: float) -> float:
    """Weak-excitation Lamb-Dicke scheme: ``pi exp(eta^2/2) / (eta Omega)``."""
    _positive(eta=eta, omega=omega)
    return math.pi * math.exp(0.5 * eta * eta) / (eta * omega)


def prep_time_ref14_floor(nu_hz: float, lifetime_s: float) -> float:
    """Spontaneous-emission scheme floor: trap frequency times metastable lifetime."""
    _positive(nu_hz=nu_hz, lifetime_s=lifetime_s)
    return nu_hz * lifetime_s


_FORMULAS = {
    Scheme.THIS_PAPER: ("sqrt(4*pi/eta)", prep_time_this_paper),
    Scheme.REF2_SER: ("(pi/4)*(sqrt(pi/(2*eta^2)) - 1)", prep_time_ref2),
    Scheme.REF16_WER_LDL: ("pi*exp(eta^2/2)/(eta*omega)", prep_time_ref16),
    Scheme.REF14_SPONTANEOUS: ("nu_hz*lifetime_s", prep_time_ref14_floor),
}


def round_sig(value: float, digits: int = 3) -> float:
    if value == 0 or not math.isfinite(value):
        return value
    return round(value, digits - 1 - math.floor(math.log10(abs(value))))


def format_sig(value: float, digits: int = 3) -> str:
    """``4.09``, ``159``, ``1.00e7``: fixed notation below 1e4, else mantissa/exponent."""
    if value != 0 and (abs(value) >= 1e4 or abs(value) < 1e-3):
        mantissa, exp = f"{value:.{digits - 1}e}".split("e")
        return f"{mantissa}e{int(exp)}"
    decimals = max(0, digits - 1 - math.floor(math.log10(abs(value)))) if value else digits - 1
    return f"{round_sig(value, digits):.{decimals}f}"


@dataclass(frozen=True)
class TimingRow:
    scheme: Scheme
    inputs: dict = field(hash=False)
    value: float

    @property
    def formula(self) -> str:
        return _FORMULAS[self.scheme][0]

    @property
    def display(self) -> str:
        return format_sig(self.value)

    def recompute(self) -> float:
        return _FORMULAS[self.scheme][1](**self.inputs)


def make_row(scheme: Scheme, **inputs) -> TimingRow:
    return TimingRow(scheme=scheme, inputs=dict(inputs), value=_FORMULAS[scheme][1](**inputs))


def comparison_table(
    eta_ldl: float = ETA_LDL,
    omega: float = OMEGA_LDL,
    eta_beyond: float | tuple[float, ...] = ETA_BEYOND,
    nu_hz: float = NU_HZ,
    lifetime_s: float = LIFETIME_S,
) -> list[TimingRow]:
    """Rows: strong-excitation, weak-excitation LDL, one per beyond-LDL eta, spontaneous-emission floor."""
    if isinstance(eta_beyond, (int, float)):
        eta_beyond = (eta_beyond,)
    rows = [
        make_row(Scheme.REF2_SER, eta=eta_ldl),
        make_row(Scheme.REF16_WER_LDL, eta=eta_ldl, omega=omega),
    ]
    rows += [make_row(Scheme.THIS_PAPER, eta=e) for e in eta_beyond]
    rows.append(make_row(Scheme.REF14_SPONTANEOUS, nu_hz=nu_hz, lifetime_s=lifetime_s))
    return rows
