"""Numerical laboratory for Schrodinger-cat preparation with a trapped ion beyond the Lamb-Dicke limit."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    CatlabError,
    ConfigurationError,
    ContractViolation,
    DomainError,
    RegimeWarning,
    TruncationError,
    TruncationWarning,
)
from .fock import SpaceConfig, coherent_state, fidelity, unitary_from_generator  # noqa: E402
from .model import ModelParams, params_new  # noqa: E402
from .propagators import ComparisonReport, propagator_report, u_exact, u_oracle_lab, u_paper  # noqa: E402
from .protocol import Engine, Variant, cat_analytic, run_protocol, shelving_measure  # noqa: E402
