"""Exception and warning types raised across catlab."""


class CatlabError(Exception):
    """Base class for all catlab errors."""


class ConfigurationError(CatlabError, ValueError):
    """Invalid space configuration or model parameters."""


class ContractViolation(CatlabError, ValueError):
    """An input broke a documented precondition (e.g. non-Hermitian generator)."""


class DomainError(CatlabError, ValueError):
    """A formula was evaluated outside the range where it is defined."""


class TruncationError(CatlabError):
    """The Fock truncation is too small for the coherent amplitudes in play.

    Attributes
    ----------
    required_dim : int
        Smallest dimension accepted by the adequacy rule.
    dim : int
        Dimension that was actually supplied.
    """

    def __init__(self, required_dim: int, dim: int, amplitude: float):
        self.required_dim = required_dim
        self.dim = dim
        self.amplitude = amplitude
        super().__init__(
            f"Fock truncation dim={dim} is inadequate for coherent amplitude "
            f"|alpha|={amplitude:.4g}; need dim >= {required_dim}"
        )


class TruncationWarning(UserWarning):
    """Emitted instead of TruncationError when a caller opts out of strict checks."""


class RegimeWarning(UserWarning):
    """Parameters lie outside the weak-excitation / beyond-Lamb-Dicke regime."""
