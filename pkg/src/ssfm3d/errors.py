"""Exception and warning types shared across the solver."""

from __future__ import annotations


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class DomainStateError(SolverError):
    """A field was supplied in the wrong real/spectral representation."""


class ConvergenceDomainError(SolverError):
    """A grid frequency lies outside the declared convergence domain of a symbol."""


class SingularSymbolError(SolverError):
    """The linear symbol evaluated to a non-finite value on a grid bin."""


class ModelEvaluationError(SolverError):
    """The nonlinear functional produced a non-finite value."""


class AuxiliaryBlowupError(SolverError):
    """The auxiliary-state integration left the finite range."""


class OracleError(SolverError):
    """A reference computation failed to converge or diverged."""


class ConfigError(SolverError):
    """Invalid run configuration. Carries a 1-based line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DumpFormatError(SolverError):
    """A field dump file is malformed, truncated, or of an unsupported version."""


class PropagationError(SolverError):
    """A substep failed during propagation.

    Attributes carry the slice index and substep label where the failure
    occurred, and (when raised by `run`) the last fully completed state.
    """

    def __init__(self, message: str, slice_index: int, substep: str):
        self.slice_index = slice_index
        self.substep = substep
        self.last_state = None
        super().__init__(f"slice {slice_index}, substep {substep}: {message}")


class AmplificationWarning(UserWarning):
    """An exponential multiplier overflowed or grew to an extreme magnitude."""


class TruncationWarning(UserWarning):
    """A coefficient-series symbol changed when the truncation order was raised."""


class NyquistWarning(UserWarning):
    """Spectral tail energy exceeded the configured threshold on some axis."""
