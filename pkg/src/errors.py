"""Exception types raised by qmi. Only the CLI turns them into exit codes."""
from __future__ import annotations


class QMIError(Exception):
    """Base class for every error raised by the toolkit."""


class ValidationError(QMIError, ValueError):
    """An object failed one of its construction invariants."""


class DimensionMismatchError(QMIError, ValueError):
    pass


class NonHermitianError(ValidationError):
    pass


class NotPSDError(ValidationError):
    pass


class NotPerpendicularError(QMIError, ValueError):
    """a ⊕ b requested for effects whose sum exceeds I."""


class LabelError(QMIError, KeyError):
    """Unknown outcome label or a label collision."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class ZeroProbabilityError(QMIError, ValueError):
    """Conditioning on an outcome of (numerically) zero probability."""


class SobEscapeError(QMIError, ValueError):
    """A sub-observable sum leaves Sob(H)."""


class PreconditionError(QMIError, ValueError):
    pass


class ScenarioError(QMIError, ValueError):
    """Scenario parse, schema or reference-resolution failure."""


class UnknownNameError(QMIError, KeyError):
    """Unknown demo, suite or search family name."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
