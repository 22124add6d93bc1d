"""Exception hierarchy shared by every module of the package."""


class WignerError(Exception):
    """Base class for all errors raised by ``wignerepr``."""


class DomainError(WignerError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedArityError(WignerError, ValueError):
    """The operation is only defined for a particular number of qubits."""


class ConsistencyError(WignerError, ArithmeticError):
    """A numerical result violated an internal invariant (e.g. complex Wigner value)."""


class ValidationError(WignerError, ValueError):
    """A matrix failed density-matrix validation.

    Attributes
    ----------
    report : DensityReport
        Per-invariant defect magnitudes.
    matrix : numpy.ndarray
        The offending matrix.
    """

    def __init__(self, report, matrix=None):
        self.report = report
        self.matrix = matrix
        super().__init__(report.describe())


class ImpossibleOutcomeError(WignerError, ValueError):
    """A measurement outcome with zero prior probability was requested."""

    def __init__(self, variable, outcome, prior_prob):
        self.variable = variable
        self.outcome = outcome
        self.prior_prob = prior_prob
        super().__init__(
            f"outcome {outcome} of {variable} is impossible "
            f"(prior probability {prior_prob:.3g})"
        )
