"""Exception hierarchy shared by all modules."""


class KappaTwistError(Exception):
    """Base class for every error raised by this package."""


class MismatchedOrder(KappaTwistError):
    pass


class NotInvertible(KappaTwistError):
    pass


class NonzeroConstantTerm(KappaTwistError):
    pass


class IndexOutOfRange(KappaTwistError):
    pass


class AlgebraMismatch(KappaTwistError):
    pass


class NoDecomposition(KappaTwistError):
    pass


class UnknownGenerator(KappaTwistError):
    pass


class RankMismatch(KappaTwistError):
    pass


class DeformedInput(KappaTwistError):
    pass


class NonNilpotentArgument(KappaTwistError):
    pass


class BadPlacement(KappaTwistError):
    pass


class InconsistentRewriteSystem(KappaTwistError):
    """Raised when a rule set fails the termination guard or the diamond check."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class MissingCoassociator(KappaTwistError):
    pass


class MissingR(KappaTwistError):
    pass


class BadDimension(KappaTwistError):
    pass


class NotACocycle(KappaTwistError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class ResidualNotCocycle(NotACocycle):
    pass


class NoSolutionWithinCaps(KappaTwistError):
    pass


class WindowExceeded(KappaTwistError):
    pass


class GeneratorMismatch(KappaTwistError):
    pass


class IncompatibleIso(KappaTwistError):
    pass


class DivergentContraction(KappaTwistError):
    def __init__(self, message, witnesses=None):
        super().__init__(message)
        self.witnesses = witnesses or []


class DimensionTooLarge(KappaTwistError):
    pass
