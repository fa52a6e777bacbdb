"""Exception types raised across the package."""


class EightVertexError(Exception):
    """Base class for all package errors."""


class ZeroConstantTerm(EightVertexError):
    pass


class SingularConstantTerm(EightVertexError):
    pass


class IncompatibleExponents(EightVertexError):
    pass


class TagMismatch(EightVertexError):
    pass


class DivergentBase(EightVertexError):
    pass


class ModulusOne(EightVertexError):
    pass


class BadModularParam(EightVertexError):
    pass


class BadNome(EightVertexError):
    pass


class DegenerateQ(EightVertexError):
    pass


class IncompatibleWeights(EightVertexError):
    pass


class RecursionInconsistent(EightVertexError):
    pass


class InconsistentRatios(EightVertexError):
    pass


class UnderdeterminedSystem(EightVertexError):
    pass


class ConvergenceDomain(EightVertexError):
    pass


class ProductDivergence(EightVertexError):
    pass


class ParameterConditionViolated(EightVertexError):
    pass


class ResonantIndices(EightVertexError):
    pass


class ConventionMismatch(EightVertexError):
    """Theta-function comparison failed; ``table`` holds per-candidate deviations."""

    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table or {}
