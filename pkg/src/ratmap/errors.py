"""Exception hierarchy.

Validation failures derive from `ModelError`; failed hypotheses of a
computation (the inputs are valid but the requested construction does not
apply to them) derive from `PreconditionError`.  The CLI maps the two
families to distinct exit codes.
"""


class RatmapError(Exception):
    pass


class ModelError(RatmapError, ValueError):
    """An input does not describe a valid algebra."""


class MixedAlgebras(ModelError):
    pass


class NonPositiveDegreeGenerator(ModelError):
    pass


class DegreeMismatch(ModelError):
    pass


class NotTriangular(ModelError):
    pass


class NotSquareZero(ModelError):
    pass


class NotAssociative(ModelError):
    pass


class NotGradedCommutative(ModelError):
    pass


class LeibnizFailure(ModelError):
    pass


class NoUnit(ModelError):
    pass


class UnknownIdentifier(ModelError):
    pass


class DSLSyntaxError(ModelError):
    def __init__(self, message, line, column, expected=()):
        self.line = line
        self.column = column
        self.expected = tuple(expected)
        text = f"{line}:{column}: {message}"
        if self.expected:
            text += " (expected " + ", ".join(self.expected) + ")"
        super().__init__(text)


class PreconditionError(RatmapError):
    """Valid inputs that fall outside the hypotheses of an operation."""


class InvalidParameter(PreconditionError, ValueError):
    pass


class NotMinimal(PreconditionError):
    pass


class UnsolvedPredecessor(PreconditionError):
    pass


class NotDifferentialIdeal(PreconditionError):
    pass


class NoWitness(PreconditionError):
    pass


class PreconditionFailed(PreconditionError):
    pass
