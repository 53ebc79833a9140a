"""Exception hierarchy.

Every error carries an ``exit_code`` used by the command-line front end:
2 for parse/format problems, 3 for numeric/domain problems.
"""


class SemdisError(Exception):
    exit_code = 3


class FormatError(SemdisError):
    """Input data violates a file or construction contract."""

    exit_code = 2

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class UnknownToken(FormatError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class NonPositiveWeight(FormatError):
    pass


class DuplicateEdge(FormatError):
    pass


class SelfLoop(FormatError):
    pass


class MalformedLine(FormatError):
    pass


class DuplicateFeature(MalformedLine):
    pass


class EmptyConcept(FormatError):
    pass


class EmptyVocabulary(FormatError):
    pass


class EmptyIntersection(SemdisError):
    pass


class DanglingNode(SemdisError):
    pass


class EmptyNetwork(SemdisError):
    pass


class NoEdges(SemdisError):
    pass


class EmptyInput(SemdisError):
    pass


class LengthMismatch(SemdisError):
    pass


class VocabularyMismatch(SemdisError):
    pass


class InvalidRunCount(SemdisError):
    pass
