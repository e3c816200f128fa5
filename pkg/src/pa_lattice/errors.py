from __future__ import annotations


class PAError(Exception):
    """Base class for every error the engine reports.

    ``kind`` is the name used in the CLI's structured error object.
    """

    kind = "PAError"


class MalformedInput(PAError):
    kind = "MalformedInput"


class DimensionMismatch(PAError):
    kind = "DimensionMismatch"


class IdenticalComponents(PAError):
    kind = "IdenticalComponents"


class ExpressionTooLarge(PAError):
    kind = "ExpressionTooLarge"


class TooManyHyperplanes(PAError):
    kind = "TooManyHyperplanes"


class InternalInconsistency(PAError):
    kind = "InternalInconsistency"


class NotAComponent(PAError):
    kind = "NotAComponent"


class BadRadii(PAError):
    kind = "BadRadii"


class NotNonnegative(PAError):
    kind = "NotNonnegative"


class GridTooLarge(PAError):
    kind = "GridTooLarge"


class BadStep(PAError):
    kind = "BadStep"


class EngineUnavailable(PAError):
    kind = "EngineUnavailable"
