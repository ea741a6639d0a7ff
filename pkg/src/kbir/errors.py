"""Exception types shared across the engine.

Every error carries a stable ``kind`` string; the CLI and the HTTP service
use it to build structured error payloads without inspecting class names.
Parser and evaluator errors additionally carry a 1-based line and column.
"""

from __future__ import annotations


class KbirError(Exception):
    """Base class for all engine errors."""

    kind = "Error"

    def __init__(self, message: str, *, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.message = message
        self.line = line
        self.column = column

    def payload(self) -> dict:
        """Structured form used by the service and the CLI JSON output."""
        return {
            "kind": self.kind,
            "message": self.message,
            "line": self.line,
            "column": self.column,
        }


class DuplicateIdError(KbirError):
    kind = "DuplicateId"


class InvalidIdError(KbirError):
    kind = "InvalidId"


class DanglingReferenceError(KbirError):
    kind = "DanglingReference"


class PolyhierarchyViolationError(KbirError):
    kind = "PolyhierarchyViolation"


class HierarchyCycleError(KbirError):
    kind = "HierarchyCycle"


class DuplicateLabelError(KbirError):
    kind = "DuplicateLabel"


class SynonymCollisionError(KbirError):
    kind = "SynonymCollision"


class InvalidRelationTypeError(KbirError):
    kind = "InvalidRelationType"


class NotFoundError(KbirError):
    kind = "NotFound"


class AmbiguousError(KbirError):
    kind = "Ambiguous"


class UnknownEntityError(KbirError):
    kind = "UnknownEntity"


class UnknownRelationTypeError(KbirError):
    kind = "UnknownRelationType"


class QuerySyntaxError(KbirError):
    kind = "SyntaxError"


class DuplicateRuleError(KbirError):
    kind = "DuplicateRule"


class UnknownSelectVariableError(KbirError):
    kind = "UnknownSelectVariable"


class UnknownPredicateError(KbirError):
    kind = "UnknownPredicate"


class UnknownRoleError(KbirError):
    kind = "UnknownRole"


class UnboundEqualityError(KbirError):
    kind = "UnboundEquality"


class UnboundVariableError(KbirError):
    kind = "UnboundVariable"


class ConstantNotFoundError(KbirError):
    kind = "ConstantNotFound"


class InvalidArgumentError(KbirError):
    kind = "InvalidArgument"


class TimeoutError_(KbirError):
    kind = "Timeout"


class DuplicateDocIdError(KbirError):
    kind = "DuplicateDocId"


class UnknownSubjectError(KbirError):
    kind = "UnknownSubject"


class XmlMalformedError(KbirError):
    kind = "XmlMalformed"


class UnresolvedFragmentRefError(KbirError):
    kind = "UnresolvedFragmentRef"


class AssociationArityError(KbirError):
    kind = "AssociationArityNot2"


class SchemaViolationError(KbirError):
    kind = "SchemaViolation"

    def __init__(self, message: str, *, path: str = "$"):
        super().__init__(message)
        self.path = path

    def payload(self) -> dict:
        data = super().payload()
        data["path"] = self.path
        return data
