"""Exception classes for bredon-obstruction."""

from datetime import datetime, timezone
from typing import Any


class BredonError(Exception):
    """Base exception for bredon-obstruction."""

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        code: str | None = None,
        original_error: Exception | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.code = code
        self.original_error = original_error
        self.timestamp = datetime.now(timezone.utc)

    @property
    def user_friendly_message(self) -> str:
        """Get a user-friendly error message."""
        return self.message

    def get_details(self) -> dict[str, Any]:
        """Get error details for logging."""
        return {
            "name": self.__class__.__name__,
            "message": self.message,
            "code": self.code,
            "exit_code": self.exit_code,
            "timestamp": self.timestamp.isoformat(),
        }

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}(message={self.message!r}, code={self.code!r})"


class NotAGroupError(BredonError):
    """A multiplication table violates a group axiom."""

    def __init__(self, axiom: str, witness: tuple[int, ...], message: str | None = None):
        super().__init__(
            message=message or f"table is not a group: {axiom} fails at {witness}",
            code="NOT_A_GROUP",
        )
        self.axiom = axiom
        self.witness = witness

    @property
    def user_friendly_message(self) -> str:
        return f"Not a group ({self.axiom}): {self.message}"

    def get_details(self) -> dict[str, Any]:
        details = super().get_details()
        details.update({"axiom": self.axiom, "witness": list(self.witness)})
        return details


class CompositionMismatchError(BredonError):
    """Two orbit morphisms are not composable."""

    def __init__(self, message: str):
        super().__init__(message=message, code="COMPOSITION_MISMATCH")


class UnknownSubgroupError(BredonError):
    """A subgroup is not a member of the family in use."""

    def __init__(self, message: str):
        super().__init__(message=message, code="UNKNOWN_SUBGROUP")


class InvalidMorphismError(BredonError):
    """An element a does not induce a G-map G/H -> G/K (H^a is not contained in K)."""

    def __init__(self, message: str):
        super().__init__(message=message, code="INVALID_MORPHISM")


class NotAComplexError(BredonError):
    """Composite g∘f is nonzero modulo the relations of the target."""

    def __init__(self, message: str, witness: int):
        super().__init__(message=message, code="NOT_A_COMPLEX")
        self.witness = witness

    def get_details(self) -> dict[str, Any]:
        details = super().get_details()
        details["witness"] = self.witness
        return details


class FunctorialityViolationError(BredonError):
    """A coefficient system fails M(g∘f) = M(f)·M(g) modulo relations."""

    def __init__(self, message: str, pair: tuple[str, str], witness: int):
        super().__init__(message=message, code="FUNCTORIALITY_VIOLATION")
        self.pair = pair
        self.witness = witness

    @property
    def user_friendly_message(self) -> str:
        return (
            f"Coefficient system is not functorial on {self.pair[0]} then {self.pair[1]} "
            f"(generator {self.witness}): {self.message}"
        )

    def get_details(self) -> dict[str, Any]:
        details = super().get_details()
        details.update({"pair": list(self.pair), "witness": self.witness})
        return details


class RelationViolationError(BredonError):
    """A morphism matrix does not carry relations into relations."""

    def __init__(self, message: str, morphism: str):
        super().__init__(message=message, code="RELATION_VIOLATION")
        self.morphism = morphism


class IncompleteSystemError(BredonError):
    """Composition closure left some orbit morphism without a matrix."""

    def __init__(self, message: str, morphism: str):
        super().__init__(message=message, code="INCOMPLETE_SYSTEM")
        self.morphism = morphism


class NotACochainComplexError(BredonError):
    """δ∘δ is nonzero modulo relations."""

    def __init__(self, message: str, degree: int, witness: str):
        super().__init__(message=message, code="NOT_A_COCHAIN_COMPLEX")
        self.degree = degree
        self.witness = witness


class InvalidComplexError(BredonError):
    """A G-CW-complex failed validation."""

    def __init__(self, message: str, violations: list[Any] | None = None):
        super().__init__(message=message, code="INVALID_COMPLEX")
        self.violations = violations or []

    def get_details(self) -> dict[str, Any]:
        details = super().get_details()
        details["violations"] = [str(v) for v in self.violations]
        return details


class DegreeMismatchError(BredonError):
    """Cochain degrees do not fit the requested operation."""

    def __init__(self, message: str, expected: int | None = None, actual: int | None = None):
        super().__init__(message=message, code="DEGREE_MISMATCH")
        self.expected = expected
        self.actual = actual


class OracleMismatchError(BredonError):
    """The literal submodule construction disagrees with the reduced complex."""

    def __init__(self, message: str, degree: int):
        super().__init__(message=message, code="ORACLE_MISMATCH")
        self.degree = degree


class InstanceParseError(BredonError):
    """The instance file is malformed or has unresolved references."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        location: str | None = None,
        original_error: Exception | None = None,
    ):
        super().__init__(message=message, code="PARSE_ERROR", original_error=original_error)
        self.location = location

    @property
    def user_friendly_message(self) -> str:
        if self.location:
            return f"Parse error at '{self.location}': {self.message}"
        return f"Parse error: {self.message}"

    def get_details(self) -> dict[str, Any]:
        details = super().get_details()
        details["location"] = self.location
        return details


class UnknownCochainError(InstanceParseError):
    """A named cochain is not present in the instance file."""

    def __init__(self, name: str):
        super().__init__(message=f"no cochain named {name!r}", location=f"cochains.{name}")
        self.code = "UNKNOWN_COCHAIN"
        self.name = name


def format_error_for_logging(error: BredonError) -> str:
    """Format error for logging."""
    import json

    details = error.get_details()
    return f"{error.user_friendly_message}\nDetails: {json.dumps(details, indent=2, default=str)}"
