"""Exception taxonomy shared by every layer.

Each exception carries a short machine-readable ``code`` drawn from a closed
enum so the HTTP facade and the CLI can emit uniform error payloads.
"""

from __future__ import annotations

from typing import Any


class EvoforgeError(Exception):
    """Base class for all domain errors."""

    code = "internal"

    def __init__(self, message: str, detail: Any = None):
        super().__init__(message)
        self.message = message
        self.detail = detail

    def as_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"code": self.code, "message": self.message}
        if self.detail is not None:
            payload["detail"] = self.detail
        return payload


class ValidationError(EvoforgeError):
    """Input violates a documented precondition or range."""

    code = "validation"


class DimensionError(ValidationError):
    """Vector or matrix has the wrong length/shape."""


class ConfigurationError(ValidationError):
    """Configuration values are out of range or inconsistent."""


class FormatError(ValidationError):
    """Serialized bytes do not parse; ``detail`` carries the byte offset."""

    def __init__(self, message: str, offset: int | None = None):
        detail = {"offset": offset} if offset is not None else None
        super().__init__(message, detail)
        self.offset = offset


class IntegrityError(FormatError):
    """Bytes parse structurally but the checksum does not match."""


class NotFoundError(EvoforgeError):
    """Referenced session or individual does not exist."""

    code = "not_found"


class ConflictError(EvoforgeError):
    """Request references stale state (e.g. an individual no longer in the pair)."""

    code = "conflict"


class JudgmentError(ConflictError):
    """A judgment names an individual that is not in the presented population."""


class StateError(EvoforgeError):
    """Operation not permitted in the session's current status."""

    code = "state"


class InternalError(EvoforgeError):
    code = "internal"
