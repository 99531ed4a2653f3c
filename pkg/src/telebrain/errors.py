"""Error types shared across the store, runtime, and wire protocol.

Every error carries a short machine-readable ``code`` that the CLI emits in
its JSON error object and the wire protocol maps onto typed error frames.
"""

from __future__ import annotations


class TelebrainError(Exception):
    code = "error"

    def __init__(self, message: str, *, code: str | None = None, details=None):
        super().__init__(message)
        if code is not None:
            self.code = code
        self.details = details


class NotFoundError(TelebrainError):
    code = "not-found"


class LockedError(TelebrainError):
    """Mutation or deletion attempted on a locked object."""

    code = "locked"


class RejectedError(TelebrainError):
    """Input refused before any state changed (bad passcode, bad media, ...)."""

    code = "rejected"


class ReferentialError(TelebrainError):
    """A save or delete would break references between stored objects."""

    code = "referential-integrity"


class JoinError(TelebrainError):
    code = "join-rejected"


class PerformanceGoneError(JoinError):
    code = "gone"


class CapacityError(JoinError):
    code = "capacity"


class CapabilityError(TelebrainError):
    """Sender or receiver role lacks the required functionality flag."""

    code = "capability"


class RoutingError(TelebrainError):
    """Target resolution produced an empty set; details lists per-receiver reasons."""

    code = "no-targets"


class ProtocolError(TelebrainError):
    """Wire-level violation (bad frame, unknown type, seq regression)."""

    code = "protocol"
