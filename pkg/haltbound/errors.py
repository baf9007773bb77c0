"""Exceptions raised by haltbound."""

from __future__ import annotations

from public import public


@public
class HaltboundError(Exception):
    """Base class for every error raised on purpose by haltbound."""


@public
class DomainError(HaltboundError, ValueError):
    """A formula was evaluated outside of the domain where it is defined."""


@public
class ConsistencyError(HaltboundError, AssertionError):
    """An interval endpoint escaped the range it is guaranteed to lie in.

    This always indicates a bug: endpoints are never clamped.
    """


@public
class DecodeError(HaltboundError, ValueError):
    """A bit string or serialized program could not be decoded."""


@public
class InvalidLength(DecodeError):
    """The bit string is empty or its length is not a multiple of 9."""


@public
class InvalidOpcode(DecodeError):
    """A 9-bit chunk starts with the reserved opcode pattern ``111``."""


@public
class InvalidCode(DecodeError):
    """A serialized ``L:hex`` program is malformed."""


@public
class CheckpointMismatch(HaltboundError):
    """A census checkpoint is missing or belongs to a different config."""


@public
class MalformedRecord(HaltboundError, ValueError):
    """A line of a census records file could not be parsed.

    Attributes
    ----------
    lineno
        The 1-based line number of the offending line.

    """

    def __init__(self, lineno: int, reason: str) -> None:
        super().__init__(f"line {lineno:d}: {reason}")
        self.lineno = lineno
        self.reason = reason
