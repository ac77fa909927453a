"""Exception hierarchy shared across the package.

Protocol errors carry a short machine-readable code that the server echoes
in the server-event emitted before closing an offending connection.
"""

from __future__ import annotations


class EmovoiceError(Exception):
    """Base class for all package errors."""

    code = "error"


# -- wire protocol ----------------------------------------------------------

class ProtocolError(EmovoiceError):
    code = "protocol_error"


class BadMagic(ProtocolError):
    code = "bad_magic"


class UnsupportedVersion(ProtocolError):
    code = "unsupported_version"


class TruncatedPayload(ProtocolError):
    code = "truncated_payload"


class UnknownKind(ProtocolError):
    code = "unknown_kind"


class PayloadTooLarge(ProtocolError):
    code = "payload_too_large"


class OddSampleBytes(ProtocolError):
    code = "odd_sample_bytes"


class UnsupportedRate(ProtocolError):
    code = "unsupported_rate"


class UndecodableFrame(ProtocolError):
    code = "undecodable_frame"


# -- buffers / sessions -----------------------------------------------------

class SessionClosed(EmovoiceError):
    code = "session_closed"


# -- VAD / endpointing ------------------------------------------------------

class OutOfOrderFrame(EmovoiceError):
    code = "out_of_order_frame"


class EmptyCorpus(EmovoiceError):
    code = "empty_corpus"


# -- dialogue ---------------------------------------------------------------

class NonMonotonicTurnId(EmovoiceError):
    code = "non_monotonic_turn_id"


class UnknownTurnId(EmovoiceError):
    code = "unknown_turn_id"


class NotUserTurn(EmovoiceError):
    code = "not_user_turn"


class BudgetUnsatisfiable(EmovoiceError):
    code = "budget_unsatisfiable"


# -- adapters ---------------------------------------------------------------

class AdapterError(EmovoiceError):
    code = "adapter_error"


class Timeout(AdapterError):
    code = "timeout"


class BackendError(AdapterError):
    code = "backend_error"

    def __init__(self, status: int, body: str = ""):
        self.status = status
        self.body = body
        super().__init__(f"backend returned {status}: {body[:200]}")


class InvalidInput(AdapterError):
    code = "invalid_input"


class NoFaceDetected(AdapterError):
    code = "no_face_detected"


class AdapterUnavailable(AdapterError):
    code = "adapter_unavailable"


# -- bench ------------------------------------------------------------------

class BackendNotFake(EmovoiceError):
    code = "backend_not_fake"


class IncompleteGrid(EmovoiceError):
    code = "incomplete_grid"
