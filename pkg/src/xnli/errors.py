"""Exception hierarchy shared by the engine, the HTTP service, and the CLI.

Every error carries a stable ``code`` so the service and CLI can render the
same ``{error: {code, message}}`` payload.
"""

from __future__ import annotations


class XnliError(Exception):
    """Base class for all engine errors."""

    code = "Error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def to_json(self) -> dict:
        return {"error": {"code": self.code, "message": self.message}}


class MalformedCsv(XnliError):
    code = "MalformedCsv"


class EmptyDataset(XnliError):
    code = "EmptyDataset"


class DuplicateHeader(XnliError):
    code = "DuplicateHeader"


class UnknownAttribute(XnliError):
    code = "UnknownAttribute"


class EmptyQuery(XnliError):
    code = "EmptyQuery"


class NotANumber(XnliError):
    code = "NotANumber"


class Unencodable(XnliError):
    code = "Unencodable"


class InvalidAdjustment(XnliError):
    code = "InvalidAdjustment"


class InconsistentDelta(XnliError):
    code = "InconsistentDelta"


class SpecDatasetMismatch(XnliError):
    code = "SpecDatasetMismatch"


class InvalidSpec(XnliError):
    code = "InvalidSpec"


class NoValidExample(XnliError):
    code = "NoValidExample"


class NoCurrentSpec(XnliError):
    code = "NoCurrentSpec"


class Busy(XnliError):
    code = "Busy"
