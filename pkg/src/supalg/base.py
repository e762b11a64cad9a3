"""Exceptions and the verdict record shared by every checking routine."""

from dataclasses import dataclass, field
from typing import Any

SCHEMA = "supalg/1"


class SupalgError(Exception):
    """Base class for workbench errors."""


class CarrierMismatch(SupalgError, ValueError):
    pass


class ArityError(SupalgError, ValueError):
    pass


class SizeLimitError(SupalgError, ValueError):
    pass


class InfiniteSupportError(SupalgError):
    """An operation on the integer line would produce infinitely many pairs."""


class HypothesisError(SupalgError, ValueError):
    """A theorem was invoked on inputs that violate its hypotheses."""


class EncodingError(SupalgError, ValueError):
    pass


class ParseError(SupalgError, ValueError):
    pass


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.  ``witness`` is set whenever ``holds`` is false."""

    holds: bool
    witness: Any = None
    detail: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def __bool__(self):
        return self.holds

    def to_json(self):
        return {"holds": self.holds, "witness": _jsonable(self.witness), "detail": self.detail}


def _jsonable(x):
    if x is None or isinstance(x, (bool, int, float, str)):
        return x
    if hasattr(x, "to_json"):
        return x.to_json()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return repr(x)
