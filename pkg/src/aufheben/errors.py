"""Exception hierarchy.

Every domain error carries a short machine-readable ``code`` and an optional
``witness`` (the offending pair, triple, element, ...).  The CLI serializes
both to standard error.
"""

import os


class AufhebenError(Exception):
    code = "AufhebenError"

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

    def to_json(self):
        return {"error": self.code, "message": str(self), "witness": self.witness}


def _make(name, base=AufhebenError):
    return type(name, (base,), {"code": name})


class ValidationError(AufhebenError):
    code = "ValidationError"


MissingComposite = _make("MissingComposite", ValidationError)
AssociativityViolation = _make("AssociativityViolation", ValidationError)
IdentityViolation = _make("IdentityViolation", ValidationError)
DanglingReference = _make("DanglingReference", ValidationError)
DuplicateName = _make("DuplicateName", ValidationError)
FunctorialityViolation = _make("FunctorialityViolation", ValidationError)
NaturalityViolation = _make("NaturalityViolation", ValidationError)

InvalidParams = _make("InvalidParams")
NotAnIdeal = _make("NotAnIdeal")
NotIdempotent = _make("NotIdempotent")
NotClosed = _make("NotClosed")
NoTerminal = _make("NoTerminal")

CapExceeded = _make("CapExceeded")
SizeOverflow = _make("SizeOverflow", CapExceeded)
CountOverflow = _make("CountOverflow", CapExceeded)
CarrierOverflow = _make("CarrierOverflow", CapExceeded)


class FormulaOnlyWarning(UserWarning):
    """The successor formula was applied to a category without split-epi/mono
    factorizations; the result carries no semantic guarantee."""


class TruncationWarning(UserWarning):
    pass


DEFAULT_CAPS = {
    "morphisms": 20_000,
    "downsets": 100_000,
    "subpresheaves": 50_000,
    "carrier": 200_000,
}


def cap(kind, override=None):
    """Resolve an enumeration cap: explicit argument, then AUFHEBEN_CAP, then default."""
    if override is not None:
        return override
    env = os.environ.get("AUFHEBEN_CAP")
    if env:
        return int(env)
    return DEFAULT_CAPS[kind]
