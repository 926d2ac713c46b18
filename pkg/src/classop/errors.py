"""Domain errors.

Every error raised by the library for a mathematical reason derives from
:class:`DomainError`.  The CLI turns these into exit code 2 together with a
machine readable payload, so each carries a stable ``code`` plus optional
``index`` and ``which`` fields.
"""

from __future__ import annotations


class DomainError(Exception):
    code = "DomainError"

    def __init__(self, detail: str = "", *, index: int | None = None,
                 which: str | None = None):
        super().__init__(detail or self.code)
        self.detail = detail
        self.index = index
        self.which = which

    def payload(self) -> dict:
        return {"code": self.code, "index": self.index,
                "which": self.which, "detail": self.detail}


def _make(name: str) -> type:
    return type(name, (DomainError,), {"code": name})


DivideByZeroPoly = _make("DivideByZeroPoly")
NoConvergence = _make("NoConvergence")
PochhammerPole = _make("PochhammerPole")
DegenerateSamples = _make("DegenerateSamples")
InconsistentSamples = _make("InconsistentSamples")
AlternatingViolation = _make("AlternatingViolation")
UnknownProgression = _make("UnknownProgression")
RegimeUnsupported = _make("RegimeUnsupported")
ZeroDenominator = _make("ZeroDenominator")
DegreeOverflow = _make("DegreeOverflow")
InsufficientTable = _make("InsufficientTable")
RegularityViolation = _make("RegularityViolation")
TorsionOverflow = _make("TorsionOverflow")
MultipleZero = _make("MultipleZero")
CriticalZero = _make("CriticalZero")
NonzeroRemainder = _make("NonzeroRemainder")
TorsionNormalization = _make("TorsionNormalization")
GenericityViolation = _make("GenericityViolation")
DoubleZeroLocus = _make("DoubleZeroLocus")
DenominatorZero = _make("DenominatorZero")
OddN = _make("OddN")
ParameterPole = _make("ParameterPole")
NotMonic = _make("NotMonic")
