"""Exception types. Every error carries a short machine-readable ``code``."""


class SpanCalcError(ValueError):
    code = "ERROR"

    def __init__(self, message=""):
        super().__init__(f"{self.code}: {message}" if message else self.code)


def _make(name, code):
    return type(name, (SpanCalcError,), {"code": code})


OutOfRange = _make("OutOfRange", "OUT_OF_RANGE")
LengthMismatch = _make("LengthMismatch", "LENGTH_MISMATCH")
DomainMismatch = _make("DomainMismatch", "DOMAIN_MISMATCH")
CodomainMismatch = _make("CodomainMismatch", "CODOMAIN_MISMATCH")
NotCommuting = _make("NotCommuting", "NOT_COMMUTING")
FootMismatch = _make("FootMismatch", "FOOT_MISMATCH")
Mismatch = _make("Mismatch", "MISMATCH")
ShapeMismatch = _make("ShapeMismatch", "SHAPE_MISMATCH")
NotMonotone = _make("NotMonotone", "NOT_MONOTONE")
InvalidCategory = _make("InvalidCategory", "INVALID_CATEGORY")
CompatibilityFail = _make("CompatibilityFail", "COMPATIBILITY_FAIL")
DimOverCap = _make("DimOverCap", "DIM_OVER_CAP")
NotInvertible = _make("NotInvertible", "NOT_INVERTIBLE")
IndexRange = _make("IndexRange", "INDEX_RANGE")
InvalidCell = _make("InvalidCell", "INVALID")
DimError = _make("DimError", "DIM")
BadIndex = _make("BadIndex", "INDEX")
ShapeError = _make("ShapeError", "SHAPE")
InvalidMonoid = _make("InvalidMonoid", "INVALID_MONOID")
