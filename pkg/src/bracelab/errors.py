"""Exception hierarchy for bracelab."""

from __future__ import annotations


class BraceLabError(Exception):
    """Base class for all bracelab errors."""


class NotAGroup(BraceLabError):
    """A table expected to be a group failed validation."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotABrace(BraceLabError):
    """A pair of tables expected to form a skew brace failed validation."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class NotNormal(BraceLabError):
    """A subgroup required to be normal is not; carries a (g, s) witness."""

    def __init__(self, witness):
        super().__init__(f"subgroup is not normal, witness {witness}")
        self.witness = witness


class NotAnIdeal(BraceLabError):
    """A subset required to be a brace ideal is not."""

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class InternalInconsistency(BraceLabError):
    """A property that must hold for every valid input failed; implementation bug."""


class TheoremViolation(InternalInconsistency):
    """An unconditionally-provable product triviality failed; implementation bug."""


class EquivalenceViolation(InternalInconsistency):
    """An unconditionally-provable equivalence of criteria failed; implementation bug."""


class ConstructionInvalid(InternalInconsistency):
    """A hard-coded construction failed its own validation; transcription bug."""


class BudgetExceeded(BraceLabError):
    """A bounded search ran out of its node budget."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ClosureBudgetExceeded(BudgetExceeded):
    """A matrix group closure exceeded the element cap."""


class NonPrimeModulus(BraceLabError):
    """The modulus of a prime-field object is not prime."""


class SingularGenerator(BraceLabError):
    """A matrix group generator is not invertible."""


class DimensionMismatch(BraceLabError):
    """Matrix dimensions or moduli do not line up."""


class SizeExceeded(BraceLabError):
    """A requested construction is larger than the supported bound."""


class InvalidAction(BraceLabError):
    """An action map is not a homomorphism into the brace automorphisms."""

    def __init__(self, acting_index: int, witness):
        super().__init__(f"action of element {acting_index} fails, witness {witness}")
        self.acting_index = acting_index
        self.witness = witness


class NoSurjection(BraceLabError):
    """No surjective homomorphism onto the requested group exists."""


class PreconditionFailed(BraceLabError):
    """A documented precondition of an operation does not hold."""


class FormatError(BraceLabError):
    """A fixture file is malformed; carries the 1-based offending line."""

    def __init__(self, line: int | None, message: str):
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)
        self.line = line
