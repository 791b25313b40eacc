"""Error classes, grouped by how the CLI maps them to exit codes."""

from __future__ import annotations


class OformsError(Exception):
    """Base class for all library errors."""


# -- input / data errors (CLI exit code 2) ----------------------------------

class InputError(OformsError):
    pass


class FieldFileError(InputError):
    pass


class FormFileError(InputError):
    pass


class InvalidTable(InputError):
    """Multiplication table does not define a commutative unital ring."""


class EmbeddingMismatch(InputError):
    """Embedding data inconsistent with the multiplication table or discriminant."""


class NotTotallyReal(InputError):
    """An embedding enclosure does not isolate a real conjugate."""


class UnsupportedField(InputError):
    """Operation requires class number 1 (or other unmet field property)."""


class SingularMinor(InputError):
    """A leading principal minor vanishes; no Lagrange expansion."""


class Singular(InputError):
    """Matrix is not invertible."""


class RamifiedPrime(InputError):
    pass


class NotResidueSystem(InputError):
    """Candidate set fails to cover all residue classes."""


class NotInP(InputError):
    """Element is not in the fixed residue representative set."""


# -- resource errors (CLI exit code 3) ---------------------------------------

class BudgetExceeded(OformsError):
    """An enumeration ran past its configured node budget."""


class EnumerationBudget(BudgetExceeded):
    pass


class PrecisionExhausted(OformsError):
    """Interval refinement hit its precision cap without certifying a bound."""


# -- hypothesis / threshold failures (CLI exit code 4) -----------------------

class GateError(OformsError):
    pass


class ThresholdNotMet(GateError):
    """Form minimum is below the required pipeline threshold."""


class HypothesisViolated(GateError):
    """A stated precondition of a decomposition step fails; message names it."""


class WitnessNotFound(GateError):
    """A sum-of-squares search exhausted its box without finding a witness."""


# -- internal invariant breaches (CLI exit code 5) ---------------------------

class InternalError(OformsError):
    pass


class ViolationDetected(InternalError):
    """A proven inequality failed on computed data; indicates a bug."""
