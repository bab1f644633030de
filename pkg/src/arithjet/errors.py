"""Exception hierarchy shared across the package."""


class AlgebraError(Exception):
    """Base class for all arithmetic/validation failures."""


class NotPrimePower(AlgebraError):
    """q is not a prime power."""


class WrongResidueSize(AlgebraError):
    """|O/piO| computed from the multiplication matrix differs from q."""


class QuotientNotField(AlgebraError):
    """O/piO contains zero divisors."""


class PiNotDividingP(AlgebraError):
    """The residue characteristic p is not divisible by pi in O."""


class NotDivisible(AlgebraError):
    """Exact division by pi failed.

    Inside table/P-polynomial generation this is a hard integrality
    failure, i.e. an implementation bug, never a recoverable condition.
    """


class SizeCapExceeded(AlgebraError):
    """An enumeration would exceed the configured candidate cap."""


class FeasibilityCap(AlgebraError):
    """A symbolic table build exceeds the configured feasibility cap."""


class NotCharP(AlgebraError):
    """Coefficient ring does not have the characteristic the map requires."""


class RelationViolation(AlgebraError):
    """A claimed homomorphism does not kill a defining relation."""


class IllDefined(AlgebraError):
    """A derivation extension depends on the chosen representative."""


class MissingAssignment(AlgebraError):
    """Polynomial evaluation hit a variable without an assigned value."""
