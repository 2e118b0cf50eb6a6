"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`UordError`,
so the CLI can map them onto exit code 2 in one place.
"""


class UordError(Exception):
    """Base class for library errors."""


class CarrierMismatch(UordError, ValueError):
    pass


class CarrierTooLarge(UordError):
    pass


class MissingReflexivity(UordError):
    pass


class NotMonotone(UordError):
    pass


class NotAPreorder(UordError):
    pass


class BcoAxiomViolation(UordError):
    def __init__(self, axiom, detail):
        super().__init__(f"BCO axiom {axiom} violated: {detail}")
        self.axiom = axiom
        self.detail = detail


class SearchSpaceTooLarge(UordError):
    pass


class EnumerationCapExceeded(UordError):
    pass


class MissingExists(UordError):
    pass


class NotCartesian(UordError):
    pass


class NotInR(UordError):
    """A relation that must belong to the uniform preorder does not."""


class NotDco(UordError):
    pass


class NotRelationallyComplete(UordError):
    pass


class KsSearchFailed(UordError):
    pass


class MissingCombinators(UordError):
    pass


class UnboundVariable(UordError, KeyError):
    def __str__(self):
        return f"unbound variable {self.args[0]!r}"


class PreconditionError(UordError):
    pass


class ParseError(UordError):
    pass


class SchemaError(UordError):
    pass


class UnknownName(UordError):
    def __init__(self, name):
        super().__init__(f"unknown element name {name!r}")
        self.name = name
