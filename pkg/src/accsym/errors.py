"""Exception hierarchy shared by all modules."""


class AccSymError(Exception):
    """Base class for library errors."""


class ChartError(AccSymError):
    pass


class ParseError(AccSymError):
    def __init__(self, message: str, offset: int | None = None):
        self.message = message
        self.offset = offset
        where = f" at byte {offset}" if offset is not None else ""
        super().__init__(f"{message}{where}")


class PoleError(AccSymError, ZeroDivisionError):
    """A denominator vanishes at the evaluation point."""


class PolicyError(AccSymError):
    """Exact zero testing was requested on a transcendental expression."""


class DegreeError(AccSymError):
    pass


class StructureError(AccSymError):
    """A candidate almost-cosymplectic-contact pair failed validation."""


class NotClosedError(StructureError):
    pass


class DegenerateError(StructureError):
    pass


class WitnessSearchFailed(StructureError):
    pass


class DualityError(AccSymError):
    """The dual pair could not be computed on this chart."""


class MembershipError(AccSymError):
    """A pair violates the domain condition of the requested bracket."""


class ConventionError(AccSymError):
    """Equivalent forms of a bracket disagree; signals a sign-convention bug."""


class DomainMismatch(AccSymError):
    pass
