"""Exception hierarchy shared across the toolkit."""


class GecEditError(Exception):
    """Base class for all domain errors raised by this package."""


class InvalidReference(GecEditError):
    """A reference does not validate against its sentence."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class NoCommonSubstring(GecEditError):
    pass


class PreconditionViolated(GecEditError):
    pass


class InvalidPermutation(GecEditError):
    pass


class CycleOrOrphan(GecEditError):
    pass


class InsertionTooLong(GecEditError):
    pass


class LengthMismatch(GecEditError):
    pass


class FillCountMismatch(GecEditError):
    pass


class DimensionMismatch(GecEditError):
    pass


class DegenerateMatrix(GecEditError):
    pass


class SchemaError(GecEditError):
    """Corpus record failed schema validation.

    Carries the record id and a dotted field path to the offending value.
    """

    def __init__(self, record_id, field_path, message):
        self.record_id = record_id
        self.field_path = field_path
        super().__init__(f"{record_id}: {field_path}: {message}")


class EmptyInput(GecEditError):
    pass


class NotAssigned(GecEditError):
    pass


class TooManyReferences(GecEditError):
    pass


class InsufficientSubmissions(GecEditError):
    pass
