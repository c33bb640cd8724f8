class IfmError(ValueError):
    """Base class for every error raised by ifmlab."""


class StructuralError(IfmError):
    """A mode, element or network is malformed (unknown mode_id, duplicate modes...)."""


class IncompletenessError(StructuralError):
    """A mode still carrying amplitude has no detector attached."""


class DomainError(IfmError):
    """A parameter lies outside its admissible range."""


class DegenerateNetworkError(DomainError):
    """The requested network cannot interfere (a splitter with T in {0, 1})."""


class UsageError(IfmError):
    """Malformed command-line input: unreadable files, bad key=value pairs, unknown names."""
