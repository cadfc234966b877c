"""Exception hierarchy shared across the package."""


class KuznfError(Exception):
    """Base class for all package errors."""


class InputError(KuznfError, ValueError):
    """Malformed or out-of-contract input (bad field spec, zero ideal, ...)."""


class DomainError(KuznfError, ValueError):
    """Argument outside the mathematical domain of an operation."""


class AccuracyError(KuznfError, ArithmeticError):
    """A numerical routine could not certify the requested tolerance.

    Carries the best value obtained and the achieved error estimate.
    """

    def __init__(self, message, value=None, achieved=None):
        super().__init__(message)
        self.value = value
        self.achieved = achieved


class PreconditionError(KuznfError, ValueError):
    """A documented precondition of an operation was violated."""


class ConfigurationError(KuznfError, ValueError):
    """Inconsistent configuration of a larger computation (formula assembly)."""


class InternalConsistencyError(KuznfError, RuntimeError):
    """An invariant that must hold on valid input failed; indicates a bug."""


class ParseError(KuznfError, ValueError):
    """Dataset or config file violates the documented schema."""

    def __init__(self, message, *, path=None, record=None, field=None):
        loc = []
        if path is not None:
            loc.append(str(path))
        if record is not None:
            loc.append(f"record {record}")
        if field is not None:
            loc.append(f"field '{field}'")
        if loc:
            message = f"{message} ({', '.join(loc)})"
        super().__init__(message)
        self.path = path
        self.record = record
        self.field = field


class RemoteNotFoundError(KuznfError, IOError):
    """Remote dataset query returned 404."""


class RemoteFetchError(KuznfError, IOError):
    """Network failure while fetching a remote dataset."""

    def __init__(self, message, *, cached_fallback=False):
        super().__init__(message)
        self.cached_fallback = cached_fallback
