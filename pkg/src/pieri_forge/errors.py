"""Exception hierarchy shared by every layer of the package."""


class PieriForgeError(Exception):
    """Base class for all package errors."""


class DomainError(PieriForgeError):
    """Invalid value inside a single algebraic domain (division by zero,
    malformed partition, negative subscript, ...)."""


class ContextError(PieriForgeError):
    """Operands or arguments belong to different coefficient fields."""


class SpecializationError(PieriForgeError):
    """A denominator vanished while specializing symbolic arguments.

    Carries enough context to reconstruct the offending evaluation.
    """

    def __init__(self, message, **context):
        super().__init__(message)
        self.context = dict(context)

    def __str__(self):
        base = super().__str__()
        if not self.context:
            return base
        detail = ", ".join("%s=%s" % (k, v) for k, v in sorted(self.context.items()))
        return "%s [%s]" % (base, detail)
