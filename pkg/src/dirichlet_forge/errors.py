"""Exception hierarchy. Every library error derives from ``ForgeError``."""


class ForgeError(Exception):
    pass


class InvalidArgument(ForgeError, ValueError):
    pass


class OutOfRange(ForgeError, ValueError):
    pass


class IncompleteDefinition(ForgeError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PoleError(ForgeError, ZeroDivisionError):
    pass


class WindowError(ForgeError, ValueError):
    """Evaluation point lies outside the admissible half-line/half-plane."""


class DomainError(ForgeError, ValueError):
    pass


class ShiftRequired(ForgeError, ValueError):
    """Composition needs the inner series to vanish at the origin."""


class InsufficientData(ForgeError, ValueError):
    pass


class PreconditionError(ForgeError, ValueError):
    pass
