class OrderError(Exception):
    """Base class for every error raised by this package."""


class InvalidDescriptor(OrderError):
    pass


class InvalidElement(OrderError):
    pass


class NoWitness(OrderError):
    pass


class BaseMismatch(OrderError):
    pass


class OutOfInterval(OrderError):
    pass


class BadCover(OrderError):
    pass


class NoEndpoints(OrderError):
    pass


class NotLocated(OrderError):
    pass


class UnverifiedAutomorphism(OrderError):
    pass


class WitnessFailure(OrderError):
    pass


class ColorMismatch(OrderError):
    pass


class FuelExhausted(OrderError):
    pass


class MissingEndpoints(OrderError):
    pass


class ExprSyntaxError(OrderError):
    """Parse failure in an order expression, point, or sequence literal."""

    def __init__(self, text, position, expected):
        self.text = text
        self.position = position
        self.expected = tuple(sorted(set(expected)))
        pointer = text[:position] + "^" + text[position:]
        super().__init__(
            f"syntax error at position {position} (expected {', '.join(self.expected)}): {pointer}"
        )
