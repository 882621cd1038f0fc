"""Exception hierarchy shared across the package."""


class Causal2DError(Exception):
    """Base class for all domain errors raised by this package."""


class MarginViolationError(Causal2DError):
    """A test-function support overflows the working rectangle margin."""


class ParseError(Causal2DError):
    """Expression syntax error. Carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class EvalError(Causal2DError):
    """Expression evaluation failed: unbound variable or domain fault."""


class FieldFormatError(Causal2DError):
    """A field/map file does not conform to the documented schema."""


class PreconditionError(Causal2DError):
    """A numerically checked precondition of a decomposition failed."""


class InvalidOrientationPair(Causal2DError):
    """The two one-dimensional maps do not share a monotonicity direction."""


class NotHomeomorphism(Causal2DError):
    """A map is not strictly monotone / not invertible on its domain."""


class NotBijective(Causal2DError):
    """A coordinate of a plane map is weakly constant in both variables."""


class NonMonotone(Causal2DError):
    """A split-form map fails the required monotonicity directions."""


class CodomainError(Causal2DError):
    """Pullback/pushforward sampling left the declared codomain."""
