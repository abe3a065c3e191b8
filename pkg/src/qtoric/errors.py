"""Exception hierarchy shared by every qtoric module."""

from __future__ import annotations


class QtoricError(Exception):
    """Base class for all library errors."""


# scalar field

class DivisionByZero(QtoricError, ZeroDivisionError):
    pass


class IndeterminateSign(QtoricError):
    """The anchor cannot separate a formally nonzero value from zero."""


class FieldMismatch(QtoricError, ValueError):
    pass


# linear algebra

class SingularBasis(QtoricError):
    pass


# cones and fans

class CannotComplete(QtoricError):
    pass


class NotInteriorPoint(QtoricError):
    pass


class NoTargetCone(QtoricError):
    def __init__(self, cone, message: str | None = None):
        self.cone = cone
        super().__init__(message or f"no target cone contains the image of {cone}")


# quasilattices and groups

class NotInQuasilattice(QtoricError):
    def __init__(self, vector, message: str | None = None):
        self.vector = vector
        super().__init__(message or f"{vector} is not a quasilattice member")


class DegenerateSpecialization(QtoricError):
    pass


# morphisms and atlases

class ConeNotMapped(QtoricError):
    pass


class QuasilatticeNotMapped(QtoricError):
    def __init__(self, generator, message: str | None = None):
        self.generator = generator
        super().__init__(message or f"image of generator {generator} is not in the target quasilattice")


class NegativeExponentOnVanishingCoordinate(QtoricError):
    pass


class ChartMismatch(QtoricError):
    pass


class CocycleFailure(QtoricError):
    def __init__(self, cones, message: str | None = None):
        self.cones = cones
        super().__init__(message or f"cocycle identity fails for {cones}")


class CompatibilityFailure(QtoricError):
    pass


class NotASuperlattice(QtoricError):
    pass


# numeric channel

class ZeroSetMismatch(QtoricError):
    pass


# rendering / files

class UnsupportedDimension(QtoricError):
    pass


class QtxError(QtoricError):
    """A located diagnostic produced while reading a fan file."""

    kind = "error"

    def __init__(self, message: str, line: int = 1, col: int = 1, expected: tuple[str, ...] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = tuple(expected)
        super().__init__(self.render())

    def render(self, path: str = "<input>") -> str:
        text = f"{path}:{self.line}:{self.col}: {self.kind}: {self.message}"
        if self.expected:
            text += f" (expected {', '.join(self.expected)})"
        return text


class QtxSyntaxError(QtxError):
    kind = "syntax error"


class UnknownRay(QtxError):
    kind = "unknown ray"


class DuplicateId(QtxError):
    kind = "duplicate id"


class ValidationError(QtxError):
    kind = "validation error"
