"""Exception hierarchy shared by all modules."""


class DirichletError(Exception):
    """Base class for every error raised by this package."""


class DescriptorMismatch(DirichletError, ValueError):
    """Operands live in different coefficient algebras or index sets."""


class NotInvertible(DirichletError, ArithmeticError):
    """A coefficient value has no inverse (within tolerance)."""


class NotInvertibleConstantTerm(DirichletError, ArithmeticError):
    """The unit-index coefficient of a series is not invertible.

    ``component`` names the failing piece when the series was split
    (``"e1"``/``"e2"`` for bicomplex idempotent components), else ``None``.
    """

    def __init__(self, message, component=None):
        super().__init__(message)
        self.component = component


class NeumannNotContractive(DirichletError, ArithmeticError):
    """Neumann strategy is inconclusive: the contraction ratio is >= 1.

    This is NOT evidence of non-invertibility.
    """

    def __init__(self, ratio):
        super().__init__(
            f"Neumann series inconclusive: contraction ratio r = {ratio:.6g} >= 1"
        )
        self.ratio = ratio


class DimensionTooLarge(DirichletError, ValueError):
    pass


class StructureViolation(DirichletError, ArithmeticError):
    """An embedded result left the image of the adjoint embedding."""


class ExplosionError(DirichletError, RuntimeError):
    """Semigroup enumeration exceeded its element cap."""


class UnsupportedIndexSet(DirichletError, ValueError):
    pass


class ParseError(DirichletError, ValueError):
    """Malformed series / weight / semigroup document."""
