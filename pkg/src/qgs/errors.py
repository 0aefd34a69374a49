"""Exception types raised across the package."""


class QgsError(Exception):
    """Base class for all numeric/model errors raised by qgs."""


class DegenerateParametrization(QgsError):
    pass


class SeparatingCoupling(QgsError):
    pass


class DimensionMismatch(QgsError):
    pass


class NotUnitary(QgsError):
    pass


class OnVertex(QgsError):
    pass


class UnhandledDegenerate(QgsError):
    def __init__(self, message, generation=None):
        super().__init__(message)
        self.generation = generation


class OutOfRange(QgsError):
    pass


class NonMaximalDomain(QgsError):
    pass


class SingularTB(QgsError):
    pass


class ZeroDetA(QgsError):
    pass


class RegimeMismatch(QgsError):
    pass


class InsufficientGenerations(QgsError):
    pass


class GridTooCoarse(UserWarning):
    """Adjacent roots fell within two grid panels of each other."""
