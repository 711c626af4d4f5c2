"""Exception hierarchy shared by all modules."""


class MoebiusFloquetError(Exception):
    """Base class for every error raised by this package."""


class DiagonalInput(MoebiusFloquetError, ValueError):
    """The upper coupling ``b`` vanishes; the two levels are decoupled."""


class NotExceptional(MoebiusFloquetError, ValueError):
    """An operation that needs an exceptional point got ``mu != 0``."""


class SingularMatrix(MoebiusFloquetError, ValueError):
    """A transform matrix has (numerically) zero determinant."""


class NoDominantState(MoebiusFloquetError, ValueError):
    """Elliptic dynamics: neither eigenstate dominates at long times."""


class IntegratorFailure(MoebiusFloquetError, RuntimeError):
    """The adaptive integrator could not reach the requested time."""
