"""Exception types raised by the kernels, integrators and harness."""


class LieSympError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(LieSympError, ValueError):
    """Malformed argument: wrong dimension, non-skew matrix, bad parameter range."""


class BranchCut(LieSympError, ArithmeticError):
    """Input outside the principal branch of a logarithm-like map."""


class Singularity(LieSympError, ArithmeticError):
    """Phase point too close to a pole of the Hamiltonian."""


class NoConvergence(LieSympError, RuntimeError):
    """Fixed-point iteration exhausted its iteration budget."""


class Divergence(LieSympError, RuntimeError):
    """Fixed-point iterate left the trust region (norm blow-up)."""


class CalibrationMissing(LieSympError, RuntimeError):
    """A required calibration constant has not been established."""
