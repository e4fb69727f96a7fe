"""Exceptions raised by the wave_cauchy package.

Each class carries the process exit code the command line reports for it.
"""


class WaveCauchyError(Exception):
    """Base class for errors raised by wave_cauchy."""

    exit_code = 1


class DomainError(WaveCauchyError, ValueError):
    """An argument lies outside the domain of the operation."""

    exit_code = 2


class ConfigError(DomainError):
    """The run configuration failed validation."""


class TailTruncationError(DomainError):
    """The Fourier-oracle cutoff leaves a non-negligible integrand tail."""


class PreconditionError(DomainError):
    """A point lies outside the band where decay diagnostics apply."""


class InputFileError(DomainError):
    """An input file exists but its contents cannot be read."""


class KernelOverflowError(WaveCauchyError, ArithmeticError):
    """The kernel exponent exceeds the double precision budget.

    Args:
        exponent (float): The offending maximum of Re F.
        h (float): Regularization parameter at which it occurred.
    """

    exit_code = 3

    def __init__(
        self, exponent: float, h: float | None = None, limit: float = 700.0
    ):
        self.exponent = float(exponent)
        self.h = None if h is None else float(h)
        self.limit = float(limit)
        where = "" if self.h is None else f" at h = {self.h:.6g}"
        super().__init__(
            f"Kernel exponent {self.exponent:.6g} exceeds the budget "
            f"{self.limit:g}{where}"
        )


class PrecisionLossError(WaveCauchyError, ArithmeticError):
    """Rounding noise of the aperture quadrature swamps the estimate.

    Args:
        noise_floor (float): Estimated rounding floor of the quadrature.
        h (float): Regularization parameter at which it occurred.
    """

    exit_code = 3

    def __init__(self, noise_floor: float, h: float):
        self.noise_floor = float(noise_floor)
        self.h = float(h)
        super().__init__(
            f"Quadrature rounding floor {self.noise_floor:.3g} exceeds the "
            f"noise tolerance at h = {self.h:.6g}"
        )


class CoverageError(WaveCauchyError, ValueError):
    """A sampled trace does not cover the required integration rectangle."""

    exit_code = 4


class SupportError(CoverageError):
    """Trace data are non-zero outside the declared support."""


class SolverConstraintError(WaveCauchyError, ValueError):
    """The forward solver configuration violates CFL or support limits."""

    exit_code = 5
