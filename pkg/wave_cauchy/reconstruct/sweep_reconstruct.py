"""Convergence of the regularized reconstruction along a decreasing h sequence."""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd

from wave_cauchy.geometry.calc_geometry import Aperture
from wave_cauchy.reconstruct.calc_reconstruct import (
    aperture_max_exponent,
    integrate_aperture,
    integrate_extended,
)
from wave_cauchy.utils.errors import (
    DomainError,
    KernelOverflowError,
    PrecisionLossError,
)
from wave_cauchy.utils.logger import WaveCauchyLogger
from wave_cauchy.utils.quadrature_helpers import QuadratureSpec

WaveCauchy_LOGGER = WaveCauchyLogger(__name__)
logger = WaveCauchy_LOGGER.logger

REPORT_COLUMNS = [
    "h", "estimate", "abs_error", "max_exponent", "levels", "status",
]
FORMULAS = ("local", "extended")


@dataclass(frozen=True)
class SweepEntry:
    """One h of a sweep; status is "ok", "overflow" or "precision"."""

    h: float
    estimate: float
    abs_error: float
    max_exponent: float
    levels: int
    status: str = "ok"


@dataclass
class ConvergenceReport:
    """Estimates along an h sweep with their provenance.

    Args:
        entries (list[SweepEntry]): Sorted by decreasing h.
        target (float | None): Exact value, if known.
        parameters (dict): Aperture, quadrature and sweep settings.
    """

    entries: list[SweepEntry] = field(default_factory=list)
    target: float | None = None
    parameters: dict = field(default_factory=dict)

    @property
    def guard_h(self) -> float | None:
        """First h at which a kernel or precision guard triggered."""
        for entry in self.entries:
            if entry.status != "ok":
                return entry.h
        return None

    def successful(self) -> list[SweepEntry]:
        return [entry for entry in self.entries if entry.status == "ok"]

    def to_frame(self) -> pd.DataFrame:
        """Table with columns h, estimate, abs_error, max_exponent, levels,
        status."""
        if not self.entries:
            return pd.DataFrame(
                {
                    "h": pd.Series(dtype=float),
                    "estimate": pd.Series(dtype=float),
                    "abs_error": pd.Series(dtype=float),
                    "max_exponent": pd.Series(dtype=float),
                    "levels": pd.Series(dtype=int),
                    "status": pd.Series(dtype=str),
                }
            )
        frame = pd.DataFrame([asdict(entry) for entry in self.entries])
        return frame[REPORT_COLUMNS]

    def to_dict(self) -> dict:
        def clean(value):
            return None if isinstance(value, float) and np.isnan(value) else value

        return {
            "target": self.target,
            "guard_h": self.guard_h,
            "parameters": self.parameters,
            "entries": [
                {k: clean(v) for k, v in asdict(entry).items()}
                for entry in self.entries
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)


def _check_h_list(h_list: list[float]) -> list[float]:
    h_list = [float(h) for h in h_list]
    if not h_list:
        raise DomainError("h_list must not be empty")
    if any(not h > 0 for h in h_list):
        raise DomainError("h_list entries must be positive")
    if any(b >= a for a, b in zip(h_list, h_list[1:])):
        raise DomainError("h_list must be strictly decreasing")
    return h_list


def h_sweep(
    trace,
    ap: Aperture,
    h_list: list[float],
    quad: QuadratureSpec | None = None,
    target: float | None = None,
    threads: int = 1,
    formula: str = "local",
    x_halfwidth: float | None = None,
) -> ConvergenceReport:
    """Reconstruct for every h and collect the estimates.

    A kernel overflow or precision loss at one h is recorded as an entry
    with that status; the sweep carries on. Entries keep the order of
    h_list whatever the thread count.

    Args:
        trace (AnalyticTrace | SampledTrace): Boundary data.
        ap (Aperture): Aperture and reconstructed point.
        h_list (list[float]): Strictly decreasing positive values.
        quad (QuadratureSpec, optional): Quadrature policy.
        target (float, optional): Exact value for abs_error.
        threads (int): Worker threads, one h per task.
        formula (str): "local" (aperture U) or "extended" (rectangle of
            half-width x_halfwidth).
        x_halfwidth (float, optional): Required for the extended formula.

    Returns:
        ConvergenceReport: One entry per h.

    Raises:
        DomainError: If h_list or formula is invalid.
    """
    h_list = _check_h_list(h_list)
    quad = quad or QuadratureSpec()
    if formula not in FORMULAS:
        raise DomainError(f"formula must be one of {FORMULAS}, got {formula!r}")
    if formula == "extended" and x_halfwidth is None:
        raise DomainError("The extended formula needs x_halfwidth")

    def run_one(h: float) -> SweepEntry:
        status, levels = "ok", 0
        max_exponent = aperture_max_exponent(ap.y0, ap.c, h)
        try:
            if formula == "local":
                result = integrate_aperture(trace, ap, h, quad)
            else:
                result = integrate_extended(
                    trace, ap.y0, ap.c, h, x_halfwidth, quad, ap.x0, ap.t0
                )
            estimate, levels = result.estimate, result.level
        except KernelOverflowError as error:
            logger.warning(f"h = {h:g}: {error}")
            status, estimate, max_exponent = "overflow", np.nan, error.exponent
        except PrecisionLossError as error:
            logger.warning(f"h = {h:g}: {error}")
            status, estimate = "precision", np.nan
        abs_error = (
            np.nan if target is None or status != "ok"
            else abs(estimate - target)
        )
        logger.info(
            f"h = {h:g}: estimate {estimate:.10g}, status {status}"
        )
        return SweepEntry(
            h=h,
            estimate=float(estimate),
            abs_error=float(abs_error),
            max_exponent=float(max_exponent),
            levels=int(levels),
            status=status,
        )

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            entries = list(executor.map(run_one, h_list))
    else:
        entries = [run_one(h) for h in h_list]

    parameters = {
        "aperture": ap.to_dict(),
        "quadrature": quad.to_dict(),
        "h_list": h_list,
        "formula": formula,
        "x_halfwidth": x_halfwidth,
    }
    report = ConvergenceReport(
        entries=entries, target=target, parameters=parameters
    )
    if report.guard_h is not None:
        logger.info(f"Guard triggered from h = {report.guard_h:g}")
    return report


def errors_non_increasing(report: ConvergenceReport, slack: float = 0.1) -> bool:
    """abs_error of consecutive successful entries grows by at most slack."""
    errors = [entry.abs_error for entry in report.successful()]
    return all(b <= (1.0 + slack) * a for a, b in zip(errors, errors[1:]))
