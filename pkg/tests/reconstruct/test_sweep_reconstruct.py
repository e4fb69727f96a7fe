import json

import numpy as np
import pandas as pd
import pytest

from wave_cauchy.forward.fdtd_forward import FdtdConfig, fdtd_run
from wave_cauchy.geometry.calc_geometry import Aperture
from wave_cauchy.reconstruct.sweep_reconstruct import (
    REPORT_COLUMNS,
    ConvergenceReport,
    SweepEntry,
    errors_non_increasing,
    h_sweep,
)
from wave_cauchy.synthetic.mode_synthetic import Mode
from wave_cauchy.synthetic.trace_synthetic import mode_boundary_trace
from wave_cauchy.transform.spectral_transform import spectral_reconstruct
from wave_cauchy.utils.errors import DomainError
from wave_cauchy.utils.quadrature_helpers import QuadratureSpec

MODE = Mode(amplitude=1.0, k=0.5, l=1.0)
TARGET = np.sin(1.0)
H_LIST = [0.2, 0.1, 0.05, 0.025, 0.0125]


def _mode_sweep(epsilon: float) -> ConvergenceReport:
    return h_sweep(
        mode_boundary_trace(MODE),
        Aperture(y0=1.0, c=1.0, epsilon=epsilon),
        H_LIST,
        target=TARGET,
        threads=2,
    )


@pytest.fixture(scope="module")
def mode_report() -> ConvergenceReport:
    return _mode_sweep(0.5)


@pytest.fixture
def coarse_quad() -> QuadratureSpec:
    return QuadratureSpec(nodes_t=16, nodes_x=16, nodes_s=32, refinement=1)


@pytest.fixture
def sample_report() -> ConvergenceReport:
    return ConvergenceReport(
        entries=[
            SweepEntry(0.1, 0.80, 0.04, 2.5, 1),
            SweepEntry(0.05, 0.83, 0.01, 5.0, 2),
            SweepEntry(0.025, np.nan, np.nan, 10.0, 0, "precision"),
        ],
        target=0.84,
        parameters={"formula": "local"},
    )


class TestModeSweep:
    """Convergence of the reconstruction for a single mode."""

    def test_every_entry_succeeds(self, mode_report):
        assert [e.status for e in mode_report.entries] == ["ok"] * 5
        assert mode_report.guard_h is None
        assert [e.h for e in mode_report.entries] == H_LIST

    def test_errors_decrease(self, mode_report):
        assert errors_non_increasing(mode_report, slack=0.1)

    def test_final_error(self, mode_report):
        assert mode_report.entries[-1].abs_error <= 0.02 * TARGET

    def test_limit_does_not_depend_on_margin(self):
        narrow = _mode_sweep(0.3)
        wide = _mode_sweep(0.6)
        gaps = [
            abs(a.estimate - b.estimate)
            for a, b in zip(narrow.entries, wide.entries)
        ]
        assert gaps[-1] < gaps[0]
        assert gaps[-1] <= 0.01 * TARGET


class TestHSweep:
    """Tests for the h_sweep function."""

    def test_thread_count_does_not_change_results(self, coarse_quad):
        ap = Aperture(y0=1.0, c=1.0, epsilon=0.5)
        trace = mode_boundary_trace(MODE)
        serial = h_sweep(trace, ap, [0.2, 0.1, 0.05], coarse_quad, threads=1)
        parallel = h_sweep(trace, ap, [0.2, 0.1, 0.05], coarse_quad, threads=3)
        pd.testing.assert_frame_equal(serial.to_frame(), parallel.to_frame())

    def test_guards_are_recorded(self, coarse_quad):
        ap = Aperture(y0=1.0, c=1.0, epsilon=0.5)
        report = h_sweep(
            mode_boundary_trace(MODE), ap, [0.1, 0.00625, 1e-4], coarse_quad,
            target=TARGET,
        )
        assert [e.status for e in report.entries] == [
            "ok", "precision", "overflow",
        ]
        assert report.guard_h == 0.00625
        assert np.isnan(report.entries[1].estimate)
        assert report.entries[2].max_exponent > 700.0
        assert len(report.successful()) == 1

    def test_no_target_leaves_errors_empty(self, coarse_quad):
        ap = Aperture(y0=1.0, c=1.0, epsilon=0.5)
        report = h_sweep(mode_boundary_trace(MODE), ap, [0.1], coarse_quad)
        assert np.isnan(report.entries[0].abs_error)
        assert report.parameters["formula"] == "local"

    @pytest.mark.parametrize(
        "h_list, kwargs",
        [
            ([0.1, 0.2], {}),
            ([], {}),
            ([0.1, -0.1], {}),
            ([0.1], {"formula": "global"}),
            ([0.1], {"formula": "extended"}),
        ],
    )
    def test_rejects_invalid_arguments(self, h_list, kwargs):
        ap = Aperture(y0=1.0, c=1.0, epsilon=0.5)
        with pytest.raises(DomainError):
            h_sweep(mode_boundary_trace(MODE), ap, h_list, **kwargs)


class TestConvergenceReport:
    """Tests for the ConvergenceReport dataclass."""

    def test_to_frame(self, sample_report):
        frame = sample_report.to_frame()
        assert list(frame.columns) == REPORT_COLUMNS
        assert frame["status"].tolist() == ["ok", "ok", "precision"]
        assert frame["levels"].tolist() == [1, 2, 0]

    def test_empty_frame(self):
        frame = ConvergenceReport().to_frame()
        assert list(frame.columns) == REPORT_COLUMNS
        assert frame.empty

    def test_to_json(self, sample_report):
        document = json.loads(sample_report.to_json())
        assert document["guard_h"] == 0.025
        assert document["target"] == 0.84
        assert document["entries"][2]["estimate"] is None
        assert document["parameters"] == {"formula": "local"}

    def test_errors_non_increasing(self, sample_report):
        assert errors_non_increasing(sample_report)
        growing = ConvergenceReport(
            entries=[SweepEntry(0.1, 0.8, 0.01, 2.5, 1),
                     SweepEntry(0.05, 0.8, 0.02, 5.0, 1)]
        )
        assert not errors_non_increasing(growing, slack=0.1)
        assert errors_non_increasing(growing, slack=1.5)


def test_solver_trace_reproduces_solver_probe():
    """A reconstruction from a forward-solver trace matches its probe."""
    config = FdtdConfig(
        half_width=4.5,
        height=4.5,
        dx=0.02,
        dt=0.01,
        final_time=1.0,
        initial="windowed_mode",
        mode=MODE,
        trace_halfwidth=1.2,
    )
    result = fdtd_run(config, probes=[(0.0, 1.0)])
    probe = result.trace.probe_value(0.0, 1.0)
    assert probe == pytest.approx(TARGET, rel=1e-12)

    report = h_sweep(
        result.trace,
        Aperture(y0=1.0, c=1.0, epsilon=0.5),
        [0.1, 0.05, 0.025],
        target=probe,
        threads=3,
    )
    best = min(entry.abs_error for entry in report.successful())
    assert best <= 0.05 * abs(probe)


@pytest.fixture(scope="module")
def default_bump_trace():
    """Trace of the shipped bump run with u recorded at (0, 1)."""
    return fdtd_run(FdtdConfig(), probes=[(0.0, 1.0)]).trace


@pytest.mark.slow
class TestDefaultBumpRun:
    """Both inversions against the solver value on the shipped bump run."""

    def test_spectral_estimate(self, default_bump_trace):
        target = default_bump_trace.probe_value(0.0, 1.0)
        estimate = spectral_reconstruct(default_bump_trace, 1.0)
        assert estimate == pytest.approx(target, rel=2e-2)

    def test_local_sweep(self, default_bump_trace):
        # The local estimate approaches u(0, 1, 0) only logarithmically in h,
        # and the rounding floor ends the sweep before 5% is reached.
        target = default_bump_trace.probe_value(0.0, 1.0)
        report = h_sweep(
            default_bump_trace,
            Aperture(y0=1.0, c=1.0, epsilon=0.5),
            H_LIST,
            target=target,
            threads=3,
        )
        first = report.entries[:3]
        assert [e.status for e in first] == ["ok"] * 3
        assert first[0].abs_error > first[1].abs_error > first[2].abs_error
        best = min(entry.abs_error for entry in report.successful())
        assert best <= 0.3 * abs(target)
