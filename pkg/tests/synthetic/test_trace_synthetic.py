import numpy as np
import pandas as pd
import pytest

from wave_cauchy.synthetic.mode_synthetic import Mode, mode_normal_derivative
from wave_cauchy.synthetic.trace_synthetic import (
    TRACE_COLUMNS,
    SampledTrace,
    evenize_in_t,
    mode_boundary_trace,
    sample_trace,
    shift_trace,
    superpose,
    trace_from_frame,
    trace_to_frame,
    zero_trace,
)
from wave_cauchy.utils.errors import DomainError


@pytest.fixture
def even_mode() -> Mode:
    return Mode(amplitude=1.0, k=0.5, l=1.0)


@pytest.fixture
def odd_mode() -> Mode:
    return Mode(amplitude=0.7, k=0.3, l=1.4, t_phase="sin")


@pytest.fixture
def small_trace() -> SampledTrace:
    x = np.array([0.0, 0.5, 1.0])
    t = np.array([-1.0, 0.0, 1.0, 2.0])
    values = x[:, None] + 10.0 * t[None, :]
    return SampledTrace(x=x, t=t, values=values, metadata={"source": "test"})


class TestAnalyticTrace:
    """Tests for analytic traces and their combinators."""

    def test_zero_trace(self):
        trace = zero_trace()
        np.testing.assert_array_equal(trace(np.ones(3), 0.0), np.zeros(3))
        assert trace.interior_value(0.0, 1.0, 0.0) == 0.0

    def test_mode_trace(self, even_mode):
        trace = mode_boundary_trace(even_mode)
        assert trace(0.4, 0.2) == pytest.approx(
            mode_normal_derivative(even_mode, 0.4, 0.2)
        )
        assert trace.interior_value(0.0, 1.0, 0.0) == pytest.approx(np.sin(1.0))

    def test_superpose(self, even_mode, odd_mode):
        trace = superpose(
            [(2.0, mode_boundary_trace(even_mode)),
             (-1.0, mode_boundary_trace(odd_mode))]
        )
        expected = 2.0 * mode_normal_derivative(
            even_mode, 0.3, 0.4
        ) - mode_normal_derivative(odd_mode, 0.3, 0.4)
        assert trace(0.3, 0.4) == pytest.approx(expected)
        assert len(trace.modes) == 2

    def test_empty_superposition_is_zero(self):
        assert superpose([])(1.0, 2.0) == 0.0

    def test_evenize_drops_odd_modes(self, even_mode, odd_mode):
        mixed = superpose(
            [(1.0, mode_boundary_trace(even_mode)),
             (1.0, mode_boundary_trace(odd_mode))]
        )
        even = evenize_in_t(mixed)
        t = np.linspace(-1.0, 1.0, 5)
        np.testing.assert_allclose(
            even(0.2, t), mode_normal_derivative(even_mode, 0.2, t), atol=1e-15
        )
        assert even.interior_value(0.1, 0.8, 0.3) == pytest.approx(
            mode_boundary_trace(even_mode).interior_value(0.1, 0.8, 0.3)
        )

    def test_shift_has_no_interior_solution(self, even_mode):
        shifted = shift_trace(mode_boundary_trace(even_mode), 0.5, 0.1)
        assert shifted(0.0, 0.0) == pytest.approx(
            mode_normal_derivative(even_mode, 0.5, 0.1)
        )
        with pytest.raises(DomainError):
            shifted.interior_value(0.0, 1.0, 0.0)


class TestSampledTrace:
    """Tests for the SampledTrace dataclass."""

    def test_spacing_and_metadata(self, small_trace):
        assert small_trace.dx == pytest.approx(0.5)
        assert small_trace.dt == pytest.approx(1.0)
        assert small_trace.grid_metadata() == {
            "nx": 3, "nt": 4, "x_min": 0.0, "x_max": 1.0,
            "t_min": -1.0, "t_max": 2.0,
        }

    def test_bilinear_interpolation_is_exact_for_linear_data(self, small_trace):
        assert small_trace(0.25, 0.5) == pytest.approx(0.25 + 5.0)
        assert small_trace(np.array([0.75]), np.array([1.5])) == pytest.approx(
            [0.75 + 15.0]
        )

    def test_covers(self, small_trace):
        assert small_trace.covers(0.0, 1.0, -1.0, 2.0)
        assert not small_trace.covers(-0.1, 1.0, -1.0, 2.0)
        assert not small_trace.covers(0.0, 1.0, -1.0, 2.5)

    @pytest.mark.parametrize(
        "x, t, shape",
        [
            ([0.0, 1.0, 3.0], [0.0, 1.0], (3, 2)),
            ([0.0, 1.0], [1.0, 0.0], (2, 2)),
            ([0.0, 1.0], [0.0, 1.0], (3, 2)),
        ],
    )
    def test_rejects_bad_grids(self, x, t, shape):
        with pytest.raises(DomainError):
            SampledTrace(x=x, t=t, values=np.zeros(shape))

    def test_probes_from_metadata(self):
        trace = SampledTrace(
            x=[0.0, 1.0],
            t=[0.0, 1.0],
            values=np.zeros((2, 2)),
            metadata={"probe_1": [0.5, 2.0, 0.25], "probe_0": "0.0, 1.0, 0.125"},
        )
        assert trace.probes() == [(0.0, 1.0, 0.125), (0.5, 2.0, 0.25)]
        assert trace.probe_value(0.5, 2.0) == 0.25
        assert trace.probe_value(0.0, 3.0) is None


class TestSampleTrace:
    """Tests for sample_trace and the long-table conversion."""

    def test_sample_trace(self, even_mode):
        trace = sample_trace(
            mode_boundary_trace(even_mode), (-1.0, 1.0), (0.0, 2.0), 5, 3
        )
        assert trace.values.shape == (5, 3)
        assert trace.values[2, 0] == pytest.approx(1.0)

    @pytest.mark.parametrize(
        "x_range, t_range, nx, nt",
        [((0.0, 1.0), (0.0, 1.0), 1, 3), ((1.0, 1.0), (0.0, 1.0), 3, 3)],
    )
    def test_rejects_degenerate_requests(self, x_range, t_range, nx, nt):
        with pytest.raises(DomainError):
            sample_trace(zero_trace(), x_range, t_range, nx, nt)

    def test_frame_layout(self, small_trace):
        frame = trace_to_frame(small_trace)
        assert list(frame.columns) == TRACE_COLUMNS
        assert len(frame) == 12
        expected_head = pd.DataFrame(
            {"x": [0.0, 0.0], "t": [-1.0, 0.0], "v": [-10.0, 0.0]}
        )
        pd.testing.assert_frame_equal(frame.head(2), expected_head)

    def test_frame_back_to_trace(self, small_trace):
        shuffled = trace_to_frame(small_trace).sample(frac=1.0, random_state=3)
        rebuilt = trace_from_frame(shuffled, {"source": "file"})
        np.testing.assert_array_equal(rebuilt.values, small_trace.values)
        assert rebuilt.metadata == {"source": "file"}

    def test_incomplete_grid(self, small_trace):
        frame = trace_to_frame(small_trace).iloc[1:]
        with pytest.raises(DomainError):
            trace_from_frame(frame)
