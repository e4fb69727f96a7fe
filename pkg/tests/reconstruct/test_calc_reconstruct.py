import logging

import numpy as np
import pytest
from scipy.integrate import quad

from wave_cauchy.forward.fdtd_forward import bump_profile
from wave_cauchy.geometry.calc_geometry import Aperture, aperture_d
from wave_cauchy.kernel.decay_kernel import decay_constant, decay_envelope
from wave_cauchy.reconstruct.calc_reconstruct import (
    aperture_max_exponent,
    band_area,
    integrate_aperture,
    reconstruct_extended,
    reconstruct_local,
    tail_bound,
)
from wave_cauchy.synthetic.mode_synthetic import Mode
from wave_cauchy.synthetic.trace_synthetic import (
    SampledTrace,
    evenize_in_t,
    mode_boundary_trace,
    shift_trace,
    superpose,
    zero_trace,
)
from wave_cauchy.utils.errors import (
    CoverageError,
    DomainError,
    KernelOverflowError,
    PrecisionLossError,
    SupportError,
)
from wave_cauchy.utils.quadrature_helpers import QuadratureSpec


@pytest.fixture
def aperture() -> Aperture:
    return Aperture(y0=1.0, c=1.0, epsilon=0.5)


@pytest.fixture
def fixed_quad() -> QuadratureSpec:
    """One doubling, never reported converged, so every call uses the same
    nodes."""
    return QuadratureSpec(
        nodes_t=32, nodes_x=32, nodes_s=64, refinement=1, rel_tol=1e-15
    )


@pytest.fixture
def even_trace():
    return mode_boundary_trace(Mode(amplitude=1.0, k=0.5, l=1.0))


@pytest.fixture
def odd_trace():
    return mode_boundary_trace(
        Mode(amplitude=0.8, k=1.0, l=0.5, x_phase="sin", t_phase="sin")
    )


@pytest.fixture
def compact_trace() -> SampledTrace:
    """bump(x / 2) cos(t), vanishing for |x| >= 2."""
    x = np.linspace(-3.0, 3.0, 301)
    t = np.linspace(-1.2, 1.2, 121)
    values = bump_profile(x / 2.0)[:, None] * np.cos(t)[None, :]
    return SampledTrace(x=x, t=t, values=values)


class TestReconstructLocal:
    """Tests for reconstruct_local and integrate_aperture."""

    def test_zero_trace(self, aperture):
        assert reconstruct_local(zero_trace(), aperture, 0.1) == 0.0

    def test_linearity(self, aperture, fixed_quad, even_trace, odd_trace):
        combined = superpose([(2.0, even_trace), (-0.5, odd_trace)])
        lhs = reconstruct_local(combined, aperture, 0.1, fixed_quad)
        rhs = 2.0 * reconstruct_local(
            even_trace, aperture, 0.1, fixed_quad
        ) - 0.5 * reconstruct_local(odd_trace, aperture, 0.1, fixed_quad)
        assert lhs == pytest.approx(rhs, rel=1e-10)

    def test_odd_part_does_not_contribute(
        self, aperture, fixed_quad, even_trace, odd_trace
    ):
        mixed = superpose([(1.0, even_trace), (1.0, odd_trace)])
        estimate = reconstruct_local(mixed, aperture, 0.05, fixed_quad)
        evenized = reconstruct_local(
            evenize_in_t(mixed), aperture, 0.05, fixed_quad
        )
        assert estimate == pytest.approx(evenized, rel=1e-8)

    def test_translation_covariance(self, fixed_quad, even_trace):
        moved = Aperture(y0=1.0, c=1.0, epsilon=0.5, x0=0.3, t0=0.2)
        centred = Aperture(y0=1.0, c=1.0, epsilon=0.5)
        assert reconstruct_local(
            even_trace, moved, 0.1, fixed_quad
        ) == pytest.approx(
            reconstruct_local(
                shift_trace(even_trace, 0.3, 0.2), centred, 0.1, fixed_quad
            ),
            rel=1e-10,
        )

    def test_diagnostics(self, aperture, fixed_quad, even_trace):
        result = integrate_aperture(even_trace, aperture, 0.1, fixed_quad)
        assert result.level == 1
        assert not result.converged
        assert result.max_exponent == pytest.approx(2.5)
        assert 0 < result.noise_floor < 1e-8

    def test_rejects_non_positive_h(self, aperture):
        with pytest.raises(DomainError):
            reconstruct_local(zero_trace(), aperture, 0.0)

    def test_overflow(self, aperture, even_trace):
        with pytest.raises(KernelOverflowError) as info:
            reconstruct_local(even_trace, aperture, 1e-4)
        assert 700.0 < info.value.exponent <= 2500.0
        assert info.value.h == 1e-4

    def test_precision_guard(self, aperture, even_trace):
        with pytest.raises(PrecisionLossError):
            reconstruct_local(even_trace, aperture, 0.00625)

    def test_precision_guard_with_runaway_estimate(self, aperture, even_trace):
        # Coarse nodes at h = 0.00625 return an estimate near 1e15 whose
        # size must not lift the threshold.
        coarse = QuadratureSpec(nodes_t=16, nodes_x=16, nodes_s=32, refinement=1)
        with pytest.raises(PrecisionLossError) as info:
            reconstruct_local(even_trace, aperture, 0.00625, coarse)
        assert info.value.noise_floor > 1.0
        assert info.value.h == 0.00625

    @pytest.mark.parametrize("scale", [1.0, 1e3, 1e6])
    def test_precision_guard_follows_data_scale(
        self, aperture, fixed_quad, even_trace, scale
    ):
        scaled = superpose([(scale, even_trace)])
        result = integrate_aperture(scaled, aperture, 0.1, fixed_quad)
        reference = integrate_aperture(even_trace, aperture, 0.1, fixed_quad)
        assert result.estimate == pytest.approx(scale * reference.estimate)
        assert result.noise_floor == pytest.approx(scale * reference.noise_floor)
        with pytest.raises(PrecisionLossError):
            reconstruct_local(
                scaled, aperture, 0.00625,
                QuadratureSpec(nodes_t=16, nodes_x=16, nodes_s=32, refinement=1),
            )

    def test_coverage(self, aperture):
        axis = np.linspace(-0.5, 0.5, 11)
        trace = SampledTrace(x=axis, t=axis, values=np.zeros((11, 11)))
        with pytest.raises(CoverageError):
            reconstruct_local(trace, aperture, 0.1)

    def test_coarse_trace_warning(self, aperture, fixed_quad, caplog):
        axis = np.linspace(-2.0, 2.0, 17)
        trace = SampledTrace(x=axis, t=axis, values=np.ones((17, 17)))
        with caplog.at_level(logging.WARNING):
            reconstruct_local(trace, aperture, 0.2, fixed_quad)
        assert "under-resolved" in caplog.text


class TestReconstructExtended:
    """Tests for reconstruct_extended and the tail bound."""

    def test_zero_trace(self):
        assert reconstruct_extended(zero_trace(), 1.0, 1.0, 0.1, 2.0) == 0.0

    @pytest.mark.parametrize("h", [0.1, 0.05])
    def test_difference_within_tail_bound(self, aperture, compact_trace, h):
        local = reconstruct_local(compact_trace, aperture, h)
        extended = reconstruct_extended(compact_trace, 1.0, 1.0, h, 2.0)
        envelope = decay_envelope(
            1.0, 1.0, [h], aperture.epsilon, 2.0, n_t=41, n_x=41
        )["envelope"].iloc[0]
        bound = tail_bound(
            aperture, h, 2.0, np.max(np.abs(compact_trace.values)), envelope
        )
        assert abs(extended - local) <= bound

    def test_tail_bound_uses_band_decay_constant(self, aperture):
        a = decay_constant(aperture.c, 2.0)
        expected = (
            band_area(aperture, 2.0) * 0.5 * 3.0
            * np.exp(-a * aperture.epsilon**2 / 0.05) / np.sqrt(0.05)
        )
        assert tail_bound(aperture, 0.05, 2.0, 0.5, 3.0) == pytest.approx(
            expected, rel=1e-12
        )

    def test_support_violation(self, compact_trace):
        with pytest.raises(SupportError):
            reconstruct_extended(compact_trace, 1.0, 1.0, 0.1, 1.5)

    def test_rejects_non_positive_halfwidth(self):
        with pytest.raises(DomainError):
            reconstruct_extended(zero_trace(), 1.0, 1.0, 0.1, 0.0)


def test_aperture_max_exponent():
    assert aperture_max_exponent(1.0, 1.0, 0.0125) == pytest.approx(20.0)


def test_band_area(aperture):
    def slice_width(t):
        return 2.0 * (aperture_d(np.sqrt(1.0 - t * t), 1.0) + 0.5)

    aperture_area, _ = quad(slice_width, -1.0, 1.0)
    assert band_area(aperture, 2.0) == pytest.approx(
        8.0 - aperture_area, rel=1e-6
    )
    assert band_area(aperture, 0.1) == 0.0
