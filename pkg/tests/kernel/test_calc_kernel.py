import numpy as np
import pytest
from scipy.special import i0

from wave_cauchy.kernel.calc_kernel import (
    KernelParams,
    evaluate_kernel,
    h_function,
    i0_series,
    kernel_closed_form,
    log_h_function,
    max_re_f,
    re_f,
)
from wave_cauchy.utils.errors import DomainError, KernelOverflowError
from wave_cauchy.utils.quadrature_helpers import QuadratureSpec


@pytest.fixture
def params() -> KernelParams:
    return KernelParams(y0=1.0, c=1.0, h=0.1)


class TestKernelParams:
    """Tests for the KernelParams dataclass."""

    @pytest.mark.parametrize("name", ["y0", "c", "h"])
    def test_rejects_non_positive(self, name):
        values = {"y0": 1.0, "c": 1.0, "h": 0.1, name: 0.0}
        with pytest.raises(DomainError):
            KernelParams(**values)

    def test_with_h(self, params):
        assert params.with_h(0.05) == KernelParams(y0=1.0, c=1.0, h=0.05)


class TestHFunction:
    """Tests for h_function, log_h_function and i0_series."""

    def test_value_at_zero(self):
        assert h_function(0.0) == pytest.approx(0.5, rel=1e-15)

    def test_bessel_identity_at_one(self):
        assert h_function(1.0) + h_function(-1.0) == pytest.approx(
            1.2660658778, abs=1e-10
        )

    def test_increasing(self):
        values = h_function(np.array([1.0, 2.0, 3.0]))
        assert values[0] < values[1] < values[2]

    def test_bessel_identity_against_series(self):
        z = np.array([0.0, 0.5, 1.0, 2.0, 5.0, 10.0])
        error = np.abs(h_function(z) + h_function(-z) - i0_series(z))
        assert np.max(error) <= 1e-10

    def test_series_matches_scipy(self):
        z = np.linspace(0.0, 20.0, 11)
        np.testing.assert_allclose(i0_series(z), i0(z), rtol=1e-13)

    def test_log_h_without_overflow(self):
        assert log_h_function(5.0) == pytest.approx(np.log(h_function(5.0)))
        assert np.isfinite(log_h_function(2000.0))

    def test_h_overflow_guard(self):
        with pytest.raises(KernelOverflowError):
            h_function(800.0)


class TestReF:
    """Tests for re_f and max_re_f."""

    def test_zero_abscissa(self, params):
        assert re_f(0.0, 0.8, 0.5, params) == pytest.approx(
            0.64 * 0.25 / (4 * 0.1 * 1.0)
        )

    def test_sigma_zero_is_non_positive(self, params):
        x = np.linspace(-3.0, 3.0, 13)
        expected = -x**2 / (4 * 0.1 * (1.0 + x**2))
        np.testing.assert_allclose(re_f(x, 0.7, 0.0, params), expected)

    def test_convex_in_sigma(self, params):
        rng = np.random.default_rng(11)
        x = rng.uniform(-3.0, 3.0, 20)
        z = rng.uniform(0.0, 1.0, 20)
        s1 = rng.uniform(0.0, 1.0, 20)
        s2 = rng.uniform(0.0, 1.0, 20)
        mid = re_f(x, z, 0.5 * (s1 + s2), params)
        chord = 0.5 * (re_f(x, z, s1, params) + re_f(x, z, s2, params))
        assert np.all(mid <= chord + 1e-12)
        assert np.all(mid <= max_re_f(x, z, params) + 1e-12)


class TestKernelClosedForm:
    """Tests for kernel_closed_form and evaluate_kernel."""

    @pytest.mark.parametrize("h, c", [(0.1, 1.0), (0.03, 2.0), (0.5, 0.3)])
    def test_special_value_at_cone_tip(self, h, c):
        params = KernelParams(y0=1.0, c=c, h=h)
        expected = 1.0 / (4.0 * np.sqrt(np.pi * h * c))
        assert kernel_closed_form(0.0, 1.0, params) == pytest.approx(
            expected, rel=1e-12
        )
        assert kernel_closed_form(0.0, -1.0, params) == pytest.approx(
            expected, rel=1e-12
        )

    def test_even_in_both_variables(self, params):
        x = np.array([0.1, 0.4, 0.9, 1.7])
        t = np.array([0.0, 0.3, 0.6, 0.95])
        xx, tt = np.meshgrid(x, t)
        base = kernel_closed_form(xx, tt, params)
        tol = 1e-10 * (1.0 + np.abs(base))
        assert np.all(np.abs(kernel_closed_form(-xx, tt, params) - base) <= tol)
        assert np.all(np.abs(kernel_closed_form(xx, -tt, params) - base) <= tol)

    def test_shape_and_scalar(self, params):
        assert isinstance(kernel_closed_form(0.2, 0.1, params), float)
        assert kernel_closed_form(np.zeros((2, 3)), 0.0, params).shape == (2, 3)

    def test_outside_time_window(self, params):
        with pytest.raises(DomainError):
            kernel_closed_form(0.0, 1.5, params)

    def test_overflow_is_reported_with_exponent(self):
        params = KernelParams(y0=1.0, c=1.0, h=1e-4)
        with pytest.raises(KernelOverflowError) as excinfo:
            kernel_closed_form(0.0, 0.0, params)
        assert excinfo.value.exponent == pytest.approx(2500.0)
        assert excinfo.value.exit_code == 3

    def test_evaluation_diagnostics(self, params):
        result = evaluate_kernel(
            np.array([0.0, 0.5]), np.array([0.0, 0.5]), params
        )
        assert result.converged
        assert result.max_exponent == pytest.approx(1.0 / (4 * 0.1))
        assert np.all(result.magnitude > 0)

    def test_empty_input(self, params):
        result = evaluate_kernel(np.empty(0), np.empty(0), params)
        assert result.values.shape == (0,)

    def test_refinement_improves_coarse_rule(self, params):
        coarse = QuadratureSpec(nodes_s=4, refinement=0)
        fine = kernel_closed_form(0.3, 0.2, params)
        rough = kernel_closed_form(0.3, 0.2, params, coarse)
        assert abs(rough - fine) > 1e-8 * abs(fine)
