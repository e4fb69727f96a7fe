import numpy as np
import pytest

from wave_cauchy.synthetic.mode_synthetic import (
    Mode,
    mode_interior_value,
    mode_normal_derivative,
)
from wave_cauchy.utils.errors import DomainError


class TestMode:
    """Tests for the Mode dataclass."""

    def test_omega(self):
        assert Mode(k=0.5, l=1.0).omega == pytest.approx(np.sqrt(1.25))

    @pytest.mark.parametrize(
        "kwargs", [{"l": 0.0}, {"x_phase": "tan"}, {"t_phase": "exp"}]
    )
    def test_rejects_invalid_fields(self, kwargs):
        with pytest.raises(DomainError):
            Mode(**kwargs)

    def test_to_dict(self):
        assert Mode(amplitude=2.0, k=0.0, l=1.0).to_dict() == {
            "amplitude": 2.0,
            "k": 0.0,
            "l": 1.0,
            "x_phase": "cos",
            "t_phase": "cos",
            "omega": 1.0,
        }


class TestModeSolution:
    """Tests for mode_interior_value and mode_normal_derivative."""

    def test_reference_value(self):
        mode = Mode(amplitude=1.0, k=0.5, l=1.0)
        assert mode_interior_value(mode, 0.0, 1.0, 0.0) == pytest.approx(
            np.sin(1.0)
        )

    def test_vanishes_on_boundary(self):
        mode = Mode(k=1.3, l=0.7, x_phase="sin", t_phase="sin")
        x = np.linspace(-2.0, 2.0, 9)
        np.testing.assert_array_equal(mode_interior_value(mode, x, 0.0, 0.3), 0.0)

    def test_satisfies_wave_equation(self):
        mode = Mode(amplitude=1.5, k=0.8, l=1.2, x_phase="sin")
        x, y, t, step = 0.3, 0.7, 0.2, 1e-3

        def u(dx=0.0, dy=0.0, dt=0.0):
            return mode_interior_value(mode, x + dx, y + dy, t + dt)

        u_tt = (u(dt=step) - 2 * u() + u(dt=-step)) / step**2
        u_xx = (u(dx=step) - 2 * u() + u(dx=-step)) / step**2
        u_yy = (u(dy=step) - 2 * u() + u(dy=-step)) / step**2
        assert u_tt == pytest.approx(u_xx + u_yy, abs=1e-5)

    def test_normal_derivative(self):
        mode = Mode(amplitude=0.5, k=0.4, l=2.0, t_phase="sin")
        step = 1e-6
        numeric = mode_interior_value(mode, 0.3, step, 0.9) / step
        assert mode_normal_derivative(mode, 0.3, 0.9) == pytest.approx(
            numeric, rel=1e-6
        )
