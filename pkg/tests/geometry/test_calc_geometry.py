import numpy as np
import pytest

from wave_cauchy.geometry.calc_geometry import (
    Aperture,
    aperture_d,
    cone_height,
    contains,
    slice_halfwidth,
)
from wave_cauchy.utils.errors import DomainError


@pytest.fixture
def aperture() -> Aperture:
    """Unit aperture used across the geometry tests."""
    return Aperture(y0=1.0, c=1.0, epsilon=0.5)


class TestApertureD:
    """Tests for the aperture_d function."""

    def test_zero_length(self):
        assert aperture_d(0.0, 1.0) == 0.0

    def test_direct_value(self):
        assert aperture_d(1.0, 2.0) == pytest.approx(np.sqrt(0.5), rel=1e-12)

    def test_increasing_and_below_z(self):
        z = np.linspace(0.01, 5.0, 50)
        d = aperture_d(z, 1.0)
        assert np.all(np.diff(d) > 0)
        assert np.all(d < z)

    def test_limits_in_c(self):
        assert abs(aperture_d(1.0, 1e6) - 1.0) < 1e-6
        assert aperture_d(1.0, 1e-6) < 1e-3

    def test_array_shape_is_kept(self):
        assert aperture_d(np.ones((2, 3)), 1.0).shape == (2, 3)

    @pytest.mark.parametrize("z, c", [(-0.1, 1.0), (1.0, 0.0), (1.0, -2.0)])
    def test_rejects_invalid_arguments(self, z, c):
        with pytest.raises(DomainError):
            aperture_d(z, c)


class TestConeHeight:
    """Tests for the cone_height function."""

    def test_clamps_the_radicand(self):
        assert cone_height(1.0, 1.0 + 1e-15) == 0.0

    def test_interior_value(self):
        assert cone_height(1.0, 0.6) == pytest.approx(0.8)


class TestAperture:
    """Tests for the Aperture dataclass."""

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"y0": 0.0, "c": 1.0, "epsilon": 0.5},
            {"y0": 1.0, "c": -1.0, "epsilon": 0.5},
            {"y0": 1.0, "c": 1.0, "epsilon": 0.0},
        ],
    )
    def test_rejects_non_positive_parameters(self, kwargs):
        with pytest.raises(DomainError):
            Aperture(**kwargs)

    def test_rect_halfwidth(self, aperture):
        assert aperture.rect_halfwidth == pytest.approx(
            np.sqrt(1.0 / 3.0) + 0.5
        )

    def test_to_dict(self, aperture):
        assert aperture.to_dict() == {
            "y0": 1.0, "c": 1.0, "epsilon": 0.5, "x0": 0.0, "t0": 0.0,
        }


class TestSliceHalfwidth:
    """Tests for the slice_halfwidth function."""

    def test_cone_tip(self, aperture):
        assert slice_halfwidth(aperture, 1.0) == pytest.approx(0.5)

    def test_centre(self, aperture):
        assert slice_halfwidth(aperture, 0.0) == pytest.approx(
            1.0773502692, abs=1e-10
        )

    def test_even_about_t0(self):
        ap = Aperture(y0=1.5, c=0.7, epsilon=0.2, t0=0.3)
        s = np.linspace(0.0, 1.5, 7)
        np.testing.assert_allclose(
            slice_halfwidth(ap, 0.3 + s), slice_halfwidth(ap, 0.3 - s)
        )

    def test_outside_time_window(self, aperture):
        with pytest.raises(DomainError):
            slice_halfwidth(aperture, 1.2)


class TestContains:
    """Tests for the contains function."""

    def test_centre_is_inside(self, aperture):
        assert contains(aperture, 0.0, 0.0) is True

    def test_beyond_slice_is_outside(self, aperture):
        x = aperture_d(1.0, 1.0) + 2 * aperture.epsilon
        assert contains(aperture, x, 0.0) is False

    def test_rectangle_edge_at_t0_is_inside(self, aperture):
        assert contains(aperture, aperture.rect_halfwidth, 0.0) is True

    def test_outside_time_window(self, aperture):
        assert contains(aperture, 0.0, 1.01) is False

    def test_symmetry_and_rectangle(self):
        ap = Aperture(y0=1.0, c=2.0, epsilon=0.3, x0=0.4, t0=-0.2)
        rng = np.random.default_rng(7)
        dx = rng.uniform(-2.0, 2.0, 200)
        dt = rng.uniform(-1.2, 1.2, 200)
        inside = contains(ap, ap.x0 + dx, ap.t0 + dt)
        np.testing.assert_array_equal(
            inside, contains(ap, ap.x0 - dx, ap.t0 - dt)
        )
        assert np.all(np.abs(dx[inside]) <= ap.rect_halfwidth)
        assert np.all(np.abs(dt[inside]) <= ap.y0)
