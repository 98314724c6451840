import math

import numpy as np
import pytest

from henon_toolkit import closed_forms
from henon_toolkit.closed_forms import BiRadialPoint, ProfileKind, RadialProfile
from henon_toolkit.core_params import ParameterError, ProblemParams


class TestRadialProfiles:
    def test_bubble_at_origin(self):
        assert closed_forms.bubble(ProblemParams(3, 2.0))(0.0) == 1.0

    def test_bubble_closed_form(self):
        params = ProblemParams(5, 1.5)
        r = np.array([0.1, 1.0, 3.0, 20.0])
        expected = (1 + r ** 3.5) ** (-3 / 3.5)
        np.testing.assert_allclose(closed_forms.bubble(params)(r), expected, rtol=1e-14)

    def test_dilated_bubble(self):
        params = ProblemParams(3, 1.0)
        lam = 3.0
        r = np.linspace(0, 5, 11)
        expected = lam ** 0.5 * closed_forms.bubble(params)(lam * r)
        np.testing.assert_allclose(closed_forms.bubble(params, lam)(r), expected, rtol=1e-13)

    def test_kernel_vanishes_at_one(self):
        for n_dim, alpha in [(3, 0.0), (4, 2.0), (7, 0.3)]:
            assert closed_forms.kernel_radial(ProblemParams(n_dim, alpha))(1.0) == pytest.approx(0.0, abs=1e-15)

    def test_kernel_is_dilation_derivative(self):
        params = ProblemParams(4, 1.0)
        r = np.array([0.3, 0.9, 2.5])
        h = 1e-6
        # Z = (2/(N-2)) dU_λ/dλ at λ = 1
        derivative = (closed_forms.bubble(params, 1 + h)(r) - closed_forms.bubble(params, 1 - h)(r)) / (2 * h)
        np.testing.assert_allclose(closed_forms.kernel_radial(params)(r), derivative, rtol=1e-7)

    def test_truncated_bubble(self):
        params = ProblemParams(3, 1.0)
        u = closed_forms.truncated_bubble(params, 0.1)
        assert u(10.0) == pytest.approx(0.0, abs=1e-15)
        assert u(12.0) == 0.0
        assert u.support_radius == pytest.approx(10.0)
        assert u(0.0) == pytest.approx(1 - closed_forms.bubble(params)(10.0))

    def test_large_radius_stays_finite(self):
        params = ProblemParams(3, 2.0)
        value = closed_forms.bubble(params)(1e8)
        assert value == pytest.approx(1e-8, rel=1e-6)
        assert np.isfinite(closed_forms.first_eigenfunction(params, 5)(1e12))

    def test_negative_radius(self):
        with pytest.raises(ParameterError):
            closed_forms.bubble(ProblemParams(3, 0.0))(-1.0)

    def test_invalid_profile_arguments(self):
        params = ProblemParams(3, 0.0)
        with pytest.raises(ParameterError):
            RadialProfile(params, ProfileKind.U_EPS)
        with pytest.raises(ParameterError):
            closed_forms.bubble(params, -1.0)

    def test_first_eigenfunction_near_origin(self):
        params = ProblemParams(3, 2.0)
        r = 1e-5
        assert closed_forms.first_eigenfunction(params, 2)(r) / r ** 2 == pytest.approx(1.0, rel=1e-6)
        assert closed_forms.first_eigenfunction(params, 0)(0.0) == 1.0

    def test_limit_eigenfunction_near_origin(self):
        params = ProblemParams(4, 1.0)
        r = 1e-6
        assert closed_forms.limit_eigenfunction(params)(r) / r ** 1.5 == pytest.approx(1.0, rel=1e-6)

    def test_first_eigenfunction_tail(self):
        params = ProblemParams(3, 2.0)
        r = np.array([1e2, 1e4])
        psi = closed_forms.first_eigenfunction(params, 2)(r)
        slope = np.log(psi[1] / psi[0]) / np.log(r[1] / r[0])
        assert slope == pytest.approx(-3.0, abs=0.03)

    def test_eta_profiles(self):
        params = ProblemParams(3, 2.0)
        m_dim = params.M
        s = np.array([0.5, 1.0, 2.0])
        eta_first = RadialProfile(params, ProfileKind.ETA_FIRST)(s)
        eta_second = RadialProfile(params, ProfileKind.ETA_SECOND)(s)
        np.testing.assert_allclose(eta_first, s / (1 + s ** 2) ** (m_dim / 2), rtol=1e-14)
        np.testing.assert_allclose(eta_second, (1 - s ** 2) / (1 + s ** 2) ** (m_dim / 2), rtol=1e-13, atol=1e-16)

    @pytest.mark.parametrize("kind, k", [
        (ProfileKind.U, 0),
        (ProfileKind.Z, 0),
        (ProfileKind.PSI_FIRST, 3),
        (ProfileKind.Z_LIMIT, 0),
        (ProfileKind.ETA_FIRST, 0),
        (ProfileKind.ETA_SECOND, 0),
    ])
    def test_derivatives(self, kind, k):
        profile = RadialProfile(ProblemParams(4, 1.3), kind, k=k)
        r = np.array([0.2, 0.7, 1.3, 4.0])
        h = 1e-6
        difference = (profile(r + h) - profile(r - h)) / (2 * h)
        np.testing.assert_allclose(profile.derivative(r), difference, rtol=1e-6, atol=1e-9)

    def test_dilated_bubble_derivative(self):
        profile = closed_forms.bubble(ProblemParams(3, 0.5), 2.0)
        r = np.array([0.1, 1.0, 3.0])
        h = 1e-6
        difference = (profile(r + h) - profile(r - h)) / (2 * h)
        np.testing.assert_allclose(profile.derivative(r), difference, rtol=1e-6)

    def test_eval_radial_scalar(self):
        value = closed_forms.eval_radial(closed_forms.bubble(ProblemParams(3, 0.0)), 1.0)
        assert isinstance(value, float)
        assert value == pytest.approx(2 ** -0.5)


class TestNonradialFamily:
    def test_reduces_to_bubble(self):
        params = ProblemParams(4, 2.0)
        for s, t in [(0.0, 0.0), (0.5, 1.2), (3.0, 0.1)]:
            point = BiRadialPoint(s, t)
            expected = closed_forms.bubble(params)(point.norm)
            assert closed_forms.eval_nonradial_explicit(params, 0.0, point) == pytest.approx(expected, rel=1e-14)

    def test_reference_values(self):
        params = ProblemParams(4, 2.0)
        first = closed_forms.eval_nonradial_explicit(params, 0.5, BiRadialPoint(1.0, 0.0))
        second = closed_forms.eval_nonradial_explicit(params, 0.5, BiRadialPoint(0.0, 1.0))
        assert first == pytest.approx(1 / math.sqrt(1.25), rel=1e-12)
        assert second == pytest.approx(1 / math.sqrt(3.25), rel=1e-12)

    def test_cartesian_evaluation(self):
        params = ProblemParams(6, 2.0)
        x = [0.6, 0.0, 0.8, 0.0, 0.3, 0.4]
        expected = closed_forms.eval_nonradial_explicit(params, 1.5, BiRadialPoint(1.0, 0.5))
        assert closed_forms.eval_nonradial_cartesian(params, 1.5, x) == pytest.approx(expected, rel=1e-14)

    def test_cartesian_shape(self):
        with pytest.raises(ParameterError):
            closed_forms.eval_nonradial_cartesian(ProblemParams(4, 2.0), 0.5, [1.0, 2.0])

    @pytest.mark.parametrize("n_dim, alpha", [(3, 2.0), (4, 1.0)])
    def test_requires_even_dimension_and_alpha_two(self, n_dim, alpha):
        with pytest.raises(ParameterError):
            closed_forms.nonradial_family(ProblemParams(n_dim, alpha), 0.5)

    def test_denominator_positive_for_real_a(self):
        u = closed_forms.nonradial_family(ProblemParams(4, 2.0), 10.0)
        s, t = np.meshgrid(np.linspace(0, 6, 61), np.linspace(0, 6, 61))
        assert np.all(np.isfinite(u(s, t)))

    def test_denominator_bound(self):
        # 1 + |x|⁴ - 2a(s² - t²) + a² ≥ (|x|² - |a|)² + 1
        a = -2.5
        s, t = np.meshgrid(np.linspace(0, 3, 31), np.linspace(0, 3, 31))
        rho = s ** 2 + t ** 2
        values = closed_forms.nonradial_family(ProblemParams(4, 2.0), a)(s, t)
        assert np.all(values <= ((rho - abs(a)) ** 2 + 1) ** -0.5 * (1 + 1e-12))


class TestGradientCondition:
    def test_reference_points(self):
        params = ProblemParams(4, 2.0)
        samples = [BiRadialPoint(0.0, 0.0), BiRadialPoint(1.0, 0.0), BiRadialPoint(3.0, 4.0)]
        report = closed_forms.check_harmonic_gradient_condition(params, samples)
        assert report.values == ((0.0, 0.0), (4.0, 4.0), (100.0, 100.0))
        assert report.max_deviation == 0.0

    def test_random_samples(self):
        rng = np.random.default_rng(7)
        samples = [BiRadialPoint(*rng.uniform(0, 5, 2)) for _ in range(100)]
        report = closed_forms.check_harmonic_gradient_condition(ProblemParams(8, 2.0), samples)
        assert report.samples == 100
        assert report.max_deviation < 1e-10
