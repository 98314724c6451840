import itertools

import numpy as np
import pytest

from henon_toolkit import closed_forms, core_params, spectral
from henon_toolkit.bifurcation import lattice_grid
from henon_toolkit.core_params import ParameterError, ProblemParams
from henon_toolkit.radial_numerics import GridError, RadialGrid, decay_fit
from henon_toolkit.spectral import FarField, Form, GridTooCoarseError, SpectralProblem


def _weighted(params: ProblemParams, R: float, grid: RadialGrid | None = None) -> SpectralProblem:
    return SpectralProblem(params, Form.WEIGHTED, R, grid=grid)


class TestSpectralProblem:
    def test_defaults(self):
        problem = SpectralProblem(ProblemParams(3, 2.0), "lambda_form", 50.0, k=2)
        assert problem.form == Form.LAMBDA
        assert problem.far_field == FarField.DIRICHLET
        assert problem.bc_origin == "dirichlet"
        assert problem.grid.R == 50.0
        assert problem.dimension == 3.0

    def test_transformed_dimension(self):
        problem = SpectralProblem(ProblemParams(3, 2.0), Form.TRANSFORMED, 50.0)
        assert problem.dimension == 2.5
        assert problem.bc_origin == "zero_flux"

    def test_weighted_is_radial(self):
        with pytest.raises(ParameterError):
            SpectralProblem(ProblemParams(3, 2.0), Form.WEIGHTED, 50.0, k=1)

    def test_decay_only_for_lambda_form(self):
        with pytest.raises(ParameterError):
            SpectralProblem(ProblemParams(3, 2.0), Form.WEIGHTED, 50.0, far_field=FarField.DECAY)

    def test_grid_radius_mismatch(self):
        with pytest.raises(GridError):
            SpectralProblem(ProblemParams(3, 2.0), Form.LAMBDA, 50.0, grid=RadialGrid.geometric(40.0, 500))

    def test_too_few_nodes(self):
        problem = SpectralProblem(ProblemParams(3, 2.0), Form.LAMBDA, 50.0, grid=RadialGrid.geometric(50.0, 100))
        with pytest.raises(GridError):
            spectral.solve_eigen(problem, 1)

    def test_with_alpha(self):
        problem = SpectralProblem(ProblemParams(3, 2.0), Form.LAMBDA, 50.0, k=1)
        moved = problem.with_alpha(1.0)
        assert moved.params.alpha == 1.0
        assert moved.grid is problem.grid


class TestLambdaForm:
    @pytest.mark.parametrize("n_dim, alpha, k", [(3, 2.0, 2), (3, 0.0, 1), (3, 2.0, 1), (4, 1.0, 0)])
    def test_matches_closed_form(self, n_dim, alpha, k):
        params = ProblemParams(n_dim, alpha)
        problem = SpectralProblem(params, Form.LAMBDA, 200.0, k=k, far_field=FarField.DECAY,
                                  grid=RadialGrid.geometric(200.0, 8000, r_min=2e-4))
        value = spectral.first_eigenvalue(problem)
        assert value == pytest.approx(core_params.lambda_first_closed(params, k), rel=1e-3)

    @pytest.mark.parametrize("n_dim, alpha, k", list(itertools.product((3, 4), (1.0, 2.0), (0, 1, 2))))
    def test_eigenfunction_matches_closed_form(self, n_dim, alpha, k):
        params = ProblemParams(n_dim, alpha)
        problem = SpectralProblem(params, Form.LAMBDA, 200.0, k=k, far_field=FarField.DECAY)
        pair = spectral.solve_eigen(problem, 1)[0]
        psi = closed_forms.first_eigenfunction(params, k)(problem.grid.nodes)
        np.testing.assert_allclose(pair.eigenfunction.values, psi / np.max(psi), atol=1e-2)
        assert pair.sign_changes == 0

    def test_dirichlet_truncation_raises_eigenvalue(self):
        params = ProblemParams(3, 2.0)
        dirichlet = SpectralProblem(params, Form.LAMBDA, 20.0, k=1)
        assert spectral.first_eigenvalue(dirichlet) > core_params.lambda_first_closed(params, 1)

    def test_eigenvalues_in_matches_solve_eigen(self):
        problem = SpectralProblem(ProblemParams(3, 2.0), Form.LAMBDA, 50.0, k=0)
        values = [pair.value for pair in spectral.solve_eigen(problem, 3)]
        inside = spectral.eigenvalues_in(problem, 0.0, 1.0)
        assert inside.size == sum(1 for v in values if v <= 1.0)
        np.testing.assert_allclose(inside, values[:inside.size], rtol=1e-8)

    def test_radius_extrapolation_improves_estimate(self):
        params = ProblemParams(3, 2.0)
        exact = core_params.lambda_first_closed(params, 1)
        result = spectral.radius_extrapolation(params, 1, 10.0)
        assert result.power == 3
        assert abs(result.extrapolated - exact) < abs(result.fine - exact)
        assert result.coarse > result.fine > exact

    def test_two_grid_error_is_small(self):
        problem = SpectralProblem(ProblemParams(3, 2.0), Form.LAMBDA, 50.0, k=1,
                                  grid=RadialGrid.geometric(50.0, 2000, r_min=1e-4))
        assert spectral.two_grid_error(problem) < 1e-3

    def test_eigenvalue_converges_at_second_order(self):
        # Each grid halves every interval of the previous one in log r
        problem = SpectralProblem(ProblemParams(3, 2.0), Form.LAMBDA, 50.0, k=1)
        values = [spectral.first_eigenvalue(problem.with_grid(RadialGrid.geometric(50.0, n, r_min=1e-4)))
                  for n in (1000, 1999, 3997)]
        ratio = (values[0] - values[1]) / (values[1] - values[2])
        assert 3.5 <= ratio <= 4.5

    def test_coarse_grid_rejected(self):
        problem = SpectralProblem(ProblemParams(3, 2.0), Form.LAMBDA, 50.0, k=0,
                                  grid=RadialGrid.geometric(50.0, 200, r_min=1e-3))
        with pytest.raises(GridTooCoarseError):
            spectral.solve_eigen(problem, 60)


class TestWeightedForm:
    def test_converges_to_limit(self):
        params = ProblemParams(3, 2.0)
        value = spectral.first_eigenvalue(_weighted(params, 100.0))
        assert value == pytest.approx(core_params.lambda_limit(params), rel=1e-2)
        assert value > core_params.lambda_limit(params)

    def test_unit_radius_has_zero_eigenvalue(self):
        # Z is positive on (0, 1) and vanishes at 1
        for params in (ProblemParams(3, 2.0), ProblemParams(5, 0.7)):
            assert spectral.first_eigenvalue(_weighted(params, 1.0)) == pytest.approx(0.0, abs=1e-3)

    def test_near_unit_radius(self):
        value = spectral.first_eigenvalue(_weighted(ProblemParams(3, 2.0), 1 / 0.999))
        assert value < 1e-3
        assert value > -0.1

    def test_sign_changes_follow_index(self):
        pairs = spectral.solve_eigen(_weighted(ProblemParams(4, 1.0), 50.0), 3)
        assert [pair.sign_changes for pair in pairs] == [0, 1, 2]
        assert pairs[0].value < pairs[1].value < pairs[2].value
        for pair in pairs:
            assert np.max(np.abs(pair.eigenfunction.values)) == pytest.approx(1.0)

    def test_eigenfunction_decay(self):
        params = ProblemParams(3, 2.0)
        pair = spectral.solve_eigen(_weighted(params, 100.0), 1)[0]
        exponent = decay_fit(pair.eigenfunction, (10.0, 30.0))
        assert exponent == pytest.approx(-(2 * params.N + params.alpha - 2) / 2, abs=0.05)

    def test_monotone_in_radius(self):
        params = ProblemParams(3, 0.5)
        values = [spectral.first_eigenvalue(_weighted(params, R, lattice_grid(R))) for R in (50.0, 100.0, 200.0)]
        assert values[0] > values[1] > values[2]

    @pytest.mark.parametrize("n_dim, alpha, eps", [(3, 2.0, 0.05), (4, 1.0, 0.1)])
    def test_sign_check(self, n_dim, alpha, eps):
        assert spectral.first_eigen_sign_check(ProblemParams(n_dim, alpha), eps) == (True, True)

    def test_slope_approaches_limit(self):
        estimate = spectral.eigen_slope(ProblemParams(3, 2.0), 0.01, 0.01)
        assert estimate.value == pytest.approx(-2.5, rel=5e-2)
        assert estimate.rayleigh == pytest.approx(estimate.finite_difference, rel=1e-3)

    def test_slope_step_range(self):
        with pytest.raises(ParameterError):
            spectral.eigen_slope(ProblemParams(3, 2.0), 0.01, 0.5)
        with pytest.raises(ParameterError):
            spectral.eigen_slope(ProblemParams(3, 0.005), 0.01, 0.01)

    def test_limit_rate_is_measured(self):
        rate = spectral.limit_rate(ProblemParams(3, 2.0), [25.0, 50.0, 100.0])
        assert np.isfinite(rate)
        assert rate < 0


class TestTransformedForm:
    def test_first_eigenfunction_at_degenerate_slot(self):
        params = ProblemParams(3, 2.0)
        spectrum = spectral.solve_transformed(params, 2, 200.0)
        assert spectrum.beta_slot == pytest.approx(params.M - 1)
        assert spectrum.pairs[0].value == pytest.approx(params.M - 1, abs=1e-2)

        s = spectrum.pairs[0].eigenfunction.nodes
        eta = closed_forms.RadialProfile(params, closed_forms.ProfileKind.ETA_FIRST)(s)
        np.testing.assert_allclose(spectrum.pairs[0].eigenfunction.values, eta / np.max(eta), atol=1e-2)

    def test_pull_back_gives_mode_eigenfunction(self):
        params = ProblemParams(3, 2.0)
        spectrum = spectral.solve_transformed(params, 2, 200.0)
        r = np.linspace(0.05, 5.0, 50)
        psi = closed_forms.first_eigenfunction(params, 2)
        expected = psi(r) / np.max(psi(np.linspace(0.01, 5.0, 5000)))
        np.testing.assert_allclose(spectrum.pull_back(1, r), expected, atol=1e-2)

    def test_second_eigenvalue_near_zero(self):
        spectrum = spectral.solve_transformed(ProblemParams(5, 0.0), 1, 200.0)
        assert spectrum.pairs[1].value == pytest.approx(0.0, abs=1e-2)
        assert spectrum.pairs[1].sign_changes == 1

    def test_radius_must_exceed_one(self):
        with pytest.raises(ParameterError):
            spectral.solve_transformed(ProblemParams(3, 2.0), 2, 0.5)


class TestNondegeneracyAndMorse:
    @pytest.mark.parametrize("n_dim, alpha, eps", [(3, 1.5, 0.1), (4, 2.0, 0.2)])
    def test_radial_nondegeneracy(self, n_dim, alpha, eps):
        assert spectral.radial_nondegeneracy_check(ProblemParams(n_dim, alpha), eps)

    def test_numeric_morse_index(self):
        assert spectral.morse_index_numeric(ProblemParams(3, 1.0), 100.0) == 4

    def test_numeric_morse_index_excludes_unit_eigenvalue(self, monkeypatch):
        spectra = {0: np.array([-0.5, 1.0]), 1: np.array([1.0]), 2: np.array([])}

        def fake_eigenvalues_in(problem, lower, upper, config):
            values = spectra[problem.k]
            return values[(values > lower) & (values <= upper)]

        monkeypatch.setattr(spectral, "eigenvalues_in", fake_eigenvalues_in)
        assert spectral.morse_index_numeric(ProblemParams(3, 1.0), 100.0) == 1

    def test_count_sign_changes_ignores_noise(self):
        values = np.array([1.0, 0.5, 1e-12, -1e-12, 0.2, -0.3, -1.0])
        assert spectral.count_sign_changes(values) == 1
