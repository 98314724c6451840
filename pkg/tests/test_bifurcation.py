import numpy as np
import pytest

from henon_toolkit import bifurcation, settings
from henon_toolkit.bifurcation import BracketError, ShootingError
from henon_toolkit.core_params import ParameterError, ProblemParams


class TestBranchLabels:
    @pytest.mark.parametrize("n_dim, k, expected", [
        (3, 2, ("O(2)xO(1)",)),
        (3, 3, ("O(2)",)),
        (4, 2, ("O(3)xO(1)", "O(2)xO(2)")),
        (5, 3, ("O(4)",)),
        (7, 4, ("O(6)xO(1)", "O(5)xO(2)", "O(4)xO(3)")),
    ])
    def test_labels(self, n_dim, k, expected):
        assert bifurcation.branch_labels(n_dim, k) == expected


class TestFindAlphaK:
    def test_mode_two(self):
        point = bifurcation.find_alpha_k(ProblemParams(3, 0.0), 2, 1 / 200)
        assert point.radius == pytest.approx(200.0)
        assert point.alpha_root == pytest.approx(2.0, abs=0.04)
        assert point.alpha_root > 2.0
        assert point.limit_gap <= 0.04
        assert abs(point.residual) <= settings.DEFAULT.bifurcation.residual_tol
        assert point.bracket[0] < point.alpha_root < point.bracket[1]

    @pytest.mark.slow
    def test_mode_three(self):
        point = bifurcation.find_alpha_k(ProblemParams(3, 0.0), 3, 1 / 200)
        assert point.alpha_root == pytest.approx(4.0, abs=0.1)

    def test_invalid_mode(self):
        with pytest.raises(ParameterError):
            bifurcation.find_alpha_k(ProblemParams(3, 0.0), 0, 0.01)

    def test_invalid_bracket(self):
        with pytest.raises(ParameterError):
            bifurcation.find_alpha_k(ProblemParams(3, 0.0), 2, 0.01, bracket=(3.0, 1.0))

    def test_no_sign_change(self):
        config = settings.DEFAULT.merged({"bifurcation": {"max_alpha": 1.5}})
        with pytest.raises(BracketError):
            bifurcation.find_alpha_k(ProblemParams(3, 0.0), 2, 0.01, bracket=(0.5, 1.5), config=config)

    @pytest.mark.slow
    def test_limit_gap_decreases(self):
        points = bifurcation.limit_gap_study(ProblemParams(3, 0.0), 2, [100.0, 200.0, 400.0])
        gaps = [point.limit_gap for point in points]
        assert all(b <= a + 1e-7 for a, b in zip(gaps, gaps[1:]))


@pytest.mark.slow
class TestDiagram:
    def test_rows_in_order(self):
        rows = bifurcation.bifurcation_diagram(ProblemParams(3, 0.0), 3, [0.01, 0.005], threads=2)
        assert [(row.point.k, row.point.eps) for row in rows] == [(2, 0.01), (2, 0.005), (3, 0.01), (3, 0.005)]
        assert [row.branch_count for row in rows] == [1, 1, 1, 1]
        assert all(row.conjectured_vertical for row in rows)

    def test_requires_two_modes(self):
        with pytest.raises(ParameterError):
            bifurcation.bifurcation_diagram(ProblemParams(3, 0.0), 1, [0.01])


class TestMorseJumps:
    def test_dimension_three(self):
        rows = bifurcation.morse_jump_table(ProblemParams(3, 0.0), list(np.arange(0.0, 6.75, 0.5)))
        jumps = [(row.alpha, row.jump, row.crossings) for row in rows if row.jump]
        assert jumps == [(0.5, 3, (0.0,)), (2.5, 5, (2.0,)), (4.5, 7, (4.0,)), (6.5, 9, (6.0,))]
        assert all(row.jump == row.expected_jump for row in rows)

        morse = [row.morse for row in rows]
        assert morse[0] == 1
        assert all(a <= b for a, b in zip(morse, morse[1:]))

    def test_grid_must_increase(self):
        with pytest.raises(ParameterError):
            bifurcation.morse_jump_table(ProblemParams(3, 0.0), [1.0, 1.0])

    @pytest.mark.slow
    def test_numeric_index_matches(self):
        rows = bifurcation.morse_jump_table(ProblemParams(3, 0.0), [1.0, 3.0], radius=100.0)
        assert [(row.morse, row.numeric) for row in rows] == [(4, 4), (9, 9)]


class TestShooting:
    @pytest.mark.parametrize("p, expected", [(3.0, 6.89685), (1.5, 3.65375)])
    def test_lane_emden_zeros(self, p, expected):
        # α = 0, N = 3 reduces to the Lane-Emden equation
        result = bifurcation.shoot_bvp(ProblemParams(3, 0.0), p, 1.0)
        assert result.zero_radius == pytest.approx(expected, rel=1e-5)
        assert result.profile.values[-1] == pytest.approx(0.0, abs=1e-8)
        assert result.profile.values[0] == pytest.approx(1.0, rel=1e-6)

    def test_height_scaling(self):
        params = ProblemParams(4, 1.0)
        unit = bifurcation.shoot_bvp(params, 2.0, 1.0)
        scaled = bifurcation.shoot_bvp(params, 2.0, 4.0)
        assert scaled.zero_radius == pytest.approx(unit.zero_radius * 4.0 ** -0.5, rel=1e-8)

    @pytest.mark.parametrize("p, d", [(1.0, 1.0), (5.0, 1.0), (3.0, 0.0)])
    def test_invalid_arguments(self, p, d):
        with pytest.raises(ParameterError):
            bifurcation.shoot_bvp(ProblemParams(3, 0.0), p, d)

    def test_no_zero_before_limit(self):
        config = settings.ShootingSettings(s_max=1.0)
        with pytest.raises(ShootingError):
            bifurcation.shoot_bvp(ProblemParams(3, 0.0), 3.0, 1.0, config)


class TestUnitBall:
    def test_scaling_law_matches_root(self):
        solution = bifurcation.solve_bvp_unit_ball(ProblemParams(3, 1.0), 3.0)
        assert solution.d_direct == pytest.approx(solution.d_scaling, rel=1e-6)
        assert solution.shooting.zero_radius == pytest.approx(1.0, rel=1e-9)
        assert solution.u.values[-1] == pytest.approx(0.0, abs=1e-8)
        assert solution.u.values[0] == pytest.approx(solution.d_direct, rel=5e-3)

    def test_residual_is_second_order(self):
        params = ProblemParams(3, 1.0)
        coarse = bifurcation.solve_bvp_unit_ball(params, 3.0, nodes=100)
        fine = bifurcation.solve_bvp_unit_ball(params, 3.0, nodes=199)
        assert 3.5 <= coarse.residual / fine.residual <= 4.5
