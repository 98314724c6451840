import dataclasses
import itertools
import logging
import typing
from collections.abc import Callable

import numpy as np

from henon_toolkit import bifurcation, closed_forms, core_params, radial_numerics, spectral
from henon_toolkit.closed_forms import BiRadialPoint
from henon_toolkit.core_params import ProblemParams
from henon_toolkit.radial_numerics import RadialGrid
from henon_toolkit.settings import Settings
from henon_toolkit.spectral import FarField, Form, SpectralProblem
from henon_toolkit.task_base import FunctionTask, NumericalFailure, Task, TaskPool, ValidationFailure

if typing.TYPE_CHECKING:
    from henon_toolkit.cli import RunConfig


log = logging.getLogger(__name__)


EIGENVALUE_TOL = 1e-3
LIMIT_TOL = 1e-2
ALPHA_TOL = 2e-2
SLOPE_TOL = 5e-2
DECAY_TOL = 3e-2
SCALING_TOL = 1e-2
HEIGHT_TOL = 5e-3
GAP_SLACK = 1e-7
SOBOLEV_RADIUS = 1e4
SOBOLEV_NODES = 6000
SOBOLEV_R_MIN = 1e-4


@dataclasses.dataclass(frozen=True)
class Check:
    """
    One row of a verification table.
    """
    name: str
    lhs: float | None
    rhs: float | None
    rel_error: float | None
    passed: bool

    @classmethod
    def compare(cls, name: str, lhs: float, rhs: float, tol: float) -> "Check":
        rel_error = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
        return cls(name, float(lhs), float(rhs), float(rel_error), bool(rel_error <= tol))

    @classmethod
    def condition(cls, name: str, lhs: float, rhs: float, passed: bool) -> "Check":
        rel_error = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
        return cls(name, float(lhs), float(rhs), float(rel_error), bool(passed))

    @classmethod
    def failure(cls, name: str, error: Exception) -> "Check":
        """
        A failed check for a computation that raised instead of producing a value.
        """
        return cls(f"{name} ({type(error).__name__}: {error})", None, None, None, False)

    @classmethod
    def from_report(cls, report: radial_numerics.IdentityReport, label: str, tol: float) -> "Check":
        return cls(f"{report.name} {label}", report.lhs, report.rhs, report.rel_error, report.passed(tol))

    def to_dict(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "rel_error": self.rel_error,
                "pass": self.passed}


@dataclasses.dataclass
class CommandOutput:
    columns: list[str]
    rows: list[dict]
    checks: list[Check] = dataclasses.field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)


def run_pool(name: str, threads: int, calls: list[tuple[str, Callable, tuple, dict]]) -> list:
    """
    Runs independent calls on a ``TaskPool`` and returns their results in the order of ``calls``. The first failure
    is re-raised.
    """
    pool = TaskPool(name, threads)
    for label, func, args, kwargs in calls:
        pool.add_task(FunctionTask(label, func, *args, **kwargs))
    pool.run()
    pool.raise_for_status()
    return pool.result


class CommandTask(Task):
    def __init__(self, name: str, config: "RunConfig", run_settings: Settings):
        """
        A single command of the command line, producing a table of results and a list of checks.
        :param name: Name of the task, as shown in the log.
        :param config: Parsed command line.
        :param run_settings: Effective settings.
        """
        super().__init__(name)
        self.config = config
        self.settings = run_settings

    def params(self, alpha: float) -> ProblemParams:
        return ProblemParams(self.config.n_dim, alpha)

    def run_impl(self) -> CommandOutput:
        raise NotImplementedError()


class SpectrumTask(CommandTask):
    COLUMNS = ["n", "alpha", "k", "radius", "form", "far_field", "h", "value", "sign_changes", "reference",
               "rel_error"]

    def solve(self, alpha: float, k: int, R: float) -> list[dict]:
        config = self.config
        params = self.params(alpha)
        form = Form(config.form)
        spectral_settings = self.settings.spectral

        if form == Form.TRANSFORMED:
            spectrum = spectral.solve_transformed(params, k, R, config.h_max, spectral_settings)
            pairs = spectrum.pairs
            references = {1: params.M - 1, 2: 0.0}
            far_field = FarField.DIRICHLET
        else:
            far_field = FarField(config.far_field or (FarField.DECAY if form == Form.LAMBDA else FarField.DIRICHLET))
            problem = SpectralProblem(params, form, R, k=k if form == Form.LAMBDA else 0,
                                      grid=spectral.default_grid(R, spectral_settings), far_field=far_field)
            pairs = spectral.solve_eigen(problem, config.h_max, spectral_settings)
            if form == Form.LAMBDA:
                references = {1: core_params.lambda_first_closed(params, k)}
            else:
                references = {1: core_params.lambda_limit(params)}

        rows = []
        for pair in pairs:
            reference = references.get(pair.index)
            rel_error = None
            if reference:
                rel_error = abs(pair.value - reference) / abs(reference)
            rows.append({
                "n": params.N, "alpha": params.alpha, "k": k, "radius": R, "form": str(form),
                "far_field": str(far_field), "h": pair.index, "value": pair.value,
                "sign_changes": pair.sign_changes, "reference": reference, "rel_error": rel_error,
            })
        return rows

    def run_impl(self) -> CommandOutput:
        config = self.config
        ks = config.ks if Form(config.form) != Form.WEIGHTED else (0,)
        calls = [(f"Spectrum alpha={a}, k={k}, R={R}", self.solve, (a, k, R), {})
                 for a, k, R in itertools.product(config.alphas, ks, config.radii)]
        rows = list(itertools.chain.from_iterable(run_pool("Spectrum sweep", config.threads, calls)))

        tol = EIGENVALUE_TOL if Form(config.form) == Form.LAMBDA else LIMIT_TOL
        checks = [
            Check.compare(f"{row['form']} N={row['n']} alpha={row['alpha']} k={row['k']} R={row['radius']}",
                          row["value"], row["reference"], tol)
            for row in rows if row["h"] == 1 and row["reference"]
        ]
        return CommandOutput(self.COLUMNS, rows, checks)


class MorseTask(CommandTask):
    COLUMNS = ["n", "alpha", "morse", "jump", "crossings", "expected_jump", "kernel_dimension", "numeric"]

    def run_impl(self) -> CommandOutput:
        config = self.config
        base = self.params(config.alphas[0])
        radius = config.radii[0] if config.radii else None
        table = bifurcation.morse_jump_table(base, list(config.alphas), radius, self.settings)

        rows = []
        checks = []
        for row in table:
            rows.append({
                "n": base.N, "alpha": row.alpha, "morse": row.morse, "jump": row.jump,
                "crossings": list(row.crossings), "expected_jump": row.expected_jump,
                "kernel_dimension": core_params.kernel_dimension(base.with_alpha(row.alpha)),
                "numeric": row.numeric,
            })
            if row.jump or row.expected_jump:
                checks.append(Check.condition(f"morse jump N={base.N} alpha={row.alpha}", row.jump,
                                              row.expected_jump, row.jump == row.expected_jump))
        return CommandOutput(self.COLUMNS, rows, checks)


class BifurcateTask(CommandTask):
    COLUMNS = ["n", "k", "eps", "radius", "alpha_root", "residual", "limit_gap", "evaluations", "bracket"]

    def run_impl(self) -> CommandOutput:
        config = self.config
        base = self.params(0.0)
        calls = [(f"alpha_{k} at R={R}", bifurcation.find_alpha_k, (base, k, 1 / R), {"config": self.settings})
                 for k, R in itertools.product(config.ks, config.radii)]
        points = run_pool("Bifurcation sweep", config.threads, calls)

        rows = []
        checks = []
        for point in points:
            rows.append({
                "n": base.N, "k": point.k, "eps": point.eps, "radius": point.radius, "alpha_root": point.alpha_root,
                "residual": point.residual, "limit_gap": point.limit_gap, "evaluations": point.evaluations,
                "bracket": list(point.bracket),
            })
            target = 2.0 * (point.k - 1)
            checks.append(Check.condition(f"alpha_{point.k} N={base.N} R={point.radius}", point.alpha_root, target,
                                          point.limit_gap <= ALPHA_TOL * max(target, 1.0)))
        return CommandOutput(self.COLUMNS, rows, checks)


class DiagramTask(CommandTask):
    COLUMNS = ["k", "R", "alpha_root", "limit_gap", "branch_labels", "branch_count", "conjectured_vertical"]

    def run_impl(self) -> CommandOutput:
        config = self.config
        base = self.params(0.0)
        diagram = bifurcation.bifurcation_diagram(base, config.k_max, [1 / R for R in config.radii], self.settings,
                                                  config.threads)
        rows = [{
            "k": row.point.k, "R": row.point.radius, "alpha_root": row.point.alpha_root,
            "limit_gap": row.point.limit_gap, "branch_labels": list(row.branch_labels),
            "branch_count": row.branch_count, "conjectured_vertical": row.conjectured_vertical,
        } for row in diagram]
        return CommandOutput(self.COLUMNS, rows)


class SobolevTask(CommandTask):
    COLUMNS = ["n", "alpha", "lambda", "M", "S_M", "constant", "quotient", "rel_error"]

    def run_impl(self) -> CommandOutput:
        config = self.config
        grid = RadialGrid.geometric(SOBOLEV_RADIUS, SOBOLEV_NODES, SOBOLEV_R_MIN)
        rows = []
        checks = []
        for alpha in config.alphas:
            params = self.params(alpha)
            constant = radial_numerics.sobolev_constant(params)
            profile = radial_numerics.sample_profile(closed_forms.bubble(params, config.lam), grid)
            quotient = radial_numerics.sobolev_quotient(profile, params)
            check = Check.compare(f"sobolev N={params.N} alpha={alpha}", quotient, constant,
                                  self.settings.identities.rel_tol)
            rows.append({
                "n": params.N, "alpha": alpha, "lambda": config.lam, "M": params.M,
                "S_M": radial_numerics.sobolev_best_constant_m(params.M), "constant": constant,
                "quotient": quotient, "rel_error": check.rel_error,
            })
            checks.append(check)
        return CommandOutput(self.COLUMNS, rows, checks)


class BvpTask(CommandTask):
    COLUMNS = ["n", "alpha", "p", "M", "d", "zero_radius", "d_scaling", "d_direct", "residual"]

    def run_impl(self) -> CommandOutput:
        config = self.config
        rows = []
        checks = []
        for alpha in config.alphas:
            params = self.params(alpha)
            for d in config.d_values:
                result = bifurcation.shoot_bvp(params, config.p, d, self.settings.shooting)
                rows.append({"n": params.N, "alpha": alpha, "p": config.p, "M": params.M, "d": d,
                             "zero_radius": result.zero_radius})

            solution = bifurcation.solve_bvp_unit_ball(params, config.p, self.settings)
            rows.append({
                "n": params.N, "alpha": alpha, "p": config.p, "M": params.M, "d": solution.d_direct,
                "zero_radius": solution.shooting.zero_radius, "d_scaling": solution.d_scaling,
                "d_direct": solution.d_direct, "residual": solution.residual,
            })
            checks.append(Check.compare(f"unit ball height N={params.N} alpha={alpha} p={config.p}",
                                        solution.d_direct, solution.d_scaling, HEIGHT_TOL))
        return CommandOutput(self.COLUMNS, rows, checks)


class IdentitiesTask(CommandTask):
    COLUMNS = ["n", "alpha", "identity", "parameter", "lhs", "rhs", "rel_error", "error_estimate"]

    def run_impl(self) -> CommandOutput:
        config = self.config
        identities = self.settings.identities
        tol = identities.rel_tol
        eps_values = [1 / R for R in config.radii] if config.radii else [0.1]

        rows = []
        checks = []
        for alpha in config.alphas:
            params = self.params(alpha)
            reports = [
                (config.lam, radial_numerics.bubble_mass_identity(params, config.lam, identities)),
                (None, radial_numerics.kernel_pairing_identity(params, identities)),
                (config.lam, radial_numerics.dilation_balance(params, config.lam, identities)),
            ]
            reports += [(eps, radial_numerics.pohozaev_check(params, eps, config=identities)) for eps in eps_values]

            for parameter, report in reports:
                rows.append({
                    "n": params.N, "alpha": alpha, "identity": report.name, "parameter": parameter,
                    "lhs": report.lhs, "rhs": report.rhs, "rel_error": report.rel_error,
                    "error_estimate": report.error_estimate,
                })
                if report.name == "dilation_balance" and config.lam != 1:
                    continue
                label = f"N={params.N} alpha={alpha}" + (f" ({parameter})" if parameter is not None else "")
                checks.append(Check.from_report(report, label, tol))
        return CommandOutput(self.COLUMNS, rows, checks)


def _ratio_check(name: str, coarse: float, fine: float) -> Check:
    ratio = coarse / fine
    return Check.condition(name, ratio, 4.0, 3.5 <= ratio <= 4.5)


class VerifyTask(CommandTask):
    COLUMNS = ["name", "lhs", "rhs", "rel_error", "pass"]
    GROUPS = ("eigenvalues", "limits", "bifurcation_values", "slopes", "sign_patterns", "morse", "identities",
              "sobolev", "nonradial", "unit_ball", "oscillation")

    def __init__(self, name: str, config: "RunConfig", run_settings: Settings):
        """
        Runs the verification suite: closed-form eigenvalues, limits, bifurcation values, the slope law, sign
        patterns, Morse arithmetic, integral identities, Sobolev extremality, the nonradial family, the unit ball
        problem and the oscillation and decay properties of eigenfunctions. ``--quick`` runs fewer parameter
        combinations and coarser residual grids.
        """
        super().__init__(name, config, run_settings)
        self.quick = config.quick

    def eigenvalues(self) -> list[Check]:
        cases = [(3, 2.0, 2), (4, 1.0, 0), (5, 0.5, 1)] if self.quick else \
            list(itertools.product((3, 4, 5), (0.5, 1.0, 2.0, 3.0), (0, 1, 2)))
        checks = []
        for n, alpha, k in cases:
            params = ProblemParams(n, alpha)
            problem = SpectralProblem(params, Form.LAMBDA, 200.0, k=k, far_field=FarField.DECAY,
                                      grid=spectral.default_grid(200.0, self.settings.spectral))
            value = spectral.first_eigenvalue(problem, self.settings.spectral)
            checks.append(Check.compare(f"lambda_first N={n} alpha={alpha} k={k}", value,
                                        core_params.lambda_first_closed(params, k), EIGENVALUE_TOL))
        return checks

    def limits(self) -> list[Check]:
        checks = []
        for n in (3, 4):
            params = ProblemParams(n, 2.0)
            problem = SpectralProblem(params, Form.WEIGHTED, 100.0,
                                      grid=spectral.default_grid(100.0, self.settings.spectral))
            checks.append(Check.compare(f"weighted_limit N={n} alpha=2",
                                        spectral.first_eigenvalue(problem, self.settings.spectral),
                                        core_params.lambda_limit(params), LIMIT_TOL))
        return checks

    def bifurcation_values(self) -> list[Check]:
        cases = [(3, 2)] if self.quick else [(3, 2), (3, 3), (4, 2), (4, 3)]
        checks = []
        for n, k in cases:
            point = bifurcation.find_alpha_k(ProblemParams(n, 0.0), k, 1 / 200, config=self.settings)
            target = 2.0 * (k - 1)
            checks.append(Check.condition(f"alpha_{k} N={n} R=200", point.alpha_root, target,
                                          point.limit_gap <= ALPHA_TOL * target))

        radii = [50.0, 100.0] if self.quick else [50.0, 100.0, 200.0]
        study = bifurcation.limit_gap_study(ProblemParams(3, 0.0), 2, radii, self.settings)
        increase = max(b.limit_gap - a.limit_gap for a, b in zip(study, study[1:]))
        checks.append(Check.condition("limit_gap monotone N=3 k=2", increase, 0.0, increase <= GAP_SLACK))
        return checks

    def slopes(self) -> list[Check]:
        cases = [(3, 2.0)] if self.quick else [(3, 2.0), (4, 2.0), (3, 1.0)]
        checks = []
        for n, alpha in cases:
            params = ProblemParams(n, alpha)
            slope = spectral.eigen_slope(params, 0.01, 0.01, self.settings.spectral)
            checks.append(Check.compare(f"eigen_slope N={n} alpha={alpha}", slope.value,
                                        core_params.lambda_limit_slope(params), SLOPE_TOL))
        return checks

    def sign_patterns(self) -> list[Check]:
        cases = [(0.1, 3, 2.0)] if self.quick else list(itertools.product((0.05, 0.1, 0.5), (3, 4), (1.0, 2.0)))
        checks = []
        for eps, n, alpha in cases:
            negative, positive = spectral.first_eigen_sign_check(ProblemParams(n, alpha), eps,
                                                                 self.settings.spectral)
            checks.append(Check.condition(f"sign_pattern N={n} alpha={alpha} eps={eps}", int(negative and positive),
                                          1, negative and positive))
        return checks

    def morse(self) -> list[Check]:
        checks = []
        alphas = list(np.arange(0.0, 12.75, 0.5))
        for n in range(3, 9):
            base = ProblemParams(n, 0.0)
            table = bifurcation.morse_jump_table(base, alphas)
            mismatches = sum(row.jump != row.expected_jump for row in table)
            checks.append(Check.condition(f"morse_jumps N={n}", mismatches, 0, mismatches == 0))

            kernel_ok = all(core_params.kernel_dimension(base.with_alpha(2.0 * (k - 1)))
                            == 1 + core_params.harmonic_multiplicity(base, k) for k in range(1, 7))
            checks.append(Check.condition(f"kernel_dimension N={n}", int(kernel_ok), 1, kernel_ok))
        return checks

    def identities(self) -> list[Check]:
        config = self.settings.identities
        tol = config.rel_tol
        checks = [
            Check.from_report(radial_numerics.bubble_mass_identity(ProblemParams(3, 0.0), 1.0, config),
                              "N=3 alpha=0", tol),
            Check.from_report(radial_numerics.bubble_mass_identity(ProblemParams(3, 2.0), 1.0, config),
                              "N=3 alpha=2", tol),
            Check.from_report(radial_numerics.kernel_pairing_identity(ProblemParams(3, 0.0), config),
                              "N=3 alpha=0", tol),
            Check.from_report(radial_numerics.kernel_pairing_identity(ProblemParams(4, 2.0), config),
                              "N=4 alpha=2", tol),
        ]
        for n, alpha, eps in [(3, 1.0, 0.1), (4, 2.0, 0.05)]:
            report = radial_numerics.pohozaev_check(ProblemParams(n, alpha), eps, config=config)
            checks.append(Check.from_report(report, f"N={n} alpha={alpha} eps={eps}", tol))
        return checks

    def sobolev(self) -> list[Check]:
        grid = RadialGrid.geometric(SOBOLEV_RADIUS, SOBOLEV_NODES, SOBOLEV_R_MIN)
        checks = []
        for alpha in ((1.0,) if self.quick else (0.0, 1.0, 2.0)):
            params = ProblemParams(3, alpha)
            quotient = radial_numerics.sobolev_quotient(
                radial_numerics.sample_profile(closed_forms.bubble(params), grid), params)
            checks.append(Check.compare(f"sobolev N=3 alpha={alpha}", quotient,
                                        radial_numerics.sobolev_constant(params), self.settings.identities.rel_tol))

            dilated = radial_numerics.sobolev_quotient(
                radial_numerics.sample_profile(closed_forms.bubble(params, 3.0), grid), params)
            checks.append(Check.compare(f"sobolev_dilation N=3 alpha={alpha}", dilated, quotient, 1e-6))
        return checks

    def nonradial(self) -> list[Check]:
        params = ProblemParams(4, 2.0)
        coarse_h, fine_h = (0.04, 0.02) if self.quick else (0.02, 0.01)
        checks = []
        for a in ((0.5,) if self.quick else (0.3, 0.5, 1.0)):
            u = closed_forms.nonradial_family(params, a)
            coarse = radial_numerics.residual_biradial(u, params, coarse_h)
            fine = radial_numerics.residual_biradial(u, params, fine_h)
            checks.append(_ratio_check(f"biradial_residual_order N=4 a={a}", coarse, fine))

        first = closed_forms.eval_nonradial_explicit(params, 0.5, BiRadialPoint(1.0, 0.0))
        second = closed_forms.eval_nonradial_explicit(params, 0.5, BiRadialPoint(0.0, 1.0))
        checks.append(Check.condition("nonradial N=4 a=0.5", first, second, abs(first - second) > 1e-6))

        samples = [BiRadialPoint(s, t) for s in np.linspace(0, 3, 7) for t in np.linspace(0, 3, 7)]
        report = closed_forms.check_harmonic_gradient_condition(params, samples)
        checks.append(Check.condition("gradient_condition N=4", report.max_deviation, 0.0,
                                      report.max_deviation <= 1e-12))
        return checks

    def unit_ball(self) -> list[Check]:
        params = ProblemParams(3, 1.0)
        p = 3.0
        heights = [0.5, 1.0, 2.0, 4.0]
        zeros = [bifurcation.shoot_bvp(params, p, d, self.settings.shooting).zero_radius for d in heights]
        slope, _ = np.polyfit(np.log(heights), np.log(zeros), 1)
        checks = [Check.compare("shooting_scaling N=3 alpha=1 p=3", slope, -(p - 1) / 2, SCALING_TOL)]

        solution = bifurcation.solve_bvp_unit_ball(params, p, self.settings)
        checks.append(Check.compare("unit_ball_height N=3 alpha=1 p=3", solution.d_direct, solution.d_scaling,
                                    HEIGHT_TOL))

        coarse = bifurcation.solve_bvp_unit_ball(params, p, self.settings, nodes=100).residual
        checks.append(_ratio_check("unit_ball_residual_order N=3 alpha=1 p=3", coarse, solution.residual))
        return checks

    def oscillation(self) -> list[Check]:
        params = ProblemParams(3, 2.0)
        problem = SpectralProblem(params, Form.WEIGHTED, 100.0,
                                  grid=spectral.default_grid(100.0, self.settings.spectral))
        pairs = spectral.solve_eigen(problem, 4, self.settings.spectral)
        checks = [Check.condition(f"sign_changes h={pair.index}", pair.sign_changes, pair.index - 1,
                                  pair.sign_changes == pair.index - 1) for pair in pairs]

        sharp = -(2 * params.N + params.alpha - 2) / 2
        fitted = radial_numerics.decay_fit(pairs[0].eigenfunction, (10.0, 30.0))
        checks.append(Check.compare("weighted_decay N=3 alpha=2", fitted, sharp, DECAY_TOL))

        grid = RadialGrid.geometric(1e4, 2000, 1e-2)
        for label, profile, expected in [
            ("bubble_decay N=3 alpha=1", closed_forms.bubble(ProblemParams(3, 1.0)), -1.0),
            ("psi_decay N=3 alpha=2 k=2", closed_forms.first_eigenfunction(params, 2), -3.0),
        ]:
            fitted = radial_numerics.decay_fit(radial_numerics.sample_profile(profile, grid), (1e2, 1e4))
            checks.append(Check.compare(label, fitted, expected, 1e-2))

        residual_grid = RadialGrid.geometric(50.0, 2000, 1e-2)
        fine_grid = RadialGrid.geometric(50.0, 4000, 1e-2)
        bubble = closed_forms.bubble(ProblemParams(3, 1.0))
        coarse = np.max(np.abs(radial_numerics.residual_radial(
            radial_numerics.sample_profile(bubble, residual_grid), bubble.params).values))
        fine = np.max(np.abs(radial_numerics.residual_radial(
            radial_numerics.sample_profile(bubble, fine_grid), bubble.params).values))
        checks.append(_ratio_check("bubble_residual_order N=3 alpha=1", coarse, fine))
        return checks

    def run_group(self, name: str) -> list[Check]:
        """
        Runs one group of checks. A group that raises a validation or numerical failure becomes a single failed
        check, so the other groups still run and the table is still written.
        """
        try:
            return getattr(self, name)()
        except (ValidationFailure, NumericalFailure) as e:
            log.warning(f"Verification group {name} failed: {e}")
            return [Check.failure(name, e)]

    def run_impl(self) -> CommandOutput:
        calls = [(name, self.run_group, (name,), {}) for name in self.GROUPS]
        checks = list(itertools.chain.from_iterable(run_pool("Verification suite", self.config.threads, calls)))

        failed = [c.name for c in checks if not c.passed]
        if failed:
            log.warning(f"Verification failed for: {', '.join(failed)}")
        log.info(f"Verification: {len(checks) - len(failed)} of {len(checks)} checks passed")
        rows = [c.to_dict() for c in checks]
        return CommandOutput(self.COLUMNS, rows, checks)


COMMAND_TASKS: dict[str, type[CommandTask]] = {
    "spectrum": SpectrumTask,
    "morse": MorseTask,
    "bifurcate": BifurcateTask,
    "diagram": DiagramTask,
    "verify": VerifyTask,
    "sobolev": SobolevTask,
    "bvp": BvpTask,
    "identities": IdentitiesTask,
}


def create_task(config: "RunConfig", run_settings: Settings) -> CommandTask:
    return COMMAND_TASKS[config.command](f"Command {config.command}", config, run_settings)
