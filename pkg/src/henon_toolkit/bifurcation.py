"""
Degeneracy values of the truncated radial solutions and the data of the bifurcation diagram.

The truncated bubble on B_{1/ε} degenerates in mode k at the α where the first weighted eigenvalue meets -μ_k. These
values converge to 2(k-1) as ε → 0, where the Morse index of the standard bubble jumps by the multiplicity of μ_k.
The module also solves the radial Dirichlet problem -Δu = |x|^α u^p on the unit ball by shooting in the fictitious
dimension M.
"""

import dataclasses
import logging
import math

import numpy as np
from scipy import integrate, optimize

from henon_toolkit import core_params, settings, spectral
from henon_toolkit.core_params import ParameterError, ProblemParams
from henon_toolkit.radial_numerics import RadialFunction, RadialGrid, residual_radial
from henon_toolkit.spectral import Form, SpectralProblem
from henon_toolkit.task_base import FunctionTask, NumericalFailure, TaskPool


log = logging.getLogger(__name__)


LATTICE_STEPS_PER_OCTAVE = 400
LATTICE_R_MIN = 1e-4
PROFILE_NODES = 2001
BVP_NODES = 199
BVP_R_MIN = 0.05


class BracketError(NumericalFailure, ValueError):
    """
    Signals that no sign change of Λ₁(α) + μ_k was found in (0, max_alpha], that the function isn't decreasing on the
    bracket, or that the root doesn't meet the residual tolerance.
    """
    pass


class ShootingError(NumericalFailure):
    """
    Signals that a shooting solution didn't reach zero before ``s_max``, or that its height couldn't be matched to
    the unit radius.
    """
    pass


@dataclasses.dataclass(frozen=True)
class BifurcationPoint:
    k: int
    eps: float
    radius: float
    alpha_root: float
    residual: float
    limit_gap: float
    evaluations: int
    bracket: tuple[float, float]


def lattice_grid(R: float) -> RadialGrid:
    """
    Lattice grid shared by every radius of a convergence study, so that grids of radii differing by powers of two are
    nested and the discrete eigenvalues are monotone in R.
    """
    return RadialGrid.lattice(R, 2 ** (1 / LATTICE_STEPS_PER_OCTAVE), LATTICE_R_MIN)


def find_alpha_k(params_base: ProblemParams, k: int, eps: float, bracket: tuple[float, float] | None = None,
                 config: settings.Settings = settings.DEFAULT, grid: RadialGrid | None = None) -> BifurcationPoint:
    """
    Finds the α at which the first eigenvalue of the weighted problem on (0, 1/ε) equals -μ_k.
    :param params_base: Problem parameters; only the dimension is used.
    :param k: Mode, at least 1.
    :param eps: Truncation parameter, R = 1/ε.
    :param bracket: Initial bracket, (2(k-1) - 1, 2(k-1) + 1) clipped to α ≥ 0 by default. Expanded within
        (0, max_alpha] until the function changes sign.
    :param config: Settings.
    :param grid: Grid of radius 1/ε, the default spectral grid if not given.
    :return: The bifurcation point.
    """
    k = core_params.check_mode(k)
    if k < 1:
        raise ParameterError("Bifurcation values are defined for k ≥ 1")
    if not eps > 0:
        raise ParameterError(f"Truncation parameter must be positive, got {eps}")

    tol = config.bifurcation
    R = 1 / eps
    grid = grid or spectral.default_grid(R, config.spectral)
    problem = SpectralProblem(params_base, Form.WEIGHTED, R, grid=grid)
    mu_k = core_params.mu(params_base, k)

    evaluations = 0

    def g(alpha: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return spectral.first_eigenvalue(problem.with_alpha(alpha), config.spectral) + mu_k

    target = 2.0 * (k - 1)
    lo, hi = bracket if bracket is not None else (max(target - 1, 0.0), target + 1)
    if not 0 <= lo < hi <= tol.max_alpha:
        raise ParameterError(f"Bracket ({lo}, {hi}) must satisfy 0 ≤ lo < hi ≤ {tol.max_alpha}")

    width = hi - lo
    g_lo = g(lo)
    while g_lo <= 0:
        if lo == 0:
            raise BracketError(f"No sign change for k={k}: Λ₁(0) + μ_k = {g_lo} ≤ 0")
        lo = max(lo - width, 0.0)
        width *= 2
        g_lo = g(lo)
    g_hi = g(hi)
    while g_hi >= 0:
        if hi == tol.max_alpha:
            raise BracketError(f"No sign change for k={k} in (0, {tol.max_alpha}]")
        hi = min(hi + width, tol.max_alpha)
        width *= 2
        g_hi = g(hi)

    samples = np.linspace(lo, hi, tol.monotonic_samples)
    sampled = [g_lo] + [g(a) for a in samples[1:-1]] + [g_hi]
    if np.any(np.diff(sampled) >= 0):
        raise BracketError(f"Λ₁(α) + μ_k isn't decreasing on ({lo}, {hi}): {sampled}")

    log.debug(f"Bracket for k={k}, R={R}: ({lo}, {hi}), values ({g_lo}, {g_hi})")
    root = optimize.brentq(g, lo, hi, xtol=tol.alpha_tol)
    residual = g(root)
    if abs(residual) > tol.residual_tol:
        raise BracketError(f"Residual {residual} at alpha={root} exceeds {tol.residual_tol}")

    log.info(f"alpha_{k} for R={R}: {root} (residual {residual}, {evaluations} eigensolves)")
    return BifurcationPoint(k=k, eps=eps, radius=R, alpha_root=root, residual=residual,
                            limit_gap=abs(root - target), evaluations=evaluations, bracket=(lo, hi))


def limit_gap_study(params_base: ProblemParams, k: int, radii: list[float],
                    config: settings.Settings = settings.DEFAULT) -> list[BifurcationPoint]:
    """
    Locates α_k for every radius on nested lattice grids. Radii that differ by powers of two give gaps that are
    monotone up to the root-finding tolerance.
    """
    return [find_alpha_k(params_base, k, 1 / R, config=config, grid=lattice_grid(R)) for R in radii]


def branch_labels(n_dim: int, k: int) -> tuple[str, ...]:
    """
    Symmetry groups of the nonradial branches emanating at α_k: a single O(N-1)-invariant branch for odd k, and one
    O(N-h)×O(h)-invariant branch for each h = 1..⌊N/2⌋ for even k.
    """
    if k % 2:
        return (f"O({n_dim - 1})",)
    return tuple(f"O({n_dim - h})xO({h})" for h in range(1, n_dim // 2 + 1))


@dataclasses.dataclass(frozen=True)
class DiagramRow:
    """
    A bifurcation point with the symmetry of its branches. The branches are annotations, not computed continua, and
    are conjectured to be vertical (to exist only at even α).
    """
    point: BifurcationPoint
    branch_labels: tuple[str, ...]
    conjectured_vertical: bool = True

    @property
    def branch_count(self) -> int:
        return len(self.branch_labels)


def bifurcation_diagram(params_base: ProblemParams, k_max: int, eps_list: list[float],
                        config: settings.Settings = settings.DEFAULT, threads: int = 1) -> list[DiagramRow]:
    """
    Computes the bifurcation points for k = 2..k_max and every ε. Rows are ordered by k, then by the order of
    ``eps_list``, regardless of the number of threads.
    """
    if k_max < 2:
        raise ParameterError(f"The diagram needs k_max ≥ 2, got {k_max}")
    if not eps_list:
        raise ParameterError("The diagram needs at least one truncation parameter")

    pool = TaskPool("Bifurcation diagram", threads)
    keys = []
    for k in range(2, k_max + 1):
        for eps in eps_list:
            keys.append(k)
            pool.add_task(FunctionTask(f"alpha_{k} at eps={eps}", find_alpha_k, params_base, k, eps, config=config))

    pool.run()
    pool.raise_for_status()
    return [DiagramRow(point, branch_labels(params_base.N, k)) for k, point in zip(keys, pool.result)]


@dataclasses.dataclass(frozen=True)
class MorseRow:
    """
    Morse index at one grid point. ``crossings`` are the values 2(k-1) passed since the previous grid point, and
    ``expected_jump`` the sum of the multiplicities of those modes.
    """
    alpha: float
    morse: int
    jump: int
    crossings: tuple[float, ...]
    expected_jump: int
    numeric: int | None = None


def morse_jump_table(params_base: ProblemParams, alpha_grid: list[float], radius: float | None = None,
                     config: settings.Settings = settings.DEFAULT) -> list[MorseRow]:
    """
    Tabulates the Morse index of the standard bubble along an increasing α grid. Mode k enters between consecutive
    points α_{i-1} ≤ 2(k-1) < α_i, so a grid starting at α = 0 shows the entry of mode 1 in its first step.
    :param params_base: Problem parameters; only the dimension is used.
    :param alpha_grid: Strictly increasing α values.
    :param radius: If given, each row also carries the Morse index of the truncated bubble on B_radius.
    :param config: Settings.
    :return: One row per grid point.
    """
    alphas = [float(a) for a in alpha_grid]
    if not alphas:
        raise ParameterError("The alpha grid is empty")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ParameterError("The alpha grid must be strictly increasing")

    rows = []
    previous_morse = None
    previous_alpha = None
    for alpha in alphas:
        params = params_base.with_alpha(alpha)
        morse = core_params.morse_index(params).total

        crossings = ()
        expected = 0
        if previous_alpha is not None:
            crossed = [k for k in range(1, math.floor(alpha / 2) + 2) if previous_alpha <= 2 * (k - 1) < alpha]
            crossings = tuple(2.0 * (k - 1) for k in crossed)
            expected = sum(core_params.harmonic_multiplicity(params, k) for k in crossed)

        numeric = spectral.morse_index_numeric(params, radius, config.spectral) if radius is not None else None
        jump = 0 if previous_morse is None else morse - previous_morse
        rows.append(MorseRow(alpha=alpha, morse=morse, jump=jump, crossings=crossings, expected_jump=expected,
                             numeric=numeric))
        previous_morse = morse
        previous_alpha = alpha

    return rows


@dataclasses.dataclass(frozen=True)
class ShootingResult:
    """
    Solution of -v″ - ((M-1)/s)v′ = (4/(2+α)²)v^p from v(0) = d, v′(0) = 0, up to its first zero.
    """
    params: ProblemParams
    p: float
    d: float
    zero_radius: float
    profile: RadialFunction
    solution: integrate.OdeSolution = dataclasses.field(repr=False, compare=False)


def _check_exponent(params: ProblemParams, p: float):
    if not 1 < p < params.p_alpha:
        raise ParameterError(f"Exponent p must lie in (1, {params.p_alpha}), got {p}")


def shoot_bvp(params: ProblemParams, p: float, d: float,
              config: settings.ShootingSettings = settings.DEFAULT.shooting) -> ShootingResult:
    """
    Integrates the transformed radial equation from the origin until the solution first vanishes. The integration
    starts at s₀ from the two-term series v ≈ d - c·d^p s²/(2M).
    :param params: Problem parameters, defining M.
    :param p: Exponent in (1, p_α).
    :param d: Initial height.
    :param config: Integration tolerances.
    :return: Shooting solution.
    """
    _check_exponent(params, p)
    if not d > 0:
        raise ParameterError(f"Initial height must be positive, got {d}")

    m_dim = params.M
    c = 4 / (2 + params.alpha) ** 2
    s0 = config.s0

    def rhs(s, y):
        v, w = y
        return [w, -(m_dim - 1) / s * w - c * max(v, 0.0) ** p]

    def crossing(s, y):
        return y[0]

    crossing.terminal = True
    crossing.direction = -1

    start = [d - c * d ** p * s0 ** 2 / (2 * m_dim), -c * d ** p * s0 / m_dim]
    solution = integrate.solve_ivp(rhs, (s0, config.s_max), start, method="DOP853", rtol=config.rtol,
                                   atol=config.atol, events=crossing, dense_output=True)
    if solution.status == -1:
        raise ShootingError(f"Integration failed for d={d}: {solution.message}")
    if not solution.t_events[0].size:
        raise ShootingError(f"Shooting solution for d={d} has no zero before s={config.s_max}")

    zero_radius = float(solution.t_events[0][0])
    grid = RadialGrid.geometric(zero_radius, PROFILE_NODES, zero_radius * 1e-4)
    s = grid.nodes
    values, slopes = solution.sol(np.maximum(s, s0))
    series = s < s0
    values = np.where(series, d - c * d ** p * s ** 2 / (2 * m_dim), values)
    slopes = np.where(series, -c * d ** p * s / m_dim, slopes)

    log.debug(f"Shooting with d={d}, p={p}: zero at {zero_radius}")
    return ShootingResult(params=params, p=p, d=d, zero_radius=zero_radius,
                          profile=RadialFunction(grid, values, slopes), solution=solution.sol)


@dataclasses.dataclass(frozen=True)
class BvpSolution:
    """
    Solution of -Δu = |x|^α u^p in the unit ball with u = 0 on the boundary. ``d_scaling`` is the height predicted
    by the scaling law of the transformed equation and ``d_direct`` the height found by root finding; ``u`` is the
    composed solution u(r) = v(r^{(2+α)/2}) and ``residual`` the largest residual of the equation on its grid.
    """
    params: ProblemParams
    p: float
    d_scaling: float
    d_direct: float
    shooting: ShootingResult
    u: RadialFunction
    residual: float


def compose_radial(result: ShootingResult, grid: RadialGrid) -> RadialFunction:
    """
    Pulls a shooting solution back to u(r) = v(r^{(2+α)/2}), with u′(r) = v′(s)·((2+α)/2)·r^{α/2}.
    """
    alpha = result.params.alpha
    r = grid.nodes
    s = r ** ((2 + alpha) / 2)
    values, slopes = result.solution(s)
    return RadialFunction(grid, values, slopes * (2 + alpha) / 2 * r ** (alpha / 2))


def solve_bvp_unit_ball(params: ProblemParams, p: float, config: settings.Settings = settings.DEFAULT,
                        nodes: int = BVP_NODES) -> BvpSolution:
    """
    Solves the radial Dirichlet problem on the unit ball. The height d* with zero radius 1 follows from the scaling
    law zero(d) = zero(1)·d^{-(p-1)/2} and is cross-checked by root finding on log zero(d).
    """
    _check_exponent(params, p)
    unit = shoot_bvp(params, p, 1.0, config.shooting)
    d_scaling = unit.zero_radius ** (2 / (p - 1))

    def log_zero(log_d: float) -> float:
        return math.log(shoot_bvp(params, p, math.exp(log_d), config.shooting).zero_radius)

    lo = math.log(d_scaling) - 1
    hi = math.log(d_scaling) + 1
    for _ in range(10):
        if log_zero(lo) > 0 > log_zero(hi):
            break
        lo -= 1
        hi += 1
    else:
        raise ShootingError(f"Couldn't bracket the unit zero radius around d={d_scaling}")

    d_direct = math.exp(optimize.brentq(log_zero, lo, hi, xtol=1e-12))
    shooting = shoot_bvp(params, p, d_direct, config.shooting)

    u = compose_radial(shooting, RadialGrid.geometric(1.0, nodes, BVP_R_MIN))
    residual = residual_radial(u, params, coefficient=1.0, exponent=p)
    result = float(np.max(np.abs(residual.values)))
    log.info(f"Unit ball solution for N={params.N}, alpha={params.alpha}, p={p}: d*={d_direct} "
             f"(scaling law {d_scaling}), residual {result}")
    return BvpSolution(params=params, p=p, d_scaling=d_scaling, d_direct=d_direct, shooting=shooting, u=u,
                       residual=result)
