"""
Eigenvalue problems of the linearized Hénon operator on truncated balls (0, R):

 * ``lambda_form``: -Δψ + μ_k ψ/r² = Λ·W ψ with the potential W(r) = p_αC(α)r^α/(1+r^{2+α})².
 * ``weighted_form``: -Δz - W z = Λ z/r², the radial problem whose first eigenvalue tends to -(2N+α-2)(α+2)/4.
 * ``transformed_form``: -Δ_M η - Λ·M(M+2)η/(1+s²)² = -β η/s² in the fictitious dimension M, eigenvalue β.

Each problem is discretized by lumped linear finite elements on a radial grid, which yields a symmetric pencil (A, B)
with A tridiagonal and B diagonal positive. Eigenvalues come from Sturm-sequence bisection on the tridiagonal
standard form; eigenvectors are refined by inverse iteration on the pencil itself.
"""

import dataclasses
import enum
import logging
import math

import numpy as np
from scipy import linalg, special

from henon_toolkit import core_params, settings
from henon_toolkit.closed_forms import kernel_radial
from henon_toolkit.core_params import ParameterError, ProblemParams
from henon_toolkit.radial_numerics import GridError, GridScheme, RadialFunction, RadialGrid
from henon_toolkit.task_base import NumericalFailure


log = logging.getLogger(__name__)


MIN_NODES = 200
SIGN_THRESHOLD = 1e-8
SIGNIFICANT_FRACTION = 1e-3
CONSISTENCY_TOL = 1e-6
TRANSFORMED_R_MIN = 1e-4


class EigenSolverError(NumericalFailure, ArithmeticError):
    """
    Signals that bisection or inverse iteration failed, or that the refined eigenvector doesn't reproduce its
    eigenvalue.
    """
    pass


class GridTooCoarseError(NumericalFailure):
    """
    Signals that an eigenfunction oscillates faster than the grid can resolve.
    """
    pass


class Form(enum.StrEnum):
    LAMBDA = "lambda_form"
    WEIGHTED = "weighted_form"
    TRANSFORMED = "transformed_form"


class FarField(enum.StrEnum):
    DIRICHLET = "dirichlet"
    DECAY = "decay"


def default_grid(R: float, config: settings.SpectralSettings = settings.DEFAULT.spectral,
                 r_min: float | None = None) -> RadialGrid:
    r_min = config.r_min_factor * R if r_min is None else r_min
    return RadialGrid.geometric(R, config.nodes, r_min)


@dataclasses.dataclass(frozen=True, eq=False)
class SpectralProblem:
    """
    One truncated eigenvalue problem. The origin condition follows the mode: zero flux for k = 0 and a vanishing
    value for k ≥ 1 in ``lambda_form``. At R the eigenfunction vanishes, unless ``far_field`` is ``decay``, which
    imposes ψ′(R) = -(N-2+k)ψ(R)/R as satisfied by the lambda_form eigenfunctions on the whole space.
    """
    params: ProblemParams
    form: Form
    R: float
    k: int = 0
    Lambda_fixed: float = 1.0
    grid: RadialGrid | None = None
    far_field: FarField = FarField.DIRICHLET

    def __post_init__(self):
        object.__setattr__(self, "form", Form(self.form))
        object.__setattr__(self, "far_field", FarField(self.far_field))
        object.__setattr__(self, "k", core_params.check_mode(self.k))

        if not (math.isfinite(self.R) and self.R > 0):
            raise ParameterError(f"Truncation radius must be positive, got {self.R}")
        if self.form == Form.WEIGHTED and self.k != 0:
            raise ParameterError("The weighted problem is radial; k must be 0")
        if self.far_field == FarField.DECAY and self.form != Form.LAMBDA:
            raise ParameterError("The decay condition at R is only available for lambda_form")

        if self.grid is None:
            r_min = min(TRANSFORMED_R_MIN, settings.DEFAULT.spectral.r_min_factor * self.R) \
                if self.form == Form.TRANSFORMED else None
            object.__setattr__(self, "grid", default_grid(self.R, r_min=r_min))
        elif self.grid.R != self.R:
            raise GridError(f"Grid radius {self.grid.R} doesn't match the truncation radius {self.R}")

    @property
    def dimension(self) -> float:
        return self.params.M if self.form == Form.TRANSFORMED else float(self.params.N)

    @property
    def bc_origin(self) -> str:
        return "dirichlet" if self.form == Form.LAMBDA and self.k >= 1 else "zero_flux"

    def with_alpha(self, alpha: float) -> "SpectralProblem":
        return dataclasses.replace(self, params=self.params.with_alpha(alpha))

    def with_grid(self, grid: RadialGrid) -> "SpectralProblem":
        return dataclasses.replace(self, R=grid.R, grid=grid)


@dataclasses.dataclass(frozen=True)
class EigenPair:
    """
    The h-th eigenvalue with its eigenfunction, normalized to max-norm 1 with its first significant value positive.
    """
    index: int
    value: float
    eigenfunction: RadialFunction
    sign_changes: int


@dataclasses.dataclass(frozen=True, eq=False)
class DiscretePencil:
    """
    Pencil on the unknown nodes: A = (link Laplacian) + diag(extra), B = diag(mass).
    """
    links: np.ndarray
    extra: np.ndarray
    mass: np.ndarray

    @property
    def size(self) -> int:
        return self.mass.size

    @property
    def diagonal(self) -> np.ndarray:
        diagonal = self.extra.copy()
        diagonal[:-1] += self.links
        diagonal[1:] += self.links
        return diagonal

    @property
    def off_diagonal(self) -> np.ndarray:
        return -self.links

    def standard_form(self) -> tuple[np.ndarray, np.ndarray]:
        """
        Diagonal and off-diagonal of B^{-1/2}AB^{-1/2}.
        """
        return self.diagonal / self.mass, self.off_diagonal / np.sqrt(self.mass[:-1] * self.mass[1:])

    def rayleigh_quotient(self, x: np.ndarray) -> float:
        energy = np.sum(self.links * np.diff(x) ** 2) + np.sum(self.extra * x * x)
        return float(energy / np.sum(self.mass * x * x))

    def shifted_banded(self, shift: float) -> np.ndarray:
        banded = np.zeros((3, self.size))
        banded[0, 1:] = self.off_diagonal
        banded[1] = self.diagonal - shift * self.mass
        banded[2, :-1] = self.off_diagonal
        return banded


def _potential(params: ProblemParams, r: np.ndarray) -> np.ndarray:
    # p_α C(α) r^α / (1 + r^{2+α})²
    t = np.log(r)
    m = 2 + params.alpha
    return params.p_alpha * params.C_alpha * np.exp(params.alpha * t - 2 * np.logaddexp(0.0, m * t))


def assemble(problem: SpectralProblem) -> DiscretePencil:
    """
    Builds the discrete pencil of a problem. Stiffness links integrate r^{d-1} exactly over each element, and the
    potential and mass terms are lumped on the dual cells.
    """
    params = problem.params
    grid = problem.grid
    r = grid.nodes
    d = problem.dimension
    cells = grid.cell_widths()

    h = np.diff(r)
    links = r[:-1] ** d * np.expm1(d * np.log(r[1:] / r[:-1])) / (d * h ** 2)

    match problem.form:
        case Form.LAMBDA:
            extra = core_params.mu(params, problem.k) * r ** (d - 3) * cells
            mass = _potential(params, r) * r ** (d - 1) * cells
        case Form.WEIGHTED:
            extra = -_potential(params, r) * r ** (d - 1) * cells
            mass = r ** (d - 3) * cells
        case Form.TRANSFORMED:
            m_dim = params.M
            extra = -problem.Lambda_fixed * m_dim * (m_dim + 2) * r ** (d - 1) / (1 + r * r) ** 2 * cells
            mass = r ** (d - 3) * cells
        case _:
            raise ValueError(f"Unknown form {problem.form}")

    if problem.bc_origin == "dirichlet":
        extra[0] += r[0] ** (d - 2) / d

    if problem.far_field == FarField.DIRICHLET:
        extra = extra[:-1]
        extra[-1] += links[-1]
        return DiscretePencil(links=links[:-1], extra=extra, mass=mass[:-1])

    extra[-1] += (params.N - 2 + problem.k) * grid.R ** (d - 2)
    return DiscretePencil(links=links, extra=extra, mass=mass)


def count_sign_changes(values: np.ndarray) -> int:
    significant = values[np.abs(values) >= SIGN_THRESHOLD * np.max(np.abs(values))]
    return int(np.count_nonzero(np.diff(np.sign(significant))))


def _lobe_sizes(values: np.ndarray) -> list[int]:
    significant = np.sign(values[np.abs(values) >= SIGN_THRESHOLD * np.max(np.abs(values))])
    breaks = np.flatnonzero(np.diff(significant)) + 1
    return [len(lobe) for lobe in np.split(significant, breaks)]


def _normalize(x: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(x))
    first = x[np.flatnonzero(np.abs(x) > SIGNIFICANT_FRACTION * scale)[0]]
    return x / (scale if first > 0 else -scale)


def _refine(pencil: DiscretePencil, value: float, start: np.ndarray, iterations: int) -> np.ndarray:
    shift = value - 1e-9 * max(1.0, abs(value))
    banded = pencil.shifted_banded(shift)
    x = start / np.max(np.abs(start))
    for _ in range(iterations):
        try:
            x = linalg.solve_banded((1, 1), banded, pencil.mass * x)
        except linalg.LinAlgError as e:
            raise EigenSolverError(f"Inverse iteration failed near {value}: {e}") from e
        x /= np.max(np.abs(x))
    return x


def _check_solvable(problem: SpectralProblem, h_max: int, unknowns: int):
    if problem.grid.n < MIN_NODES:
        raise GridError(f"Eigensolves need at least {MIN_NODES} nodes, got {problem.grid.n}")
    if not 1 <= h_max <= unknowns:
        raise ParameterError(f"Number of eigenpairs must lie in [1, {unknowns}], got {h_max}")


def solve_eigen(problem: SpectralProblem, h_max: int,
                config: settings.SpectralSettings = settings.DEFAULT.spectral) -> list[EigenPair]:
    """
    Computes the first ``h_max`` eigenpairs of a problem. For ``lambda_form`` and ``weighted_form`` these are the
    lowest eigenvalues, in increasing order; for ``transformed_form`` they are the largest β, in decreasing order.
    :param problem: Problem to solve.
    :param h_max: Number of eigenpairs.
    :param config: Solver tolerances.
    :return: Eigenpairs with index 1 to ``h_max``.
    """
    pencil = assemble(problem)
    _check_solvable(problem, h_max, pencil.size)

    diagonal, off_diagonal = pencil.standard_form()
    try:
        values, vectors = linalg.eigh_tridiagonal(diagonal, off_diagonal, select="i", select_range=(0, h_max - 1),
                                                  tol=config.bisection_tol, lapack_driver="stebz")
    except linalg.LinAlgError as e:
        raise EigenSolverError(f"Tridiagonal eigensolve failed: {e}") from e

    log.debug(f"Solved {problem.form} (N={problem.params.N}, alpha={problem.params.alpha}, k={problem.k}, "
              f"R={problem.R}, n={problem.grid.n}): {values}")

    pairs = []
    for h, value in enumerate(values, start=1):
        x = _refine(pencil, value, vectors[:, h - 1] / np.sqrt(pencil.mass), config.inverse_iterations)
        quotient = pencil.rayleigh_quotient(x)
        if abs(quotient - value) > CONSISTENCY_TOL * max(1.0, abs(value)):
            raise EigenSolverError(f"Eigenvector {h} reproduces {quotient} instead of {value}")

        if problem.far_field == FarField.DIRICHLET:
            x = np.append(x, 0.0)
        x = _normalize(x)

        lobes = _lobe_sizes(x)
        if min(lobes) < config.min_nodes_per_lobe:
            raise GridTooCoarseError(f"Eigenfunction {h} has a lobe of {min(lobes)} nodes; refine the grid")

        tail_exponent = None
        if problem.far_field == FarField.DECAY:
            tail_exponent = problem.params.N - 2 + problem.k
        eigenfunction = RadialFunction(problem.grid, x, tail_exponent=tail_exponent)

        reported = -quotient if problem.form == Form.TRANSFORMED else quotient
        pairs.append(EigenPair(index=h, value=reported, eigenfunction=eigenfunction,
                               sign_changes=count_sign_changes(x)))

    return pairs


def first_eigenvalue(problem: SpectralProblem,
                     config: settings.SpectralSettings = settings.DEFAULT.spectral) -> float:
    return solve_eigen(problem, 1, config)[0].value


def eigenvalues_in(problem: SpectralProblem, lower: float, upper: float,
                   config: settings.SpectralSettings = settings.DEFAULT.spectral) -> np.ndarray:
    """
    Eigenvalues of the pencil in the half-open interval (lower, upper], by bisection only.
    """
    pencil = assemble(problem)
    _check_solvable(problem, 1, pencil.size)
    diagonal, off_diagonal = pencil.standard_form()
    try:
        return linalg.eigh_tridiagonal(diagonal, off_diagonal, eigvals_only=True, select="v",
                                       select_range=(lower, upper), tol=config.bisection_tol,
                                       lapack_driver="stebz")
    except linalg.LinAlgError as e:
        raise EigenSolverError(f"Tridiagonal eigensolve failed: {e}") from e


def _check_eps(eps: float):
    if not 0 < eps < 1:
        raise ParameterError(f"Truncation parameter must lie in (0, 1), got {eps}")


def first_eigen_sign_check(params: ProblemParams, eps: float,
                           config: settings.SpectralSettings = settings.DEFAULT.spectral) -> tuple[bool, bool]:
    """
    Checks that the weighted problem on (0, 1/ε) has Λ₁ < 0 < Λ₂.
    """
    _check_eps(eps)
    R = 1 / eps
    problem = SpectralProblem(params, Form.WEIGHTED, R, grid=default_grid(R, config))
    first, second = solve_eigen(problem, 2, config)
    log.debug(f"Weighted eigenvalues for eps={eps}: {first.value}, {second.value}")
    return first.value < 0, second.value > 0


@dataclasses.dataclass(frozen=True)
class TransformedSpectrum:
    """
    Eigenpairs of the transformed problem on (0, R) in the variable s. ``beta_slot`` is 4μ_k/(2+α)², the value of β
    at which the transformed eigenfunction pulls back to a mode-k solution of the linearized equation.
    """
    params: ProblemParams
    k: int
    R: float
    beta_slot: float
    pairs: tuple[EigenPair, ...]

    def pull_back(self, h: int, r: np.ndarray) -> np.ndarray:
        """
        Evaluates η_h(r^{(2+α)/2}) at radii ``r``, by linear interpolation in s. Values beyond R are 0.
        """
        eigenfunction = self.pairs[h - 1].eigenfunction
        s = np.asarray(r, dtype=float) ** ((2 + self.params.alpha) / 2)
        return np.interp(s, eigenfunction.nodes, eigenfunction.values, left=eigenfunction.values[0], right=0.0)


def solve_transformed(params: ProblemParams, k: int, R: float, h_max: int = 2,
                      config: settings.SpectralSettings = settings.DEFAULT.spectral,
                      grid: RadialGrid | None = None) -> TransformedSpectrum:
    """
    Solves the transformed problem with Λ = 1, whose top eigenvalues are β₁ = M-1 and β₂ = 0 on the whole line.
    :param params: Problem parameters.
    :param k: Mode whose β slot is reported.
    :param R: Truncation radius in the variable s, greater than 1.
    :param h_max: Number of eigenpairs.
    :param config: Solver tolerances.
    :param grid: Grid in s; geometric by default.
    :return: Transformed spectrum.
    """
    if not R > 1:
        raise ParameterError(f"Transformed truncation radius must exceed 1, got {R}")
    grid = grid or default_grid(R, config, r_min=min(TRANSFORMED_R_MIN, config.r_min_factor * R))
    problem = SpectralProblem(params, Form.TRANSFORMED, R, k=k, grid=grid)
    pairs = solve_eigen(problem, h_max, config)
    return TransformedSpectrum(params=params, k=problem.k, R=R, beta_slot=core_params.beta_slot(params, k),
                               pairs=tuple(pairs))


def radial_nondegeneracy_check(params: ProblemParams, eps: float,
                               config: settings.SpectralSettings = settings.DEFAULT.spectral) -> bool:
    """
    Checks that the truncated bubble u_{ε,α} is nondegenerate among radial functions: the radial problem on
    (0, 1/ε) has no eigenvalue within 10⁻⁶ of 1, and the radial kernel element Z doesn't vanish at 1/ε.
    """
    _check_eps(eps)
    R = 1 / eps
    problem = SpectralProblem(params, Form.LAMBDA, R, k=0, grid=default_grid(R, config))
    near_one = eigenvalues_in(problem, 1 - CONSISTENCY_TOL, 1 + CONSISTENCY_TOL, config)
    boundary_value = kernel_radial(params)(R)
    log.debug(f"Radial nondegeneracy for eps={eps}: {near_one.size} eigenvalues near 1, Z(1/eps)={boundary_value}")
    return near_one.size == 0 and boundary_value != 0


@dataclasses.dataclass(frozen=True)
class SlopeEstimate:
    """
    Derivative of the first weighted eigenvalue with respect to α, by central differences and by the Rayleigh
    quotient of the derivative of the potential.
    """
    alpha: float
    radius: float
    finite_difference: float
    rayleigh: float

    @property
    def value(self) -> float:
        return self.finite_difference


def _potential_alpha_derivative(params: ProblemParams, r: np.ndarray) -> np.ndarray:
    n = params.N
    alpha = params.alpha
    t = np.log(r)
    log_derivative = (3 * n + 2 + 4 * alpha) / ((n + 2 + 2 * alpha) * (n + alpha))
    log_derivative = log_derivative + t * (1 - 2 * special.expit((2 + alpha) * t))
    return _potential(params, r) * log_derivative


def eigen_slope(params: ProblemParams, eps: float, dalpha: float,
                config: settings.SpectralSettings = settings.DEFAULT.spectral) -> SlopeEstimate:
    """
    Estimates ∂Λ₁/∂α for the weighted problem on (0, 1/ε).
    :param params: Problem parameters at which the slope is taken.
    :param eps: Truncation parameter in (0, 1).
    :param dalpha: Finite-difference step in [10⁻⁴, 10⁻¹], not exceeding α.
    :param config: Solver tolerances.
    :return: Both slope estimates.
    """
    _check_eps(eps)
    if not 1e-4 <= dalpha <= 1e-1:
        raise ParameterError(f"Finite-difference step must lie in [1e-4, 1e-1], got {dalpha}")
    if dalpha > params.alpha:
        raise ParameterError(f"Finite-difference step {dalpha} exceeds alpha = {params.alpha}")

    R = 1 / eps
    problem = SpectralProblem(params, Form.WEIGHTED, R, grid=default_grid(R, config))
    upper = first_eigenvalue(problem.with_alpha(params.alpha + dalpha), config)
    lower = first_eigenvalue(problem.with_alpha(params.alpha - dalpha), config)
    finite_difference = (upper - lower) / (2 * dalpha)

    pair = solve_eigen(problem, 1, config)[0]
    r = problem.grid.nodes
    cells = problem.grid.cell_widths()
    z = pair.eigenfunction.values
    numerator = np.sum(_potential_alpha_derivative(params, r) * r ** (params.N - 1) * cells * z * z)
    denominator = np.sum(r ** (params.N - 3) * cells * z * z)
    rayleigh = float(-numerator / denominator)

    log.debug(f"Slope at alpha={params.alpha}, R={R}: finite difference {finite_difference}, Rayleigh {rayleigh}")
    return SlopeEstimate(alpha=params.alpha, radius=R, finite_difference=finite_difference, rayleigh=rayleigh)


def two_grid_error(problem: SpectralProblem, h: int = 1,
                   config: settings.SpectralSettings = settings.DEFAULT.spectral) -> float:
    """
    Discretization error estimate |Λ_h(n) - Λ_h(2n-1)|/3 from the nested geometric grid with every interval halved
    in log r.
    """
    grid = problem.grid
    if grid.scheme != GridScheme.GEOMETRIC:
        raise GridError("Two-grid estimates need a geometric grid")

    fine = problem.with_grid(RadialGrid.geometric(grid.R, 2 * grid.n - 1, grid.nodes[0]))
    coarse_value = solve_eigen(problem, h, config)[h - 1].value
    fine_value = solve_eigen(fine, h, config)[h - 1].value
    return abs(coarse_value - fine_value) / 3


@dataclasses.dataclass(frozen=True)
class RadiusExtrapolation:
    radius: float
    coarse: float
    fine: float
    power: float
    extrapolated: float


def radius_extrapolation(params: ProblemParams, k: int, R: float, power: float | None = None,
                         config: settings.SpectralSettings = settings.DEFAULT.spectral) -> RadiusExtrapolation:
    """
    Richardson extrapolation of the first lambda_form eigenvalue with Dirichlet truncation, from the radii R and 2R,
    assuming an error proportional to R^{-power}. The default power is N-2+2k.
    """
    k = core_params.check_mode(k)
    power = params.N - 2 + 2 * k if power is None else power
    if not power > 0:
        raise ParameterError(f"Extrapolation power must be positive, got {power}")

    coarse_grid = default_grid(R, config)
    fine_grid = default_grid(2 * R, config, r_min=coarse_grid.nodes[0])
    coarse = first_eigenvalue(SpectralProblem(params, Form.LAMBDA, R, k=k, grid=coarse_grid), config)
    fine = first_eigenvalue(SpectralProblem(params, Form.LAMBDA, 2 * R, k=k, grid=fine_grid), config)
    factor = 2 ** power
    extrapolated = (factor * fine - coarse) / (factor - 1)
    return RadiusExtrapolation(radius=R, coarse=coarse, fine=fine, power=power, extrapolated=extrapolated)


def limit_rate(params: ProblemParams, radii: list[float],
               config: settings.SpectralSettings = settings.DEFAULT.spectral) -> float:
    """
    Fitted exponent of |Λ₁^R - Λ₁| against R for the weighted problem, where Λ₁ is the limit eigenvalue. The rate
    is measured only; it's dominated by discretization error once the truncation error drops below it.
    """
    if len(radii) < 2:
        raise ParameterError("The limit rate needs at least two radii")

    limit = core_params.lambda_limit(params)
    gaps = []
    for R in radii:
        problem = SpectralProblem(params, Form.WEIGHTED, R, grid=default_grid(R, config))
        gaps.append(abs(first_eigenvalue(problem, config) - limit))

    slope, _ = np.polyfit(np.log(radii), np.log(gaps), 1)
    log.info(f"Empirical rate of the weighted eigenvalue limit for N={params.N}, alpha={params.alpha}: {slope}")
    return float(slope)


def morse_index_numeric(params: ProblemParams, R: float,
                        config: settings.SpectralSettings = settings.DEFAULT.spectral) -> int:
    """
    Morse index of the truncated bubble on B_R: the eigenvalues below 1 of the mode-k problems with Dirichlet
    condition at R, counted with the harmonic multiplicity of each mode.
    """
    grid = default_grid(R, config)
    total = 0
    k = 0
    while True:
        problem = SpectralProblem(params, Form.LAMBDA, R, k=k, grid=grid)
        count = eigenvalues_in(problem, -1.0, np.nextafter(1.0, 0.0), config).size
        if count == 0:
            break
        total += count * core_params.harmonic_multiplicity(params, k)
        k += 1

    log.debug(f"Numerical Morse index for N={params.N}, alpha={params.alpha}, R={R}: {total}")
    return total
