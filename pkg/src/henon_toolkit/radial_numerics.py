"""
Measurement instruments for radial and bi-radial functions: grids, finite-difference residuals of the Hénon
equation, weighted norms, power-law decay fits, and quadrature checks of the integral identities satisfied by the
standard bubble and its truncations.

Integrals over ℝ^N of radial functions are reduced to Nω_N∫_0^∞ g(r) r^{N-1} dr. Tails beyond the last grid node or
beyond ``tail_radius`` are added in closed form from the known power-law decay.
"""

import dataclasses
import enum
import logging
import math
import warnings
from collections.abc import Callable

import numpy as np
from scipy import integrate, special

from henon_toolkit import closed_forms, core_params, settings
from henon_toolkit.closed_forms import RadialProfile
from henon_toolkit.core_params import ParameterError, ProblemParams
from henon_toolkit.task_base import NumericalFailure, ValidationFailure


log = logging.getLogger(__name__)


MIN_RESIDUAL_NODES = 5


class GridError(ValidationFailure, ValueError):
    """
    Signals an invalid grid, or a function whose values don't fit its grid.
    """
    pass


class QuadratureError(NumericalFailure, ArithmeticError):
    """
    Signals that adaptive quadrature didn't reach the requested tolerance.
    """
    pass


class DecayFitError(ValidationFailure, ValueError):
    """
    Signals that a decay exponent can't be fitted: the function vanishes or changes sign in the window, or the window
    holds fewer than two nodes.
    """
    pass


class UndefinedQuotientError(ValidationFailure, ZeroDivisionError):
    """
    Signals a Sobolev quotient of the zero function.
    """
    pass


class GridScheme(enum.StrEnum):
    UNIFORM = "uniform"
    GEOMETRIC = "geometric"
    LATTICE = "lattice"


@dataclasses.dataclass(frozen=True, eq=False)
class RadialGrid:
    """
    Strictly increasing nodes in (0, R] with the last node at R. The origin is never a node.
    """
    R: float
    scheme: GridScheme
    nodes: np.ndarray

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim != 1 or nodes.size < 2:
            raise GridError("A radial grid needs at least two nodes")
        if nodes[0] <= 0 or np.any(np.diff(nodes) <= 0):
            raise GridError("Grid nodes must be positive and strictly increasing")
        if nodes[-1] != self.R:
            raise GridError(f"Last grid node {nodes[-1]} doesn't match the outer radius {self.R}")
        nodes.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)

    @property
    def n(self) -> int:
        return self.nodes.size

    @staticmethod
    def _check_radius(R: float):
        if not (math.isfinite(R) and R > 0):
            raise GridError(f"Outer radius must be positive and finite, got {R}")

    @classmethod
    def uniform(cls, R: float, n: int) -> "RadialGrid":
        cls._check_radius(R)
        if n < 2:
            raise GridError(f"A radial grid needs at least two nodes, got {n}")
        nodes = R * np.arange(1, n + 1) / n
        nodes[-1] = R
        return cls(R=float(R), scheme=GridScheme.UNIFORM, nodes=nodes)

    @classmethod
    def geometric(cls, R: float, n: int, r_min: float | None = None) -> "RadialGrid":
        """
        Grid with a constant ratio between consecutive nodes.
        :param R: Outer radius.
        :param n: Number of nodes.
        :param r_min: First node, by default 10⁻⁶R.
        """
        cls._check_radius(R)
        r_min = 1e-6 * R if r_min is None else r_min
        if not 0 < r_min < R:
            raise GridError(f"First node must lie in (0, R), got {r_min}")
        if n < 2:
            raise GridError(f"A radial grid needs at least two nodes, got {n}")
        nodes = np.geomspace(r_min, R, n)
        nodes[-1] = R
        return cls(R=float(R), scheme=GridScheme.GEOMETRIC, nodes=nodes)

    @classmethod
    def lattice(cls, R: float, ratio: float, r_min: float) -> "RadialGrid":
        """
        Grid of the points R·ratio^{-j} not smaller than ``r_min``. Lattice grids with the same ratio and first-node
        bound whose radii differ by an integer power of ``ratio`` are nested.
        """
        cls._check_radius(R)
        if not ratio > 1:
            raise GridError(f"Lattice ratio must exceed 1, got {ratio}")
        if not 0 < r_min < R:
            raise GridError(f"First node bound must lie in (0, R), got {r_min}")
        steps = math.floor(math.log(R / r_min) / math.log(ratio) + 1e-9)
        nodes = R * ratio ** -np.arange(steps, -1, -1, dtype=float)
        return cls(R=float(R), scheme=GridScheme.LATTICE, nodes=nodes)

    def cell_widths(self) -> np.ndarray:
        """
        Length of the dual cell of each node. The first cell extends to the origin, the last one ends at R.
        """
        r = self.nodes
        cells = np.empty_like(r)
        cells[1:-1] = (r[2:] - r[:-2]) / 2
        cells[0] = (r[0] + r[1]) / 2
        cells[-1] = (r[-1] - r[-2]) / 2
        return cells


@dataclasses.dataclass(frozen=True, eq=False)
class RadialFunction:
    """
    Values of a radial function on a grid. ``derivative`` holds exact derivative values when they are known, and
    ``tail_exponent`` the exponent τ of the decay f ~ c·r^{-τ} beyond R; a function without a tail exponent is
    treated as vanishing outside the grid.
    """
    grid: RadialGrid
    values: np.ndarray
    derivative: np.ndarray | None = None
    tail_exponent: float | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n,):
            raise GridError(f"Expected {self.grid.n} values, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise GridError("Radial function values must be finite")
        object.__setattr__(self, "values", values)

        if self.derivative is not None:
            derivative = np.asarray(self.derivative, dtype=float)
            if derivative.shape != values.shape or not np.all(np.isfinite(derivative)):
                raise GridError("Derivative values must be finite and aligned with the grid")
            object.__setattr__(self, "derivative", derivative)

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def gradient(self) -> np.ndarray:
        if self.derivative is not None:
            return self.derivative
        return np.gradient(self.values, self.grid.nodes, edge_order=2)

    def scaled(self, factor: float) -> "RadialFunction":
        derivative = None if self.derivative is None else factor * self.derivative
        return RadialFunction(self.grid, factor * self.values, derivative, self.tail_exponent)


@dataclasses.dataclass(frozen=True)
class IdentityReport:
    name: str
    lhs: float
    rhs: float
    rel_error: float
    error_estimate: float = 0.0

    @classmethod
    def of(cls, name: str, lhs: float, rhs: float, error_estimate: float = 0.0) -> "IdentityReport":
        rel_error = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
        return cls(name=name, lhs=float(lhs), rhs=float(rhs), rel_error=float(rel_error),
                   error_estimate=float(error_estimate))

    def passed(self, tol: float) -> bool:
        return self.rel_error <= tol


def sample_profile(profile: RadialProfile, grid: RadialGrid) -> RadialFunction:
    """
    Samples a closed-form profile on a grid, together with its exact derivative and tail exponent.
    """
    values = profile(grid.nodes)
    derivative = profile.derivative(grid.nodes)
    tail_exponent = profile.tail_exponent
    if tail_exponent is None and profile.support_radius is not None and profile.support_radius > grid.R:
        log.warning(f"Profile {profile.kind} is supported beyond the grid radius {grid.R}; its tail is dropped")
    return RadialFunction(grid, values, derivative, tail_exponent)


def _second_derivative(values: np.ndarray, r: np.ndarray) -> np.ndarray:
    # Three-point formula inside, cubic interpolation through the four outermost nodes at either end
    h_left = r[1:-1] - r[:-2]
    h_right = r[2:] - r[1:-1]
    second = np.empty_like(values)
    second[1:-1] = 2 * (h_left * values[2:] - (h_left + h_right) * values[1:-1] + h_right * values[:-2]) / (
        h_left * h_right * (h_left + h_right))

    for end, stencil in ((0, slice(0, 4)), (-1, slice(-4, None))):
        shifted = r[stencil] - r[end]
        coefficients = np.polynomial.polynomial.polyfit(shifted, values[stencil], 3)
        second[end] = 2 * coefficients[2]
    return second


def residual_radial(f: RadialFunction, params: ProblemParams, coefficient: float | None = None,
                    exponent: float | None = None, shift: float = 0.0) -> RadialFunction:
    """
    Finite-difference residual -f″ - ((N-1)/r)f′ - c·r^α·(f+γ)^p of the radial equation. Derivatives are second-order
    centered differences in the interior and second-order one-sided differences at the endpoints.
    :param f: Sampled function.
    :param params: Problem parameters.
    :param coefficient: Coefficient c of the nonlinearity, C(α) by default.
    :param exponent: Exponent p of the nonlinearity, p_α by default.
    :param shift: Constant γ added inside the power, as in the equation solved by the truncated bubble.
    :return: Residual values on the grid of ``f``.
    """
    if f.grid.n < MIN_RESIDUAL_NODES:
        raise GridError(f"Residual needs at least {MIN_RESIDUAL_NODES} nodes, got {f.grid.n}")

    coefficient = params.C_alpha if coefficient is None else coefficient
    exponent = params.p_alpha if exponent is None else exponent

    r = f.grid.nodes
    first = np.gradient(f.values, r, edge_order=2)
    second = _second_derivative(f.values, r)
    base = f.values + shift
    power = np.abs(base) ** (exponent - 1) * base
    residual = -second - (params.N - 1) / r * first - coefficient * r ** params.alpha * power
    return RadialFunction(f.grid, residual)


def residual_biradial(u: Callable, params: ProblemParams, h: float, extent: float = 6.0) -> float:
    """
    Largest residual of -Δu - C(2)|x|²u^{p_2} for a function of s = |x′| and t = |x″| on the uniform grid of step h
    over [0, extent]². Δu = u_ss + ((N/2-1)/s)u_s + u_tt + ((N/2-1)/t)u_t, with the axis values obtained from the
    even extension of u in s and t.
    :param u: Vectorized function of ``(s, t)``.
    :param params: Problem parameters, with α = 2 and N even.
    :param h: Grid step.
    :param extent: Side of the square.
    :return: Maximum absolute residual over the nodes with a full stencil.
    """
    if abs(params.alpha - 2) > 1e-12 or params.N % 2 or params.N < 4:
        raise ParameterError("Bi-radial residuals need alpha = 2 and an even dimension N ≥ 4")
    if not 0 < h < extent / 4:
        raise GridError(f"Grid step must lie in (0, extent/4), got {h}")

    axis = np.arange(0.0, extent + h / 2, h)
    s, t = np.meshgrid(axis, axis, indexing="ij")
    values = np.asarray(u(s, t), dtype=float)
    padded = np.pad(values, ((1, 0), (1, 0)), mode="reflect")

    center = padded[1:-1, 1:-1]
    u_ss = (padded[2:, 1:-1] - 2 * center + padded[:-2, 1:-1]) / h ** 2
    u_tt = (padded[1:-1, 2:] - 2 * center + padded[1:-1, :-2]) / h ** 2
    u_s = (padded[2:, 1:-1] - padded[:-2, 1:-1]) / (2 * h)
    u_t = (padded[1:-1, 2:] - padded[1:-1, :-2]) / (2 * h)

    s_in = s[:-1, :-1]
    t_in = t[:-1, :-1]
    factor = params.N / 2 - 1
    with np.errstate(divide="ignore", invalid="ignore"):
        s_part = np.where(s_in > 0, u_ss + factor * u_s / s_in, params.N / 2 * u_ss)
        t_part = np.where(t_in > 0, u_tt + factor * u_t / t_in, params.N / 2 * u_tt)

    residual = -(s_part + t_part) - params.C_alpha * (s_in ** 2 + t_in ** 2) * center ** params.p_alpha
    result = float(np.max(np.abs(residual)))
    log.debug(f"Bi-radial residual with h={h}: {result}")
    return result


def weighted_sup_norm(f: RadialFunction, beta: float, params: ProblemParams | None = None) -> float:
    """
    Weighted norm sup (1+r)^β|f(r)|. The grid maximum is combined with the tail beyond R, which is bounded by the
    value at R when the tail exponent is at least β and unbounded otherwise.
    :param f: Sampled function.
    :param beta: Weight exponent.
    :param params: If given, β is checked against the band N(N-2)/(N+2) < β < N-2 and a warning is logged outside.
    :return: Norm value, possibly ``inf``.
    """
    if params is not None:
        n = params.N
        if not n * (n - 2) / (n + 2) < beta < n - 2:
            log.warning(f"Weight exponent beta={beta} is outside ({n * (n - 2) / (n + 2)}, {n - 2})")

    weighted = (1 + f.nodes) ** beta * np.abs(f.values)
    result = float(np.max(weighted))
    if f.tail_exponent is not None and f.values[-1] != 0 and f.tail_exponent < beta:
        return math.inf
    return result


def dirichlet_seminorm(f: RadialFunction, params: ProblemParams) -> float:
    """
    Dirichlet seminorm (∫_{ℝ^N}|∇f|²)^{1/2}. The grid part uses Simpson's rule; the ball (0, r₁) contributes with the
    derivative frozen at r₁, and the tail beyond R follows f ~ f(R)(R/r)^τ, with τ = N-2 when the function carries no
    tail exponent but doesn't vanish at R.
    """
    n = params.N
    r = f.nodes
    gradient = f.gradient()
    integrand = gradient ** 2 * r ** (n - 1)

    total = integrate.simpson(integrand, x=r)
    total += gradient[0] ** 2 * r[0] ** n / n

    boundary = f.values[-1]
    if boundary != 0:
        tau = f.tail_exponent if f.tail_exponent is not None else n - 2
        if 2 * tau + 2 - n <= 0:
            return math.inf
        total += tau ** 2 * boundary ** 2 * f.grid.R ** (n - 2) / (2 * tau + 2 - n)

    return float(math.sqrt(core_params.sphere_area(n) * total))


def weighted_lebesgue_integral(f: RadialFunction, params: ProblemParams, q: float) -> float:
    """
    Integral ∫_{ℝ^N}|x|^α|f|^q with the same head and tail treatment as ``dirichlet_seminorm``.
    """
    n = params.N
    alpha = params.alpha
    r = f.nodes
    integrand = np.abs(f.values) ** q * r ** (alpha + n - 1)

    total = integrate.simpson(integrand, x=r)
    total += abs(f.values[0]) ** q * r[0] ** (alpha + n) / (alpha + n)

    boundary = abs(f.values[-1])
    if boundary != 0:
        tau = f.tail_exponent if f.tail_exponent is not None else n - 2
        if q * tau - alpha - n <= 0:
            return math.inf
        total += boundary ** q * f.grid.R ** (alpha + n) / (q * tau - alpha - n)

    return float(core_params.sphere_area(n) * total)


def integrate_radial(func: Callable[[float], float], tail_power: float,
                     config: settings.IdentitySettings = settings.DEFAULT.identities,
                     lower: float = 0.0) -> tuple[float, float]:
    """
    Computes ∫_lower^∞ g(r) dr for an integrand decaying like r^{-tail_power}. Adaptive quadrature runs up to
    ``config.tail_radius`` with breakpoints at every decade, and the rest is added as g(R)R/(tail_power-1).
    :param func: Integrand g.
    :param tail_power: Decay exponent of g, greater than 1.
    :param config: Quadrature tolerances.
    :param lower: Lower integration limit.
    :return: Value and error estimate.
    """
    if not tail_power > 1:
        raise ParameterError(f"Integrand must decay faster than 1/r, got exponent {tail_power}")

    upper = max(config.tail_radius, 10 * lower, 1.0)
    decades = 10.0 ** np.arange(-3, math.ceil(math.log10(upper)))
    points = [p for p in decades if lower < p < upper]

    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, error = integrate.quad(func, lower, upper, points=points or None, epsabs=config.quad_epsabs,
                                          epsrel=config.quad_epsrel, limit=config.quad_limit)
        except integrate.IntegrationWarning as e:
            raise QuadratureError(f"Quadrature didn't converge: {e}") from e

    tail = func(upper) * upper / (tail_power - 1)
    log.debug(f"Radial quadrature: {value} ± {error}, tail {tail} beyond {upper}")
    return value + tail, error


def bubble_mass_identity(params: ProblemParams, lam: float,
                         config: settings.IdentitySettings = settings.DEFAULT.identities) -> IdentityReport:
    """
    Checks ∫_{ℝ^N}|y|^α U_{λ,α}^{p_α} dy = Nω_N/(λ^{(N-2)/2}(N+α)).
    """
    if not lam > 0:
        raise ParameterError(f"Dilation lambda must be positive, got {lam}")

    n = params.N
    alpha = params.alpha
    p = params.p_alpha
    profile = closed_forms.bubble(params, lam)

    def integrand(r):
        return r ** (alpha + n - 1) * profile(r) ** p

    value, error = integrate_radial(integrand, 3 + alpha, config)
    area = core_params.sphere_area(n)
    rhs = area / (lam ** ((n - 2) / 2) * (n + alpha))
    return IdentityReport.of("bubble_mass", area * value, rhs, area * error)


def kernel_pairing_identity(params: ProblemParams,
                            config: settings.IdentitySettings = settings.DEFAULT.identities) -> IdentityReport:
    """
    Checks ∫_{ℝ^N}|y|^α Z U_α^{p_α-1} dy = -Nω_N(N-2)/(C(α)p_α), the pairing of the radial kernel element with the
    potential that keeps the degeneracy condition transversal.
    """
    n = params.N
    alpha = params.alpha
    p = params.p_alpha
    bubble = closed_forms.bubble(params)
    kernel = closed_forms.kernel_radial(params)

    def integrand(r):
        return r ** (alpha + n - 1) * kernel(r) * bubble(r) ** (p - 1)

    value, error = integrate_radial(integrand, 3 + alpha, config)
    area = core_params.sphere_area(n)
    rhs = -area * (n - 2) / (params.C_alpha * p)
    return IdentityReport.of("kernel_pairing", area * value, rhs, area * error)


def dilation_balance(params: ProblemParams, lam: float,
                     config: settings.IdentitySettings = settings.DEFAULT.identities) -> IdentityReport:
    """
    Compares N-2 with C(α)/(Nω_N)·∫|y|^α U_λ^{p_α}. The two agree only for λ = 1, the dilation fixed by the
    normalization of the equation.
    """
    mass = bubble_mass_identity(params, lam, config)
    area = core_params.sphere_area(params.N)
    return IdentityReport.of("dilation_balance", params.N - 2, params.C_alpha / area * mass.lhs,
                             params.C_alpha / area * mass.error_estimate)


def pohozaev_check(params: ProblemParams, eps: float, scale: float = 1.0, literal: bool = False,
                   config: settings.IdentitySettings = settings.DEFAULT.identities) -> IdentityReport:
    """
    Evaluates both sides of the Pohozaev identity on B_{1/ε} for the truncated bubble u = u_{ε,α}, which solves
    -Δu = C(α)|x|^α(u+γ)^{p_α} with γ = U_α(1/ε):
    ((N-2)/2)γC(α)∫_B|x|^α(u+γ)^p - C(α)Nω_Nγ^{p+1}/((p+1)ε^{N+α}) = (1/2ε)∫_{∂B}(∂_νu)².
    :param params: Problem parameters.
    :param eps: Truncation parameter in (0, 1).
    :param scale: Factor applied to u on both sides; any value other than 1 breaks the identity.
    :param literal: Drop the C(α) factor from the γ^{p+1} term.
    :param config: Quadrature tolerances.
    :return: Report comparing both sides.
    """
    if not 0 < eps < 1:
        raise ParameterError(f"Truncation parameter must lie in (0, 1), got {eps}")

    n = params.N
    alpha = params.alpha
    p = params.p_alpha
    c = params.C_alpha
    radius = 1 / eps
    bubble = closed_forms.bubble(params)
    truncated = closed_forms.truncated_bubble(params, eps)
    gamma = bubble(radius)
    area = core_params.sphere_area(n)

    def integrand(r):
        return r ** (alpha + n - 1) * (scale * truncated(r) + gamma) ** p

    points = [p_ for p_ in 10.0 ** np.arange(-3, math.ceil(math.log10(radius))) if p_ < radius]
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            value, error = integrate.quad(integrand, 0.0, radius, points=points or None, epsabs=config.quad_epsabs,
                                          epsrel=config.quad_epsrel, limit=config.quad_limit)
        except integrate.IntegrationWarning as e:
            raise QuadratureError(f"Quadrature didn't converge: {e}") from e

    volume_coefficient = 1.0 if literal else c
    lhs = (n - 2) / 2 * gamma * c * area * value
    lhs -= volume_coefficient * area * gamma ** (p + 1) / ((p + 1) * eps ** (n + alpha))
    rhs = area * radius ** (n - 1) * (scale * bubble.derivative(radius)) ** 2 / (2 * eps)

    name = "pohozaev_literal" if literal else "pohozaev"
    return IdentityReport.of(name, lhs, rhs, (n - 2) / 2 * gamma * c * area * error)


def sobolev_best_constant_m(m_dim: float) -> float:
    """
    Sobolev constant S(M) = M(M-2)[Γ(M/2)²/(2Γ(M))]^{2/M} in the (possibly fractional) dimension M > 2.
    """
    if not m_dim > 2:
        raise ParameterError(f"Sobolev constant needs a dimension above 2, got {m_dim}")
    log_bracket = 2 * special.gammaln(m_dim / 2) - math.log(2) - special.gammaln(m_dim)
    return float(m_dim * (m_dim - 2) * math.exp(2 / m_dim * log_bracket))


def sobolev_constant(params: ProblemParams) -> float:
    """
    Best constant of ∫|∇u|² ≥ C(α,N)(∫|x|^α|u|^{2(N+α)/(N-2)})^{(N-2)/(N+α)} on radial functions, attained by the
    standard bubble.
    """
    n = params.N
    alpha = params.alpha
    first = ((alpha + 2) / 2) ** ((2 * n - 2 + alpha) / (n + alpha))
    last = core_params.sphere_area(n) ** ((2 + alpha) / (n + alpha))
    return first * sobolev_best_constant_m(params.M) * last


def sobolev_quotient(f: RadialFunction, params: ProblemParams) -> float:
    n = params.N
    alpha = params.alpha
    if not np.any(f.values):
        raise UndefinedQuotientError("The Sobolev quotient of the zero function is undefined")

    numerator = dirichlet_seminorm(f, params) ** 2
    denominator = weighted_lebesgue_integral(f, params, 2 * (n + alpha) / (n - 2))
    return numerator / denominator ** ((n - 2) / (n + alpha))


def decay_fit(f: RadialFunction, window: tuple[float, float]) -> float:
    """
    Least-squares slope of log|f| against log r over the nodes inside ``window``.
    :param f: Sampled function, nonzero and of one sign on the window.
    :param window: Interval ``(r_lo, r_hi)``.
    :return: Empirical decay exponent, negative for decaying functions.
    """
    r_lo, r_hi = window
    mask = (f.nodes >= r_lo) & (f.nodes <= r_hi)
    if np.count_nonzero(mask) < 2:
        raise DecayFitError(f"Window ({r_lo}, {r_hi}) contains fewer than two nodes")

    values = f.values[mask]
    if np.any(values == 0) or not (np.all(values > 0) or np.all(values < 0)):
        raise DecayFitError(f"Function vanishes or changes sign in ({r_lo}, {r_hi})")

    slope, _ = np.polyfit(np.log(f.nodes[mask]), np.log(np.abs(values)), 1)
    return float(slope)


def x_norm(f: RadialFunction, params: ProblemParams, beta: float) -> float:
    """
    Norm of the solution space, max(‖f‖_{1,2}, ‖f‖_β).
    """
    return max(dirichlet_seminorm(f, params), weighted_sup_norm(f, beta, params))


def bubble_distance(params: ProblemParams, eps: float, beta: float,
                    config: settings.IdentitySettings = settings.DEFAULT.identities) -> float:
    """
    Distance ‖u_{ε,α} - U_α‖ in the solution-space norm. The difference is -γ on B_{1/ε} and -U_α outside.
    """
    if not 0 < eps < 1:
        raise ParameterError(f"Truncation parameter must lie in (0, 1), got {eps}")

    n = params.N
    radius = 1 / eps
    bubble = closed_forms.bubble(params)

    def integrand(r):
        return bubble.derivative(r) ** 2 * r ** (n - 1)

    gradient_part, _ = integrate_radial(integrand, n - 1, config, lower=radius)
    seminorm = math.sqrt(core_params.sphere_area(n) * gradient_part)

    outside = sample_profile(bubble, RadialGrid.geometric(radius * 1e4, 2000, r_min=radius))
    sup = max((1 + radius) ** beta * bubble(radius), weighted_sup_norm(outside, beta, params))
    return max(seminorm, sup)
