"""
Exact arithmetic of the Hénon problem -Δu = C(α)|x|^α u^{p_α} on ℝ^N: the derived exponents, the spherical-harmonic
eigenvalues and dimensions, the closed-form first eigenvalues of the linearized operator at the standard bubble, and
the Morse index and kernel dimension built from them.
"""

import dataclasses
import logging
import math
import operator

import numpy as np
from scipy import special

from henon_toolkit.task_base import ValidationFailure


log = logging.getLogger(__name__)


EVEN_ALPHA_TOLERANCE = 1e-9
MAX_DEGREE_SUM = 60


class ParameterError(ValidationFailure, ValueError):
    """
    Signals that a dimension, exponent or mode index is outside its admissible range.
    """
    pass


class MultiplicityRangeError(ValidationFailure, OverflowError):
    """
    Signals that a harmonic dimension was requested beyond the supported range N + k ≤ ``MAX_DEGREE_SUM``.
    """
    pass


@dataclasses.dataclass(frozen=True)
class ProblemParams:
    """
    Dimension and weight exponent of the problem. The derived constants are recomputed from ``(N, alpha)`` on every
    access, so two instances with equal fields always agree bit for bit.
    """
    N: int
    alpha: float

    def __post_init__(self):
        if isinstance(self.N, bool) or not isinstance(self.N, (int, np.integer)):
            raise ParameterError(f"Dimension must be an integer, got {self.N!r}")
        if self.N < 3:
            raise ParameterError(f"Dimension must be at least 3, got {self.N}")

        alpha = float(self.alpha)
        if not math.isfinite(alpha) or alpha < 0:
            raise ParameterError(f"Exponent alpha must be a finite non-negative number, got {self.alpha!r}")

        object.__setattr__(self, "N", int(self.N))
        object.__setattr__(self, "alpha", alpha)

    @property
    def C_alpha(self) -> float:
        return (self.N + self.alpha) * (self.N - 2)

    @property
    def p_alpha(self) -> float:
        return (self.N + 2 + 2 * self.alpha) / (self.N - 2)

    @property
    def M(self) -> float:
        """
        Fictitious dimension in which the substitution s = r^{(2+α)/2} removes the |x|^α weight.
        """
        return 2 * (self.N + self.alpha) / (2 + self.alpha)

    def with_alpha(self, alpha: float) -> "ProblemParams":
        return ProblemParams(self.N, alpha)


@dataclasses.dataclass(frozen=True)
class ModeContribution:
    k: int
    mu: float
    lambda_first: float
    multiplicity: int
    contributes: bool


@dataclasses.dataclass(frozen=True)
class MorseReport:
    """
    Per-mode breakdown of the Morse index of the standard bubble. ``per_mode`` lists every contributing mode followed
    by the first mode that doesn't contribute.
    """
    params: ProblemParams
    per_mode: tuple[ModeContribution, ...]
    total: int

    @property
    def contributing_modes(self) -> list[int]:
        return [m.k for m in self.per_mode if m.contributes]


def check_mode(k) -> int:
    """
    Validates a spherical-harmonic degree.
    :param k: Mode index.
    :return: The mode index as a Python ``int``.
    """
    try:
        k = operator.index(k)
    except TypeError:
        raise ParameterError(f"Mode index must be an integer, got {k!r}") from None
    if k < 0:
        raise ParameterError(f"Mode index must be non-negative, got {k}")
    return k


def mu(params: ProblemParams, k: int) -> float:
    """
    Eigenvalue of the Laplace-Beltrami operator on S^{N-1} for spherical harmonics of degree k.
    """
    k = check_mode(k)
    return float(k * (params.N - 2 + k))


def _binomial(n: int, k: int) -> int:
    # Running product; every partial quotient is itself a binomial coefficient, so the division is exact.
    if k < 0 or n < k:
        return 0
    result = 1
    for j in range(1, k + 1):
        result = result * (n - k + j) // j
    return result


def harmonic_dimension(n_dim: int, k: int) -> int:
    """
    Dimension of the space of degree-k spherical harmonics in ℝ^n, computed as the number of homogeneous polynomials
    of degree k minus those of degree k-2. Valid for n ≥ 2, so that the recurrence in n can be checked down to the
    plane.
    :param n_dim: Dimension of the ambient space.
    :param k: Degree.
    :return: Exact dimension.
    """
    k = check_mode(k)
    if n_dim < 2:
        raise ParameterError(f"Harmonic dimensions are defined for n ≥ 2, got {n_dim}")
    if n_dim + k > MAX_DEGREE_SUM:
        raise MultiplicityRangeError(f"Harmonic dimension requested for N + k = {n_dim + k} > {MAX_DEGREE_SUM}")

    return _binomial(n_dim + k - 1, n_dim - 1) - _binomial(n_dim + k - 3, n_dim - 1)


def harmonic_multiplicity(params: ProblemParams, k: int) -> int:
    """
    Multiplicity (N+2k-2)(N+k-3)!/((N-2)!k!) of the eigenvalue μ_k.
    """
    return harmonic_dimension(params.N, k)


def lambda_first_closed(params: ProblemParams, k: int) -> float:
    """
    First eigenvalue of the mode-k weighted problem linearized at the standard bubble. Equals 1 exactly when
    k = (α+2)/2.
    """
    k = check_mode(k)
    n = params.N
    alpha = params.alpha
    return (n - 2 + 2 * k) * (n + alpha + 2 * k) / ((n + 2 + 2 * alpha) * (n + alpha))


def _contributes(params: ProblemParams, k: int) -> bool:
    return 2 * k < params.alpha + 2


def morse_index(params: ProblemParams) -> MorseReport:
    per_mode = []
    total = 0
    k = 0
    while True:
        contributes = _contributes(params, k)
        entry = ModeContribution(
            k=k,
            mu=mu(params, k),
            lambda_first=lambda_first_closed(params, k),
            multiplicity=harmonic_multiplicity(params, k),
            contributes=contributes,
        )
        per_mode.append(entry)
        if not contributes:
            break

        total += entry.multiplicity
        k += 1

    log.debug(f"Morse index for N={params.N}, alpha={params.alpha}: {total} from modes {list(range(k))}")
    return MorseReport(params=params, per_mode=tuple(per_mode), total=total)


def degenerate_mode(params: ProblemParams) -> int | None:
    """
    Finds the mode k for which α = 2(k-1), deciding evenness of α within ``EVEN_ALPHA_TOLERANCE``.
    :return: The degenerate mode, or ``None`` if α isn't a non-negative even integer.
    """
    nearest = round(params.alpha / 2)
    if abs(params.alpha - 2 * nearest) <= EVEN_ALPHA_TOLERANCE:
        return nearest + 1
    return None


def kernel_dimension(params: ProblemParams) -> int:
    k = degenerate_mode(params)
    if k is None:
        return 1
    return 1 + harmonic_multiplicity(params, k)


def lambda_limit(params: ProblemParams) -> float:
    """
    First eigenvalue of the 1/r²-weighted limit problem, -(2N+α-2)(α+2)/4.
    """
    return -(2 * params.N + params.alpha - 2) * (params.alpha + 2) / 4


def lambda_limit_slope(params: ProblemParams) -> float:
    """
    Derivative of ``lambda_limit`` with respect to α.
    """
    return -(params.N + params.alpha) / 2


def alpha_k_exact(k: int, params: ProblemParams | None = None) -> float:
    """
    Limit 2(k-1) of the degeneracy values α_k. The defining relation (2N+α-2)(α+2)/4 = μ_k is checked in integer
    arithmetic, in dimension ``params.N`` if given and N = 3 otherwise.
    :param k: Mode index, at least 1.
    :param params: Optional problem parameters whose dimension is used for the check.
    :return: 2(k-1).
    """
    k = check_mode(k)
    if k < 1:
        raise ParameterError("Degeneracy values are defined for k ≥ 1")

    alpha = 2 * (k - 1)
    n = params.N if params is not None else 3
    if (2 * n + alpha - 2) * (alpha + 2) != 4 * k * (n - 2 + k):
        raise ArithmeticError(f"alpha = {alpha} doesn't reproduce mu_{k} in dimension {n}")

    return float(alpha)


def beta_slot(params: ProblemParams, k: int) -> float:
    """
    Coefficient 4μ_k/(2+α)² of η/s² in the transformed problem of dimension M.
    """
    return 4 * mu(params, k) / (2 + params.alpha) ** 2


def unit_ball_volume(n_dim: float) -> float:
    """
    Volume ω_n = π^{n/2}/Γ(n/2+1) of the unit ball in ℝ^n.
    """
    return float(np.exp(n_dim / 2 * np.log(np.pi) - special.gammaln(n_dim / 2 + 1)))


def sphere_area(n_dim: float) -> float:
    """
    Surface area nω_n of the unit sphere in ℝ^n.
    """
    return n_dim * unit_ball_volume(n_dim)
