"""
Closed-form radial and bi-radial functions of the Hénon problem: the bubbles U_{λ,α}, their truncations u_{ε,α},
the radial kernel element Z, the first eigenfunctions ψ_{1,k} of each mode, the limit eigenfunction z of the
1/r²-weighted problem, the transformed eigenfunctions η₁ and η₂, and the explicit nonradial family for α = 2.

Powers of (1 + r^m) are evaluated as exp/log with ``numpy.logaddexp`` so that values stay finite from r = 0 up to
r ≈ 10⁸ and beyond.
"""

import dataclasses
import enum
import logging
import math
from collections.abc import Sequence

import numpy as np
from scipy import special

from henon_toolkit.core_params import ParameterError, ProblemParams, check_mode
from henon_toolkit.task_base import ValidationFailure


log = logging.getLogger(__name__)


class NonPositiveDenominatorError(ValidationFailure, ValueError):
    """
    Signals that the denominator of the explicit nonradial family vanished or became negative.
    """
    pass


class ProfileKind(enum.StrEnum):
    U_LAMBDA = "U_lambda"
    U = "U"
    U_EPS = "u_eps"
    Z = "Z"
    PSI_FIRST = "psi_first"
    Z_LIMIT = "z_limit"
    ETA_FIRST = "eta_first"
    ETA_SECOND = "eta_second"


def _log_r(r) -> np.ndarray:
    with np.errstate(divide="ignore"):
        return np.log(np.asarray(r, dtype=float))


def _log_one_plus_power(log_r: np.ndarray, m: float) -> np.ndarray:
    # log(1 + r^m); finite at r = 0 where log_r = -inf
    return np.logaddexp(0.0, m * log_r)


@dataclasses.dataclass(frozen=True)
class RadialProfile:
    """
    A closed-form function of r = |x|. ``lam`` is the dilation of ``U_lambda``, ``eps`` the truncation parameter of
    ``u_eps`` (supported on [0, 1/ε]) and ``k`` the mode of ``psi_first``. The ``eta_*`` kinds are functions of the
    transformed variable s and depend on the parameters only through M.
    """
    params: ProblemParams
    kind: ProfileKind
    lam: float = 1.0
    eps: float | None = None
    k: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", ProfileKind(self.kind))
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ParameterError(f"Dilation lambda must be positive, got {self.lam}")
        if self.kind == ProfileKind.U_EPS and (self.eps is None or not self.eps > 0):
            raise ParameterError(f"Truncated bubble needs a positive eps, got {self.eps}")
        object.__setattr__(self, "k", check_mode(self.k))

    @property
    def m(self) -> float:
        return 2 + self.params.alpha

    @property
    def support_radius(self) -> float | None:
        if self.kind == ProfileKind.U_EPS:
            return 1 / self.eps
        return None

    @property
    def tail_exponent(self) -> float | None:
        """
        Exponent τ of the power-law decay f ~ c·r^{-τ} as r → ∞, or ``None`` for compactly supported profiles.
        """
        n = self.params.N
        match self.kind:
            case ProfileKind.U_LAMBDA | ProfileKind.U | ProfileKind.Z:
                return float(n - 2)
            case ProfileKind.PSI_FIRST:
                return float(n - 2 + self.k)
            case ProfileKind.Z_LIMIT:
                return (2 * n + self.params.alpha - 2) / 2
            case ProfileKind.ETA_FIRST:
                return self.params.M - 1
            case ProfileKind.ETA_SECOND:
                return self.params.M - 2
        return None

    def __call__(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ParameterError("Radial profiles are evaluated at r ≥ 0")

        t = _log_r(r)
        result = self._evaluate(r, t)
        return result if result.ndim else float(result)

    def derivative(self, r):
        """
        Closed-form derivative with respect to r (or s for the ``eta_*`` kinds), for r > 0.
        """
        r = np.asarray(r, dtype=float)
        if np.any(r <= 0):
            raise ParameterError("Radial derivatives are evaluated at r > 0")

        t = _log_r(r)
        result = self._differentiate(r, t)
        return result if result.ndim else float(result)

    def _bubble(self, t: np.ndarray) -> np.ndarray:
        n = self.params.N
        return np.exp(-(n - 2) / self.m * _log_one_plus_power(t, self.m))

    def _bubble_derivative(self, r: np.ndarray, t: np.ndarray) -> np.ndarray:
        n = self.params.N
        return -(n - 2) / r * special.expit(self.m * t) * self._bubble(t)

    def _evaluate(self, r: np.ndarray, t: np.ndarray) -> np.ndarray:
        n = self.params.N
        alpha = self.params.alpha
        m = self.m

        match self.kind:
            case ProfileKind.U:
                return self._bubble(t)
            case ProfileKind.U_LAMBDA:
                return self.lam ** ((n - 2) / 2) * self._bubble(t + math.log(self.lam))
            case ProfileKind.U_EPS:
                radius = 1 / self.eps
                boundary = self._bubble(_log_r(radius))
                return np.where(r <= radius, self._bubble(t) - boundary, 0.0)
            case ProfileKind.Z:
                return -np.tanh(m * t / 2) * self._bubble(t)
            case ProfileKind.PSI_FIRST:
                leading = self.k * t if self.k else np.zeros_like(t)
                return np.exp(leading - (n + 2 * self.k - 2) / m * _log_one_plus_power(t, m))
            case ProfileKind.Z_LIMIT:
                return np.exp(m / 2 * t - (n + alpha) / m * _log_one_plus_power(t, m))
            case ProfileKind.ETA_FIRST:
                return np.exp(t - self.params.M / 2 * _log_one_plus_power(t, 2))
            case ProfileKind.ETA_SECOND:
                return -np.tanh(t) * np.exp((1 - self.params.M / 2) * _log_one_plus_power(t, 2))

        raise ValueError(f"Unknown profile kind {self.kind}")

    def _differentiate(self, r: np.ndarray, t: np.ndarray) -> np.ndarray:
        n = self.params.N
        alpha = self.params.alpha
        m = self.m

        match self.kind:
            case ProfileKind.U:
                return self._bubble_derivative(r, t)
            case ProfileKind.U_LAMBDA:
                lam = self.lam
                return lam ** ((n - 2) / 2) * lam * self._bubble_derivative(lam * r, t + math.log(lam))
            case ProfileKind.U_EPS:
                return np.where(r <= 1 / self.eps, self._bubble_derivative(r, t), 0.0)
            case ProfileKind.Z:
                tanh = np.tanh(m * t / 2)
                bubble = self._bubble(t)
                return -(m / 2) * (1 - tanh ** 2) * bubble / r - tanh * self._bubble_derivative(r, t)
            case ProfileKind.PSI_FIRST:
                value = self._evaluate(r, t)
                return value / r * (self.k - (n + 2 * self.k - 2) * special.expit(m * t))
            case ProfileKind.Z_LIMIT:
                value = self._evaluate(r, t)
                return value / r * (m / 2 - (n + alpha) * special.expit(m * t))
            case ProfileKind.ETA_FIRST:
                value = self._evaluate(r, t)
                return value / r * (1 - self.params.M * special.expit(2 * t))
            case ProfileKind.ETA_SECOND:
                tanh = np.tanh(t)
                envelope = np.exp((1 - self.params.M / 2) * _log_one_plus_power(t, 2))
                envelope_derivative = (2 - self.params.M) / r * special.expit(2 * t) * envelope
                return -(1 - tanh ** 2) / r * envelope - tanh * envelope_derivative

        raise ValueError(f"Unknown profile kind {self.kind}")


def eval_radial(profile: RadialProfile, r):
    return profile(r)


def bubble(params: ProblemParams, lam: float = 1.0) -> RadialProfile:
    if lam == 1.0:
        return RadialProfile(params, ProfileKind.U)
    return RadialProfile(params, ProfileKind.U_LAMBDA, lam=lam)


def truncated_bubble(params: ProblemParams, eps: float) -> RadialProfile:
    return RadialProfile(params, ProfileKind.U_EPS, eps=eps)


def kernel_radial(params: ProblemParams) -> RadialProfile:
    return RadialProfile(params, ProfileKind.Z)


def first_eigenfunction(params: ProblemParams, k: int) -> RadialProfile:
    return RadialProfile(params, ProfileKind.PSI_FIRST, k=k)


def limit_eigenfunction(params: ProblemParams) -> RadialProfile:
    return RadialProfile(params, ProfileKind.Z_LIMIT)


@dataclasses.dataclass(frozen=True)
class BiRadialPoint:
    """
    A point x = (x', x'') ∈ ℝ^{N/2} × ℝ^{N/2} described by s = |x'| and t = |x''|.
    """
    s: float
    t: float

    def __post_init__(self):
        if not (self.s >= 0 and self.t >= 0):
            raise ParameterError(f"Bi-radial coordinates must be non-negative, got ({self.s}, {self.t})")

    @property
    def norm(self) -> float:
        return math.hypot(self.s, self.t)


@dataclasses.dataclass(frozen=True)
class GradientConditionReport:
    samples: int
    max_deviation: float
    values: tuple[tuple[float, float], ...]


def _check_nonradial_params(params: ProblemParams):
    if abs(params.alpha - 2) > 1e-12:
        raise ParameterError(f"The explicit nonradial family requires alpha = 2, got {params.alpha}")
    if params.N % 2 or params.N < 4:
        raise ParameterError(f"The explicit nonradial family requires an even dimension N ≥ 4, got {params.N}")


def nonradial_family(params: ProblemParams, a: float):
    """
    Builds the explicit solution u(s, t) = (1 + |x|⁴ - 2a(s² - t²) + a²)^{-(N-2)/4} of the α = 2 problem as a
    vectorized function of the bi-radial coordinates.
    :param params: Problem parameters, with α = 2 and N even.
    :param a: Real parameter of the family; a = 0 gives the standard bubble U_2.
    :return: Function mapping arrays ``s``, ``t`` to values.
    """
    _check_nonradial_params(params)
    exponent = -(params.N - 2) / 4

    def u(s, t):
        s = np.asarray(s, dtype=float)
        t = np.asarray(t, dtype=float)
        rho = s * s + t * t
        denominator = 1 + rho * rho - 2 * a * (s * s - t * t) + a * a
        if np.any(denominator <= 0):
            raise NonPositiveDenominatorError(f"Denominator of the nonradial family is not positive for a = {a}")
        return denominator ** exponent

    return u


def eval_nonradial_explicit(params: ProblemParams, a: float, point: BiRadialPoint) -> float:
    return float(nonradial_family(params, a)(point.s, point.t))


def eval_nonradial_cartesian(params: ProblemParams, a: float, x: Sequence[float]) -> float:
    """
    Evaluates the nonradial family at a Cartesian point, splitting x into its first and last N/2 coordinates.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (params.N,):
        raise ParameterError(f"Expected a point in R^{params.N}, got shape {x.shape}")
    half = params.N // 2
    point = BiRadialPoint(float(np.linalg.norm(x[:half])), float(np.linalg.norm(x[half:])))
    return eval_nonradial_explicit(params, a, point)


def check_harmonic_gradient_condition(params: ProblemParams,
                                      samples: Sequence[BiRadialPoint]) -> GradientConditionReport:
    """
    Checks |∇Y|² = ((2+α)/2)²|x|^α for Y(x) = |x'|² - |x''|². The gradient is taken in Cartesian coordinates at the
    point x = (s e₁, t e₁) for each sample.
    :param params: Problem parameters, with α = 2 and N even.
    :param samples: Bi-radial sample points.
    :return: Both sides per sample and their largest absolute difference.
    """
    _check_nonradial_params(params)
    half = params.N // 2

    values = []
    max_deviation = 0.0
    for point in samples:
        x_first = np.zeros(half)
        x_second = np.zeros(half)
        x_first[0] = point.s
        x_second[0] = point.t
        gradient = np.concatenate((2 * x_first, -2 * x_second))
        lhs = float(gradient @ gradient)
        rhs = ((2 + params.alpha) / 2) ** 2 * point.norm ** params.alpha
        values.append((lhs, rhs))
        max_deviation = max(max_deviation, abs(lhs - rhs))

    log.debug(f"Gradient condition checked on {len(values)} samples, max deviation {max_deviation}")
    return GradientConditionReport(samples=len(values), max_deviation=max_deviation, values=tuple(values))
