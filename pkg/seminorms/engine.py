"""
Semi-norm Engine

Computes ||a||_{sigma_mu} = sup over states f of sqrt(|f(a)|^2 sigma_mu f(a*a))
by multi-start projected gradient ascent over states, together with:
- numerical radius v(a) and Crawford number m(a) by theta-sweeps of
  lambda_max / lambda_min of Re(e^{-i theta} a)
- an exhaustive 2x2 pure-state oracle
- mu-sweeps and the a-priori envelope sqrt(v(a)^2 sigma_mu ||a||^2)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np
from scipy.optimize import minimize_scalar

from .linalg import (
    as_matrix,
    gram,
    hermitian_eigen,
    operator_norm,
    real_part,
)
from .meanlib import MeanDomainError, MeanKind, parse_mean_kind, path_eval, path_values
from .states import (
    MixedState,
    PureState,
    State,
    complex_gaussian,
    state_eval,
)


logger = logging.getLogger(__name__)


# Optimizer defaults
DEFAULT_STARTS = 32
DEFAULT_MAX_ITERATIONS = 500
DEFAULT_GRADIENT_TOLERANCE = 1e-10
DEFAULT_OBJECTIVE_TOLERANCE = 1e-12
DEFAULT_FD_STEP = 1e-6

# Backtracking line search
ARMIJO_FRACTION = 1e-4
MAX_HALVINGS = 40

# u is clamped to this floor in gradient evaluations for geometric/harmonic paths
SINGULARITY_FLOOR = 1e-14

# Theta sweeps for v(a) and m(a)
THETA_GRID_POINTS = 720
THETA_WINDOW = 1e-10

# Brute-force oracle
ORACLE_GRID = 2048
ORACLE_REFINEMENT = 10
ORACLE_CHUNK_ROWS = 256

# mu-sweep endpoint cross-check (relative)
ENDPOINT_TOLERANCE = 1e-6

# Relative gap between the best two starts above which non-convergence is a warning
NONCONVERGENCE_WARNING_GAP = 1e-8


class StateClass(str, Enum):
    """Which states the supremum ranges over."""
    PURE = "pure"
    MIXED = "mixed"


class EngineError(ValueError):
    """Invalid query or optimizer configuration."""


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start ascent parameters."""
    starts: int = DEFAULT_STARTS
    max_iterations: int = DEFAULT_MAX_ITERATIONS
    gradient_tolerance: float = DEFAULT_GRADIENT_TOLERANCE
    objective_tolerance: float = DEFAULT_OBJECTIVE_TOLERANCE
    finite_difference_step: float = DEFAULT_FD_STEP
    seed: int = 0
    workers: Optional[int] = None  # concurrent starts; None or 1 runs serially

    def __post_init__(self):
        if self.starts < 1 or self.max_iterations < 1:
            raise EngineError("starts and max_iterations must be >= 1")
        if min(self.gradient_tolerance, self.objective_tolerance, self.finite_difference_step) <= 0:
            raise EngineError("Tolerances and the finite-difference step must be > 0")


@dataclass
class SeminormQuery:
    """One evaluation of ||matrix||_{mean_mu} over the given state class."""
    matrix: np.ndarray
    mean: MeanKind
    mu: float
    state_class: StateClass = StateClass.MIXED
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    def __post_init__(self):
        self.matrix = as_matrix(self.matrix)
        self.mean = parse_mean_kind(self.mean)
        self.state_class = StateClass(self.state_class)
        if not 0 <= self.mu <= 1:
            raise EngineError(f"mu must lie in [0, 1], got {self.mu}")


@dataclass
class SeminormResult:
    """Value of the semi-norm with the maximizing state and diagnostics."""
    value: float
    witness: State
    converged: bool
    starts_agreeing: int
    iterations_total: int


@dataclass
class NumericalRadius:
    value: float
    witness: PureState
    theta: float


@dataclass
class SweepPoint:
    """One mu of a sweep; endpoints carry their closed-form reference value."""
    mu: float
    value: float
    converged: bool
    reference: Optional[float] = None

    @property
    def deviation(self) -> Optional[float]:
        if self.reference is None:
            return None
        return abs(self.value - self.reference)


@dataclass
class Maximization:
    """Outcome of maximize_over_states."""
    value: float
    witness: State
    converged: bool
    starts_agreeing: int
    iterations_total: int
    start_values: list[float]


# A functional maps state values f(X_1..X_m), shape (k, m), to k real objective
# values; the flag marks evaluations made for finite-difference gradients.
StateFunctional = Callable[[np.ndarray, bool], np.ndarray]


class _StateSpace:
    """
    Real parameterization of a state class.

    pure:  x in C^n as 2n reals, state x / ||x||
    mixed: L in C^(n x n) as 2n^2 reals, state L L* / tr(L L*)
    Parameters are kept on the unit sphere (the retraction).
    """

    def __init__(self, matrices: Sequence[np.ndarray], state_class: StateClass):
        self.matrices = [as_matrix(m) for m in matrices]
        self.n = self.matrices[0].shape[0]
        self.state_class = state_class
        self.size = 2 * self.n if state_class == StateClass.PURE else 2 * self.n * self.n

    def _complex(self, params: np.ndarray) -> np.ndarray:
        half = self.size // 2
        z = params[:, :half] + 1j * params[:, half:]
        if self.state_class == StateClass.MIXED:
            z = z.reshape(-1, self.n, self.n)
        return z

    def _real(self, z: np.ndarray) -> np.ndarray:
        flat = np.ravel(z)
        return np.concatenate([flat.real, flat.imag])

    def values(self, params: np.ndarray) -> np.ndarray:
        """f(X_j) for every parameter row and every matrix, shape (k, m)."""
        z = self._complex(params)
        if self.state_class == StateClass.PURE:
            weight = np.sum(np.abs(z) ** 2, axis=1)
            columns = [np.sum(np.conj(z) * (z @ m.T), axis=1) for m in self.matrices]
        else:
            weight = np.sum(np.abs(z) ** 2, axis=(1, 2))
            columns = [np.sum(np.conj(z) * (m @ z), axis=(1, 2)) for m in self.matrices]
        return np.stack(columns, axis=1) / weight[:, None]

    def retract(self, params: np.ndarray) -> np.ndarray:
        norms = np.linalg.norm(params, axis=-1, keepdims=True)
        return params / norms

    def to_state(self, params: np.ndarray) -> State:
        z = self._complex(params[None])[0]
        if self.state_class == StateClass.PURE:
            return PureState.from_vector(z)
        return MixedState.from_factor(z)

    def from_state(self, state: Union[State, np.ndarray]) -> np.ndarray:
        """Parameters reproducing a state (vectors are read as pure states)."""
        if isinstance(state, np.ndarray):
            state = PureState.from_vector(state)

        if self.state_class == StateClass.PURE:
            if isinstance(state, PureState):
                return self._real(state.x)
            return self._real(hermitian_eigen(state.rho).top_vector)

        if isinstance(state, PureState):
            factor = np.zeros((self.n, self.n), dtype=np.complex128)
            factor[:, 0] = state.x
            return self._real(factor)
        eigen = hermitian_eigen(state.rho)
        return self._real(eigen.recompose(np.sqrt(np.maximum(eigen.values, 0.0))))

    def random(self, rng: np.random.Generator) -> np.ndarray:
        shape = self.n if self.state_class == StateClass.PURE else (self.n, self.n)
        return self._real(complex_gaussian(rng, shape))


def _parallel_map(func, items: list, workers: Optional[int]) -> list:
    if workers and workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(func, items))
    return [func(item) for item in items]


def _ascend(
    space: _StateSpace,
    functional: StateFunctional,
    start: np.ndarray,
    config: OptimizerConfig,
    scale: float,
    curvature: float,
) -> tuple[np.ndarray, float, int]:
    """
    Projected gradient ascent from one start.

    Central finite differences on the real parameters, projection onto the
    tangent space of the sphere, Armijo backtracking from step 1 with
    renormalization as retraction.

    Returns:
        (parameters, objective value, accepted iterations)
    """
    step = config.finite_difference_step * scale
    identity = np.eye(space.size)
    trial_steps = 0.5 ** np.arange(MAX_HALVINGS + 1)

    params = space.retract(start[None])[0]
    value = float(functional(space.values(params[None]), False)[0])
    iterations = 0

    for _ in range(config.max_iterations):
        shifted = np.concatenate([params + step * identity, params - step * identity])
        shifted_values = functional(space.values(shifted), True)
        gradient = (shifted_values[:space.size] - shifted_values[space.size:]) / (2 * step)
        gradient -= np.dot(gradient, params) * params

        if np.linalg.norm(gradient) <= config.gradient_tolerance * curvature:
            break

        direction = gradient / curvature
        slope = float(np.dot(gradient, direction))
        candidates = space.retract(params[None] + trial_steps[:, None] * direction[None])
        candidate_values = functional(space.values(candidates), False)
        accepted = candidate_values >= value + ARMIJO_FRACTION * trial_steps * slope
        if not np.any(accepted):
            break

        best = int(np.argmax(accepted))
        params, value = candidates[best], float(candidate_values[best])
        iterations += 1

    return params, value, iterations


def maximize_over_states(
    functional: StateFunctional,
    matrices: Sequence[np.ndarray],
    state_class: Union[str, StateClass],
    config: OptimizerConfig,
    seeds: Sequence[Union[State, np.ndarray]] = (),
    scale: float = 1.0,
    curvature: float = 1.0,
) -> Maximization:
    """
    Maximize a real functional of state values over pure or mixed states.

    Starts are the given seeds followed by random states until
    config.starts is reached (seeds are always used). The reduction is the
    maximum over starts, ties broken by the lowest start index.

    Args:
        functional: Objective in terms of f(X_1), ..., f(X_m)
        matrices: The matrices X_j the states are evaluated on
        state_class: "pure" or "mixed"
        config: Optimizer configuration (its seed drives the random starts)
        seeds: Deterministic starting states or vectors
        scale: Magnitude of the matrices (scales the finite-difference step)
        curvature: Magnitude of the objective (scales steps and the gradient test)
    """
    space = _StateSpace(matrices, StateClass(state_class))
    rng = np.random.default_rng(config.seed)

    starts = [space.from_state(seed) for seed in seeds]
    while len(starts) < config.starts:
        starts.append(space.random(rng))

    runs = _parallel_map(
        lambda start: _ascend(space, functional, start, config, scale, curvature),
        starts,
        config.workers,
    )
    values = [run[1] for run in runs]
    best = max(range(len(runs)), key=lambda i: (values[i], -i))
    best_value = values[best]

    tolerance = config.objective_tolerance * max(1.0, abs(best_value))
    starts_agreeing = sum(1 for v in values if best_value - v <= tolerance)
    ranked = sorted(values, reverse=True)
    converged = len(ranked) < 2 or ranked[0] - ranked[1] <= tolerance

    return Maximization(
        value=best_value,
        witness=space.to_state(runs[best][0]),
        converged=converged,
        starts_agreeing=starts_agreeing,
        iterations_total=sum(run[2] for run in runs),
        start_values=values,
    )


def _seminorm_functional(mean: MeanKind, mu: float) -> StateFunctional:
    singular = mean in (MeanKind.GEOMETRIC, MeanKind.HARMONIC)

    def functional(values: np.ndarray, for_gradient: bool) -> np.ndarray:
        u = np.abs(values[:, 0]) ** 2
        w = np.maximum(values[:, 1].real, 0.0)
        if for_gradient and singular:
            u = np.maximum(u, SINGULARITY_FLOOR)
        return path_values(mean, mu, u, w)

    return functional


def objective(A, mean: Union[str, MeanKind], mu: float, s: State) -> float:
    """
    The squared quantity under the supremum: |f(a)|^2 sigma_mu f(a*a).

    Raises:
        StateError: dimension mismatch
        MeanDomainError: mu outside [0, 1]
    """
    matrix = as_matrix(A)
    u = abs(state_eval(s, matrix)) ** 2
    w = max(state_eval(s, gram(matrix)).real, 0.0)
    return path_eval(mean, mu, u, w)


def seminorm(query: SeminormQuery) -> SeminormResult:
    """
    ||a||_{sigma_mu} over the query's state class.

    Seeds: the top right singular vector of a and the numerical-radius
    witness, then random states. Non-convergence is reported in the result,
    never raised.
    """
    A = query.matrix
    config = query.config
    n = A.shape[0]

    if not np.any(A):
        witness = PureState(np.eye(n, dtype=np.complex128)[0])
        if query.state_class == StateClass.MIXED:
            witness = MixedState(np.eye(n, dtype=np.complex128) / n)
        return SeminormResult(value=0.0, witness=witness, converged=True,
                              starts_agreeing=config.starts, iterations_total=0)

    M = gram(A)
    norm = operator_norm(A)
    scale = max(1.0, norm)
    singular_vector = hermitian_eigen(M).top_vector
    radius = numerical_radius(A)

    result = maximize_over_states(
        _seminorm_functional(query.mean, query.mu),
        [A, M],
        query.state_class,
        config,
        seeds=[singular_vector, radius.witness],
        scale=scale,
        curvature=scale ** 2,
    )
    if not result.converged:
        ranked = sorted(result.start_values, reverse=True)
        gap = (ranked[0] - ranked[1]) / max(1.0, abs(ranked[0]))
        log = logger.warning if gap > NONCONVERGENCE_WARNING_GAP else logger.debug
        log(
            "Seminorm ascent did not converge (mean=%s, mu=%g, class=%s, dim=%d): "
            "best two starts differ by %.3g relative",
            query.mean.value, query.mu, query.state_class.value, n, gap,
        )

    return SeminormResult(
        value=math.sqrt(max(result.value, 0.0)),
        witness=result.witness,
        converged=result.converged,
        starts_agreeing=result.starts_agreeing,
        iterations_total=result.iterations_total,
    )


def _rotated_real_parts(A: np.ndarray, thetas: np.ndarray) -> np.ndarray:
    return real_part(np.exp(-1j * np.asarray(thetas))[..., None, None] * A)


def _theta_sweep(A: np.ndarray, index: int) -> tuple[float, float]:
    """
    Maximize lambda_index(Re(e^{-i theta} A)) over theta.

    Grid of THETA_GRID_POINTS angles, then golden-section refinement of the
    best bracket. Angles run over [pi, 3pi) so brackets stay away from 0.
    """
    spacing = 2 * np.pi / THETA_GRID_POINTS
    thetas = np.pi + spacing * np.arange(THETA_GRID_POINTS)
    grid_values = hermitian_eigen(_rotated_real_parts(A, thetas)).values[:, index]

    best = int(np.argmax(grid_values))
    best_theta, best_value = float(thetas[best]), float(grid_values[best])

    def negative(theta: float) -> float:
        return -float(hermitian_eigen(_rotated_real_parts(A, theta)).values[index])

    try:
        refined = minimize_scalar(
            negative,
            bracket=(best_theta - spacing, best_theta, best_theta + spacing),
            method="golden",
            tol=THETA_WINDOW / (2 * best_theta),
        )
    except ValueError:
        # Flat bracket (ties on the grid): the grid value stands
        return best_theta, best_value

    if -refined.fun > best_value:
        best_theta, best_value = float(refined.x), float(-refined.fun)
    return best_theta, best_value


def numerical_radius(A) -> NumericalRadius:
    """
    v(A) = max over theta of lambda_max(Re(e^{-i theta} A)), with the top
    eigenvector at the optimal theta as witness.
    """
    matrix = as_matrix(A)
    theta, value = _theta_sweep(matrix, -1)
    eigen = hermitian_eigen(_rotated_real_parts(matrix, theta))
    return NumericalRadius(
        value=max(value, 0.0),
        witness=PureState.from_vector(eigen.top_vector),
        theta=theta % (2 * np.pi),
    )


def crawford(A) -> float:
    """
    m(A): distance from 0 to the numerical range, as
    max(0, max over theta of lambda_min(Re(e^{-i theta} A))).
    """
    _, value = _theta_sweep(as_matrix(A), 0)
    return max(0.0, value)


def _oracle_objective(A: np.ndarray, mean: MeanKind, mu: float, phi: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """Objective on x = (cos phi, e^{i psi} sin phi) for a phi x psi lattice."""
    c = np.cos(phi)[:, None]
    s = np.sin(phi)[:, None]
    e = np.exp(1j * psi)[None, :]
    x1 = c + 0j
    x2 = e * s
    ax1 = A[0, 0] * x1 + A[0, 1] * x2
    ax2 = A[1, 0] * x1 + A[1, 1] * x2
    fa = np.conj(x1) * ax1 + np.conj(x2) * ax2
    u = np.abs(fa) ** 2
    w = np.abs(ax1) ** 2 + np.abs(ax2) ** 2
    return path_values(mean, mu, u, w)


def oracle_2x2(A, mean: Union[str, MeanKind], mu: float, grid: int = ORACLE_GRID) -> float:
    """
    Brute-force pure-state value of ||A||_{sigma_mu} for a 2x2 matrix.

    Exhaustive grid x grid lattice over phi in [0, pi/2], psi in [0, 2pi),
    then one refinement pass at ORACLE_REFINEMENT x resolution around the
    best cell.

    Raises:
        EngineError: dimension other than 2
    """
    matrix = as_matrix(A)
    if matrix.shape != (2, 2):
        raise EngineError(f"oracle_2x2 needs a 2x2 matrix, got {matrix.shape}")
    if grid < 2:
        raise EngineError(f"grid must be >= 2, got {grid}")
    mean = parse_mean_kind(mean)
    if not 0 <= mu <= 1:
        raise MeanDomainError(f"mu must lie in [0, 1], got {mu}")

    phis = np.linspace(0.0, np.pi / 2, grid)
    psis = np.linspace(0.0, 2 * np.pi, grid, endpoint=False)
    phi_step, psi_step = phis[1] - phis[0], psis[1] - psis[0]

    best_value, best_phi, best_psi = -math.inf, 0.0, 0.0
    for start in range(0, grid, ORACLE_CHUNK_ROWS):
        block = _oracle_objective(matrix, mean, mu, phis[start:start + ORACLE_CHUNK_ROWS], psis)
        row, col = np.unravel_index(int(np.argmax(block)), block.shape)
        if block[row, col] > best_value:
            best_value = float(block[row, col])
            best_phi, best_psi = phis[start + row], psis[col]

    offsets = np.linspace(-1.0, 1.0, 2 * ORACLE_REFINEMENT + 1)
    local_phi = np.clip(best_phi + offsets * phi_step, 0.0, np.pi / 2)
    local_psi = best_psi + offsets * psi_step
    best_value = max(best_value, float(np.max(_oracle_objective(matrix, mean, mu, local_phi, local_psi))))

    return math.sqrt(max(best_value, 0.0))


def mu_sweep(
    A,
    mean: Union[str, MeanKind],
    mus: Sequence[float],
    state_class: Union[str, StateClass] = StateClass.MIXED,
    config: Optional[OptimizerConfig] = None,
) -> list[SweepPoint]:
    """
    Semi-norm values along mu, with the endpoints cross-checked against
    v(A) (mu = 0) and ||A|| (mu = 1).
    """
    matrix = as_matrix(A)
    config = config or OptimizerConfig()
    references = {}
    points = []

    for mu in mus:
        result = seminorm(SeminormQuery(matrix, mean, float(mu), state_class, config))
        reference = None
        if mu == 0:
            if "v" not in references:
                references["v"] = numerical_radius(matrix).value
            reference = references["v"]
        elif mu == 1:
            if "norm" not in references:
                references["norm"] = operator_norm(matrix)
            reference = references["norm"]

        point = SweepPoint(mu=float(mu), value=result.value, converged=result.converged, reference=reference)
        if reference is not None and point.deviation > ENDPOINT_TOLERANCE * max(1.0, reference):
            logger.warning(
                "mu-sweep endpoint mu=%g deviates from its closed form: %.12g vs %.12g",
                mu, point.value, reference,
            )
        points.append(point)

    return points


def seminorm_upper_envelope(A, mean: Union[str, MeanKind], mu: float) -> float:
    """sqrt(v(A)^2 sigma_mu ||A||^2), an a-priori cap on ||A||_{sigma_mu}."""
    matrix = as_matrix(A)
    v = numerical_radius(matrix).value
    norm = operator_norm(matrix)
    return math.sqrt(path_eval(mean, mu, v ** 2, norm ** 2))


def state_class_gap(
    A,
    mean: Union[str, MeanKind],
    mu: float,
    config: Optional[OptimizerConfig] = None,
) -> float:
    """Mixed-state value minus pure-state value of ||A||_{sigma_mu}."""
    config = config or OptimizerConfig()
    mixed = seminorm(SeminormQuery(A, mean, mu, StateClass.MIXED, config))
    pure = seminorm(SeminormQuery(A, mean, mu, StateClass.PURE, config))
    return mixed.value - pure.value