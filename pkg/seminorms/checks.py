"""
Inequality Checks

Every bound on ||a||_{sigma_mu} this project verifies, as a named check that
evaluates one inequality on concrete matrices and returns a PropertyCheck:
- signed slack (>= 0 means the inequality holds), scaled tolerance test
- assert mode (pass/fail) or report_only mode (findings, never failures)
- a re-evaluable counterexample payload whenever the inequality is violated

Checks quantified over all states evaluate on a seeded sample of pure and
mixed states; checks on ||.||_sigma without a path parameter use mu = 1/2.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Sequence, Union

import numpy as np

from .engine import (
    OptimizerConfig,
    SeminormQuery,
    SeminormResult,
    StateClass,
    crawford,
    maximize_over_states,
    numerical_radius,
    seminorm,
)
from .harness import GeneratorKind, classify, optimal_alpha_beta
from .linalg import (
    EXP,
    SQRT,
    SQUARE,
    abs_matrix,
    adjoint,
    apply_scalar_function,
    as_matrix,
    gram,
    hermitian_eigen,
    matrix_from_payload,
    matrix_payload,
    operator_norm,
    psd_power,
    real_part,
    spectral_radius,
)
from .meanlib import MeanKind, get_path, parse_mean_kind, path_eval
from .states import State, random_state, state_eval, state_payload


logger = logging.getLogger(__name__)


DEFAULT_TOLERANCE = 1e-7
EQUALITY_TOLERANCE = 1e-6

# Hypothesis tests (commutation, r(b) <= 1, a^2 = 0, ||a|| <= 1)
HYPOTHESIS_TOLERANCE = 1e-8

# States sampled per class for checks quantified over all states
STATE_SAMPLES = 48

NU_VALUES = (0.25, 0.5, 0.75)
ALPHA_VALUES = (0.0, 0.25, 0.5, 1.0)
JENSEN_FUNCTIONS = ("square", "exp", "sqrt")
PARTNERS = ("same", "negated", "independent")

NILPOTENT_EXAMPLE = np.array([[0, 2], [0, 0]], dtype=np.complex128)
NILPOTENT_EXAMPLE_VALUE = math.sqrt(2.0)
PUBLISHED_NILPOTENT_VALUE = math.sqrt(1.5)


class CheckStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    REPORT_ONLY = "report_only"


class CheckMode(str, Enum):
    ASSERT = "assert"
    REPORT_ONLY = "report_only"


class CheckError(Exception):
    """Base class for check errors."""


class UnknownCheckError(CheckError, ValueError):
    """No check registered under the given name."""


class HypothesisViolation(CheckError, ValueError):
    """Inputs fall outside the hypothesis class of the check."""


@dataclass
class PropertyCheck:
    """One inequality evaluated on concrete inputs."""
    name: str
    statement: str
    inputs: dict
    status: CheckStatus
    slack: float
    scale: float
    values: dict = field(default_factory=dict)
    counterexample: Optional[dict] = None
    note: Optional[str] = None

    @property
    def holds(self) -> bool:
        return self.slack >= -self.inputs["tolerance"] * self.scale

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "statement": self.statement,
            "inputs": self.inputs,
            "status": self.status.value,
            "slack": self.slack,
            "scale": self.scale,
            "values": self.values,
            "counterexample": self.counterexample,
            "note": self.note,
        }


@dataclass
class CheckContext:
    """
    Optimizer settings plus a memo of semi-norm evaluations.

    One context per trial: checks sharing an instance share its semi-norm
    computations. Not shared across threads.
    """
    config: OptimizerConfig = field(default_factory=OptimizerConfig)
    state_class: StateClass = StateClass.PURE
    cache: dict = field(default_factory=dict)
    counters: Counter = field(default_factory=Counter)

    def seminorm_result(self, A, mean: MeanKind, mu: float) -> SeminormResult:
        matrix = as_matrix(A)
        key = ("seminorm", matrix.tobytes(), matrix.shape, mean.value, float(mu))
        if key not in self.cache:
            result = seminorm(SeminormQuery(matrix, mean, mu, self.state_class, self.config))
            self.counters["seminorm_evaluations"] += 1
            self.counters["optimizer_starts"] += self.config.starts
            self.counters["optimizer_iterations"] += result.iterations_total
            self.cache[key] = result
        return self.cache[key]

    def seminorm(self, A, mean: MeanKind, mu: float) -> float:
        return self.seminorm_result(A, mean, mu).value

    def numerical_radius(self, A) -> float:
        matrix = as_matrix(A)
        key = ("radius", matrix.tobytes(), matrix.shape)
        if key not in self.cache:
            self.cache[key] = numerical_radius(matrix).value
        return self.cache[key]


@dataclass
class CheckInputs:
    matrices: tuple[np.ndarray, ...]
    mean: MeanKind
    mu: float
    params: dict
    seed: int


@dataclass
class Evaluation:
    """Raw outcome of one check: slack, its scale and the quantities involved."""
    slack: float
    scale: float
    values: dict = field(default_factory=dict)
    states: list[State] = field(default_factory=list)
    holds: Optional[bool] = None
    note: Optional[str] = None


@dataclass(frozen=True)
class CheckDefinition:
    name: str
    statement: str
    family: str
    evaluate: Callable[[CheckContext, CheckInputs], Evaluation]
    mode: CheckMode = CheckMode.ASSERT
    arity: int = 1
    varies_mean: bool = True
    varies_mu: bool = False
    requires_below_arithmetic: bool = False
    parameter: Optional[str] = None
    parameter_values: tuple = ()


def _sample_states(dim: int, seed: int) -> list[State]:
    rng = np.random.default_rng([seed, dim])
    pure = [random_state(dim, "pure", seed=rng) for _ in range(STATE_SAMPLES)]
    mixed = [random_state(dim, "mixed", seed=rng) for _ in range(STATE_SAMPLES)]
    return pure + mixed


def _norm(H) -> float:
    """Operator norm of a Hermitian PSD matrix (its top eigenvalue)."""
    return max(float(hermitian_eigen(real_part(as_matrix(H))).lambda_max), 0.0)


def _magnitude(*values: float) -> float:
    return max([1.0] + [abs(v) for v in values])


def _squares(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """|a|^2 = a*a and |a*|^2 = aa*."""
    return gram(A), real_part(A @ adjoint(A))


def _require_commuting_pair(a: np.ndarray, b: np.ndarray) -> float:
    """Check |a| b = b* |a| and r(b) <= 1; returns r(b)."""
    modulus = abs_matrix(a)
    defect = float(np.linalg.norm(modulus @ b - adjoint(b) @ modulus))
    if defect > HYPOTHESIS_TOLERANCE * _magnitude(operator_norm(a) * operator_norm(b)):
        raise HypothesisViolation(f"|a| b != b* |a| (defect {defect:.3e})")
    radius = spectral_radius(b)
    if radius > 1 + HYPOTHESIS_TOLERANCE:
        raise HypothesisViolation(f"r(b) = {radius:.6g} exceeds 1")
    return radius


# Assert and report_only evaluators, one per registered check

def _sandwich(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    value = ctx.seminorm(A, x.mean, x.mu)
    radius = ctx.numerical_radius(A)
    norm = operator_norm(A)
    return Evaluation(
        slack=min(value - radius, norm - value),
        scale=_magnitude(norm),
        values={"seminorm": value, "numerical_radius": radius, "operator_norm": norm},
    )


def _envelope(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    value = ctx.seminorm(A, x.mean, x.mu)
    radius = ctx.numerical_radius(A)
    norm = operator_norm(A)
    envelope = math.sqrt(path_eval(x.mean, x.mu, radius ** 2, norm ** 2))
    return Evaluation(
        slack=envelope - value,
        scale=_magnitude(norm),
        values={"seminorm": value, "envelope": envelope},
    )


def _normal_collapse(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    if not classify(A).normal:
        raise HypothesisViolation("normal_collapse needs a normal matrix")
    value = ctx.seminorm(A, x.mean, x.mu)
    adjoint_value = ctx.seminorm(adjoint(A), x.mean, x.mu)
    radius = ctx.numerical_radius(A)
    norm = operator_norm(A)
    return Evaluation(
        slack=-max(abs(radius - norm), abs(value - norm), abs(adjoint_value - norm)),
        scale=_magnitude(norm),
        values={
            "seminorm": value,
            "adjoint_seminorm": adjoint_value,
            "numerical_radius": radius,
            "operator_norm": norm,
        },
    )


def _semi_hypo_abs(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    if not classify(A).semi_hyponormal:
        raise HypothesisViolation("semi_hypo_abs needs a semi-hyponormal matrix")
    value = ctx.seminorm(A, x.mean, x.mu)
    modulus_value = ctx.seminorm(abs_matrix(A), x.mean, x.mu)
    return Evaluation(
        slack=modulus_value - value,
        scale=_magnitude(operator_norm(A)),
        values={"seminorm": value, "abs_seminorm": modulus_value},
    )


def _hypo_adjoint(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    if not classify(A).hyponormal:
        raise HypothesisViolation("hypo_adjoint needs a hyponormal matrix")
    value = ctx.seminorm(A, x.mean, x.mu)
    adjoint_value = ctx.seminorm(adjoint(A), x.mean, x.mu)
    return Evaluation(
        slack=value - adjoint_value,
        scale=_magnitude(operator_norm(A)),
        values={"seminorm": value, "adjoint_seminorm": adjoint_value},
    )


def _alpha_beta_sandwich(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    pair = optimal_alpha_beta(A)
    if pair is None:
        raise HypothesisViolation("alpha_beta_sandwich needs an invertible matrix")
    alpha, beta = pair
    value = ctx.seminorm(A, x.mean, x.mu)
    adjoint_value = ctx.seminorm(adjoint(A), x.mean, x.mu)
    return Evaluation(
        slack=min(adjoint_value - alpha * value, beta * value - adjoint_value),
        scale=_magnitude(beta * operator_norm(A)),
        values={"seminorm": value, "adjoint_seminorm": adjoint_value, "alpha": alpha, "beta": beta},
    )


def _triangle(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A, B = x.matrices
    left = ctx.seminorm(A, x.mean, x.mu)
    right = ctx.seminorm(B, x.mean, x.mu)
    total = ctx.seminorm(A + B, x.mean, x.mu)
    return Evaluation(
        slack=left + right - total,
        scale=_magnitude(operator_norm(A) + operator_norm(B)),
        values={"seminorm_a": left, "seminorm_b": right, "seminorm_sum": total},
    )


def _worst_state(states: list[State], margins: np.ndarray) -> tuple[float, list[State]]:
    worst = int(np.argmin(margins))
    return float(margins[worst]), [states[worst]]


def _mixed_schwarz(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    nu = x.params["nu"]
    right, left = _squares(A)
    phi_square = psd_power(right, nu)
    psi_square = psd_power(left, 1 - nu)

    states = _sample_states(A.shape[0], x.seed)
    margins = np.array([
        state_eval(s, phi_square).real * state_eval(s, psi_square).real - abs(state_eval(s, A)) ** 2
        for s in states
    ])
    slack, witness = _worst_state(states, margins)
    return Evaluation(
        slack=slack,
        scale=_magnitude(operator_norm(A) ** 2),
        values={"states_sampled": len(states)},
        states=witness,
    )


def _lemma32_product(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    a, b = x.matrices
    radius = _require_commuting_pair(a, b)
    nu = x.params["nu"]
    right, left = _squares(a)
    phi_square = psd_power(right, nu)
    psi_square = psd_power(left, 1 - nu)
    product = a @ b

    states = _sample_states(a.shape[0], x.seed)
    margins = np.array([
        radius * state_eval(s, phi_square).real * state_eval(s, psi_square).real
        - abs(state_eval(s, product)) ** 2
        for s in states
    ])
    slack, witness = _worst_state(states, margins)
    return Evaluation(
        slack=slack,
        scale=_magnitude(operator_norm(a) ** 2),
        values={"spectral_radius_b": radius, "states_sampled": len(states)},
        states=witness,
    )


_JENSEN = {
    "square": (SQUARE, True, lambda t: t ** 2),
    "exp": (EXP, True, math.exp),
    "sqrt": (SQRT, False, lambda t: math.sqrt(max(t, 0.0))),
}


def _jensen_state(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    H = x.matrices[0]
    lowest = float(hermitian_eigen(real_part(H)).lambda_min)
    if lowest < -HYPOTHESIS_TOLERANCE * _magnitude(operator_norm(H)):
        raise HypothesisViolation("jensen_state needs a positive semidefinite matrix")
    function, convex, scalar = _JENSEN[x.params["function"]]
    transformed = apply_scalar_function(H, function)

    states = _sample_states(H.shape[0], x.seed)
    inner = np.array([scalar(state_eval(s, H).real) for s in states])
    outer = np.array([state_eval(s, transformed).real for s in states])
    margins = outer - inner if convex else inner - outer
    slack, witness = _worst_state(states, margins)
    return Evaluation(
        slack=slack,
        scale=_magnitude(float(np.max(np.abs(inner))), float(np.max(np.abs(outer)))),
        values={"states_sampled": len(states)},
        states=witness,
    )


def _product_powers(a: np.ndarray, nu: float) -> dict:
    right, left = _squares(a)
    return {
        "phi4_abs": psd_power(right, 2 * nu),        # phi^4(|a|) = |a|^(4 nu)
        "psi4_abs_adj": psd_power(left, 2 * (1 - nu)),  # psi^4(|a*|) = |a*|^(4(1 - nu))
        "phi2_abs_sq": psd_power(right, 2 * nu),     # phi^2(|a|^2)
        "psi2_abs_sq": psd_power(right, 2 * (1 - nu)),  # psi^2(|a|^2)
    }


def _thm34_first(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    a, b = x.matrices
    radius = _require_commuting_pair(a, b)
    powers = _product_powers(a, x.params["nu"])
    product = a @ b
    value = ctx.seminorm(product, x.mean, x.mu)
    bound = math.sqrt(_norm(
        radius / 4 * (powers["phi4_abs"] + powers["psi4_abs_adj"]) + gram(product) / 2
    ))
    return Evaluation(
        slack=bound - value,
        scale=_magnitude(value, bound),
        values={"seminorm_ab": value, "bound": bound, "spectral_radius_b": radius},
    )


def _thm34_second(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    a, b = x.matrices
    radius = _require_commuting_pair(a, b)
    powers = _product_powers(a, x.params["nu"])
    result = ctx.seminorm_result(a @ b, x.mean, x.mu)
    value = result.value
    bound = 0.5 * math.sqrt(
        _norm(radius * powers["phi4_abs"] + powers["psi2_abs_sq"])
        * _norm(powers["phi2_abs_sq"] + radius * powers["psi4_abs_adj"])
    )
    return Evaluation(
        slack=bound - value ** 2,
        scale=_magnitude(value ** 2, bound),
        values={"seminorm_ab": value, "bound": bound, "spectral_radius_b": radius},
        states=[result.witness],
    )


def _cor_nu_first(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    powers = _product_powers(A, x.params["nu"])
    value = ctx.seminorm(A, x.mean, x.mu)
    bound = math.sqrt(_norm((powers["phi4_abs"] + powers["psi4_abs_adj"]) / 4 + gram(A) / 2))
    return Evaluation(
        slack=bound - value,
        scale=_magnitude(value, bound),
        values={"seminorm": value, "bound": bound},
    )


def _cor_nu_second(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    powers = _product_powers(A, x.params["nu"])
    result = ctx.seminorm_result(A, x.mean, x.mu)
    value = result.value
    bound = 0.5 * math.sqrt(
        _norm(powers["phi4_abs"] + powers["psi2_abs_sq"])
        * _norm(powers["phi4_abs"] + powers["psi4_abs_adj"])
    )
    return Evaluation(
        slack=bound - value ** 2,
        scale=_magnitude(value ** 2, bound),
        values={"seminorm": value, "bound": bound},
        states=[result.witness],
    )


def _alpha_bound(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    alpha = x.params["alpha"]
    right, left = _squares(A)
    value = ctx.seminorm(A, x.mean, x.mu)
    bound = 0.5 * _norm((1 + alpha) * right + (1 - alpha) * left)
    return Evaluation(
        slack=bound - value ** 2,
        scale=_magnitude(value ** 2, bound),
        values={"seminorm": value, "bound": bound},
    )


def _crawford_quantities(ctx: CheckContext, A: np.ndarray) -> dict:
    return {
        "numerical_radius": ctx.numerical_radius(A),
        "crawford": crawford(A),
        "crawford_gram": max(float(hermitian_eigen(gram(A)).lambda_min), 0.0),
        "operator_norm": operator_norm(A),
    }


def _crawford_lower(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    q = _crawford_quantities(ctx, A)
    value = ctx.seminorm(A, x.mean, x.mu)
    bound = max(
        math.sqrt(path_eval(x.mean, x.mu, q["numerical_radius"] ** 2, q["crawford_gram"])),
        math.sqrt(path_eval(x.mean, x.mu, q["crawford"] ** 2, q["operator_norm"] ** 2)),
    )
    return Evaluation(
        slack=value - bound,
        scale=_magnitude(q["operator_norm"]),
        values={"seminorm": value, "bound": bound, **q},
    )


def _sqrt2_nabla(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    value = ctx.seminorm(A, x.mean, x.mu)
    norm = operator_norm(A)
    return Evaluation(
        slack=value - norm / math.sqrt(2.0),
        scale=_magnitude(norm),
        values={"seminorm": value, "operator_norm": norm},
    )


def _crawford_nabla_proof(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    q = _crawford_quantities(ctx, A)
    if q["operator_norm"] > 1 + HYPOTHESIS_TOLERANCE:
        raise HypothesisViolation(
            f"crawford_nabla_proof needs a contraction, ||a|| = {q['operator_norm']:.6g}"
        )
    value = ctx.seminorm(A, x.mean, x.mu)
    bound = max(
        q["numerical_radius"] * q["crawford_gram"],
        q["crawford"] * q["operator_norm"] ** 2,
    )
    return Evaluation(
        slack=value ** 2 - bound,
        scale=_magnitude(q["operator_norm"] ** 2),
        values={"seminorm": value, "bound": bound, **q},
    )


def _crawford_nabla_stated(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    q = _crawford_quantities(ctx, A)
    result = ctx.seminorm_result(A, x.mean, x.mu)
    value = result.value
    bound = max(
        q["numerical_radius"] * math.sqrt(q["crawford_gram"]),
        q["crawford"] * q["operator_norm"],
    )
    return Evaluation(
        slack=value - bound,
        scale=_magnitude(q["operator_norm"]),
        values={"seminorm": value, "bound": bound, **q},
        states=[result.witness],
    )


def _nilpotent_sigma_zero(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    norm = operator_norm(A)
    square = operator_norm(A @ A)
    if square > HYPOTHESIS_TOLERANCE * _magnitude(norm ** 2):
        raise HypothesisViolation(f"nilpotent_sigma_zero needs a^2 = 0, ||a^2|| = {square:.3e}")
    product = abs_matrix(A) @ abs_matrix(adjoint(A))
    value = ctx.seminorm(product, x.mean, x.mu)
    return Evaluation(
        slack=square - value,
        scale=_magnitude(norm ** 2),
        values={"seminorm_abs_product": value, "square_norm": square},
    )


def _nilpotent_example(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A = x.matrices[0]
    value = ctx.seminorm(A, x.mean, x.mu)
    note = (
        f"published value sqrt(3/2) = {PUBLISHED_NILPOTENT_VALUE:.12g} for ||[[0,2],[0,0]]||_nabla "
        f"contradicts the lower bound ||a||/sqrt(2) = sqrt(2); computed {value:.12g}"
    )
    return Evaluation(
        slack=-abs(value - NILPOTENT_EXAMPLE_VALUE),
        scale=_magnitude(operator_norm(A)),
        values={"seminorm": value, "expected": NILPOTENT_EXAMPLE_VALUE, "published": PUBLISHED_NILPOTENT_VALUE},
        note=note,
    )


def _equality_evaluation(ctx: CheckContext, A: np.ndarray, B: np.ndarray, tol: float) -> Evaluation:
    """
    Equality in the triangle inequality for ||.||_nabla against the attained
    witness condition max_f Re(f(b*a) + conj(f(a)) f(b)) = 2 ||a||_nabla ||b||_nabla.
    """
    mean, mu = MeanKind.ARITHMETIC, 0.5
    left = ctx.seminorm_result(A, mean, mu)
    right = ctx.seminorm_result(B, mean, mu)
    total = ctx.seminorm_result(A + B, mean, mu)
    delta = total.value - left.value - right.value
    target = 2 * left.value * right.value

    cross = adjoint(B) @ A

    def functional(values: np.ndarray, for_gradient: bool) -> np.ndarray:
        return (values[:, 0] + np.conj(values[:, 1]) * values[:, 2]).real

    scale = _magnitude(operator_norm(A), operator_norm(B))
    witness = maximize_over_states(
        functional,
        [cross, A, B],
        ctx.state_class,
        ctx.config,
        seeds=[left.witness, right.witness, total.witness],
        scale=scale,
        curvature=scale ** 2,
    )
    ctx.counters["optimizer_starts"] += ctx.config.starts
    ctx.counters["optimizer_iterations"] += witness.iterations_total

    s = witness.witness
    at_witness = state_eval(s, cross) + np.conj(state_eval(s, A)) * state_eval(s, B)
    gap = witness.value - target

    delta_scale = _magnitude(left.value + right.value)
    target_scale = _magnitude(target)
    equality = abs(delta) <= tol * delta_scale
    attained = abs(gap) <= tol * target_scale
    imaginary = abs(at_witness.imag)
    real_at_witness = not attained or imaginary <= tol * target_scale

    holds = equality == attained and real_at_witness
    return Evaluation(
        slack=0.0 if holds else -max(abs(delta), abs(gap), imaginary),
        scale=target_scale,
        values={
            "delta": delta,
            "witness_maximum": witness.value,
            "target": target,
            "imaginary_part": imaginary,
            "equality": equality,
            "witness_attained": attained,
        },
        states=[s],
        holds=holds,
    )


def _equality_characterization(ctx: CheckContext, x: CheckInputs) -> Evaluation:
    A, B = x.matrices
    partner = x.params["partner"]
    if partner == "same":
        B = A
    elif partner == "negated":
        B = -A
    evaluation = _equality_evaluation(ctx, A, B, x.params.get("tolerance", EQUALITY_TOLERANCE))

    expected = {"same": True, "negated": False}.get(partner)
    if expected is not None and evaluation.values["equality"] != expected:
        evaluation.holds = False
        evaluation.slack = min(evaluation.slack, -abs(evaluation.values["delta"]) - evaluation.scale)
    return evaluation


REGISTRY: dict[str, CheckDefinition] = {}


def _register(definition: CheckDefinition) -> None:
    REGISTRY[definition.name] = definition


_register(CheckDefinition(
    "sandwich", "v(a) <= ||a||_s_mu <= ||a||",
    GeneratorKind.GINIBRE.value, _sandwich, varies_mu=True,
))
_register(CheckDefinition(
    "envelope", "||a||_s_mu <= sqrt(v(a)^2 s_mu ||a||^2)",
    GeneratorKind.GINIBRE.value, _envelope, varies_mu=True,
))
_register(CheckDefinition(
    "normal_collapse", "a normal => v(a) = ||a||_s_mu = ||a*||_s_mu = ||a||",
    GeneratorKind.NORMAL.value, _normal_collapse, varies_mu=True,
))
_register(CheckDefinition(
    "semi_hypo_abs", "a semi-hyponormal => ||a||_s_mu <= || |a| ||_s_mu",
    GeneratorKind.NORMAL.value, _semi_hypo_abs, varies_mu=True,
))
_register(CheckDefinition(
    "hypo_adjoint", "a hyponormal => ||a*||_s_mu <= ||a||_s_mu",
    GeneratorKind.NORMAL.value, _hypo_adjoint, varies_mu=True,
))
_register(CheckDefinition(
    "alpha_beta_sandwich", "a (alpha,beta)-normal => alpha ||a||_s_mu <= ||a*||_s_mu <= beta ||a||_s_mu",
    GeneratorKind.GINIBRE.value, _alpha_beta_sandwich, varies_mu=True,
))
_register(CheckDefinition(
    "triangle_nabla", "||a + b||_nabla_mu <= ||a||_nabla_mu + ||b||_nabla_mu",
    "pair", _triangle, arity=2, varies_mean=False, varies_mu=True,
))
_register(CheckDefinition(
    "triangle_sigma", "||a + b||_s_mu <= ||a||_s_mu + ||b||_s_mu",
    "pair", _triangle, mode=CheckMode.REPORT_ONLY, arity=2, varies_mu=True,
))
_register(CheckDefinition(
    "mixed_schwarz", "|f(a)|^2 <= f(|a|^(2 nu)) f(|a*|^(2(1 - nu)))",
    GeneratorKind.GINIBRE.value, _mixed_schwarz, varies_mean=False,
    parameter="nu", parameter_values=NU_VALUES,
))
_register(CheckDefinition(
    "lemma32_product", "|a| b = b* |a| => |f(ab)|^2 <= r(b) f(|a|^(2 nu)) f(|a*|^(2(1 - nu)))",
    GeneratorKind.LEMMA32_PAIR.value, _lemma32_product, arity=2, varies_mean=False,
    parameter="nu", parameter_values=NU_VALUES,
))
_register(CheckDefinition(
    "jensen_state", "g convex => g(f(h)) <= f(g(h)); g concave => g(f(h)) >= f(g(h))",
    GeneratorKind.PSD.value, _jensen_state, varies_mean=False,
    parameter="function", parameter_values=JENSEN_FUNCTIONS,
))
_register(CheckDefinition(
    "thm34_first",
    "||ab||_s <= sqrt(|| r(b)/4 (|a|^(4 nu) + |a*|^(4(1 - nu))) + |ab|^2 / 2 ||)",
    GeneratorKind.LEMMA32_PAIR.value, _thm34_first, arity=2, requires_below_arithmetic=True,
    parameter="nu", parameter_values=NU_VALUES,
))
_register(CheckDefinition(
    "thm34_second",
    "||ab||_s^2 <= 1/2 sqrt(|| r(b) |a|^(4 nu) + |a|^(4(1 - nu)) || || |a|^(4 nu) + r(b) |a*|^(4(1 - nu)) ||)",
    GeneratorKind.LEMMA32_PAIR.value, _thm34_second, mode=CheckMode.REPORT_ONLY, arity=2,
    requires_below_arithmetic=True, parameter="nu", parameter_values=NU_VALUES,
))
_register(CheckDefinition(
    "cor_nu_first", "||a||_s <= sqrt(|| (|a|^(4 nu) + |a*|^(4(1 - nu))) / 4 + |a|^2 / 2 ||)",
    GeneratorKind.GINIBRE.value, _cor_nu_first, requires_below_arithmetic=True,
    parameter="nu", parameter_values=NU_VALUES,
))
_register(CheckDefinition(
    "cor_nu_second",
    "||a||_s^2 <= 1/2 sqrt(|| |a|^(4 nu) + |a|^(4(1 - nu)) || || |a|^(4 nu) + |a*|^(4(1 - nu)) ||)",
    GeneratorKind.GINIBRE.value, _cor_nu_second, mode=CheckMode.REPORT_ONLY,
    requires_below_arithmetic=True, parameter="nu", parameter_values=NU_VALUES,
))
_register(CheckDefinition(
    "alpha_bound", "||a||_s^2 <= 1/2 || (1 + alpha) |a|^2 + (1 - alpha) |a*|^2 ||",
    GeneratorKind.GINIBRE.value, _alpha_bound, requires_below_arithmetic=True,
    parameter="alpha", parameter_values=ALPHA_VALUES,
))
_register(CheckDefinition(
    "crawford_lower", "max(sqrt(v(a)^2 s m(a*a)), sqrt(m(a)^2 s ||a||^2)) <= ||a||_s",
    GeneratorKind.GINIBRE.value, _crawford_lower,
))
_register(CheckDefinition(
    "sqrt2_nabla", "||a|| / sqrt(2) <= ||a||_nabla",
    GeneratorKind.GINIBRE.value, _sqrt2_nabla, varies_mean=False,
))
_register(CheckDefinition(
    "crawford_nabla_proof", "||a|| <= 1 => max(v(a) m(a*a), m(a) ||a||^2) <= ||a||_nabla^2",
    GeneratorKind.CONTRACTION.value, _crawford_nabla_proof, varies_mean=False,
))
_register(CheckDefinition(
    "crawford_nabla_stated", "max(sqrt(v(a)^2 m(a*a)), sqrt(m(a)^2 ||a||^2)) <= ||a||_nabla",
    GeneratorKind.GINIBRE.value, _crawford_nabla_stated, mode=CheckMode.REPORT_ONLY, varies_mean=False,
))
_register(CheckDefinition(
    "nilpotent_sigma_zero", "a^2 = 0 => || |a| |a*| ||_s_mu <= ||a^2|| = 0",
    GeneratorKind.NILPOTENT2.value, _nilpotent_sigma_zero, varies_mu=True,
))
_register(CheckDefinition(
    "nilpotent_example", "||[[0,2],[0,0]]||_nabla = sqrt(2)",
    "fixed", _nilpotent_example, varies_mean=False,
))
_register(CheckDefinition(
    "equality_characterization",
    "||a + b||_nabla = ||a||_nabla + ||b||_nabla <=> max_f Re(f(b*a) + conj(f(a)) f(b)) = 2 ||a||_nabla ||b||_nabla",
    "pair", _equality_characterization, arity=2, varies_mean=False,
    parameter="partner", parameter_values=PARTNERS,
))


def get_check(name: str) -> CheckDefinition:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownCheckError(f"Unknown check '{name}'") from None


def resolve_point(definition: CheckDefinition, mean: Union[str, MeanKind], mu: float) -> tuple[MeanKind, float]:
    """The (mean, mu) a check is actually evaluated at."""
    mean = parse_mean_kind(mean) if definition.varies_mean else MeanKind.ARITHMETIC
    mu = float(mu) if definition.varies_mu else 0.5
    return mean, mu


def check_inequality(
    name: str,
    matrices: Sequence,
    mean: Union[str, MeanKind] = MeanKind.ARITHMETIC,
    mu: float = 0.5,
    tol: float = DEFAULT_TOLERANCE,
    params: Optional[dict] = None,
    seed: int = 0,
    context: Optional[CheckContext] = None,
) -> PropertyCheck:
    """
    Evaluate one named inequality on concrete inputs.

    Args:
        name: Registered check name
        matrices: One matrix, or a pair for two-argument checks
        mean: Mean of the path (ignored by checks fixed to the arithmetic path)
        mu: Path parameter (checks on ||.||_sigma use mu = 1/2)
        tol: Relative tolerance; holds iff slack >= -tol * scale
        params: Check parameter, e.g. {"nu": 0.25}, {"alpha": 0.5},
            {"function": "exp"}, {"partner": "same"}
        seed: Seed of the sampled states (checks quantified over states)
        context: Optimizer settings and evaluation cache

    Raises:
        UnknownCheckError: unknown name
        HypothesisViolation: inputs outside the check's hypothesis class
    """
    definition = get_check(name)
    context = context or CheckContext()
    params = dict(params or {})

    if isinstance(matrices, np.ndarray) and matrices.ndim == 2:
        matrices = [matrices]
    matrices = tuple(as_matrix(m) for m in matrices)
    if len(matrices) != definition.arity:
        raise HypothesisViolation(f"{name} takes {definition.arity} matrices, got {len(matrices)}")
    if len({m.shape for m in matrices}) != 1:
        raise HypothesisViolation(f"{name} needs matrices of equal dimension")

    if definition.parameter and definition.parameter not in params:
        params[definition.parameter] = definition.parameter_values[0]

    mean, mu = resolve_point(definition, mean, mu)
    if definition.requires_below_arithmetic and not get_path(mean).is_below_arithmetic:
        raise HypothesisViolation(f"{name} needs a mean below the arithmetic mean")

    evaluation = definition.evaluate(context, CheckInputs(matrices, mean, mu, params, seed))
    context.counters["checks_evaluated"] += 1

    inputs = {
        "mean": mean.value,
        "mu": mu,
        "params": params,
        "seed": seed,
        "dim": matrices[0].shape[0],
        "tolerance": tol,
        "state_class": context.state_class.value,
        "optimizer": {
            "starts": context.config.starts,
            "max_iterations": context.config.max_iterations,
            "seed": context.config.seed,
        },
    }
    check = PropertyCheck(
        name=name,
        statement=definition.statement,
        inputs=inputs,
        status=CheckStatus.PASS,
        slack=float(evaluation.slack),
        scale=float(evaluation.scale),
        values=evaluation.values,
        note=evaluation.note,
    )
    holds = check.holds if evaluation.holds is None else evaluation.holds

    if definition.mode == CheckMode.REPORT_ONLY:
        check.status = CheckStatus.REPORT_ONLY
    elif not holds:
        check.status = CheckStatus.FAIL

    if not holds:
        check.counterexample = {
            "matrices": [matrix_payload(m) for m in matrices],
            "states": [state_payload(s) for s in evaluation.states],
        }
        log = logger.warning if check.status == CheckStatus.FAIL else logger.info
        log("Check %s violated (slack %.6g, scale %.6g, inputs %s)", name, check.slack, check.scale, inputs)

    return check


def check_equality_characterization(
    A,
    B,
    tol: float = EQUALITY_TOLERANCE,
    context: Optional[CheckContext] = None,
) -> PropertyCheck:
    """
    Triangle equality for ||.||_nabla against its witness condition.

    delta = ||A+B||_nabla - ||A||_nabla - ||B||_nabla and
    M = max over states of Re(f(b*a) + conj(f(a)) f(b)); passes iff
    |delta| <= tol <=> |M - 2 ||A||_nabla ||B||_nabla| <= tol * scale, and the
    imaginary part at the maximizing state vanishes whenever M is attained.
    """
    return check_inequality(
        "equality_characterization",
        [A, B],
        tol=tol,
        params={"partner": "independent", "tolerance": tol},
        context=context,
    )


def reevaluate(check: PropertyCheck) -> PropertyCheck:
    """
    Re-run a violated check from its serialized counterexample.

    Raises:
        CheckError: the check carries no counterexample
    """
    if check.counterexample is None:
        raise CheckError(f"Check {check.name} has no counterexample to re-evaluate")
    inputs = check.inputs
    optimizer = inputs["optimizer"]
    context = CheckContext(
        config=OptimizerConfig(
            starts=optimizer["starts"],
            max_iterations=optimizer["max_iterations"],
            seed=optimizer["seed"],
        ),
        state_class=StateClass(inputs["state_class"]),
    )
    matrices = [matrix_from_payload(payload) for payload in check.counterexample["matrices"]]
    return check_inequality(
        check.name,
        matrices,
        mean=inputs["mean"],
        mu=inputs["mu"],
        tol=inputs["tolerance"],
        params=inputs["params"],
        seed=inputs["seed"],
        context=context,
    )
