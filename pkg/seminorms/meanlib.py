"""
Scalar Means and Interpolation Paths

Symmetric means on [0, inf) x [0, inf) and their interpolation paths:
- arithmetic: a nabla_mu b = (1 - mu) a + mu b
- geometric:  a #_mu b     = a^(1 - mu) b^mu
- harmonic:   a !_mu b     = ((1 - mu)/a + mu/b)^-1

plus a seeded verifier for the mean axioms and the path axioms.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Union

import numpy as np


# Relative tolerance for axiom residuals, measured against max(1, |lhs|, |rhs|)
AXIOM_TOLERANCE = 1e-12

# Relative perturbation used by the continuity check
CONTINUITY_PERTURBATION = 1e-6

# Sampling range for axiom checks (log10 of the magnitudes)
SAMPLE_LOG_MIN = -3.0
SAMPLE_LOG_MAX = 3.0

# Share of samples with an exact zero argument (exercises the corner rules)
ZERO_SAMPLE_FRACTION = 0.05


class MeanKind(str, Enum):
    """The built-in symmetric means, named as they appear in CLI and config."""
    ARITHMETIC = "arithmetic"
    GEOMETRIC = "geometric"
    HARMONIC = "harmonic"


class MeanDomainError(ValueError):
    """Raised for negative or non-finite arguments, or mu outside [0, 1]."""


@dataclass(frozen=True)
class MeanPath:
    """
    A symmetric mean together with its interpolation path.

    ``is_below_arithmetic`` records that the path never exceeds the
    arithmetic path pointwise (true for all three built-ins).
    """
    kind: MeanKind
    is_below_arithmetic: bool = True

    def __call__(self, mu: float, a: float, b: float) -> float:
        return path_eval(self.kind, mu, a, b)

    def mean(self, a: float, b: float) -> float:
        return mean_eval(self.kind, a, b)


BUILTIN_PATHS = {kind: MeanPath(kind=kind, is_below_arithmetic=True) for kind in MeanKind}


def parse_mean_kind(value: Union[str, MeanKind]) -> MeanKind:
    """Resolve a mean name ("arithmetic", "geometric", "harmonic")."""
    if isinstance(value, MeanKind):
        return value
    try:
        return MeanKind(value)
    except ValueError:
        choices = ", ".join(kind.value for kind in MeanKind)
        raise MeanDomainError(f"Unknown mean '{value}'. Expected one of: {choices}") from None


def get_path(kind: Union[str, MeanKind]) -> MeanPath:
    return BUILTIN_PATHS[parse_mean_kind(kind)]


def _check_argument(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value < 0:
        raise MeanDomainError(f"{name} must be a finite non-negative number, got {value!r}")
    return value


def _check_mu(mu: float) -> float:
    mu = float(mu)
    if not math.isfinite(mu) or mu < 0 or mu > 1:
        raise MeanDomainError(f"mu must lie in [0, 1], got {mu!r}")
    return mu


def path_eval(kind: Union[str, MeanKind], mu: float, a: float, b: float) -> float:
    """
    Evaluate the interpolation path a sigma_mu b.

    Endpoints are exact: sigma_0(a, b) = a and sigma_1(a, b) = b. Zero
    arguments follow the continuous extension (harmonic) and the endpoint
    rule (geometric 0^0 corner).

    Raises:
        MeanDomainError: negative/non-finite arguments or mu outside [0, 1]
    """
    kind = parse_mean_kind(kind)
    mu = _check_mu(mu)
    a = _check_argument("a", a)
    b = _check_argument("b", b)
    return float(path_values(kind, mu, a, b))


def mean_eval(kind: Union[str, MeanKind], a: float, b: float) -> float:
    """Evaluate the symmetric mean a sigma b = a sigma_1/2 b."""
    return path_eval(kind, 0.5, a, b)


def path_values(kind: MeanKind, mu: float, a, b) -> np.ndarray:
    """
    Vectorized path evaluation over numpy arrays, without validation.

    Callers guarantee mu in [0, 1] and a, b >= 0 (tiny negative round-off is
    clamped to 0).
    """
    a = np.maximum(np.asarray(a, dtype=float), 0.0)
    b = np.maximum(np.asarray(b, dtype=float), 0.0)
    if mu == 0:
        return a.copy()
    if mu == 1:
        return b.copy()

    if kind == MeanKind.ARITHMETIC:
        return (1 - mu) * a + mu * b

    if kind == MeanKind.GEOMETRIC:
        return a ** (1 - mu) * b ** mu

    if kind == MeanKind.HARMONIC:
        # ab / ((1 - mu) b + mu a); zero whenever either argument is zero
        denominator = (1 - mu) * b + mu * a
        with np.errstate(divide="ignore", invalid="ignore"):
            values = a * b / denominator
        return np.where((a == 0) | (b == 0), 0.0, values)

    raise MeanDomainError(f"Unsupported mean kind: {kind!r}")


@dataclass
class AxiomResult:
    """Outcome of one axiom over all samples."""
    name: str
    passed: bool
    max_residual: float


@dataclass
class AxiomReport:
    """Per-axiom pass/fail with worst-case relative residual."""
    kind: MeanKind
    sample_count: int
    seed: int
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def residual(self, name: str) -> float:
        for result in self.results:
            if result.name == name:
                return result.max_residual
        raise KeyError(name)


def _relative(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    return np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))


def _equality_residual(lhs: np.ndarray, rhs: np.ndarray) -> float:
    return float(np.max(np.abs(lhs - rhs) / _relative(lhs, rhs)))


def _inequality_residual(smaller: np.ndarray, larger: np.ndarray) -> float:
    """Worst relative violation of smaller <= larger (0 when it always holds)."""
    excess = np.maximum(smaller - larger, 0.0)
    return float(np.max(excess / _relative(smaller, larger)))


def _sample_magnitudes(rng: np.random.Generator, count: int) -> np.ndarray:
    values = 10.0 ** rng.uniform(SAMPLE_LOG_MIN, SAMPLE_LOG_MAX, size=count)
    zeros = rng.random(count) < ZERO_SAMPLE_FRACTION
    return np.where(zeros, 0.0, values)


def verify_axioms(kind: Union[str, MeanKind], sample_count: int, seed: int) -> AxiomReport:
    """
    Check the mean axioms and the interpolation-path axioms on seeded samples.

    Mean axioms: non-negativity, betweenness, monotonicity, homogeneity,
    continuity (plus symmetry). Path axioms: exact endpoints with
    sigma_1/2 = sigma, the midpoint interpolation identity
    (a sigma_mu b) sigma (a sigma_nu b) = a sigma_(mu+nu)/2 b, and
    monotonicity in each argument.

    Args:
        kind: Mean to verify
        sample_count: Number of random (a, b, mu, nu) tuples (>= 1)
        seed: Seed for the sample generator

    Returns:
        AxiomReport with one AxiomResult per axiom
    """
    kind = parse_mean_kind(kind)
    if sample_count < 1:
        raise MeanDomainError(f"sample_count must be >= 1, got {sample_count}")

    rng = np.random.default_rng(seed)
    a = _sample_magnitudes(rng, sample_count)
    b = _sample_magnitudes(rng, sample_count)
    mu = rng.uniform(0.0, 1.0, size=sample_count)
    nu = rng.uniform(0.0, 1.0, size=sample_count)
    growth = 1.0 + rng.uniform(0.0, 1.0, size=sample_count)
    scale = 10.0 ** rng.uniform(-2.0, 2.0, size=sample_count)

    def mean(x, y):
        return path_values(kind, 0.5, x, y)

    def path(m, x, y):
        # mu varies per sample
        return np.array([path_values(kind, mi, xi, yi) for mi, xi, yi in zip(m, x, y)])

    sigma = mean(a, b)
    residuals = {}

    residuals["nonnegativity"] = float(np.max(np.maximum(-sigma, 0.0)))
    residuals["symmetry"] = _equality_residual(sigma, mean(b, a))
    low, high = np.minimum(a, b), np.maximum(a, b)
    residuals["betweenness"] = max(
        _inequality_residual(low, sigma),
        _inequality_residual(sigma, high),
    )
    residuals["monotonicity"] = max(
        _inequality_residual(sigma, mean(a * growth, b)),
        _inequality_residual(sigma, mean(a, b * growth)),
    )
    residuals["homogeneity"] = _equality_residual(mean(scale * a, scale * b), scale * sigma)

    # Monotone and homogeneous: sigma(a(1+e), b) - sigma(a, b) lies in [0, e sigma(a, b)]
    bumped = mean(a * (1 + CONTINUITY_PERTURBATION), b)
    residuals["continuity"] = max(
        _inequality_residual(sigma, bumped),
        _inequality_residual(bumped - sigma, CONTINUITY_PERTURBATION * sigma),
    )

    zeros = np.zeros(sample_count)
    ones = np.ones(sample_count)
    endpoints_exact = (
        np.array_equal(path(zeros, a, b), a)
        and np.array_equal(path(ones, a, b), b)
    )
    midpoint = _equality_residual(path(np.full(sample_count, 0.5), a, b), sigma)
    residuals["path_endpoints"] = midpoint if endpoints_exact else math.inf

    path_mu = path(mu, a, b)
    residuals["path_interpolation"] = _equality_residual(
        mean(path_mu, path(nu, a, b)),
        path((mu + nu) / 2, a, b),
    )
    residuals["path_monotonicity"] = max(
        _inequality_residual(path_mu, path(mu, a * growth, b)),
        _inequality_residual(path_mu, path(mu, a, b * growth)),
    )
    residuals["path_homogeneity"] = _equality_residual(path(mu, scale * a, scale * b), scale * path_mu)
    residuals["below_arithmetic"] = _inequality_residual(path_mu, (1 - mu) * a + mu * b)

    report = AxiomReport(kind=kind, sample_count=sample_count, seed=seed)
    for name, residual in residuals.items():
        report.results.append(AxiomResult(
            name=name,
            passed=residual <= AXIOM_TOLERANCE,
            max_residual=residual,
        ))
    return report
