"""
Structure Classifiers and Instance Generators

Classifies a matrix by the operator classes the inequalities are stated for:
- normal, hyponormal, semi-hyponormal, p-hyponormal for p in {1/4, 1/2, 1}
- (alpha, beta)-normal with the optimal pair for invertible matrices
- square-zero (a^2 = 0)

and draws seeded random instances matched to each hypothesis class.
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Union

import numpy as np

from .linalg import (
    adjoint,
    as_matrix,
    gram,
    hermitian_eigen,
    loewner_leq,
    operator_norm,
    psd_power,
    real_part,
)
from .states import complex_gaussian


logger = logging.getLogger(__name__)


CLASSIFY_TOLERANCE = 1e-9
HYPONORMAL_POWERS = (0.25, 0.5, 1.0)

# lemma32_pair: |a| = D has entries spread over [0.5, 2.0]
DIAGONAL_LOW = 0.5
DIAGONAL_HIGH = 2.0

# contraction: ginibre rescaled to a norm drawn from [0.5, 1.0]
CONTRACTION_LOW = 0.5


class GeneratorKind(str, Enum):
    GINIBRE = "ginibre"
    NORMAL = "normal"
    NILPOTENT2 = "nilpotent2"
    PSD = "psd"
    LEMMA32_PAIR = "lemma32_pair"
    CONTRACTION = "contraction"


class GeneratorError(ValueError):
    """Unknown generator kind or invalid dimension."""


@dataclass
class StructureReport:
    """Operator-class membership of one matrix."""
    normal: bool
    semi_hyponormal: bool
    hyponormal: bool
    p_hyponormal: dict[float, bool] = field(default_factory=dict)
    alpha_beta: Optional[tuple[float, float]] = None
    nilpotent2: bool = False
    consistent: bool = True

    def as_dict(self) -> dict:
        return {
            "normal": self.normal,
            "semi_hyponormal": self.semi_hyponormal,
            "hyponormal": self.hyponormal,
            "p_hyponormal": {str(p): flag for p, flag in self.p_hyponormal.items()},
            "alpha_beta": list(self.alpha_beta) if self.alpha_beta else None,
            "nilpotent2": self.nilpotent2,
            "consistent": self.consistent,
        }


def optimal_alpha_beta(A, tol: float = CLASSIFY_TOLERANCE) -> Optional[tuple[float, float]]:
    """
    Tightest (alpha, beta) with alpha^2 |a|^2 <= |a*|^2 <= beta^2 |a|^2.

    From G = (|a|^2)^(-1/2) |a*|^2 (|a|^2)^(-1/2): alpha = sqrt(lambda_min(G)),
    beta = sqrt(lambda_max(G)), clamped to alpha <= 1 <= beta. None when a is
    numerically singular.
    """
    matrix = as_matrix(A)
    right = gram(matrix)
    left = real_part(matrix @ adjoint(matrix))

    eigen = hermitian_eigen(right)
    if eigen.lambda_min <= tol * max(1.0, float(eigen.lambda_max)):
        return None

    inverse_root = eigen.recompose(1.0 / np.sqrt(eigen.values))
    spread = hermitian_eigen(real_part(inverse_root @ left @ inverse_root)).values
    alpha = min(1.0, math.sqrt(max(float(spread[0]), 0.0)))
    beta = max(1.0, math.sqrt(max(float(spread[-1]), 0.0)))
    return alpha, beta


def classify(A, tol: float = CLASSIFY_TOLERANCE) -> StructureReport:
    """
    Decide the operator classes of A.

    p-hyponormal means (a*a)^p >= (aa*)^p in the Loewner order; hyponormal is
    p = 1 and semi-hyponormal p = 1/2. In finite dimension the traces of both
    sides agree, so every one of these classes collapses to normal; a
    disagreement is logged and flagged as an inconsistency.
    """
    matrix = as_matrix(A)
    right = gram(matrix)
    left = real_part(matrix @ adjoint(matrix))

    normal = bool(loewner_leq(left, right, tol)) and bool(loewner_leq(right, left, tol))
    p_hyponormal = {
        p: bool(loewner_leq(psd_power(left, p), psd_power(right, p), tol))
        for p in HYPONORMAL_POWERS
    }
    hyponormal = p_hyponormal[1.0]
    semi_hyponormal = p_hyponormal[0.5]

    norm = operator_norm(matrix)
    nilpotent2 = operator_norm(matrix @ matrix) <= tol * max(1.0, norm ** 2)

    alpha_beta = optimal_alpha_beta(matrix, tol)

    consistent = (
        hyponormal == normal
        and (not hyponormal or semi_hyponormal)
        and (not semi_hyponormal or p_hyponormal[0.25])
    )
    if not consistent:
        logger.warning(
            "Inconsistent structure report: normal=%s hyponormal=%s p-hyponormal=%s",
            normal, hyponormal, p_hyponormal,
        )

    return StructureReport(
        normal=normal,
        semi_hyponormal=semi_hyponormal,
        hyponormal=hyponormal,
        p_hyponormal=p_hyponormal,
        alpha_beta=alpha_beta,
        nilpotent2=nilpotent2,
        consistent=consistent,
    )


def haar_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary from the QR factorization of a ginibre matrix."""
    q, r = np.linalg.qr(complex_gaussian(rng, (dim, dim)))
    diagonal = np.diagonal(r)
    return q * (diagonal / np.abs(diagonal))


def generate(
    kind: Union[str, GeneratorKind],
    dim: int,
    seed: Union[int, np.random.Generator],
) -> Union[np.ndarray, tuple[np.ndarray, np.ndarray]]:
    """
    Draw a seeded random instance.

    ginibre      complex Gaussian entries
    normal       U diag(z) U* with complex Gaussian z
    nilpotent2   U N U* with N supported on the top-right block (N^2 = 0)
    psd          L L*
    lemma32_pair (a, b) with a = U D, D positive with distinct entries
                 (so |a| = D) and b real diagonal in [-1, 1], so |a| b = b* |a|
    contraction  ginibre scaled to an operator norm in [0.5, 1]

    Returns:
        One matrix, or the pair (a, b) for lemma32_pair
    """
    try:
        kind = GeneratorKind(kind)
    except ValueError:
        choices = ", ".join(k.value for k in GeneratorKind)
        raise GeneratorError(f"Unknown generator '{kind}'. Expected one of: {choices}") from None
    if dim < 1:
        raise GeneratorError(f"dim must be >= 1, got {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    if kind == GeneratorKind.GINIBRE:
        return complex_gaussian(rng, (dim, dim))

    if kind == GeneratorKind.NORMAL:
        unitary = haar_unitary(rng, dim)
        return (unitary * complex_gaussian(rng, dim)) @ adjoint(unitary)

    if kind == GeneratorKind.NILPOTENT2:
        unitary = haar_unitary(rng, dim)
        split = max(dim // 2, 1)
        block = np.zeros((dim, dim), dtype=np.complex128)
        block[:split, split:] = complex_gaussian(rng, (split, dim - split))
        return unitary @ block @ adjoint(unitary)

    if kind == GeneratorKind.PSD:
        factor = complex_gaussian(rng, (dim, dim))
        return real_part(factor @ adjoint(factor))

    if kind == GeneratorKind.LEMMA32_PAIR:
        unitary = haar_unitary(rng, dim)
        offsets = (np.arange(dim) + rng.uniform(0.0, 1.0, size=dim)) / dim
        diagonal = DIAGONAL_LOW + (DIAGONAL_HIGH - DIAGONAL_LOW) * offsets
        a = unitary * diagonal
        b = np.diag(rng.uniform(-1.0, 1.0, size=dim)).astype(np.complex128)
        return a, b

    ginibre = complex_gaussian(rng, (dim, dim))
    target = rng.uniform(CONTRACTION_LOW, 1.0)
    return ginibre * (target / operator_norm(ginibre))
