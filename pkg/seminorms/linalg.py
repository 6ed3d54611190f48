"""
Dense Complex Matrix Kernel

Hermitian eigendecomposition by cyclic complex Jacobi rotations, and the
quantities built on it:
- operator norm (largest singular value) and matrix absolute value |A|
- fractional powers and spectral calculus of PSD / Hermitian matrices
- Loewner-order comparison with a witness eigenvalue
- spectral radius by normalized repeated squaring (Gelfand formula)
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np


logger = logging.getLogger(__name__)


# Jacobi solver: stop when off-diagonal Frobenius norm <= threshold * ||H||_F
JACOBI_THRESHOLD = 1e-12
JACOBI_MAX_SWEEPS = 60

# Default tolerances
SYMMETRY_TOLERANCE = 1e-10  # Hermitian check, relative to ||H||_F
LOEWNER_TOLERANCE = 1e-9  # Loewner slack, relative to max(1, ||A||, ||B||)
PSD_TOLERANCE = 1e-10  # Negative eigenvalues within tol * ||H|| are clamped to 0

# Eigenvalues of A*A below this fraction of the largest are treated as zero in |A|
RANK_CUTOFF = 1e-14

# Spectral radius iteration
GELFAND_MAX_STEPS = 48
GELFAND_TOLERANCE = 1e-8


class LinalgError(Exception):
    """Base class for matrix kernel errors."""


class ShapeError(LinalgError, ValueError):
    """Non-square, mismatched or non-finite input."""


class NotHermitianError(LinalgError, ValueError):
    """Input is not Hermitian within tolerance."""


class ConvergenceError(LinalgError):
    """Jacobi sweeps exhausted before the off-diagonal norm fell below threshold."""

    def __init__(self, off_norm: float, sweeps: int):
        self.off_norm = off_norm
        self.sweeps = sweeps
        super().__init__(
            f"Jacobi iteration did not converge in {sweeps} sweeps "
            f"(off-diagonal norm {off_norm:.3e})"
        )


class NotPSDError(LinalgError, ValueError):
    """Smallest eigenvalue lies below the clamping band."""

    def __init__(self, lambda_min: float, bound: float):
        self.lambda_min = lambda_min
        super().__init__(
            f"Matrix is not positive semidefinite: lambda_min = {lambda_min:.6e} "
            f"(allowed down to {-bound:.3e})"
        )


class SpectrumDomainError(LinalgError, ValueError):
    """Spectral function undefined on part of the spectrum."""


@dataclass(frozen=True, eq=False)
class HermitianEigen:
    """
    Spectral decomposition H = V diag(values) V*.

    ``values`` are ascending; ``vectors`` holds the eigenvectors as columns.
    Stacked inputs (..., n, n) give values (..., n) and vectors (..., n, n).
    """
    values: np.ndarray
    vectors: np.ndarray
    sweeps: int = 0

    def recompose(self, values: Optional[np.ndarray] = None) -> np.ndarray:
        """Rebuild V diag(values) V*, optionally with transformed eigenvalues (exactly Hermitian)."""
        values = self.values if values is None else values
        return real_part((self.vectors * values[..., None, :]) @ adjoint(self.vectors))

    @property
    def lambda_min(self):
        return self.values[..., 0]

    @property
    def lambda_max(self):
        return self.values[..., -1]

    @property
    def top_vector(self) -> np.ndarray:
        return self.vectors[..., :, -1]


@dataclass(frozen=True)
class ScalarFunction:
    """
    A function from the spectral-calculus catalog.

    kinds: "power" (t^p, p >= 0, PSD input), "exp", "log" (positive spectrum),
    "square".
    """
    kind: str
    exponent: float = 1.0

    @classmethod
    def power(cls, exponent: float) -> "ScalarFunction":
        if exponent < 0:
            raise SpectrumDomainError(f"Power exponent must be >= 0, got {exponent}")
        return cls("power", float(exponent))

    def __str__(self) -> str:
        if self.kind == "power":
            return f"t^{self.exponent:g}"
        return self.kind


EXP = ScalarFunction("exp")
LOG = ScalarFunction("log")
SQUARE = ScalarFunction("square")
SQRT = ScalarFunction("power", 0.5)


@dataclass(frozen=True)
class LoewnerComparison:
    """Result of A <= B in the Loewner order, with witness lambda_min(B - A)."""
    holds: bool
    witness: float

    def __bool__(self) -> bool:
        return self.holds


def as_matrix(A) -> np.ndarray:
    """
    Coerce input to a square, finite complex128 matrix.

    Raises:
        ShapeError: non-square or non-finite input
    """
    matrix = np.asarray(A, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise ShapeError(f"Expected a non-empty square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ShapeError("Matrix entries must be finite")
    return matrix


def matrix_payload(A) -> dict:
    """Matrix JSON: {"n": n, "entries": row-major [re, im] pairs}."""
    matrix = as_matrix(A)
    return {
        "n": matrix.shape[0],
        "entries": [[float(z.real), float(z.imag)] for z in matrix.ravel()],
    }


def matrix_from_payload(payload: dict) -> np.ndarray:
    """
    Inverse of matrix_payload.

    Raises:
        ShapeError: wrong entry count, malformed pairs or non-finite values
    """
    n = int(payload["n"])
    entries = payload["entries"]
    if n < 1 or len(entries) != n * n:
        raise ShapeError(f"Expected {n * n} entries for n={n}, got {len(entries)}")
    if any(len(pair) != 2 for pair in entries):
        raise ShapeError("Each entry must be a [re, im] pair")
    values = np.array([complex(float(re), float(im)) for re, im in entries], dtype=np.complex128)
    return as_matrix(values.reshape(n, n))


def adjoint(A: np.ndarray) -> np.ndarray:
    return np.conj(np.swapaxes(A, -1, -2))


def real_part(A: np.ndarray) -> np.ndarray:
    """Hermitian part Re(M) = (M + M*) / 2 (exactly Hermitian)."""
    return (A + adjoint(A)) / 2


def gram(A: np.ndarray) -> np.ndarray:
    """|A|^2 = A* A, made exactly Hermitian."""
    return real_part(adjoint(A) @ A)


def _jacobi_rotate(H: np.ndarray, V: np.ndarray, p: int, q: int) -> None:
    """Zero H[..., p, q] for every matrix in the stack, in place."""
    h_pp = H[..., p, p].real
    h_qq = H[..., q, q].real
    h_pq = H[..., p, q]
    magnitude = np.abs(h_pq)
    active = magnitude > 0
    if not np.any(active):
        return

    # Phase-align h_pq to a real entry, then apply a real rotation
    phase = np.where(active, np.conj(h_pq) / np.where(active, magnitude, 1.0), 1.0)
    theta = np.where(active, 0.5 * np.arctan2(2 * magnitude, h_qq - h_pp), 0.0)
    c = np.cos(theta)
    s = np.sin(theta)

    G = np.empty(H.shape[:-2] + (2, 2), dtype=np.complex128)
    G[..., 0, 0] = c
    G[..., 0, 1] = s
    G[..., 1, 0] = -s * phase
    G[..., 1, 1] = c * phase

    pair = [p, q]
    H[..., :, pair] = H[..., :, pair] @ G
    H[..., pair, :] = adjoint(G) @ H[..., pair, :]
    H[..., p, q] = 0
    H[..., q, p] = 0
    H[..., p, p] = H[..., p, p].real
    H[..., q, q] = H[..., q, q].real
    V[..., :, pair] = V[..., :, pair] @ G


def _off_diagonal_norm(H: np.ndarray) -> np.ndarray:
    n = H.shape[-1]
    mask = ~np.eye(n, dtype=bool)
    return np.sqrt(np.sum(np.abs(H[..., mask]) ** 2, axis=-1))


def hermitian_eigen(H, tol: float = SYMMETRY_TOLERANCE) -> HermitianEigen:
    """
    Full spectral decomposition of a Hermitian matrix (or a stack of them).

    Cyclic complex Jacobi rotations until the off-diagonal Frobenius norm
    drops to JACOBI_THRESHOLD * ||H||_F. Residual asymmetry within
    tol * ||H||_F is removed by averaging with the adjoint.

    Args:
        H: Hermitian matrix, shape (n, n) or (..., n, n)
        tol: Relative symmetry tolerance

    Returns:
        HermitianEigen with ascending eigenvalues

    Raises:
        ShapeError: non-square input
        NotHermitianError: asymmetry beyond tolerance
        ConvergenceError: sweep budget exhausted
    """
    matrix = np.array(H, dtype=np.complex128)
    if matrix.ndim < 2 or matrix.shape[-1] != matrix.shape[-2] or matrix.shape[-1] == 0:
        raise ShapeError(f"Expected square matrices, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ShapeError("Matrix entries must be finite")

    frobenius = np.sqrt(np.sum(np.abs(matrix) ** 2, axis=(-2, -1)))
    asymmetry = np.sqrt(np.sum(np.abs(matrix - adjoint(matrix)) ** 2, axis=(-2, -1)))
    if np.any(asymmetry > tol * np.maximum(frobenius, np.finfo(float).tiny)):
        raise NotHermitianError(
            f"Matrix is not Hermitian: ||H - H*||_F = {float(np.max(asymmetry)):.3e}"
        )
    matrix = real_part(matrix)

    n = matrix.shape[-1]
    vectors = np.broadcast_to(np.eye(n, dtype=np.complex128), matrix.shape).copy()
    threshold = JACOBI_THRESHOLD * frobenius

    sweeps = 0
    off_norm = _off_diagonal_norm(matrix)
    while np.any(off_norm > threshold):
        if sweeps >= JACOBI_MAX_SWEEPS:
            raise ConvergenceError(float(np.max(off_norm)), sweeps)
        for p in range(n - 1):
            for q in range(p + 1, n):
                _jacobi_rotate(matrix, vectors, p, q)
        sweeps += 1
        off_norm = _off_diagonal_norm(matrix)

    logger.debug("Jacobi converged in %d sweeps for shape %s", sweeps, matrix.shape)

    values = np.diagonal(matrix, axis1=-2, axis2=-1).real
    order = np.argsort(values, axis=-1, kind="stable")
    values = np.take_along_axis(values, order, axis=-1)
    vectors = np.take_along_axis(vectors, order[..., None, :], axis=-1)
    return HermitianEigen(values=values, vectors=vectors, sweeps=sweeps)


def lambda_min(H) -> float:
    return float(hermitian_eigen(H).lambda_min)


def lambda_max(H) -> float:
    return float(hermitian_eigen(H).lambda_max)


def operator_norm(A) -> float:
    """Largest singular value, sqrt(lambda_max(A* A))."""
    matrix = as_matrix(A)
    top = hermitian_eigen(gram(matrix)).lambda_max
    return math.sqrt(max(float(top), 0.0))


def abs_matrix(A) -> np.ndarray:
    """
    Matrix absolute value |A| = (A* A)^(1/2).

    Eigenvalues of A* A below RANK_CUTOFF * lambda_max are set to zero, so
    rank-deficient inputs give exactly rank-deficient |A|.
    """
    matrix = as_matrix(A)
    eigen = hermitian_eigen(gram(matrix))
    values = np.maximum(eigen.values, 0.0)
    top = values[-1] if values.size else 0.0
    values = np.where(values <= RANK_CUTOFF * top, 0.0, values)
    return eigen.recompose(np.sqrt(values))


def _clamped_spectrum(eigen: HermitianEigen, tol: float) -> np.ndarray:
    values = eigen.values
    bound = tol * float(np.max(np.abs(values))) if values.size else 0.0
    lowest = float(values[0])
    if lowest < -bound:
        raise NotPSDError(lowest, bound)
    return np.maximum(values, 0.0)


def psd_power(H, p: float, tol: float = PSD_TOLERANCE) -> np.ndarray:
    """
    Fractional power H^p of a positive semidefinite matrix.

    Eigenvalues in [-tol * ||H||, 0) are clamped to 0; 0^0 is taken as 1.

    Raises:
        NotPSDError: lambda_min < -tol * ||H||
        SpectrumDomainError: p < 0
    """
    if p < 0:
        raise SpectrumDomainError(f"Power must be >= 0, got {p}")
    eigen = hermitian_eigen(as_matrix(H))
    values = _clamped_spectrum(eigen, tol)
    return eigen.recompose(np.power(values, p))


def apply_scalar_function(H, f: ScalarFunction, tol: float = PSD_TOLERANCE) -> np.ndarray:
    """
    Spectral calculus f(H) for f from the catalog.

    Raises:
        SpectrumDomainError: log on a spectrum not safely positive, unknown f
        NotPSDError: power of a matrix that is not PSD
    """
    eigen = hermitian_eigen(as_matrix(H))
    values = eigen.values

    if f.kind == "power":
        return eigen.recompose(np.power(_clamped_spectrum(eigen, tol), f.exponent))
    if f.kind == "square":
        return eigen.recompose(values ** 2)
    if f.kind == "exp":
        return eigen.recompose(np.exp(values))
    if f.kind == "log":
        if values[0] <= tol:
            raise SpectrumDomainError(
                f"log requires a positive spectrum, lambda_min = {values[0]:.6e}"
            )
        return eigen.recompose(np.log(values))
    raise SpectrumDomainError(f"Unknown scalar function: {f.kind}")


def loewner_leq(A, B, tol: float = LOEWNER_TOLERANCE) -> LoewnerComparison:
    """
    Decide A <= B in the Loewner order.

    Holds iff lambda_min(B - A) >= -tol * max(1, ||A||, ||B||). The witness
    eigenvalue is always returned.

    Raises:
        ShapeError: shape mismatch
    """
    left = as_matrix(A)
    right = as_matrix(B)
    if left.shape != right.shape:
        raise ShapeError(f"Shape mismatch: {left.shape} vs {right.shape}")

    # Sides are validated against their own norms; B - A may nearly cancel.
    scale = max(
        1.0,
        float(np.max(np.abs(hermitian_eigen(left).values))),
        float(np.max(np.abs(hermitian_eigen(right).values))),
    )
    witness = float(hermitian_eigen(real_part(right - left)).lambda_min)
    return LoewnerComparison(holds=witness >= -tol * scale, witness=witness)


def spectral_radius(A) -> float:
    """
    Spectral radius via normalized repeated squaring.

    r_k = ||A^(2^k)||^(1/2^k), tracked in log form: B_0 = A and
    B_(k+1) = (B_k / ||B_k||)^2, so A^(2^k) = exp(s_k) B_k with
    s_(k+1) = 2 (s_k + log ||B_k||). Stops when successive estimates agree
    to GELFAND_TOLERANCE * max(1, r_k) or after GELFAND_MAX_STEPS squarings.
    """
    current = as_matrix(A)
    log_scale = 0.0
    estimate = None

    for step in range(GELFAND_MAX_STEPS + 1):
        norm = operator_norm(current)
        if norm == 0:
            return 0.0

        log_norm = log_scale + math.log(norm)
        next_estimate = math.exp(log_norm / 2 ** step)
        if estimate is not None and abs(next_estimate - estimate) <= GELFAND_TOLERANCE * max(1.0, estimate):
            return next_estimate
        estimate = next_estimate

        normalized = current / norm
        current = normalized @ normalized
        log_scale = 2 * log_norm

    return estimate
