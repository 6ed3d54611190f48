"""
States on M_n(C)

A normalized state f (f(1) = ||f|| = 1) is represented concretely:
- PureState: a unit vector x, f(a) = <a x, x>
- MixedState: a density matrix rho, f(a) = tr(rho a)
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from .linalg import adjoint, as_matrix, hermitian_eigen


NORM_TOLERANCE = 1e-12
TRACE_TOLERANCE = 1e-12
HERMITIAN_TOLERANCE = 1e-10
POSITIVITY_TOLERANCE = 1e-10


class StateError(ValueError):
    """Invalid state data or dimension mismatch."""


class StateKind(str, Enum):
    PURE = "pure"
    MIXED = "mixed"


@dataclass(frozen=True, eq=False)
class PureState:
    """Vector state a -> <a x, x> for a unit vector x."""
    x: np.ndarray

    def __post_init__(self):
        vector = np.asarray(self.x, dtype=np.complex128)
        if vector.ndim != 1 or vector.size == 0:
            raise StateError(f"Pure state needs a non-empty vector, got shape {vector.shape}")
        norm = float(np.linalg.norm(vector))
        if abs(norm - 1) > NORM_TOLERANCE:
            raise StateError(f"Pure state vector must have unit norm, got {norm:.15f}")
        object.__setattr__(self, "x", vector)

    @classmethod
    def from_vector(cls, vector) -> "PureState":
        """Normalize an arbitrary non-zero vector into a pure state."""
        vector = np.asarray(vector, dtype=np.complex128)
        norm = float(np.linalg.norm(vector))
        if norm == 0 or not np.isfinite(norm):
            raise StateError("Cannot normalize a zero or non-finite vector")
        return cls(vector / norm)

    @property
    def dim(self) -> int:
        return self.x.shape[0]


@dataclass(frozen=True, eq=False)
class MixedState:
    """Density-matrix state a -> tr(rho a)."""
    rho: np.ndarray

    def __post_init__(self):
        rho = as_matrix(self.rho)
        frobenius = float(np.linalg.norm(rho))
        if float(np.linalg.norm(rho - adjoint(rho))) > HERMITIAN_TOLERANCE * max(1.0, frobenius):
            raise StateError("Density matrix must be Hermitian")
        trace = np.trace(rho)
        if abs(trace - 1) > TRACE_TOLERANCE:
            raise StateError(f"Density matrix must have unit trace, got {trace:.15g}")
        lowest = float(hermitian_eigen(rho).lambda_min)
        if lowest < -POSITIVITY_TOLERANCE:
            raise StateError(f"Density matrix must be positive semidefinite, lambda_min = {lowest:.3e}")
        object.__setattr__(self, "rho", rho)

    @classmethod
    def from_factor(cls, L) -> "MixedState":
        """rho = L L* / tr(L L*) for any non-zero factor L."""
        factor = np.asarray(L, dtype=np.complex128)
        rho = factor @ adjoint(factor)
        trace = float(np.trace(rho).real)
        if trace == 0 or not np.isfinite(trace):
            raise StateError("Cannot normalize a zero or non-finite factor")
        rho = rho / trace
        return cls((rho + adjoint(rho)) / 2)

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


State = Union[PureState, MixedState]


def state_eval(s: State, A) -> complex:
    """
    Evaluate the state on a matrix: <A x, x> for pure, tr(rho A) for mixed.

    Raises:
        StateError: dimension mismatch
    """
    matrix = as_matrix(A)
    if matrix.shape[0] != s.dim:
        raise StateError(f"Dimension mismatch: state has dim {s.dim}, matrix has {matrix.shape[0]}")
    if isinstance(s, PureState):
        return complex(np.vdot(s.x, matrix @ s.x))
    return complex(np.trace(s.rho @ matrix))


def pure_to_mixed(s: PureState) -> MixedState:
    """rho = x x*."""
    return MixedState(np.outer(s.x, np.conj(s.x)))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussian entries (E|z|^2 = 1)."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def random_state(
    dim: int,
    kind: Union[str, StateKind] = StateKind.PURE,
    rank: Optional[int] = None,
    seed: Union[int, np.random.Generator] = 0,
) -> State:
    """
    Draw a random state.

    Pure states normalize a complex Gaussian vector (uniform on the sphere);
    mixed states use rho = L L* / tr(L L*) with L a dim x rank complex
    Gaussian factor. Deterministic per seed.

    Args:
        dim: Hilbert space dimension
        kind: "pure" or "mixed"
        rank: Factor rank for mixed states (default: dim)
        seed: Integer seed or an explicit numpy Generator
    """
    kind = StateKind(kind)
    if dim < 1:
        raise StateError(f"dim must be >= 1, got {dim}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    if kind == StateKind.PURE:
        return PureState.from_vector(complex_gaussian(rng, dim))

    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise StateError(f"rank must satisfy 1 <= rank <= dim, got rank={rank}, dim={dim}")
    return MixedState.from_factor(complex_gaussian(rng, (dim, rank)))


def _pairs(values: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in np.ravel(values)]


def state_payload(s: State) -> dict:
    """JSON-ready witness payload using [re, im] pairs."""
    if isinstance(s, PureState):
        return {"kind": StateKind.PURE.value, "n": s.dim, "vector": _pairs(s.x)}
    return {"kind": StateKind.MIXED.value, "n": s.dim, "entries": _pairs(s.rho)}


def state_from_payload(payload: dict) -> State:
    """Inverse of state_payload."""
    kind = StateKind(payload["kind"])
    if kind == StateKind.PURE:
        vector = np.array([complex(re, im) for re, im in payload["vector"]])
        return PureState.from_vector(vector)
    n = int(payload["n"])
    entries = np.array([complex(re, im) for re, im in payload["entries"]]).reshape(n, n)
    return MixedState(entries)
