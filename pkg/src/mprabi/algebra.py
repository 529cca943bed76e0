"""Dense complex operator algebra on tensor-product Hilbert spaces.

Everything downstream (model building, identity checks, time evolution)
reduces to the handful of primitives here: Kronecker products, commutators,
Hermitian eigendecomposition and expectation values.  Matrices are dense
``complex128`` arrays; the systems of interest are desk-scale (a few hundred
dimensions at most), so no sparse or iterative machinery is used.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import prod

import numpy as np

__all__ = [
    "NonHermitianError",
    "Operator",
    "Ket",
    "identity",
    "basis_ket",
    "kron",
    "commutator",
    "frobenius",
    "eig_hermitian",
    "expectation",
    "projector_keep",
]

_HERM_TOL = 1e-10


class NonHermitianError(ValueError):
    """A matrix required to be Hermitian is not (a numerical failure, not a usage error)."""


@dataclass(frozen=True, eq=False)
class Operator:
    """A square complex matrix tagged with its tensor-factor structure.

    ``factors`` records the dimensions of the spaces the operator acts on,
    in Kronecker order; their product must equal the matrix dimension.
    Entries are validated to be finite.  Instances are immutable (the
    underlying array is made read-only) and therefore safe to share.
    """

    mat: np.ndarray
    factors: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        mat = np.array(self.mat, dtype=complex, copy=True)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator matrix must be square, got shape {mat.shape}")
        if not np.isfinite(mat).all():
            raise ValueError("operator entries must be finite (no NaN/Inf)")
        factors = tuple(int(f) for f in self.factors) or (mat.shape[0],)
        if any(f <= 0 for f in factors):
            raise ValueError(f"factor dimensions must be positive, got {factors}")
        if prod(factors) != mat.shape[0]:
            raise ValueError(
                f"product of factors {factors} != matrix dimension {mat.shape[0]}"
            )
        mat.setflags(write=False)
        object.__setattr__(self, "mat", mat)
        object.__setattr__(self, "factors", factors)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def dag(self) -> "Operator":
        """Conjugate transpose."""
        return Operator(self.mat.conj().T, self.factors)

    def _check_compatible(self, other: "Operator") -> None:
        if self.factors != other.factors:
            raise ValueError(
                f"operator factor mismatch: {self.factors} vs {other.factors}"
            )

    def __add__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return Operator(self.mat + other.mat, self.factors)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return Operator(self.mat - other.mat, self.factors)

    def __neg__(self) -> "Operator":
        return Operator(-self.mat, self.factors)

    def __mul__(self, scalar: complex) -> "Operator":
        return Operator(self.mat * scalar, self.factors)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_compatible(other)
        return Operator(self.mat @ other.mat, self.factors)


@dataclass(frozen=True, eq=False)
class Ket:
    """A normalized state vector; construction renormalizes to unit norm."""

    vec: np.ndarray

    def __post_init__(self) -> None:
        vec = np.array(self.vec, dtype=complex, copy=True).ravel()
        if vec.size == 0:
            raise ValueError("state vector must be nonempty")
        if not np.isfinite(vec).all():
            raise ValueError("state amplitudes must be finite")
        norm = np.linalg.norm(vec)
        if norm < 1e-300:
            raise ValueError("cannot normalize the zero vector")
        vec = vec / norm
        vec.setflags(write=False)
        object.__setattr__(self, "vec", vec)

    @property
    def dim(self) -> int:
        return self.vec.size


def identity(factors: int | tuple[int, ...]) -> Operator:
    """Identity operator; ``factors`` is a dimension or a tuple of them."""
    if isinstance(factors, int):
        factors = (factors,)
    return Operator(np.eye(prod(factors), dtype=complex), tuple(factors))


def basis_ket(dim: int, index: int) -> Ket:
    """Computational basis vector |index> in a dim-dimensional space."""
    if not 0 <= index < dim:
        raise ValueError(f"basis index {index} outside [0, {dim})")
    vec = np.zeros(dim, dtype=complex)
    vec[index] = 1.0
    return Ket(vec)


def kron(a: Operator, b: Operator) -> Operator:
    """Kronecker product; factor lists concatenate."""
    return Operator(np.kron(a.mat, b.mat), a.factors + b.factors)


def commutator(a: Operator, b: Operator) -> Operator:
    """[a, b] = ab - ba."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return Operator(a.mat @ b.mat - b.mat @ a.mat, a.factors)


def frobenius(a: Operator | np.ndarray) -> float:
    """Frobenius norm."""
    mat = a.mat if isinstance(a, Operator) else a
    return float(np.linalg.norm(mat))


def eig_hermitian(a: Operator) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a Hermitian operator.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues real and
    ascending and eigenvectors as the columns of a unitary matrix, so that
    ``a.mat == V @ diag(w) @ V.conj().T`` up to roundoff.

    Raises
    ------
    NonHermitianError
        If the relative deviation from Hermiticity exceeds 1e-10.
    """
    scale = frobenius(a)
    dev = frobenius(a.mat - a.mat.conj().T)
    if dev > _HERM_TOL * max(scale, 1e-300):
        raise NonHermitianError(
            f"matrix is not Hermitian (relative deviation {dev / max(scale, 1e-300):.3e})"
        )
    w, v = np.linalg.eigh(a.mat)
    return w, v


def expectation(psi: Ket, a: Operator) -> complex:
    """<psi| a |psi>."""
    if psi.dim != a.dim:
        raise ValueError(f"dimension mismatch: ket {psi.dim} vs operator {a.dim}")
    return complex(psi.vec.conj() @ (a.mat @ psi.vec))


def projector_keep(
    factors: tuple[int, ...], keep: tuple[int | None, ...]
) -> Operator:
    """Diagonal projector keeping the first ``keep[i]`` basis states of factor i.

    ``None`` keeps a factor entirely.  Used to restrict operator identities
    to the buffered subspace where ladder truncation has not corrupted them.
    """
    if len(keep) != len(factors):
        raise ValueError("keep must list one entry per factor")
    diag = np.array([1.0])
    for d, k in zip(factors, keep):
        if k is None:
            k = d
        if not 0 <= k <= d:
            raise ValueError(f"cannot keep {k} states of a {d}-dimensional factor")
        mask = np.zeros(d)
        mask[:k] = 1.0
        diag = np.kron(diag, mask)
    return Operator(np.diag(diag.astype(complex)), tuple(factors))
