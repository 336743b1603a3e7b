"""
Dense complex linear algebra with a subsystem-dimension signature.

Index convention: composite indices are row-major in label order, so for
labels (a, b) the basis index is i_a * d_b + i_b. Every operation that
reshapes an operator into its tensor factors relies on this convention.
"""
from __future__ import annotations

import string
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence, Tuple

import numpy as np

from lib.errors import ValidationError
from lib.thresholds import VALIDATION_TOLERANCES


@dataclass(frozen=True)
class DimSignature:
    """Ordered subsystem dimensions with distinct labels."""
    dims: Tuple[int, ...]
    labels: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, 'dims', tuple(int(d) for d in self.dims))
        object.__setattr__(self, 'labels', tuple(str(l) for l in self.labels))
        if len(self.dims) != len(self.labels):
            raise ValidationError(
                f"Signature has {len(self.dims)} dims but {len(self.labels)} labels")
        if not self.dims:
            raise ValidationError("Signature needs at least one subsystem")
        if any(d < 1 for d in self.dims):
            raise ValidationError(f"Subsystem dimensions must be >= 1, got {self.dims}")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError(f"Subsystem labels must be distinct, got {self.labels}")

    @classmethod
    def of(cls, dims: Sequence[int], labels: Sequence[str] | None = None) -> 'DimSignature':
        if labels is None:
            labels = string.ascii_lowercase[:len(dims)]
        return cls(tuple(dims), tuple(labels))

    @property
    def total(self) -> int:
        return reduce(lambda x, y: x * y, self.dims, 1)

    def __len__(self) -> int:
        return len(self.dims)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValidationError(f"Unknown subsystem label '{label}' (have {list(self.labels)})")

    def indices(self, labels: Iterable[str]) -> list[int]:
        """Positions of the given labels, sorted in signature order."""
        return sorted({self.index(l) for l in labels})

    def dim(self, label: str) -> int:
        return self.dims[self.index(label)]

    def restrict(self, labels: Iterable[str]) -> 'DimSignature':
        """Sub-signature on the given labels, kept in signature order."""
        idx = self.indices(labels)
        return DimSignature(tuple(self.dims[i] for i in idx),
                            tuple(self.labels[i] for i in idx))

    def others(self, labels: Iterable[str]) -> Tuple[str, ...]:
        """Labels not in the given set, in signature order."""
        drop = {self.labels[i] for i in self.indices(labels)}
        return tuple(l for l in self.labels if l not in drop)

    def append(self, dim: int, label: str) -> 'DimSignature':
        return DimSignature(self.dims + (dim,), self.labels + (label,))

    def check_operator(self, matrix: np.ndarray) -> None:
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise ValidationError(f"Operator must be square, got shape {matrix.shape}")
        if matrix.shape[0] != self.total:
            raise ValidationError(
                f"Operator side {matrix.shape[0]} does not match product of dims "
                f"{self.dims} = {self.total}")


def hermiticity_error(matrix: np.ndarray) -> float:
    """Largest entrywise deviation |M - M^dagger|."""
    return float(np.max(np.abs(matrix - matrix.conj().T))) if matrix.size else 0.0


def as_hermitian(matrix: np.ndarray, tol: float | None = None) -> np.ndarray:
    """
    Check Hermiticity within tolerance and return (M + M^dagger)/2.

    Raises:
        ValidationError: If M is not square or deviates by more than tol
    """
    tol = VALIDATION_TOLERANCES['hermiticity'] if tol is None else tol
    matrix = np.asarray(matrix, dtype=complex)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ValidationError(f"Matrix must be square, got shape {matrix.shape}")
    err = hermiticity_error(matrix)
    if err > tol:
        raise ValidationError(f"Matrix is not Hermitian: max |M - M^dagger| = {err:.3g} > {tol:g}")
    return (matrix + matrix.conj().T) / 2


def hermitian_eig(matrix: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix.

    Args:
        matrix: Square matrix, Hermitian within 1e-12

    Returns:
        (eigenvalues ascending, eigenvectors as orthonormal columns)
    """
    return np.linalg.eigh(as_hermitian(matrix))


def tensor_product(*operators: np.ndarray) -> np.ndarray:
    """Kronecker product of matrices or vectors in the order given."""
    return reduce(np.kron, (np.asarray(op, dtype=complex) for op in operators))


def _einsum_letters(n: int) -> Tuple[list[str], list[str]]:
    letters = string.ascii_letters
    if 2 * n > len(letters):
        raise ValidationError(f"Too many subsystems ({n}) for tensor contraction")
    return list(letters[:n]), list(letters[n:2 * n])


def partial_trace(rho: np.ndarray, sig: DimSignature, keep: Iterable[str]) -> np.ndarray:
    """
    Trace out every subsystem not in `keep`.

    Args:
        rho: Operator on sig
        sig: Signature of rho
        keep: Labels to keep (non-empty); result is ordered as in sig

    Returns:
        Reduced operator on sig.restrict(keep)
    """
    keep_idx = sig.indices(keep)
    if not keep_idx:
        raise ValidationError("partial_trace needs at least one label to keep")
    sig.check_operator(rho)
    n = len(sig)
    if len(keep_idx) == n:
        return np.array(rho, dtype=complex)

    row, col = _einsum_letters(n)
    for k in range(n):
        if k not in keep_idx:
            col[k] = row[k]
    out = [row[k] for k in keep_idx] + [col[k] for k in keep_idx]
    tensor = np.asarray(rho, dtype=complex).reshape(sig.dims + sig.dims)
    reduced = np.einsum(''.join(row) + ''.join(col) + '->' + ''.join(out), tensor)
    side = reduce(lambda x, y: x * y, (sig.dims[k] for k in keep_idx), 1)
    return reduced.reshape(side, side)


def partial_transpose(rho: np.ndarray, sig: DimSignature, subsystem: str) -> np.ndarray:
    """Transpose the row and column indices of one subsystem."""
    k = sig.index(subsystem)
    sig.check_operator(rho)
    n = len(sig)
    tensor = np.asarray(rho, dtype=complex).reshape(sig.dims + sig.dims)
    return tensor.swapaxes(k, n + k).reshape(sig.total, sig.total)


def permute_subsystems(rho: np.ndarray, sig: DimSignature,
                       order: Sequence[str]) -> Tuple[np.ndarray, DimSignature]:
    """Reorder tensor factors of an operator so labels follow `order`."""
    perm = [sig.index(l) for l in order]
    if sorted(perm) != list(range(len(sig))):
        raise ValidationError(f"Order {list(order)} is not a permutation of {list(sig.labels)}")
    n = len(sig)
    tensor = np.asarray(rho, dtype=complex).reshape(sig.dims + sig.dims)
    tensor = tensor.transpose(perm + [n + p for p in perm])
    new_sig = DimSignature(tuple(sig.dims[p] for p in perm), tuple(order))
    return tensor.reshape(sig.total, sig.total), new_sig


def permute_vector(psi: np.ndarray, sig: DimSignature,
                   order: Sequence[str]) -> Tuple[np.ndarray, DimSignature]:
    """Reorder tensor factors of a state vector."""
    perm = [sig.index(l) for l in order]
    if sorted(perm) != list(range(len(sig))):
        raise ValidationError(f"Order {list(order)} is not a permutation of {list(sig.labels)}")
    tensor = np.asarray(psi, dtype=complex).reshape(sig.dims).transpose(perm)
    new_sig = DimSignature(tuple(sig.dims[p] for p in perm), tuple(order))
    return tensor.reshape(-1), new_sig
