"""
Dense complex matrix arithmetic for finite-dimensional Hilbert spaces.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. The Hermitian
eigensolver is a cyclic Jacobi iteration; everything that needs a spectrum
(square roots, order comparisons) goes through it.
"""
from __future__ import annotations

import logging
from typing import List, Sequence, Tuple

import numpy as np

from . import config
from .config import Tolerance
from .errors import DimensionMismatchError, NonHermitianError, NotPSDError, ValidationError

__all__ = [
    "Tolerance",
    "as_matrix",
    "frozen",
    "identity",
    "zeros",
    "ket_projector",
    "matmul",
    "adjoint",
    "trace",
    "hermitize",
    "is_hermitian",
    "herm_eigendecompose",
    "eigenvalues",
    "min_eigenvalue",
    "max_eigenvalue",
    "psd_sqrt",
    "max_norm",
    "approx_eq",
    "commutator_norm",
    "matrix_to_json",
    "matrix_from_json",
]

logger = logging.getLogger(__name__)


def as_matrix(data, name: str = "matrix") -> np.ndarray:
    """Coerce ``data`` to a square, finite complex128 array."""
    arr = np.array(data, dtype=np.complex128)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
        raise ValidationError(f"{name}: expected a non-empty square matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError(f"{name}: entries must be finite")
    return arr


def frozen(arr: np.ndarray) -> np.ndarray:
    """Return a read-only copy so value types stay immutable."""
    out = np.array(arr, dtype=np.complex128, copy=True)
    out.setflags(write=False)
    return out


def identity(dim: int) -> np.ndarray:
    return np.eye(dim, dtype=np.complex128)


def zeros(dim: int) -> np.ndarray:
    return np.zeros((dim, dim), dtype=np.complex128)


def ket_projector(vector: Sequence[complex]) -> np.ndarray:
    """|ψ⟩⟨ψ| for a (normalised) vector ψ."""
    v = np.asarray(vector, dtype=np.complex128).reshape(-1)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def _check_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    _check_same_dim(a, b)
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(a).T


def trace(a: np.ndarray) -> complex:
    return complex(np.trace(a))


def hermitize(a: np.ndarray) -> np.ndarray:
    """(A + A†)/2, used to scrub roundoff from results that are Hermitian in exact arithmetic."""
    return (a + np.conj(a).T) / 2


def max_norm(a: np.ndarray) -> float:
    """Largest absolute entry."""
    return float(np.max(np.abs(a))) if a.size else 0.0


def is_hermitian(a: np.ndarray, tol: Tolerance | float | None = None) -> bool:
    eps = config.resolve(tol).eps
    return max_norm(a - np.conj(a).T) <= eps


def _jacobi_pair(work: np.ndarray, p: int, q: int) -> np.ndarray | None:
    """2x2 unitary zeroing work[p, q] for a Hermitian work matrix."""
    apq = work[p, q]
    mag = abs(apq)
    if mag == 0.0:
        return None
    phase = apq / mag
    theta = (work[q, q].real - work[p, p].real) / (2.0 * mag)
    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
    if theta < 0.0:
        t = -t
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # Phase rotation makes the (p, q) entry real, then a real Jacobi rotation.
    return np.array([[c, s], [-np.conj(phase) * s, np.conj(phase) * c]], dtype=np.complex128)


def herm_eigendecompose(
    a: np.ndarray, tol: Tolerance | float | None = None
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    ``a = V diag(λ) V†``. Sweeps stop once the off-diagonal Frobenius norm
    falls below ``off_diagonal_tol · max(1, ‖a‖_F)`` or the sweep cap is hit.
    """
    m = as_matrix(a)
    if not is_hermitian(m, tol):
        raise NonHermitianError(
            f"eigendecomposition needs a Hermitian matrix (‖A − A†‖_max = {max_norm(m - adjoint(m)):.3e})"
        )
    settings = config.numerics()["jacobi"]
    max_sweeps = int(settings["max_sweeps"])
    dim = m.shape[0]
    work = hermitize(m)
    vectors = identity(dim)
    threshold = float(settings["off_diagonal_tol"]) * max(1.0, float(np.linalg.norm(work)))
    off_mask = ~np.eye(dim, dtype=bool)

    for sweep in range(max_sweeps):
        off = float(np.sqrt(np.sum(np.abs(work[off_mask]) ** 2)))
        if off < threshold:
            break
        for p in range(dim - 1):
            for q in range(p + 1, dim):
                rot = _jacobi_pair(work, p, q)
                if rot is None:
                    continue
                idx = [p, q]
                work[:, idx] = work[:, idx] @ rot
                work[idx, :] = np.conj(rot).T @ work[idx, :]
                vectors[:, idx] = vectors[:, idx] @ rot
                work[p, q] = work[q, p] = 0.0
    else:
        logger.debug("Jacobi sweep cap (%d) reached for dim=%d", max_sweeps, dim)

    values = np.real(np.diag(work)).copy()
    order = np.argsort(values, kind="stable")
    return values[order], vectors[:, order]


def eigenvalues(a: np.ndarray, tol: Tolerance | float | None = None) -> np.ndarray:
    return herm_eigendecompose(a, tol)[0]


def min_eigenvalue(a: np.ndarray, tol: Tolerance | float | None = None) -> float:
    return float(eigenvalues(a, tol)[0])


def max_eigenvalue(a: np.ndarray, tol: Tolerance | float | None = None) -> float:
    return float(eigenvalues(a, tol)[-1])


def psd_sqrt(a: np.ndarray, tol: Tolerance | float | None = None) -> np.ndarray:
    """
    Unique positive square root of a positive semidefinite matrix.

    Eigenvalues with |λ| ≤ eps are treated as roundoff and snapped to zero,
    so the root of a projection is the projection itself; anything below
    −eps raises :class:`NotPSDError`.
    """
    eps = config.resolve(tol).eps
    values, vectors = herm_eigendecompose(a, tol)
    if values[0] < -eps:
        raise NotPSDError(f"matrix is not positive semidefinite (min eigenvalue {values[0]:.3e})")
    negligible = np.abs(values) <= eps
    if np.any(negligible & (values != 0.0)):
        logger.debug("Snapping %d eigenvalue(s) within %.1e of 0 before square root", int(negligible.sum()), eps)
    roots = np.sqrt(np.where(negligible, 0.0, values))
    return hermitize((vectors * roots) @ adjoint(vectors))


def approx_eq(a: np.ndarray, b: np.ndarray, tol: Tolerance | float | None = None) -> bool:
    _check_same_dim(a, b)
    return max_norm(a - b) <= config.resolve(tol).eps


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    """‖ab − ba‖_max."""
    _check_same_dim(a, b)
    return max_norm(a @ b - b @ a)


def matrix_to_json(a: np.ndarray) -> List[List[List[float]]]:
    """Row-major nested lists of ``[re, im]`` pairs."""
    return [[[float(z.real), float(z.imag)] for z in row] for row in np.asarray(a)]


def matrix_from_json(data, name: str = "matrix") -> np.ndarray:
    try:
        arr = np.array(data, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"{name}: matrix entries must be [re, im] pairs") from exc
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValidationError(f"{name}: expected rows of [re, im] pairs, got shape {arr.shape}")
    return as_matrix(arr[..., 0] + 1j * arr[..., 1], name)
