"""Dense complex matrix helpers shared by every other module.

Matrices are plain ``numpy.ndarray`` values with dtype ``complex128``; a
"unitary matrix" is any square array passing :func:`is_unitary` at the
dimension-scaled default tolerance.  All functions are pure and never mutate
their arguments.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NotUnitaryError

__all__ = [
    "default_unitarity_tol",
    "as_complex_matrix",
    "frobenius_distance",
    "is_unitary",
    "assert_unitary",
    "matmul",
    "adjoint",
    "determinant",
    "random_unitary",
]


def default_unitarity_tol(d: int) -> float:
    """Unitarity tolerance 1e-10*d; scales with dimension to absorb roundoff."""
    return 1e-10 * d


def as_complex_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array, rejecting non-finite entries."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-D matrix, got ndim={m.ndim}")
    if not np.isfinite(m).all():
        raise ValueError("matrix contains NaN or Inf entries")
    return m


def frobenius_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Frobenius norm of ``a - b``.

    Raises DimensionError when shapes differ.
    """
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return float(np.linalg.norm(a - b))


def is_unitary(m: np.ndarray, tol: float | None = None) -> bool:
    """True iff ``||m^H m - I||_F <= tol`` (default tol 1e-10*d).

    Raises DimensionError for non-square input.
    """
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"unitarity check needs a square matrix, got {m.shape}")
    d = m.shape[0]
    if tol is None:
        tol = default_unitarity_tol(d)
    gram = m.conj().T @ m
    return float(np.linalg.norm(gram - np.eye(d))) <= tol


def assert_unitary(m: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Return ``m`` as complex128, raising NotUnitaryError if the check fails."""
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise DimensionError(f"expected a square matrix, got {m.shape}")
    if not is_unitary(m, tol):
        d = m.shape[0]
        err = frobenius_distance(m.conj().T @ m, np.eye(d))
        raise NotUnitaryError(
            f"matrix fails unitarity check: ||U^H U - I||_F = {err:.3e} "
            f"exceeds tol {tol if tol is not None else default_unitarity_tol(d):.3e}"
        )
    return m


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Complex matrix product with an explicit inner-dimension check."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply shapes {a.shape} and {b.shape}")
    return a @ b


def adjoint(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(a).conj().T.copy()


def determinant(a: np.ndarray) -> complex:
    """Determinant via LU with partial pivoting (LAPACK getrf).

    Kept independent of the decomposition engine so it can serve as a
    cross-check on factor determinant products.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"determinant needs a square matrix, got {a.shape}")
    return complex(np.linalg.det(a.astype(np.complex128)))


def random_unitary(d: int, seed: int) -> np.ndarray:
    """Deterministic pseudo-random d x d unitary matrix.

    Draws a complex Gaussian matrix from a PCG64 generator seeded with
    ``seed``, takes its QR factorization, and rescales Q so that R has a
    positive real diagonal.  The rescaling makes the result independent of
    the QR sign convention, hence reproducible for a fixed (d, seed) pair.
    The distribution is Haar only up to the quality of the generator; the
    guarantee here is determinism plus unitarity within 1e-10.
    """
    if d < 1:
        raise ValueError(f"dimension must be >= 1, got {d}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(g)
    diag = np.diagonal(r)
    phases = diag / np.abs(diag)
    return q * phases[np.newaxis, :]
