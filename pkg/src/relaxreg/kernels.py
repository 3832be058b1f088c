"""Small dense matrix kernels used by the solvers.

Projections onto the unit cube, the spectral-norm unit ball and the
shifted semidefinite cone {A : A >= -I}, plus Gram-Schmidt and the polar
factor. Sizes never exceed a few dozen rows, so LAPACK via numpy is the
backing factorization everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ContractViolationError, DegenerateInputError

SYMMETRY_TOL = 1e-8


@dataclass(frozen=True)
class SymEigResult:
    """Eigendecomposition of a symmetric matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # columns


def sym_eig(a: np.ndarray) -> SymEigResult:
    """Symmetric eigendecomposition with eigenvalues sorted descending.

    The caller is expected to pass a (numerically) symmetric matrix; the
    strictly lower triangle is the part that gets factored.
    """
    w, v = np.linalg.eigh(a)
    return SymEigResult(eigenvalues=w[::-1].copy(), eigenvectors=v[:, ::-1].copy())


def project_box(v: np.ndarray) -> np.ndarray:
    """Entrywise projection onto [-1, 1] (any array shape)."""
    return np.clip(np.asarray(v, dtype=np.float64), -1.0, 1.0)


def project_spectral_ball(x: np.ndarray) -> np.ndarray:
    """Nearest matrix (Frobenius) with spectral norm <= 1.

    Clamps the singular values of x at 1. Accepts a single (d, k) matrix
    or a batch (..., d, k); the batch form backs the nodewise projection
    inside the frame-valued TV solver.
    """
    x = np.asarray(x, dtype=np.float64)
    u, s, vt = np.linalg.svd(x, full_matrices=False)
    s = np.minimum(s, 1.0)
    return (u * s[..., None, :]) @ vt


def project_shifted_psd(a: np.ndarray, symmetry_tol: float = SYMMETRY_TOL) -> np.ndarray:
    """Projection onto {A symmetric : A >= -I} by eigenvalue clamping.

    Accepts a single (p, p) matrix or a batch (..., p, p). Inputs must be
    symmetric within `symmetry_tol`; they are symmetrized before the
    eigendecomposition to shed floating-point drift.
    """
    a = np.asarray(a, dtype=np.float64)
    asym = np.abs(a - np.swapaxes(a, -1, -2)).max() if a.size else 0.0
    if asym > symmetry_tol:
        raise ContractViolationError(
            f"matrix asymmetry {asym:.3e} exceeds tolerance {symmetry_tol:.1e}"
        )
    sym = 0.5 * (a + np.swapaxes(a, -1, -2))
    w, v = np.linalg.eigh(sym)
    w = np.maximum(w, -1.0)
    return (v * w[..., None, :]) @ np.swapaxes(v, -1, -2)


def gram_schmidt(x: np.ndarray, rank_tol: float = 1e-10) -> np.ndarray:
    """Orthonormalize the columns of a (d, k) matrix, order preserved.

    Classical Gram-Schmidt with one re-orthogonalization pass, so the
    output satisfies Q^T Q = I to near machine precision whenever the
    input is numerically full rank.
    """
    x = np.asarray(x, dtype=np.float64)
    d, k = x.shape
    if k > d:
        raise DegenerateInputError(f"need k <= d, got shape {x.shape}")
    if np.linalg.svd(x, compute_uv=False)[-1] <= rank_tol:
        raise DegenerateInputError("columns are numerically linearly dependent")
    q = np.empty_like(x)
    for j in range(k):
        v = x[:, j].copy()
        for _ in range(2):  # second pass restores orthogonality lost to cancellation
            if j:
                v -= q[:, :j] @ (q[:, :j].T @ v)
        nrm = np.linalg.norm(v)
        if nrm <= rank_tol:
            raise DegenerateInputError(f"column {j} collapses under orthogonalization")
        q[:, j] = v / nrm
    return q


def polar_factor(y: np.ndarray) -> np.ndarray:
    """Orthonormal factor U V^T of a thin SVD of a full-column-rank matrix.

    This is both the nearest orthonormal frame to y and the maximizer of
    <X, y>_F over the spectral unit ball, which makes it the reference
    point for the frame-valued solvers. Accepts batches (..., d, k).
    """
    y = np.asarray(y, dtype=np.float64)
    u, s, vt = np.linalg.svd(y, full_matrices=False)
    if np.min(s) <= 1e-12 * max(1.0, float(np.max(s, initial=0.0))):
        raise DegenerateInputError("input is numerically rank-deficient")
    return u @ vt
