"""Small dense Hermitian linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of shape ``(d, d)``. All routines are pure
and target the small dimensions (``d <= 8``) this package is built for.
"""
import numpy as np

from .errors import DomainError, NumericError

#: Eigenvalues at or below this value are treated as outside the support.
SUPPORT_CUTOFF = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10


def as_square(m):
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise DomainError(f"expected a non-empty square matrix, got shape {m.shape}", "square")
    return m


def hermitian_defect(m):
    """Largest entry of ``|m - m^dagger|``."""
    m = as_square(m)
    return float(np.max(np.abs(m - m.conj().T)))


def is_hermitian(m, tol=HERMITIAN_TOL):
    m = as_square(m)
    scale = max(1.0, float(np.max(np.abs(m))))
    return hermitian_defect(m) <= tol * scale


def _checked_hermitian(m):
    m = as_square(m)
    if not is_hermitian(m):
        raise DomainError(
            f"matrix is not Hermitian (defect {hermitian_defect(m):.3e})", "hermitian"
        )
    return 0.5 * (m + m.conj().T)


def eig_hermitian(m):
    """Eigendecomposition of a Hermitian matrix.

    Returns:
        tuple: ``(eigenvalues, eigenvectors)`` with real eigenvalues in
        ascending order and orthonormal eigenvectors as columns, so that
        ``m == V @ diag(w) @ V.conj().T``.

    Raises:
        DomainError: if ``m`` is not Hermitian.
        NumericError: if the LAPACK driver fails to converge.
    """
    h = _checked_hermitian(m)
    try:
        w, v = np.linalg.eigh(h)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver did not converge: {exc}") from exc
    return w, v


def min_eigenvalue(m):
    """Smallest eigenvalue of a Hermitian matrix (same path as :func:`eig_hermitian`)."""
    return float(eig_hermitian(m)[0][0])


def apply_spectral(m, func):
    """Apply ``func`` to the eigenvalues of Hermitian ``m``."""
    w, v = eig_hermitian(m)
    return (v * func(w)) @ v.conj().T


def matrix_log_on_support(m):
    """Natural logarithm of a PSD matrix restricted to its support.

    Eigenvalues at or below :data:`SUPPORT_CUTOFF` are dropped, i.e. they
    contribute a zero eigenvalue to the result.
    """
    w, v = eig_hermitian(m)
    if w[0] < -PSD_TOL:
        raise DomainError(f"matrix has negative eigenvalue {w[0]:.3e}", "positivity")
    logs = np.zeros_like(w)
    support = w > SUPPORT_CUTOFF
    logs[support] = np.log(w[support])
    return (v * logs) @ v.conj().T


def is_psd(m, tol=PSD_TOL):
    return min_eigenvalue(m) >= -tol
