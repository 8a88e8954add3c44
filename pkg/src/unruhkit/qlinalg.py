"""Dense complex linear algebra for 2x2 and 4x4 Hermitian problems.

Everything a two-qubit density-matrix calculation needs and nothing more:
Kronecker products, partial traces, a Hermitian eigendecomposition with a
deterministic ordering convention, and the PSD matrix square root.  All
functions are pure and operate on plain ``numpy`` arrays (``complex`` dtype).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NotHermitianError, NotPSDError

# Tolerances used throughout the package.
HERMITICITY_TOL = 1e-10
# Eigenvalues in [-EIG_CLAMP, 0) are floating-point drift and are clamped to 0.
EIG_CLAMP = 1e-12
# Eigenvalues below -PSD_REJECT mean the input is genuinely not PSD.
PSD_REJECT = 1e-8


def _as_square(m: np.ndarray, dim: int, name: str) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.shape != (dim, dim):
        raise DomainError(f"{name} must be {dim}x{dim}, got shape {m.shape}")
    return m


def hermitian_defect(m: np.ndarray) -> float:
    """Largest entrywise deviation of ``m`` from its conjugate transpose."""
    m = np.asarray(m, dtype=complex)
    return float(np.abs(m - m.conj().T).max())


def kron2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product of two single-qubit operators, (A x B)[2i+k, 2j+l] = A[i,j] B[k,l]."""
    a = _as_square(a, 2, "a")
    b = _as_square(b, 2, "b")
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Trace out one qubit of a two-qubit operator.

    Parameters
    ----------
    rho : (4, 4) array
        Two-qubit operator in the |00>,|01>,|10>,|11> product basis.
    keep : {"first", "second"}
        Which subsystem survives.

    Returns
    -------
    (2, 2) array.  Unit trace and Hermiticity are inherited from the input.
    """
    rho = _as_square(rho, 4, "rho")
    r = rho.reshape(2, 2, 2, 2)
    if keep == "first":
        return np.einsum("ikjk->ij", r)
    if keep == "second":
        return np.einsum("kikj->ij", r)
    raise DomainError(f"keep must be 'first' or 'second', got {keep!r}")


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues (descending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Sum of lambda_i |v_i><v_i|; equals the decomposed matrix up to round-off."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _canonical_phases(vectors: np.ndarray) -> np.ndarray:
    """Rotate each column so its largest-magnitude component is real and positive."""
    out = vectors.copy()
    for j in range(out.shape[1]):
        k = int(np.argmax(np.abs(out[:, j])))
        a = out[k, j]
        if abs(a) > 0:
            out[:, j] *= np.conj(a) / abs(a)
    return out


def eig_hermitian(m: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian 4x4 matrix with deterministic ordering.

    Eigenvalues are sorted descending; exact ties are broken by comparing the
    phase-canonicalized eigenvector components so that repeated runs (and
    regression files) always see the same layout.

    Raises
    ------
    NotHermitianError
        If the asymmetry of ``m`` exceeds ``HERMITICITY_TOL``.
    """
    m = _as_square(m, 4, "m")
    if hermitian_defect(m) > HERMITICITY_TOL:
        raise NotHermitianError(
            f"asymmetry {hermitian_defect(m):.3e} exceeds {HERMITICITY_TOL:.0e}"
        )
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    order = np.argsort(-w, kind="stable")
    w, v = w[order], v[:, order]
    v = _canonical_phases(v)
    # Deterministic layout inside exactly degenerate clusters.
    i = 0
    while i < 4:
        j = i + 1
        while j < 4 and w[j] == w[i]:
            j += 1
        if j - i > 1:
            keys = sorted(
                range(i, j),
                key=lambda k: tuple(np.round(-v[:, k].real, 12))
                + tuple(np.round(-v[:, k].imag, 12)),
            )
            v[:, i:j] = v[:, keys]
        i = j
    return SpectralDecomposition(eigenvalues=w, eigenvectors=v)


def sqrt_psd(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a positive-semidefinite 4x4 matrix.

    Eigenvalues in [-PSD_REJECT, 0) are treated as round-off and clamped to
    zero; anything more negative raises ``NotPSDError``.
    """
    dec = eig_hermitian(m)
    w = dec.eigenvalues
    if w.min() < -PSD_REJECT:
        raise NotPSDError(f"minimum eigenvalue {w.min():.3e} below -{PSD_REJECT:.0e}")
    w = np.clip(w, 0.0, None)
    v = dec.eigenvectors
    return (v * np.sqrt(w)) @ v.conj().T


def is_density_matrix(rho: np.ndarray, tol: float = 1e-10) -> bool:
    """True when ``rho`` is Hermitian, unit-trace and PSD within ``tol``."""
    rho = np.asarray(rho, dtype=complex)
    if rho.shape[0] != rho.shape[1]:
        return False
    if hermitian_defect(rho) > tol:
        return False
    if abs(np.trace(rho).real - 1.0) > tol:
        return False
    return bool(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -tol)
