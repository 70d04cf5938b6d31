"""Dense complex linear algebra for small dimensions.

Matrices and state vectors are plain ``numpy.ndarray`` objects of dtype
complex128; the helpers here validate the invariants the rest of the
toolkit relies on (unitarity, normalization, orthonormal eigenbases).
All dense objects are capped at dimension ``DIM_CAP`` to bound memory.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import CapacityError, DomainError, NumericalError, ShapeError

# Hard cap on any dense matrix dimension handled by the toolkit.
DIM_CAP = 4096

# Default elementwise tolerance for unitarity checks.
UNITARY_TOL = 1e-10

TWO_PI = 2.0 * np.pi


def as_complex_matrix(m) -> np.ndarray:
    """Coerce to a square complex matrix, rejecting bad shapes and non-finite entries."""
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise ShapeError("matrix dimension must be positive")
    if not np.all(np.isfinite(a)):
        raise DomainError("matrix entries must be finite")
    return a


def as_state(v) -> np.ndarray:
    """Coerce to a 1-D complex vector with finite entries."""
    a = np.asarray(v, dtype=complex)
    if a.ndim != 1 or a.shape[0] == 0:
        raise ShapeError(f"expected a nonempty vector, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("state amplitudes must be finite")
    return a


def dagger(m: np.ndarray) -> np.ndarray:
    return np.conj(m).T


def unitarity_defect(m) -> float:
    """Elementwise max deviation of M†M from the identity."""
    a = as_complex_matrix(m)
    return float(np.max(np.abs(dagger(a) @ a - np.eye(a.shape[0]))))


def is_unitary(m, tol: float = UNITARY_TOL) -> bool:
    """True iff ``max_ij |(M†M - I)_ij| <= tol``."""
    if tol <= 0:
        raise DomainError("tolerance must be positive")
    return unitarity_defect(m) <= tol


def require_unitary(m, tol: float = UNITARY_TOL, name: str = "matrix") -> np.ndarray:
    a = as_complex_matrix(m)
    defect = unitarity_defect(a)
    if defect > tol:
        raise DomainError(f"{name} is not unitary within {tol:g} (defect {defect:.3e})")
    return a


def require_normalized(v, tol: float = UNITARY_TOL, name: str = "state") -> np.ndarray:
    a = as_state(v)
    norm = float(np.linalg.norm(a))
    if abs(norm - 1.0) > tol:
        raise DomainError(f"{name} is not normalized within {tol:g} (norm {norm:.12f})")
    return a


@dataclass(eq=False)
class PhaseSpectrum:
    """Eigenphases of a unitary matrix with an aligned orthonormal eigenbasis.

    ``phases`` is ascending in [0, 2*pi); column j of ``vectors`` is the
    eigenvector belonging to ``phases[j]``.
    """

    phases: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.phases.shape[0])

    def points(self) -> np.ndarray:
        """Eigenvalues as points on the unit circle."""
        return np.exp(1j * self.phases)


def wrap_phase(phases) -> np.ndarray:
    """Reduce angles to [0, 2*pi); the right endpoint folds to 0."""
    p = np.mod(np.asarray(phases, dtype=float), TWO_PI)
    # np.mod can round up to the modulus itself for tiny negative inputs
    p[p >= TWO_PI] = 0.0
    return p


def eigen_system(u) -> PhaseSpectrum:
    """Orthonormal eigendecomposition of a unitary matrix.

    Uses the complex Schur form: for a normal matrix the Schur factor is
    diagonal and the Schur vectors form an exactly orthonormal eigenbasis,
    which plain ``eig`` does not guarantee on degenerate spectra.

    Args:
        u: square matrix, unitary within 1e-10.

    Returns:
        PhaseSpectrum with phases sorted ascending in [0, 2*pi).

    Raises:
        DomainError: input not unitary.
        NumericalError: residuals exceed the accuracy contract.
    """
    a = require_unitary(u)
    try:
        t, q = scipy.linalg.schur(a, output="complex")
    except scipy.linalg.LinAlgError as exc:
        raise NumericalError(f"eigendecomposition did not converge: {exc}") from exc
    eigvals = np.diag(t)
    phases = wrap_phase(np.angle(eigvals))
    order = np.argsort(phases, kind="stable")
    phases = phases[order]
    vectors = q[:, order]

    residual = float(np.max(np.linalg.norm(a @ vectors - vectors * np.exp(1j * phases), axis=0)))
    ortho = float(np.max(np.abs(dagger(vectors) @ vectors - np.eye(a.shape[0]))))
    if residual > 1e-8 or ortho > 1e-8:
        raise NumericalError(
            f"eigendecomposition failed accuracy contract: "
            f"max residual {residual:.3e}, orthonormality defect {ortho:.3e}"
        )
    return PhaseSpectrum(phases=phases, vectors=vectors)


def relative_spectrum(u1, u2) -> PhaseSpectrum:
    """Spectrum of U1†U2, the object all discrimination quantities derive from."""
    a = require_unitary(u1, name="u1")
    b = require_unitary(u2, name="u2")
    if a.shape != b.shape:
        raise ShapeError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return eigen_system(dagger(a) @ b)


def haar_unitary_from_rng(d: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary drawn from an existing generator.

    QR of a complex Gaussian matrix, with the triangular factor's diagonal
    phases folded into Q so the distribution is exactly left-invariant.
    """
    if d < 1:
        raise DomainError("dimension must be >= 1")
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    q, r = np.linalg.qr(z)
    diag = np.diag(r)
    return q * (diag / np.abs(diag))


def haar_unitary(d: int, seed: int) -> np.ndarray:
    """Deterministic Haar-random unitary: equal (d, seed) gives bit-equal output."""
    return haar_unitary_from_rng(d, np.random.default_rng(seed))


def random_state_from_rng(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Normalized state with complex Gaussian amplitudes."""
    if dim < 1:
        raise DomainError("dimension must be >= 1")
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def kron(a, b) -> np.ndarray:
    """Tensor product with the capacity cap enforced before allocation."""
    ma = as_complex_matrix(a)
    mb = as_complex_matrix(b)
    out_dim = ma.shape[0] * mb.shape[0]
    if out_dim > DIM_CAP:
        raise CapacityError(f"tensor product dimension {out_dim} exceeds cap {DIM_CAP}")
    return np.kron(ma, mb)
