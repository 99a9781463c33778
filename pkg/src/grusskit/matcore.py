"""Dense complex-matrix kernel.

Every algebra element is a plain ``numpy.ndarray`` of dtype ``complex128``.
The helpers here validate shapes, test Hermitian-ness and positivity with
declared slack, assemble block matrices and draw seeded random instances.

Kronecker convention (row-major): ``kron(A, B)[i*p + k, j*q + l] = A[i, j] * B[k, l]``
where ``B`` is ``p x q``. The Choi layout in :mod:`grusskit.posmaps` relies on it.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from grusskit.errors import ContractViolation, DimensionError


@dataclass(frozen=True)
class Tolerance:
    """Floating-point slack used in place of exact relations.

    Attributes:
        hermitian_tol: absolute bound on ``max |A - A*|`` entrywise.
        psd_tol: relative slack on the minimum eigenvalue, scaled by ``max(1, ||A||)``.
        solve_tol: convergence threshold for iterative minimizers.
    """

    hermitian_tol: float = 1e-10
    psd_tol: float = 1e-8
    solve_tol: float = 1e-9

    def __post_init__(self):
        for name in ("hermitian_tol", "psd_tol", "solve_tol"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be strictly positive")


DEFAULT_TOL = Tolerance()


def as_matrix(A, name: str = "matrix") -> np.ndarray:
    """Coerce ``A`` to a finite, nonempty 2-D complex array."""
    M = np.asarray(A, dtype=np.complex128)
    if M.ndim != 2:
        raise DimensionError(f"{name} must be 2-dimensional, got ndim={M.ndim}")
    if M.size == 0:
        raise DimensionError(f"{name} is empty")
    if not np.all(np.isfinite(M)):
        raise ContractViolation(f"{name} has non-finite entries")
    return M


def as_square(A, name: str = "matrix") -> np.ndarray:
    M = as_matrix(A, name)
    if M.shape[0] != M.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {M.shape}")
    return M


def dagger(A: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(A).T


def op_norm(A) -> float:
    """Operator norm: the largest singular value of ``A``."""
    M = as_matrix(A)
    return float(np.linalg.svd(M, compute_uv=False)[0])


def is_hermitian(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    M = as_square(A)
    return bool(np.max(np.abs(M - dagger(M))) <= tol.hermitian_tol)


def _require_hermitian(M: np.ndarray, tol: Tolerance) -> np.ndarray:
    dev = float(np.max(np.abs(M - dagger(M))))
    if dev > tol.hermitian_tol:
        raise ContractViolation(f"matrix is not Hermitian (max |A - A*| = {dev:.3e})")
    return 0.5 * (M + dagger(M))


def eigvals_herm(A, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix."""
    H = _require_hermitian(as_square(A), tol)
    return np.linalg.eigvalsh(H)


def min_eig_herm(A, tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    return float(eigvals_herm(A, tol)[0])


def psd_slack(A, tol: Tolerance = DEFAULT_TOL) -> float:
    """The threshold ``psd_tol * max(1, ||A||)`` used by :func:`is_psd`."""
    return tol.psd_tol * max(1.0, op_norm(A))


def is_psd(A, tol: Tolerance = DEFAULT_TOL) -> bool:
    """True iff ``A`` is Hermitian and its minimum eigenvalue is ``>= -psd_slack``.

    Raises:
        ContractViolation: if ``A`` is not Hermitian within ``tol.hermitian_tol``.
    """
    M = as_square(A)
    lo = min_eig_herm(M, tol)
    return lo >= -psd_slack(M, tol)


def kron(A, B) -> np.ndarray:
    return np.kron(as_matrix(A, "A"), as_matrix(B, "B"))


def block_assemble(blocks: Sequence[Sequence[np.ndarray]]) -> np.ndarray:
    """Place block ``(i, j)`` of a ``k x k`` grid of ``m x m`` matrices at offset ``(i*m, j*m)``."""
    k = len(blocks)
    if k == 0 or any(len(row) != k for row in blocks):
        raise DimensionError("block grid must be a nonempty k x k list")
    grid = [[as_matrix(B, "block") for B in row] for row in blocks]
    shape = grid[0][0].shape
    if shape[0] != shape[1]:
        raise DimensionError(f"blocks must be square, got {shape}")
    for row in grid:
        for B in row:
            if B.shape != shape:
                raise DimensionError(f"ragged blocks: {B.shape} vs {shape}")
    return np.block(grid)


def block_extract(A, k: int) -> list[list[np.ndarray]]:
    """Inverse of :func:`block_assemble`: split ``A`` into a ``k x k`` grid."""
    M = as_square(A)
    if k < 1 or M.shape[0] % k:
        raise DimensionError(f"size {M.shape[0]} is not divisible by k={k}")
    m = M.shape[0] // k
    return [[M[i * m:(i + 1) * m, j * m:(j + 1) * m].copy() for j in range(k)] for i in range(k)]


# -- seeded random generators ------------------------------------------------

def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _check_dim(n: int):
    if n < 1:
        raise DimensionError(f"dimension must be >= 1, got {n}")


def random_ginibre(n: int, seed, cols: int | None = None) -> np.ndarray:
    """Matrix with i.i.d. standard complex Gaussian entries."""
    _check_dim(n)
    rng = _rng(seed)
    cols = n if cols is None else cols
    return (rng.standard_normal((n, cols)) + 1j * rng.standard_normal((n, cols))) / np.sqrt(2)


def random_isometry(rows: int, cols: int, seed) -> np.ndarray:
    """``rows x cols`` matrix with orthonormal columns (Haar-distributed)."""
    if cols > rows:
        raise DimensionError(f"isometry needs cols <= rows, got {rows}x{cols}")
    G = random_ginibre(rows, seed, cols)
    Q, R = np.linalg.qr(G)
    d = np.diag(R)
    # Fix the phase ambiguity of QR so the distribution is Haar.
    return Q * (d / np.abs(d))


def random_unitary(n: int, seed) -> np.ndarray:
    return random_isometry(n, n, seed)


def random_hermitian(n: int, seed) -> np.ndarray:
    G = random_ginibre(n, seed)
    return 0.5 * (G + dagger(G))


def random_psd(n: int, seed) -> np.ndarray:
    G = random_ginibre(n, seed)
    H = dagger(G) @ G
    return 0.5 * (H + dagger(H))


def random_normal(n: int, seed) -> np.ndarray:
    """``U D U*`` with Haar ``U`` and complex Gaussian diagonal ``D``."""
    rng = _rng(seed)
    U = random_unitary(n, rng)
    d = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return (U * d) @ dagger(U)


def random_normal_commuting_pair(n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Two normal matrices diagonal in a common random unitary basis."""
    rng = _rng(seed)
    U = random_unitary(n, rng)
    d1 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    d2 = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    Ud = dagger(U)
    return (U * d1) @ Ud, (U * d2) @ Ud


def is_unitary(A, atol: float = 1e-10) -> bool:
    M = as_square(A)
    return op_norm(dagger(M) @ M - np.eye(M.shape[0])) <= atol


def normality_defect(A) -> float:
    """``||A*A - AA*||``, zero iff ``A`` is normal."""
    M = as_square(A)
    return op_norm(dagger(M) @ M - M @ dagger(M))
