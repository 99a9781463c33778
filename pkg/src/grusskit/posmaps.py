"""Linear maps ``phi: M_n -> M_m`` stored as Choi matrices.

The Choi matrix is ``C = sum_ij E_ij (x) phi(E_ij)`` with the *input* factor
first, so that reshaping ``C`` to ``(n, m, n, m)`` gives
``C4[i, k, j, l] = phi(E_ij)[k, l]``. A Kraus family ``{K_t}`` with
``phi(X) = sum_t K_t X K_t*`` corresponds to ``C = sum_t v_t v_t*`` where
``v_t = vec_row(K_t^T)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from grusskit.errors import DimensionError, DomainError
from grusskit.matcore import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_square,
    block_assemble,
    block_extract,
    dagger,
    is_psd,
    op_norm,
    psd_slack,
    random_ginibre,
    random_isometry,
)


@dataclass(frozen=True, eq=False)
class MapRep:
    """A linear map ``M_n -> M_m`` given by its Choi matrix.

    ``kraus`` is an optional cached Kraus family; it is never serialized.
    """

    dim_in: int
    dim_out: int
    choi: np.ndarray
    kraus: Optional[tuple] = field(default=None, repr=False)

    def __post_init__(self):
        C = as_square(self.choi, "choi")
        size = self.dim_in * self.dim_out
        if C.shape != (size, size):
            raise DimensionError(
                f"choi must be {size}x{size} for dims ({self.dim_in}, {self.dim_out}), got {C.shape}")
        C.setflags(write=False)
        object.__setattr__(self, "choi", C)
        if self.kraus is not None:
            ks = tuple(as_matrix(K, "kraus operator") for K in self.kraus)
            for K in ks:
                if K.shape != (self.dim_out, self.dim_in):
                    raise DimensionError(f"kraus operator must be {self.dim_out}x{self.dim_in}")
            object.__setattr__(self, "kraus", ks)

    def __call__(self, X) -> np.ndarray:
        return apply(self, X)

    @property
    def choi4(self) -> np.ndarray:
        return self.choi.reshape(self.dim_in, self.dim_out, self.dim_in, self.dim_out)

    @classmethod
    def from_function(cls, func: Callable[[np.ndarray], np.ndarray], dim_in: int,
                      dim_out: Optional[int] = None) -> "MapRep":
        """Build the Choi matrix by evaluating a linear ``func`` on matrix units."""
        if dim_in < 1:
            raise DimensionError("dim_in must be >= 1")
        n = dim_in
        images = {}
        for i in range(n):
            for j in range(n):
                E = np.zeros((n, n), dtype=np.complex128)
                E[i, j] = 1.0
                images[i, j] = as_matrix(func(E), "phi(E_ij)")
        m = images[0, 0].shape[0] if dim_out is None else dim_out
        C4 = np.empty((n, m, n, m), dtype=np.complex128)
        for (i, j), img in images.items():
            if img.shape != (m, m):
                raise DimensionError(f"phi(E_ij) must be {m}x{m}, got {img.shape}")
            C4[i, :, j, :] = img
        return cls(n, m, C4.reshape(n * m, n * m))

    @classmethod
    def from_kraus(cls, kraus: Sequence[np.ndarray]) -> "MapRep":
        ks = [as_matrix(K, "kraus operator") for K in kraus]
        if not ks:
            raise DimensionError("empty Kraus family")
        m, n = ks[0].shape
        vs = np.stack([K.T.reshape(-1) for K in ks], axis=1)
        return cls(n, m, vs @ dagger(vs), kraus=tuple(ks))

    def scaled(self, c: complex) -> "MapRep":
        return MapRep(self.dim_in, self.dim_out, c * self.choi)


def apply(phi: MapRep, X) -> np.ndarray:
    """``phi(X) = sum_ij X[i, j] phi(E_ij)``, contracted from the Choi matrix."""
    X = as_matrix(X, "X")
    if X.shape != (phi.dim_in, phi.dim_in):
        raise DimensionError(f"map expects {phi.dim_in}x{phi.dim_in} input, got {X.shape}")
    return np.einsum("ikjl,ij->kl", phi.choi4, X)


def apply_kraus(phi: MapRep, X) -> np.ndarray:
    if phi.kraus is None:
        raise DomainError("map carries no Kraus family")
    X = as_matrix(X, "X")
    if X.shape != (phi.dim_in, phi.dim_in):
        raise DimensionError(f"map expects {phi.dim_in}x{phi.dim_in} input, got {X.shape}")
    return sum(K @ X @ dagger(K) for K in phi.kraus)


def amplify(phi: MapRep, k: int, Xbig) -> np.ndarray:
    """``phi_k``: apply ``phi`` entrywise to a ``k x k`` block matrix."""
    Xbig = as_square(Xbig, "Xbig")
    if k < 1 or Xbig.shape[0] != k * phi.dim_in:
        raise DimensionError(f"expected a {k * phi.dim_in}-square matrix for k={k}, got {Xbig.shape}")
    grid = block_extract(Xbig, k)
    return block_assemble([[apply(phi, B) for B in row] for row in grid])


def compose(outer: MapRep, inner: MapRep) -> MapRep:
    """``outer o inner``."""
    if outer.dim_in != inner.dim_out:
        raise DimensionError("composition dimension mismatch")
    return MapRep.from_function(lambda X: apply(outer, apply(inner, X)), inner.dim_in, outer.dim_out)


def mixture(weights: Sequence[float], maps: Sequence[MapRep]) -> MapRep:
    if len(weights) != len(maps) or not maps:
        raise DimensionError("weights and maps must be nonempty and of equal length")
    n, m = maps[0].dim_in, maps[0].dim_out
    if any((p.dim_in, p.dim_out) != (n, m) for p in maps):
        raise DimensionError("all maps in a mixture must share dimensions")
    return MapRep(n, m, sum(w * p.choi for w, p in zip(weights, maps)))


# -- predicates ---------------------------------------------------------------

def is_unital(phi: MapRep, tol: float = 1e-10) -> bool:
    if phi.dim_in == 0:
        return False
    out = apply(phi, np.eye(phi.dim_in))
    return out.shape == (phi.dim_out, phi.dim_out) and op_norm(out - np.eye(phi.dim_out)) <= tol


def is_star_preserving(phi: MapRep, trials: int = 20, seed=0, atol: float = 1e-10) -> bool:
    rng = np.random.default_rng(seed)
    for _ in range(trials):
        X = random_ginibre(phi.dim_in, rng)
        if op_norm(apply(phi, dagger(X)) - dagger(apply(phi, X))) > atol:
            return False
    return True


def is_cp(phi: MapRep, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Choi's criterion: ``phi`` is completely positive iff its Choi matrix is PSD."""
    return is_psd(phi.choi, tol)


# -- k-positivity falsifier -----------------------------------------------------

@dataclass(frozen=True, eq=False)
class SchmidtWitness:
    """A unit vector ``v = sum_t left[t] (x) right[t]`` with ``<v, C v> = value < 0``."""

    k: int
    left_vectors: tuple
    right_vectors: tuple
    value: float

    def vector(self) -> np.ndarray:
        return sum(np.kron(l, r) for l, r in zip(self.left_vectors, self.right_vectors))


def witness_value(phi: MapRep, witness: SchmidtWitness) -> float:
    """Re-evaluate ``<v, C v>`` from scratch."""
    v = witness.vector()
    return float(np.real(np.vdot(v, phi.choi @ v)))


def _min_eigpair(H: np.ndarray) -> tuple[float, np.ndarray]:
    w, V = np.linalg.eigh(0.5 * (H + dagger(H)))
    return float(w[0]), V[:, 0]


def _falsify_once(C: np.ndarray, n: int, m: int, k: int, iters: int, rng, stop: float):
    L, _ = np.linalg.qr(random_ginibre(n, rng, k))
    Im, In = np.eye(m), np.eye(n)
    best = np.inf
    for _ in range(iters):
        # Left factors fixed: v = (L (x) I_m) y with L orthonormal, so ||v|| = ||y||.
        A = np.kron(L, Im)
        _, y = _min_eigpair(dagger(A) @ C @ A)
        R, _ = np.linalg.qr(y.reshape(k, m).T)
        # Right factors fixed: v = (I_n (x) R) x.
        B = np.kron(In, R)
        val, x = _min_eigpair(dagger(B) @ C @ B)
        Lraw = x.reshape(n, k)
        improved = best - val
        best = min(best, val)
        L, _ = np.linalg.qr(Lraw)
        if improved < stop:
            break
    return best, Lraw, R


def k_positivity_falsify(phi: MapRep, k: int, restarts: int = 32, iters: int = 200, seed=0,
                         tol: Tolerance = DEFAULT_TOL) -> Optional[SchmidtWitness]:
    """Search for a Schmidt-rank-``k`` vector on which the Choi form is negative.

    Minimizes ``<v, C v>`` over unit ``v`` of Schmidt rank at most ``k`` by
    alternating Hermitian eigenproblems, one restart per seed ``seed + t``.
    A returned witness certifies that ``phi`` is not ``k``-positive. ``None`` is
    only evidence of ``k``-positivity, except when ``k >= min(n, m)`` where the
    first eigenproblem is already the exact complete-positivity test.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    n, m = phi.dim_in, phi.dim_out
    k = min(k, n, m)
    C = phi.choi
    stop = tol.solve_tol * max(1.0, op_norm(C))
    best = None
    for t in range(restarts):
        rng = np.random.default_rng(seed + t)
        val, Lraw, R = _falsify_once(C, n, m, k, iters, rng, stop)
        if best is None or val < best[0]:
            best = (val, Lraw, R)
    val, Lraw, R = best
    if val >= -psd_slack(C, tol):
        return None
    left = tuple(Lraw[:, t].copy() for t in range(k))
    right = tuple(R[:, t].copy() for t in range(k))
    w = SchmidtWitness(k, left, right, 0.0)
    return SchmidtWitness(k, left, right, witness_value(phi, w))


# -- constructors -----------------------------------------------------------

def identity_map(n: int) -> MapRep:
    return MapRep.from_kraus([np.eye(n)])


def transpose_map(n: int) -> MapRep:
    """``X -> X^T``; positive and unital but not 2-positive. Its Choi matrix is the swap."""
    if n < 2:
        raise DomainError("transpose_map needs n >= 2 (n = 1 is the identity)")
    return MapRep.from_function(lambda X: X.T, n)


def embedded_transpose_map(k: int, pad: int) -> MapRep:
    """``a -> a^T (+) (tr(a)/k) I_pad``, a unital positive map ``M_k -> M_{k+pad}``."""
    if k < 2:
        raise DomainError("embedded_transpose_map needs k >= 2")
    if pad < 0:
        raise DomainError("pad must be >= 0")

    def f(X):
        out = np.zeros((k + pad, k + pad), dtype=np.complex128)
        out[:k, :k] = X.T
        out[k:, k:] = np.trace(X) / k * np.eye(pad)
        return out

    return MapRep.from_function(f, k, k + pad)


def reduction_family(n: int, mu: float) -> MapRep:
    """Unital map ``X -> (tr(X) I - mu X)/(n - mu)``.

    The Choi matrix is proportional to ``I - mu * Omega`` with ``Omega`` the
    unnormalized maximally entangled projector, so the map is ``k``-positive
    exactly when ``mu <= 1/k`` and completely positive when ``mu <= 1/n``.
    """
    if n < 2:
        raise DomainError("reduction_family needs n >= 2")
    if mu == n:
        raise DomainError("mu = n gives a non-unitalizable map")
    return MapRep.from_function(lambda X: (np.trace(X) * np.eye(n) - mu * X) / (n - mu), n)


def reduction_map(n: int) -> MapRep:
    """``X -> ((n-1) tr(X) I - X)/(n(n-1) - 1)``: unital, ``(n-1)``-positive, not CP.

    For ``n = 2`` this is ``X -> tr(X) I - X``. The plain reduction map
    ``(tr(X) I - X)/(n-1)`` is only positive for every ``n``; see
    :func:`reduction_family` with ``mu = 1``.
    """
    if n < 2:
        raise DomainError("reduction_map needs n >= 2")
    return reduction_family(n, 1.0 / (n - 1))


def trace_map(n: int) -> MapRep:
    """``X -> tr(X)/n * I``, the completely depolarizing unital channel."""
    return MapRep.from_function(lambda X: np.trace(X) / n * np.eye(n), n)


def random_unital_cp(n: int, r: int, seed) -> MapRep:
    """``x -> W*(x (x) I_r)W`` for a random isometry ``W: C^n -> C^n (x) C^r``."""
    if n < 1 or r < 1:
        raise DomainError("n and r must be >= 1")
    W = random_isometry(n * r, n, seed)
    Wd = dagger(W)
    kraus = []
    for t in range(r):
        e = np.zeros((r, 1))
        e[t] = 1.0
        kraus.append(Wd @ np.kron(np.eye(n), e))
    return MapRep.from_kraus(kraus)
