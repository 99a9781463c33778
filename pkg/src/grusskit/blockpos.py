"""Positivity tests for 2x2 operator block matrices.

Includes the Cauchy-Schwarz form of block positivity, the Schur-complement
criterion, Choi's lemma for positive maps on ``[[x, y], [y*, x]]`` blocks and
the 4x4 block matrix built from two unitaries.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from grusskit.errors import DimensionError, PreconditionError
from grusskit.matcore import (
    DEFAULT_TOL,
    Tolerance,
    as_matrix,
    as_square,
    block_assemble,
    dagger,
    is_psd,
    min_eig_herm,
    op_norm,
    psd_slack,
    random_ginibre,
    random_psd,
)
from grusskit.posmaps import MapRep, apply

# Margins closer to the PSD boundary than this are numerically undecidable.
UNDECIDABLE_MARGIN = 1e-6


@dataclass(frozen=True)
class Block2x2:
    """``[[P, R], [R*, Q]]`` with ``P`` p x p, ``Q`` q x q, ``R`` p x q."""

    P: np.ndarray
    Q: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        P, Q = as_square(self.P, "P"), as_square(self.Q, "Q")
        R = as_matrix(self.R, "R")
        if R.shape != (P.shape[0], Q.shape[0]):
            raise DimensionError(f"R must be {P.shape[0]}x{Q.shape[0]}, got {R.shape}")
        object.__setattr__(self, "P", P)
        object.__setattr__(self, "Q", Q)
        object.__setattr__(self, "R", R)

    def assemble(self) -> np.ndarray:
        return np.block([[self.P, self.R], [dagger(self.R), self.Q]])


@dataclass(frozen=True)
class SchurTriple:
    """``[[T, S], [S*, R]]`` with ``R`` invertible."""

    T: np.ndarray
    S: np.ndarray
    R: np.ndarray

    def __post_init__(self):
        T, R = as_square(self.T, "T"), as_square(self.R, "R")
        S = as_matrix(self.S, "S")
        if S.shape != (T.shape[0], R.shape[0]):
            raise DimensionError(f"S must be {T.shape[0]}x{R.shape[0]}, got {S.shape}")
        object.__setattr__(self, "T", T)
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "R", R)

    def assemble(self) -> np.ndarray:
        return np.block([[self.T, self.S], [dagger(self.S), self.R]])

    def complement(self) -> np.ndarray:
        """``T - S R^{-1} S*``."""
        X = self.T - self.S @ np.linalg.solve(self.R, dagger(self.S))
        return 0.5 * (X + dagger(X))


@dataclass(frozen=True)
class Lemma2x2Report:
    block_psd: bool
    pairing_ok: bool
    norm_ok: bool


@dataclass(frozen=True)
class ChoiLemmaReport:
    premise: bool
    conclusion: bool
    conclusion_min_eig: float


def lemma_2x2_check(blk: Block2x2, tol: float = 1e-10, trials: int = 50, seed=0,
                    mtol: Tolerance = DEFAULT_TOL) -> Lemma2x2Report:
    """Evaluate the three faces of 2x2 block positivity.

    ``pairing_ok`` samples ``|<Rx, y>|^2 <= <Py, y><Qx, x>`` on random unit vectors;
    ``norm_ok`` tests ``||R||^2 <= ||P|| ||Q||``. If the block is PSD both must hold.
    """
    block_psd = is_psd(blk.assemble(), mtol)
    rng = np.random.default_rng(seed)
    p, q = blk.P.shape[0], blk.Q.shape[0]
    pairing_ok = True
    scale = max(1.0, op_norm(blk.P) * op_norm(blk.Q))
    for _ in range(trials):
        # R maps C^q -> C^p: pair x in C^q with y in C^p.
        x = random_ginibre(q, rng, 1)[:, 0]
        y = random_ginibre(p, rng, 1)[:, 0]
        x /= np.linalg.norm(x)
        y /= np.linalg.norm(y)
        lhs = abs(np.vdot(y, blk.R @ x)) ** 2
        rhs = np.vdot(y, blk.P @ y).real * np.vdot(x, blk.Q @ x).real
        if lhs > rhs + tol * scale:
            pairing_ok = False
            break
    norm_ok = op_norm(blk.R) ** 2 <= op_norm(blk.P) * op_norm(blk.Q) + tol
    return Lemma2x2Report(block_psd, pairing_ok, norm_ok)


def schur_verdicts(t: SchurTriple, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, bool, float]:
    """Return ``(direct, via_complement, margin)``.

    ``margin`` is the minimum eigenvalue of the assembled block, the quantity
    whose sign the two verdicts must agree on.
    """
    smin = np.linalg.svd(t.R, compute_uv=False)[-1]
    if smin <= 1e-12:
        raise PreconditionError(f"R must be invertible (smallest singular value {smin:.3e})")
    A = t.assemble()
    direct = is_psd(A, tol)
    via = is_psd(t.T, tol) and is_psd(t.R, tol) and is_psd(t.complement(), tol)
    return direct, via, min_eig_herm(A, tol)


def schur_positivity(t: SchurTriple, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``T >= 0, R >= 0 and T >= S R^{-1} S*``, cross-checked against the assembled block.

    Raises:
        PreconditionError: if ``R`` is (numerically) singular.
        AssertionError: if the two verdicts disagree away from the PSD boundary.
    """
    direct, via, margin = schur_verdicts(t, tol)
    if direct != via and abs(margin) > UNDECIDABLE_MARGIN * max(1.0, op_norm(t.assemble())):
        raise AssertionError(f"Schur complement verdict {via} contradicts block verdict {direct} "
                             f"(min eigenvalue {margin:.3e})")
    return via


def prop24_block(a, b) -> np.ndarray:
    """The ``4n x 4n`` block matrix built from ``a, b``; PSD whenever both are unitary.

    Rows: ``(a*a, a*b, a*, a*a*b)``, ``(b*a, b*b, b*, b*a*b)``,
    ``(a, b, a*a, a*b)``, ``(b*aa, b*ab, b*a, b*b)``.
    """
    a, b = as_square(a, "a"), as_square(b, "b")
    if a.shape != b.shape:
        raise DimensionError(f"a and b must have equal size, got {a.shape} and {b.shape}")
    ad, bd = dagger(a), dagger(b)
    adb = ad @ b
    bda = bd @ a
    return block_assemble([
        [ad @ a, adb, ad, ad @ adb],
        [bda, bd @ b, bd, bd @ adb],
        [a, b, ad @ a, adb],
        [bda @ a, bda @ b, bda, bd @ b],
    ])


def choi_lemma_verify(phi: MapRep, x, y, tol: Tolerance = DEFAULT_TOL) -> ChoiLemmaReport:
    """Premise ``[[x, y], [y*, x]] >= 0`` and conclusion ``[[phi(x), phi(y)], [phi(y*), phi(x)]] >= 0``."""
    x, y = as_square(x, "x"), as_square(y, "y")
    if x.shape != y.shape or x.shape[0] != phi.dim_in:
        raise DimensionError("x, y must both be dim_in x dim_in")
    premise = is_psd(np.block([[x, y], [dagger(y), x]]), tol)
    px, py, pys = apply(phi, x), apply(phi, y), apply(phi, dagger(y))
    C = np.block([[px, py], [pys, px]])
    lo = min_eig_herm(C, tol)
    return ChoiLemmaReport(premise, lo >= -psd_slack(C, tol), lo)


# -- constructive instance generators ------------------------------------------

def random_psd_block(p: int, q: int, seed) -> Block2x2:
    """Gram-constructed PSD block ``G*G`` split into ``P, R, Q``."""
    rng = np.random.default_rng(seed)
    G = random_ginibre(p + q, rng)
    A = dagger(G) @ G
    return Block2x2(A[:p, :p], A[p:, p:], A[:p, p:])


def _psd_sqrt(X: np.ndarray) -> np.ndarray:
    w, V = np.linalg.eigh(X)
    return (V * np.sqrt(np.clip(w, 0, None))) @ dagger(V)


def random_choi_premise_pair(n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """A pair with ``[[x, y], [y*, x]] >= 0`` by construction.

    Uses ``x >= 0`` and ``y = x^{1/2} C x^{1/2}`` with ``||C|| <= 1``, which
    exhausts the premise set for invertible ``x``.
    """
    rng = np.random.default_rng(seed)
    x = random_psd(n, rng)
    C = random_ginibre(n, rng)
    C = C * (rng.uniform(0.5, 1.0) / op_norm(C))
    h = _psd_sqrt(x)
    return x, h @ C @ h


def random_schur_triple(t: int, r: int, seed) -> SchurTriple:
    """Random triple with invertible PSD ``R``; roughly half are PSD overall."""
    rng = np.random.default_rng(seed)
    R = random_psd(r, rng) + 0.1 * np.eye(r)
    S = random_ginibre(t, rng, r)
    base = S @ np.linalg.solve(R, dagger(S))
    # Shift the complement's spectrum across zero so both verdicts occur.
    H = random_psd(t, rng)
    T = base + H - rng.uniform(0.0, 1.5) * op_norm(H) * np.eye(t)
    return SchurTriple(0.5 * (T + dagger(T)), S, R)
