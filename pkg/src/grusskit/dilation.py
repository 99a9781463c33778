"""Constructive dilation and decomposition theorems.

* Stinespring: a unital CP map ``phi: M_n -> M_m`` factors as
  ``phi(x) = v* (x (x) I_r) v`` with ``v`` an isometry ``C^m -> C^n (x) C^r``.
* Russo-Dye: every contraction is an average of two unitaries, built from its SVD.

:func:`main_theorem_trace` chains these into a numerical replay of the
argument that bounds the Gruss defect of a unital 2-positive map.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from grusskit.errors import DomainError, PreconditionError
from grusskit.gruss import chebyshev_radius, normal_variance_sides, defect, unitary_variance_sides
from grusskit.matcore import DEFAULT_TOL, Tolerance, as_square, dagger, is_psd, op_norm
from grusskit.posmaps import MapRep, is_unital

KRAUS_CUTOFF = 1e-12
LINK_RTOL = 1e-8


@dataclass(frozen=True, eq=False)
class StinespringDilation:
    """``phi(x) = v* (x (x) I_r) v``; the representation is ``x -> x (x) I_r``."""

    v: np.ndarray
    env_dim: int

    def represent(self, x) -> np.ndarray:
        return np.kron(as_square(x), np.eye(self.env_dim))

    def compress(self, x) -> np.ndarray:
        return dagger(self.v) @ self.represent(x) @ self.v


@dataclass(frozen=True, eq=False)
class UnitaryDecomposition:
    """``a = scale * sum_i weights[i] * unitaries[i]`` with convex weights."""

    weights: tuple
    unitaries: tuple
    scale: float

    def reconstruct(self) -> np.ndarray:
        return self.scale * sum(w * u for w, u in zip(self.weights, self.unitaries))


def kraus_from_choi(phi: MapRep, tol: Tolerance = DEFAULT_TOL) -> list[np.ndarray]:
    """Kraus operators from the eigendecomposition of a PSD Choi matrix.

    Raises:
        DomainError: if the Choi matrix is not PSD (``phi`` is not CP).
    """
    if not is_psd(phi.choi, tol):
        raise DomainError("Choi matrix not PSD")
    n, m = phi.dim_in, phi.dim_out
    w, V = np.linalg.eigh(0.5 * (phi.choi + dagger(phi.choi)))
    return [np.sqrt(lam) * V[:, t].reshape(n, m).T for t, lam in enumerate(w) if lam > KRAUS_CUTOFF]


def stinespring(phi: MapRep, tol: Tolerance = DEFAULT_TOL) -> StinespringDilation:
    """Build ``v h = sum_t (K_t* h) (x) e_t`` from a Kraus family of ``phi``.

    Raises:
        DomainError: if ``phi`` is not completely positive.
        PreconditionError: if ``phi`` is not unital (``v`` would not be an isometry).
    """
    kraus = kraus_from_choi(phi, tol)
    if not is_unital(phi):
        raise PreconditionError("map is not unital; phi(e) = 1 is needed for an isometry")
    r = len(kraus)
    v = sum(np.kron(dagger(K), np.eye(r)[:, [t]]) for t, K in enumerate(kraus))
    return StinespringDilation(v, r)


def russo_dye_decompose(a, scale=None) -> UnitaryDecomposition:
    """Write ``a`` as ``s * (u1 + u2)/2`` with ``u1, u2`` unitary.

    ``s`` defaults to ``||a||`` (``1`` for the zero matrix); pass ``scale=1``
    to decompose a contraction as it stands. With ``c = a/s = U diag(sigma) V*``
    and ``sigma_j = cos(theta_j)``, ``u1, u2 = U diag(exp(+-i theta)) V*``.

    Raises:
        DomainError: if ``scale`` is smaller than ``||a||``.
    """
    a = as_square(a, "a")
    norm = op_norm(a)
    if scale is None:
        s = norm if norm > 0.0 else 1.0
    else:
        s = float(scale)
        if not s > 0.0 or norm > s * (1 + 1e-12):
            raise DomainError(f"scale {s} must be positive and at least ||a|| = {norm}")
    U, sig, Vh = np.linalg.svd(a / s)
    theta = np.arccos(np.clip(sig, 0.0, 1.0))
    E = np.exp(1j * theta)
    u1 = (U * E) @ Vh
    u2 = (U * np.conj(E)) @ Vh
    return UnitaryDecomposition((0.5, 0.5), (u1, u2), s)


# -- proof replay ---------------------------------------------------------------------

@dataclass(frozen=True)
class ChainLink:
    """One step ``left <relation> right`` of the chained estimate.

    ``requires`` names the weakest property of ``phi`` under which the step is
    guaranteed: ``"unital"``, ``"positive"`` or ``"2-positive"``.
    """

    stage: str
    label: str
    left: float
    right: float
    relation: str
    requires: str

    @property
    def holds(self) -> bool:
        slack = LINK_RTOL * max(1.0, abs(self.right))
        if self.relation == "=":
            return abs(self.left - self.right) <= slack
        return self.left <= self.right + slack


@dataclass
class TraceReport:
    links: list = field(default_factory=list)

    @property
    def all_hold(self) -> bool:
        return all(l.holds for l in self.links)

    def failures(self) -> list:
        return [l for l in self.links if not l.holds]


def _chain(phi: MapRep, a: np.ndarray, b: np.ndarray, stage: str, tol: Tolerance) -> list[ChainLink]:
    da, db = russo_dye_decompose(a), russo_dye_decompose(b)
    pairs = [(al * be, u, v) for al, u in zip(da.weights, da.unitaries)
             for be, v in zip(db.weights, db.unitaries)]
    scaled = defect(phi, a, b) / (da.scale * db.scale)
    direct = defect(phi, a / da.scale, b / db.scale)
    convex = sum(w * defect(phi, u, v) for w, u, v in pairs)
    prop, cor, norms = 0.0, 0.0, 0.0
    for w, u, v in pairs:
        # unitary_variance_sides pairs u with u u* and v with v* v, matching the bound used here.
        _, rhs = unitary_variance_sides(phi, u, v)
        prop += w * np.sqrt(rhs)
        _, ru2 = normal_variance_sides(phi, u, tol)
        _, rv2 = normal_variance_sides(phi, dagger(v), tol)
        cor += w * np.sqrt(ru2 * rv2)
        norms += w * op_norm(u) * op_norm(v)
    return [
        ChainLink(stage, "rescaled defect", scaled, direct, "=", "unital"),
        ChainLink(stage, "convexity over unitary pairs", direct, convex, "<=", "unital"),
        ChainLink(stage, "unitary variance bound", convex, prop, "<=", "2-positive"),
        ChainLink(stage, "variance <= squared radius", prop, cor, "<=", "positive"),
        ChainLink(stage, "radius <= norm", cor, norms, "<=", "unital"),
        ChainLink(stage, "convex weights sum to one", norms, 1.0, "=", "unital"),
    ]


def main_theorem_trace(phi: MapRep, a, b, tol: Tolerance = DEFAULT_TOL) -> TraceReport:
    """Replay the defect estimate step by step on ``(a, b)``.

    Two stages are emitted. ``norm`` bounds ``||phi(ab) - phi(a)phi(b)||`` by
    ``||a|| ||b||``; ``centered`` repeats the chain on ``a - l e, b - m e`` at
    the Chebyshev centers, which yields the Gruss bound. Each link records
    the property of ``phi`` it relies on, so for merely positive maps the
    failing step is identifiable.
    """
    a, b = as_square(a, "a"), as_square(b, "b")
    if not is_unital(phi):
        raise PreconditionError("map must be unital")
    e = np.eye(a.shape[0])
    d = defect(phi, a, b)
    report = TraceReport()
    report.links += _chain(phi, a, b, "norm", tol)
    report.links.append(ChainLink("norm", "defect <= ||a|| ||b||", d, op_norm(a) * op_norm(b), "<=", "2-positive"))
    ra, rb = chebyshev_radius(a, tol), chebyshev_radius(b, tol)
    ac, bc = a - ra.center * e, b - rb.center * e
    report.links.append(ChainLink("centered", "translation invariance", d, defect(phi, ac, bc), "=", "unital"))
    report.links += _chain(phi, ac, bc, "centered", tol)
    report.links.append(ChainLink("centered", "defect <= radius(a) radius(b)", d, ra.radius * rb.radius,
                                  "<=", "2-positive"))
    return report
