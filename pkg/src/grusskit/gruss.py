"""Gruss defect, distance to scalars and the inequality checks built on them.

For a unital map ``phi`` and square ``a, b`` the Gruss inequality reads::

    ||phi(ab) - phi(a)phi(b)|| <= inf_l ||a - l e|| * inf_m ||b - m e||

``chebyshev_radius`` computes ``inf_l ||a - l e||`` together with the
minimizing scalar. For normal ``a`` this is the radius of the smallest disk
enclosing the spectrum; otherwise the convex function ``l -> ||a - l e||``
is minimized directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from grusskit.errors import DimensionError, DomainError, PreconditionError
from grusskit.matcore import (
    DEFAULT_TOL,
    Tolerance,
    as_square,
    dagger,
    is_unitary,
    normality_defect,
    op_norm,
    random_ginibre,
    random_normal_commuting_pair,
)
from grusskit.posmaps import MapRep, apply

NORMALITY_RTOL = 1e-10
VERDICT_RTOL = 1e-8


@dataclass(frozen=True)
class Disk:
    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be >= 0")

    def contains(self, z: complex, eps: float = 0.0) -> bool:
        return abs(z - self.center) <= self.radius + eps


@dataclass(frozen=True)
class GrussReport:
    defect: float
    radius_a: Disk
    radius_b: Disk
    bound: float
    holds: bool
    margin: float


@dataclass
class SuiteReport:
    """Outcome of a randomized suite: how many trials passed and the worst margin seen."""

    name: str
    trials: int
    passed: int
    worst_margin: float
    contractual: bool = True
    notes: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.trials


# -- defect ----------------------------------------------------------------------

def defect_matrix(phi: MapRep, a, b) -> np.ndarray:
    a, b = as_square(a, "a"), as_square(b, "b")
    if a.shape != (phi.dim_in, phi.dim_in) or b.shape != a.shape:
        raise DimensionError(f"a and b must be {phi.dim_in}x{phi.dim_in}")
    return apply(phi, a @ b) - apply(phi, a) @ apply(phi, b)


def defect(phi: MapRep, a, b) -> float:
    """``||phi(ab) - phi(a) phi(b)||``."""
    return op_norm(defect_matrix(phi, a, b))


# -- smallest enclosing disk ---------------------------------------------------------

def _disk_from(boundary: Sequence[complex]) -> Optional[Disk]:
    if not boundary:
        return None
    if len(boundary) == 1:
        return Disk(complex(boundary[0]), 0.0)
    if len(boundary) == 2:
        p, q = boundary
        c = (p + q) / 2
        return Disk(c, max(abs(p - c), abs(q - c)))
    p, q, r = boundary
    b, c = q - p, r - p
    d = 2 * (b.real * c.imag - b.imag * c.real)
    if abs(d) <= 1e-14 * max(abs(b), abs(c), 1e-300) ** 2:
        # Collinear: the widest pair spans the other point.
        pairs = [(p, q), (p, r), (q, r)]
        return max((_disk_from(pr) for pr in pairs), key=lambda D: D.radius)
    bb, cc = abs(b) ** 2, abs(c) ** 2
    ux = (c.imag * bb - b.imag * cc) / d
    uy = (b.real * cc - c.real * bb) / d
    center = p + complex(ux, uy)
    return Disk(center, max(abs(z - center) for z in (p, q, r)))


def _mtf_disk(pts: list, count: int, boundary: list, eps: float) -> Optional[Disk]:
    disk = _disk_from(boundary)
    if len(boundary) == 3:
        return disk
    i = 0
    while i < count:
        p = pts[i]
        if disk is None or not disk.contains(p, eps):
            disk = _mtf_disk(pts, i, boundary + [p], eps)
            pts.insert(0, pts.pop(i))
        i += 1
    return disk


def smallest_enclosing_disk(points: Iterable[complex]) -> Disk:
    """Minimal disk covering all points (Welzl's move-to-front algorithm).

    Points are shuffled with a fixed seed, so the output is deterministic. The
    returned radius is recomputed as the exact maximum distance to the center.
    """
    pts = [complex(z) for z in points]
    if not pts:
        raise DomainError("smallest_enclosing_disk needs at least one point")
    order = np.random.default_rng(0).permutation(len(pts))
    pts = [pts[i] for i in order]
    scale = max(abs(z - pts[0]) for z in pts)
    eps = 1e-12 * max(scale, 1e-300)
    disk = _mtf_disk(pts, len(pts), [], eps)
    return Disk(disk.center, max(abs(z - disk.center) for z in pts))


# -- distance to scalars --------------------------------------------------------

def _dist_batch(a: np.ndarray, lams: np.ndarray) -> np.ndarray:
    n = a.shape[0]
    M = a[None, :, :] - lams[:, None, None] * np.eye(n)[None, :, :]
    return np.linalg.svd(M, compute_uv=False)[:, 0]


def _top_right_vector(a: np.ndarray, lam: complex) -> tuple[float, np.ndarray]:
    _, s, Vh = np.linalg.svd(a - lam * np.eye(a.shape[0]))
    return float(s[0]), np.conj(Vh[0])


def variance_bound(a: np.ndarray, x: np.ndarray) -> float:
    """``sqrt(||ax||^2 - |<ax, x>|^2)`` for unit ``x``: a lower bound on ``inf_l ||a - l e||``.

    Follows from ``||(a - l)x||^2 = ||ax||^2 - 2 Re(conj(l) <ax, x>) + |l|^2``,
    minimized over ``l`` at ``l = <ax, x>``.
    """
    ax = a @ x
    return float(np.sqrt(max(np.vdot(ax, ax).real - abs(np.vdot(x, ax)) ** 2, 0.0)))


def _certified_newton(a: np.ndarray, tol: float, maxit: int = 50):
    """Damped Newton on ``g(l) = ||a - l||^2`` from ``tr(a)/n``.

    Returns ``(l, upper)`` once ``upper - variance_bound <= tol * max(1, upper)``
    at the top right singular vector, else ``None``. The bound gap equals
    ``|<ax, x> - l|^2 / (upper + lower)`` and vanishes exactly at smooth minima.
    """
    n = a.shape[0]
    lam = complex(np.trace(a) / n)

    def grad(l):
        _, x = _top_right_vector(a, l)
        w = np.vdot(x, a @ x) - l
        return np.array([-2 * w.real, -2 * w.imag])

    for _ in range(maxit):
        upper, x = _top_right_vector(a, lam)
        if upper - variance_bound(a, x) <= tol * max(1.0, upper):
            return lam, upper
        g0 = grad(lam)
        h = 1e-7 * max(1.0, upper)
        H = np.column_stack([(grad(lam + h) - g0) / h, (grad(lam + 1j * h) - g0) / h])
        H = 0.5 * (H + H.T)
        if np.linalg.eigvalsh(H)[0] > 0:
            step = -np.linalg.solve(H, g0)
        else:
            step = -0.5 * g0
        d = complex(step[0], step[1])
        t = 1.0
        while t > 1e-10 and _top_right_vector(a, lam + t * d)[0] > upper:
            t *= 0.5
        if t <= 1e-10:
            return None
        lam = lam + t * d
    return None


def grid_minimize(a: np.ndarray, tol: float, center: Optional[complex] = None,
                  points: int = 33, shrink: float = 4.0) -> tuple[complex, float]:
    """Adaptive grid refinement for ``min_l ||a - l e||``.

    Starts from a ``points x points`` grid of half-width ``2||a||`` around
    ``tr(a)/n``, recenters on the argmin and shrinks by ``shrink`` until the
    grid spacing drops below ``tol``. Exact at smooth minima; at kinks (e.g.
    normal ``a``) the shrinking box can stall up to ~1e-4 away, which is why
    :func:`convex_minimize` is the default general solver.
    """
    a = as_square(a, "a")
    n = a.shape[0]
    best = complex(np.trace(a) / n) if center is None else complex(center)
    fbest = float(_dist_batch(a, np.array([best]))[0])
    h = 2.0 * op_norm(a)
    if h == 0.0:
        return best, fbest
    t = np.linspace(-1.0, 1.0, points)
    offsets = (t[None, :] + 1j * t[:, None]).ravel()
    while True:
        lams = best + h * offsets
        vals = _dist_batch(a, lams)
        k = int(np.argmin(vals))
        if vals[k] < fbest:
            best, fbest = complex(lams[k]), float(vals[k])
        if 2.0 * h / (points - 1) < tol:
            return best, fbest
        h /= shrink


def _golden(f, lo: float, hi: float, width: float) -> tuple[float, float]:
    """Golden-section search for a convex ``f`` on ``[lo, hi]``; returns ``(argmin, min)``."""
    g = (np.sqrt(5.0) - 1.0) / 2.0
    c, d = hi - g * (hi - lo), lo + g * (hi - lo)
    fc, fd = f(c), f(d)
    while hi - lo > width:
        if fc <= fd:
            hi, d, fd = d, c, fc
            c = hi - g * (hi - lo)
            fc = f(c)
        else:
            lo, c, fc = c, d, fd
            d = lo + g * (hi - lo)
            fd = f(d)
    return (c, fc) if fc <= fd else (d, fd)


def convex_minimize(a: np.ndarray, tol: float) -> tuple[complex, float]:
    """Nested golden-section minimization of ``l -> ||a - l e||``.

    ``x -> min_y ||a - (x + iy) e||`` is convex because partial minimization
    preserves convexity, so both searches are exact up to ``tol`` in ``l``
    even at non-smooth minima. The search box has half-width ``2||a||``
    around ``tr(a)/n``; the minimizer lies in the numerical range, whose
    diameter is at most ``2||a||``.
    """
    a = as_square(a, "a")
    n = a.shape[0]
    c = complex(np.trace(a) / n)
    h = 2.0 * op_norm(a)
    if h == 0.0:
        return c, 0.0
    eye = np.eye(n)

    def f(x, y):
        return float(np.linalg.svd(a - complex(x, y) * eye, compute_uv=False)[0])

    inner = {}

    def g(x):
        y, v = _golden(lambda y: f(x, y), c.imag - h, c.imag + h, tol)
        inner[x] = y
        return v

    x, v = _golden(g, c.real - h, c.real + h, tol)
    return complex(x, inner[x]), v


def is_normal(a, rtol: float = NORMALITY_RTOL) -> bool:
    a = as_square(a, "a")
    return normality_defect(a) <= rtol * op_norm(a) ** 2


def chebyshev_radius(a, tol: Tolerance = DEFAULT_TOL, method: str = "auto") -> Disk:
    """``inf_l ||a - l e||`` and its minimizer, as a :class:`Disk`.

    Args:
        a: square matrix.
        tol: ``solve_tol`` sets the certificate gap and the final grid spacing.
        method: ``"auto"`` routes normal matrices to the spectral disk and
            others to a certified Newton solve, falling back to
            ``"convex"`` (nested golden-section search). ``"disk"``,
            ``"convex"`` and ``"grid"`` (adaptive grid refinement) force one path.
    """
    a = as_square(a, "a")
    if method not in ("auto", "disk", "convex", "grid"):
        raise ValueError(f"unknown method {method!r}")
    if method == "disk" or (method == "auto" and is_normal(a)):
        return smallest_enclosing_disk(np.linalg.eigvals(a))
    if method == "auto":
        found = _certified_newton(a, tol.solve_tol)
        if found is not None:
            return Disk(*found)
    if method == "grid":
        return Disk(*grid_minimize(a, tol.solve_tol))
    return Disk(*convex_minimize(a, tol.solve_tol))


# -- checks ------------------------------------------------------------------------

def gruss_check(phi: MapRep, a, b, tol: Tolerance = DEFAULT_TOL) -> GrussReport:
    """Evaluate both sides of the Gruss inequality. The verdict is observational."""
    d = defect(phi, a, b)
    ra, rb = chebyshev_radius(a, tol), chebyshev_radius(b, tol)
    bound = ra.radius * rb.radius
    holds = d <= bound + VERDICT_RTOL * max(1.0, bound)
    return GrussReport(d, ra, rb, bound, holds, bound - d)


def unitary_variance_sides(phi: MapRep, a, b) -> tuple[float, float]:
    """``(||phi(ab) - phi(a)phi(b)||^2, ||phi(aa*) - phi(a)phi(a)*|| ||phi(b*b) - phi(b)*phi(b)||)``."""
    a, b = as_square(a, "a"), as_square(b, "b")
    pa, pb = apply(phi, a), apply(phi, b)
    lhs = defect(phi, a, b) ** 2
    left = op_norm(apply(phi, a @ dagger(a)) - pa @ dagger(pa))
    right = op_norm(apply(phi, dagger(b) @ b) - dagger(pb) @ pb)
    return lhs, left * right


def prop24_inequality_check(phi: MapRep, a, b, tol: float = 1e-8, check_unitary: bool = True) -> bool:
    """Squared Gruss defect against the product of the two variance terms.

    Guaranteed for unital 2-positive ``phi`` and unitary ``a, b``.

    Raises:
        PreconditionError: if ``check_unitary`` and ``a`` or ``b`` is not unitary.
    """
    if check_unitary and not (is_unitary(a) and is_unitary(b)):
        raise PreconditionError("a and b must be unitary")
    lhs, rhs = unitary_variance_sides(phi, a, b)
    return lhs <= rhs + tol


def normal_variance_sides(phi: MapRep, a, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    a = as_square(a, "a")
    pa = apply(phi, a)
    lhs = op_norm(apply(phi, a @ dagger(a)) - pa @ dagger(pa))
    return lhs, chebyshev_radius(a, tol).radius ** 2


def corollary_normal_check(phi: MapRep, a, tol: float = 1e-8) -> bool:
    """``||phi(aa*) - phi(a)phi(a)*|| <= (inf_l ||a - l e||)^2`` for normal ``a``.

    Raises:
        PreconditionError: if ``a`` is not normal.
    """
    a = as_square(a, "a")
    if normality_defect(a) > NORMALITY_RTOL * max(1.0, op_norm(a) ** 2):
        raise PreconditionError("a must be normal")
    lhs, rhs = normal_variance_sides(phi, a)
    return lhs <= rhs + tol


def fuglede_putnam_check(x, y, tol: float = 1e-10) -> bool:
    """For normal ``x`` commuting with ``y``, test that ``x*`` commutes with ``y``.

    Raises:
        PreconditionError: if ``x`` is not normal or ``xy != yx`` within ``tol``.
    """
    x, y = as_square(x, "x"), as_square(y, "y")
    if x.shape != y.shape:
        raise DimensionError("x and y must have equal size")
    scale = max(1.0, op_norm(x) * op_norm(y))
    if normality_defect(x) > tol * max(1.0, op_norm(x) ** 2):
        raise PreconditionError("x must be normal")
    if op_norm(x @ y - y @ x) > tol * scale:
        raise PreconditionError("x and y must commute")
    return op_norm(dagger(x) @ y - y @ dagger(x)) <= 100 * tol * scale


# -- suites ----------------------------------------------------------------------

def gruss_suite(phi: MapRep, trials: int, seed: int, pairs: str = "arbitrary",
                name: Optional[str] = None, tol: Tolerance = DEFAULT_TOL) -> SuiteReport:
    """Run :func:`gruss_check` on ``trials`` random pairs; trial ``i`` uses seed ``seed + i``.

    ``pairs`` is ``"arbitrary"`` (independent complex Gaussian matrices) or
    ``"commuting_normal"``.
    """
    n = phi.dim_in
    passed, worst = 0, np.inf
    report = SuiteReport(name or f"gruss[{pairs}]", trials, 0, np.inf)
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        if pairs == "commuting_normal":
            a, b = random_normal_commuting_pair(n, rng)
        elif pairs == "arbitrary":
            a, b = random_ginibre(n, rng), random_ginibre(n, rng)
        else:
            raise ValueError(f"unknown pair family {pairs!r}")
        r = gruss_check(phi, a, b, tol)
        passed += r.holds
        worst = min(worst, r.margin)
        if not r.holds and len(report.notes) < 5:
            report.notes.append(f"trial {i}: defect {r.defect:.6g} > bound {r.bound:.6g}")
    report.passed, report.worst_margin = passed, worst
    return report


def theorem31_suite(phi: MapRep, trials: int = 500, seed: int = 42, pairs: str = "commuting_normal",
                    tol: Tolerance = DEFAULT_TOL) -> SuiteReport:
    """Gruss inequality on commuting normal pairs, which needs ``phi`` only unital positive.

    With ``pairs="arbitrary"`` this is the completely positive case, where any
    pair qualifies.
    """
    return gruss_suite(phi, trials, seed, pairs, name=f"commuting-normal[{pairs}]", tol=tol)
