"""Randomized verification suites.

Each suite draws its instances from ``numpy.random.default_rng(seed + i)`` for
trial ``i`` and returns a :class:`~grusskit.gruss.SuiteReport`. ``cap`` values
are the per-suite trial counts used when the caller asks for more.
"""
from __future__ import annotations

import numpy as np

from grusskit import blockpos, dilation, gruss
from grusskit.gruss import SuiteReport
from grusskit.matcore import (
    dagger,
    is_psd,
    min_eig_herm,
    op_norm,
    random_ginibre,
    random_normal,
    random_normal_commuting_pair,
    random_unitary,
)
from grusskit.posmaps import MapRep, apply, random_unital_cp, reduction_map, transpose_map


def two_positive_maps(seed: int) -> list[tuple[str, MapRep]]:
    """The unital 2-positive subjects: ``reduction_map(3)`` and nine random unital CP maps."""
    maps = [("reduction_map(3)", reduction_map(3))]
    for n in (2, 3, 4):
        for r in (1, 2, 3):
            s = seed + 1000 * n + 100 * r
            maps.append((f"random_unital_cp({n},{r},{s})", random_unital_cp(n, r, s)))
    return maps


def gruss_two_positive_suites(trials: int, seed: int) -> list[SuiteReport]:
    return [gruss.gruss_suite(phi, trials, seed, "arbitrary", name=f"gruss {name}")
            for name, phi in two_positive_maps(seed)]


def unitary_variance_suite(phi: MapRep, trials: int, seed: int, name: str, contractual: bool = True) -> SuiteReport:
    """Squared-defect inequality on random unitary pairs; margin is ``rhs - lhs``."""
    n = phi.dim_in
    rep = SuiteReport(name, trials, 0, np.inf, contractual)
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        u, v = random_unitary(n, rng), random_unitary(n, rng)
        lhs, rhs = gruss.unitary_variance_sides(phi, u, v)
        rep.passed += lhs <= rhs + 1e-8
        rep.worst_margin = min(rep.worst_margin, rhs - lhs)
    return rep


def unitary_variance_suites(trials: int, seed: int) -> list[SuiteReport]:
    return [unitary_variance_suite(phi, trials, seed, f"unitary variance bound {name}")
            for name, phi in two_positive_maps(seed)]


def transpose_variance_diagnostic(trials: int, seed: int) -> SuiteReport:
    """How often the unitary variance bound fails for the merely positive transpose map."""
    rep = unitary_variance_suite(transpose_map(3), trials, seed, "unitary variance bound transpose_map(3) [diagnostic]",
                       contractual=False)
    rep.notes.append(f"violation rate {(rep.trials - rep.passed) / rep.trials:.3f}")
    return rep


def commuting_normal_suite(trials: int, seed: int) -> SuiteReport:
    return gruss.theorem31_suite(transpose_map(3), trials, seed, "commuting_normal")


def cp_arbitrary_suite(trials: int, seed: int) -> SuiteReport:
    phi = random_unital_cp(3, 2, seed)
    return gruss.gruss_suite(phi, trials, seed, "arbitrary", name="gruss random_unital_cp(3,2) [CP case]")


def normal_variance_suite(trials: int, seed: int) -> SuiteReport:
    """Variance of a normal element against its squared radius, for ``transpose_map(3)``."""
    phi = transpose_map(3)
    rep = SuiteReport("normal variance transpose_map(3)", trials, 0, np.inf)
    for i in range(trials):
        a = random_normal(3, seed + i)
        lhs, rhs = gruss.normal_variance_sides(phi, a)
        rep.passed += lhs <= rhs + 1e-8
        rep.worst_margin = min(rep.worst_margin, rhs - lhs)
    return rep


def fuglede_putnam_suite(trials: int, seed: int) -> SuiteReport:
    rep = SuiteReport("commuting normal adjoint", trials, 0, np.inf)
    for i in range(trials):
        x, y = random_normal_commuting_pair(4, seed + i)
        rep.passed += gruss.fuglede_putnam_check(x, y)
        rep.worst_margin = min(rep.worst_margin, -op_norm(dagger(x) @ y - y @ dagger(x)))
    return rep


def block_positivity_suite(trials: int, seed: int) -> SuiteReport:
    rep = SuiteReport("2x2 block positivity", trials, 0, np.inf)
    for i in range(trials):
        blk = blockpos.random_psd_block(2 + i % 3, 1 + i % 4, seed + i)
        r = blockpos.lemma_2x2_check(blk, seed=seed + i, trials=20)
        rep.passed += r.block_psd and r.pairing_ok and r.norm_ok
        rep.worst_margin = min(rep.worst_margin, op_norm(blk.P) * op_norm(blk.Q) - op_norm(blk.R) ** 2)
    return rep


def schur_suite(trials: int, seed: int) -> SuiteReport:
    """Block verdict vs Schur-complement verdict; near-boundary cases are skipped."""
    rep = SuiteReport("Schur complement equivalence", trials, 0, np.inf)
    skipped = 0
    for i in range(trials):
        t = blockpos.random_schur_triple(2 + i % 3, 1 + i % 3, seed + i)
        direct, via, margin = blockpos.schur_verdicts(t)
        if abs(margin) <= blockpos.UNDECIDABLE_MARGIN:
            skipped += 1
            rep.passed += 1
            continue
        rep.passed += direct == via
        rep.worst_margin = min(rep.worst_margin, abs(margin))
    rep.notes.append(f"skipped {skipped} near-boundary instances")
    return rep


def choi_lemma_suite(phi: MapRep, trials: int, seed: int, name: str) -> SuiteReport:
    rep = SuiteReport(f"Choi lemma {name}", trials, 0, np.inf)
    for i in range(trials):
        x, y = blockpos.random_choi_premise_pair(phi.dim_in, seed + i)
        r = blockpos.choi_lemma_verify(phi, x, y)
        rep.passed += r.premise and r.conclusion_min_eig >= -1e-8
        rep.worst_margin = min(rep.worst_margin, r.conclusion_min_eig)
    return rep


def unitary_block_suite(trials: int, seed: int) -> SuiteReport:
    rep = SuiteReport("unitary 4x4 block PSD", trials, 0, np.inf)
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        n = 2 + i % 3
        A = blockpos.prop24_block(random_unitary(n, rng), random_unitary(n, rng))
        rep.passed += is_psd(A)
        rep.worst_margin = min(rep.worst_margin, min_eig_herm(A))
    return rep


def stinespring_suite(trials: int, seed: int, samples: int = 20) -> SuiteReport:
    """Margin is ``1e-10`` minus the worst of the isometry and reconstruction errors."""
    rep = SuiteReport("Stinespring dilation", trials, 0, np.inf)
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        n, r = 2 + i % 3, 1 + i % 3
        phi = random_unital_cp(n, r, rng)
        dil = dilation.stinespring(phi)
        err = op_norm(dagger(dil.v) @ dil.v - np.eye(phi.dim_out))
        for _ in range(samples):
            x = random_ginibre(n, rng)
            err = max(err, op_norm(apply(phi, x) - dil.compress(x)))
        rep.passed += err <= 1e-10
        rep.worst_margin = min(rep.worst_margin, 1e-10 - err)
    return rep


def russo_dye_suite(trials: int, seed: int) -> SuiteReport:
    """Random matrices at norms 0.1, 1 and 10 plus the zero matrix."""
    rep = SuiteReport("two-unitary decomposition", trials + 1, 0, np.inf)
    inputs = [np.zeros((3, 3))]
    for i in range(trials):
        G = random_ginibre(2 + i % 3, seed + i)
        inputs.append(G * ((0.1, 1.0, 10.0)[i % 3] / op_norm(G)))
    for a in inputs:
        dec = dilation.russo_dye_decompose(a)
        err = op_norm(dec.reconstruct() - a)
        for u in dec.unitaries:
            err = max(err, op_norm(dagger(u) @ u - np.eye(a.shape[0])))
        err = max(err, abs(sum(dec.weights) - 1.0))
        rep.passed += err <= 1e-10
        rep.worst_margin = min(rep.worst_margin, 1e-10 - err)
    return rep


def radius_solver_suite(trials: int, seed: int) -> SuiteReport:
    """General convex solver vs the spectral disk on random normal matrices."""
    rep = SuiteReport("radius solver vs spectral disk", trials, 0, np.inf)
    for i in range(trials):
        a = random_normal(2 + i % 3, seed + i) * (1 + i % 4)
        gap = abs(gruss.chebyshev_radius(a, method="convex").radius
                  - gruss.chebyshev_radius(a, method="disk").radius)
        rep.passed += gap <= 1e-6
        rep.worst_margin = min(rep.worst_margin, 1e-6 - gap)
    return rep


def main_trace_suite(trials: int, seed: int) -> SuiteReport:
    """Every link of the replayed estimate for ``reduction_map(3)``."""
    phi = reduction_map(3)
    rep = SuiteReport("defect estimate chain reduction_map(3)", trials, 0, np.inf)
    for i in range(trials):
        rng = np.random.default_rng(seed + i)
        tr = dilation.main_theorem_trace(phi, random_ginibre(3, rng), random_ginibre(3, rng))
        rep.passed += tr.all_hold
        rep.worst_margin = min(rep.worst_margin, min(l.right - l.left for l in tr.links if l.relation == "<="))
    return rep


def run_all(trials: int = 1000, seed: int = 42) -> list[SuiteReport]:
    """All suites; contractual ones must pass, diagnostics only report."""
    def cap(k):
        return max(1, min(trials, k))

    reports = []
    reports += gruss_two_positive_suites(trials, seed)
    reports += unitary_variance_suites(cap(200), seed)
    reports.append(commuting_normal_suite(cap(500), seed))
    reports.append(cp_arbitrary_suite(cap(500), seed))
    reports.append(normal_variance_suite(cap(200), seed))
    reports.append(fuglede_putnam_suite(cap(200), seed))
    reports.append(block_positivity_suite(cap(200), seed))
    reports.append(schur_suite(cap(200), seed))
    reports.append(choi_lemma_suite(transpose_map(2), cap(200), seed, "transpose_map(2)"))
    reports.append(choi_lemma_suite(reduction_map(3), cap(200), seed, "reduction_map(3)"))
    reports.append(unitary_block_suite(cap(100), seed))
    reports.append(stinespring_suite(cap(50), seed))
    reports.append(russo_dye_suite(cap(100), seed))
    reports.append(radius_solver_suite(cap(50), seed))
    reports.append(main_trace_suite(cap(100), seed))
    reports.append(transpose_variance_diagnostic(cap(200), seed))
    return reports
