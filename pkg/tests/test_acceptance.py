"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line."""
import json
import math
import time

import numpy as np

from grusskit import cli, suites
from grusskit.gruss import chebyshev_radius
from grusskit.matcore import random_ginibre
from grusskit.posmaps import k_positivity_falsify, reduction_map, transpose_map

from oracles import dist_to_scalars_grid

SEED = 42


def test_criterion_01_transpose_counterexample(record, capsys):
    t0 = time.perf_counter()
    code = cli.main(["paper-example", "--machine"])
    elapsed = time.perf_counter() - t0
    doc = json.loads(capsys.readouterr().out)
    r = doc["cases"][0]["report"]
    assert doc["cases"][0]["map"] == "transpose_map(3)"
    ok = (code == 0
          and abs(r["defect"] - 6.0) <= 1e-9
          and abs(r["radius_a"]["radius"] - math.sqrt(10)) <= 1e-9
          and abs(r["radius_b"]["radius"] - 1.5) <= 1e-9
          and abs(r["bound"] - 4.743416) <= 1e-6
          and r["holds"] is False
          and elapsed < 1.0)
    record(1, ok, f"defect {r['defect']:.12g}, radii {r['radius_a']['radius']:.12g} and "
                  f"{r['radius_b']['radius']:.12g}, bound {r['bound']:.9f}, VIOLATED, {elapsed:.2f} s")
    assert ok


def test_criterion_02_falsifier_witness(record):
    phi = transpose_map(2)
    t0 = time.perf_counter()
    w = k_positivity_falsify(phi, 2)
    elapsed = time.perf_counter() - t0
    oracle = np.linalg.eigvalsh(phi.choi).min()
    ok = (w is not None and w.k == 2 and abs(w.value + 1.0) <= 1e-6
          and abs(w.value - oracle) <= 1e-6 and elapsed < 5.0)
    record(2, ok, f"witness value {w.value if w else None}, oracle {oracle:.12g}, {elapsed:.2f} s")
    assert ok


def test_criterion_03_gruss_two_positive(record):
    t0 = time.perf_counter()
    reports = suites.gruss_two_positive_suites(1000, SEED)
    elapsed = time.perf_counter() - t0
    worst = min(r.worst_margin for r in reports)
    ok = (len(reports) == 10 and all(r.trials == 1000 and r.passed == 1000 for r in reports)
          and worst >= -1e-8 and elapsed < 60.0)
    record(3, ok, f"{sum(r.passed for r in reports)}/10000 pairs hold, worst margin {worst:.3e}, {elapsed:.1f} s")
    assert ok


def test_criterion_04_unitary_variance_bound(record):
    reports = suites.unitary_variance_suites(200, SEED)
    worst = min(r.worst_margin for r in reports)
    ok = len(reports) == 10 and all(r.passed == 200 for r in reports) and worst >= -1e-8
    record(4, ok, f"{sum(r.passed for r in reports)}/2000 unitary pairs, worst margin {worst:.3e}")
    assert ok


def test_criterion_05_commuting_normal_and_cp(record):
    normal = suites.commuting_normal_suite(500, SEED)
    cp = suites.cp_arbitrary_suite(500, SEED)
    ok = normal.passed == 500 and cp.passed == 500
    record(5, ok, f"transpose_map(3) commuting normal {normal.passed}/500, "
                  f"CP arbitrary {cp.passed}/500")
    assert ok


def test_criterion_06_schur_equivalence(record):
    rep = suites.schur_suite(200, SEED)
    ok = rep.passed == 200
    record(6, ok, f"{rep.passed}/200 agree ({'; '.join(rep.notes)}), smallest decided margin {rep.worst_margin:.3e}")
    assert ok


def test_criterion_07_choi_lemma(record):
    reps = [suites.choi_lemma_suite(transpose_map(2), 200, SEED, "transpose_map(2)"),
            suites.choi_lemma_suite(transpose_map(3), 200, SEED, "transpose_map(3)"),
            suites.choi_lemma_suite(reduction_map(3), 200, SEED, "reduction_map(3)")]
    worst = min(r.worst_margin for r in reps)
    ok = all(r.passed == 200 for r in reps) and worst >= -1e-8
    record(7, ok, f"{sum(r.passed for r in reps)}/600 conclusion blocks PSD, lowest eigenvalue {worst:.3e}")
    assert ok


def test_criterion_08_stinespring(record):
    rep = suites.stinespring_suite(50, SEED, samples=20)
    ok = rep.passed == 50 and rep.worst_margin >= 0
    record(8, ok, f"{rep.passed}/50 maps, worst error {1e-10 - rep.worst_margin:.3e}")
    assert ok


def test_criterion_09_two_unitary_decomposition(record):
    rep = suites.russo_dye_suite(100, SEED)
    ok = rep.trials == 101 and rep.passed == 101 and rep.worst_margin >= 0
    record(9, ok, f"{rep.passed}/101 matrices, worst error {1e-10 - rep.worst_margin:.3e}")
    assert ok


def test_criterion_10_radius_solver(record):
    normal = suites.radius_solver_suite(50, SEED)
    gaps = []
    for i in range(20):
        rng = np.random.default_rng(SEED + i)
        n = 2 + i % 3
        a = random_ginibre(n, rng) * (1 + i % 4)
        _, ref = dist_to_scalars_grid(a)
        for method in ("auto", "convex"):
            gaps.append(abs(chebyshev_radius(a, method=method).radius - ref))
    ok = normal.passed == 50 and max(gaps) <= 1e-6
    record(10, ok, f"normal {normal.passed}/50 within 1e-6 (worst gap {1e-6 - normal.worst_margin:.3e}), "
                   f"non-normal worst gap vs grid oracle {max(gaps):.3e}")
    assert ok
