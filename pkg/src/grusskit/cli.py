"""Command-line interface.

Exit codes: 0 success, 1 mathematical failure (suite failure, mismatch with the
expected counterexample values), 2 unparsable input, 3 violated precondition.
"""
from __future__ import annotations

import argparse
import math
import sys
import time
from dataclasses import replace

import numpy as np

from grusskit import formats, gruss, suites
from grusskit.dilation import russo_dye_decompose, stinespring
from grusskit.errors import GrussKitError
from grusskit.formats import FormatError
from grusskit.matcore import DEFAULT_TOL, Tolerance
from grusskit.posmaps import embedded_transpose_map, k_positivity_falsify, transpose_map

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_PRECONDITION = 0, 1, 2, 3

COUNTER_A = np.array([[1.0, 3.0], [3.0, 3.0]])
COUNTER_B = np.diag([1.0, 3.0])


def _cplx(z: complex) -> str:
    z = complex(z)
    re = 0.0 if z.real == 0 else z.real
    im = 0.0 if z.imag == 0 else z.imag
    return f"{re:.12g}{im:+.12g}i"


def _pad(A: np.ndarray, k: int) -> np.ndarray:
    out = np.zeros((k, k))
    out[:A.shape[0], :A.shape[1]] = A
    return out


def counterexample_cases():
    """``(name, phi, a, b, expected)`` for the transpose-map counterexample.

    With ``k >= 3`` the zero block puts 0 in both spectra, which gives the
    radii sqrt(10) and 3/2. For ``k = 2`` the spectrum of ``b`` is ``{1, 3}``
    and its radius is 1; the defect is still 6.
    """
    s10 = math.sqrt(10.0)
    a3, b3 = _pad(COUNTER_A, 3), _pad(COUNTER_B, 3)
    return [
        ("transpose_map(3)", transpose_map(3), a3, b3,
         {"defect": 6.0, "radius_a": s10, "radius_b": 1.5, "bound": 1.5 * s10, "holds": False}),
        ("transpose_map(2)", transpose_map(2), COUNTER_A, COUNTER_B,
         {"defect": 6.0, "radius_a": s10, "radius_b": 1.0, "bound": s10, "holds": False}),
        ("embedded_transpose_map(2, pad=1)", embedded_transpose_map(2, 1), COUNTER_A, COUNTER_B,
         {"defect": 6.0, "radius_a": s10, "radius_b": 1.0, "bound": s10, "holds": False}),
        ("embedded_transpose_map(3, pad=1)", embedded_transpose_map(3, 1), a3, b3,
         {"defect": 6.0, "radius_a": s10, "radius_b": 1.5, "bound": 1.5 * s10, "holds": False}),
    ]


def cmd_paper_example(args, out) -> int:
    cases, mismatches = [], []
    for name, phi, a, b, expected in counterexample_cases():
        r = gruss.gruss_check(phi, a, b)
        got = {"defect": r.defect, "radius_a": r.radius_a.radius, "radius_b": r.radius_b.radius,
               "bound": r.bound, "holds": r.holds}
        for key, want in expected.items():
            if isinstance(want, bool):
                bad = got[key] != want
            else:
                bad = abs(got[key] - want) > 1e-9
            if bad:
                mismatches.append(f"{name}: {key} = {got[key]!r}, expected {want!r}")
        cases.append((name, a, b, r))

    if args.machine:
        doc = {"ok": not mismatches, "mismatches": mismatches,
               "cases": [{"map": name, "report": formats.gruss_report_to_doc(r)} for name, _, _, r in cases]}
        out.write(formats.dumps(doc) + "\n")
    else:
        for name, a, b, r in cases:
            ea = np.sort(np.linalg.eigvalsh(a))
            eb = np.sort(np.linalg.eigvalsh(b))
            out.write(f"phi = {name}, a = {a.shape[0]}x{a.shape[0]}\n")
            out.write(f"  spectrum(a)          {', '.join(f'{x:.9f}' for x in ea)}\n")
            out.write(f"  spectrum(b)          {', '.join(f'{x:.9f}' for x in eb)}\n")
            out.write(f"  inf ||a - l e||      {r.radius_a.radius:.9f}  at l = {_cplx(r.radius_a.center)}\n")
            out.write(f"  inf ||b - m e||      {r.radius_b.radius:.9f}  at m = {_cplx(r.radius_b.center)}\n")
            out.write(f"  defect               {r.defect:.9f}\n")
            out.write(f"  bound                {r.bound:.9f}\n")
            out.write(f"  verdict              {'HOLDS' if r.holds else 'VIOLATED'}\n\n")
        for m in mismatches:
            out.write(f"MISMATCH {m}\n")
    return EXIT_FAIL if mismatches else EXIT_OK


def cmd_suite(args, out) -> int:
    t0 = time.perf_counter()
    reports = suites.run_all(args.trials, args.seed)
    failed = [r for r in reports if r.contractual and not r.ok]
    if args.machine:
        doc = {"seed": args.seed, "trials": args.trials, "ok": not failed,
               "suites": [formats.suite_to_doc(r) for r in reports]}
        out.write(formats.dumps(doc) + "\n")
    else:
        for r in reports:
            status = ("PASS" if r.ok else "FAIL") if r.contractual else "INFO"
            notes = f"  ({'; '.join(r.notes)})" if r.notes else ""
            out.write(f"{status}  {r.name:<52} {r.passed:>5}/{r.trials:<5} worst margin {r.worst_margin:.3e}{notes}\n")
        out.write(f"\n{len(reports) - len(failed)}/{len(reports)} suites without contractual failure "
                  f"in {time.perf_counter() - t0:.1f} s\n")
    return EXIT_FAIL if failed else EXIT_OK


def cmd_defect(args, out) -> int:
    phi = formats.read_map(args.map_file)
    a, b = formats.read_matrix(args.a_file), formats.read_matrix(args.b_file)
    r = gruss.gruss_check(phi, a, b, args.tolerance)
    if args.machine:
        out.write(formats.dumps(formats.gruss_report_to_doc(r)) + "\n")
    else:
        out.write(f"defect {r.defect:.12g}\n"
                  f"radius_a {r.radius_a.radius:.12g} (center {_cplx(r.radius_a.center)})\n"
                  f"radius_b {r.radius_b.radius:.12g} (center {_cplx(r.radius_b.center)})\n"
                  f"bound {r.bound:.12g}\nmargin {r.margin:.12g}\n"
                  f"verdict {'HOLDS' if r.holds else 'VIOLATED'}\n")
    return EXIT_OK


def cmd_radius(args, out) -> int:
    a = formats.read_matrix(args.a_file)
    d = gruss.chebyshev_radius(a, args.tolerance)
    if args.machine:
        out.write(formats.dumps(formats.disk_to_doc(d)) + "\n")
    else:
        out.write(f"center {_cplx(d.center)}, radius {d.radius:.12g}\n")
    return EXIT_OK


def cmd_decompose(args, out) -> int:
    dec = russo_dye_decompose(formats.read_matrix(args.a_file))
    if args.machine:
        out.write(formats.dumps(formats.decomposition_to_doc(dec)) + "\n")
    else:
        out.write(f"scale {dec.scale:.17g}\nweights {', '.join(str(w) for w in dec.weights)}\n")
        for i, u in enumerate(dec.unitaries):
            out.write(f"unitary {i}:\n{np.array2string(u, precision=6, suppress_small=True)}\n")
    return EXIT_OK


def cmd_dilate(args, out) -> int:
    dil = stinespring(formats.read_map(args.map_file), args.tolerance)
    if args.machine:
        out.write(formats.dumps(formats.dilation_to_doc(dil)) + "\n")
    else:
        out.write(f"env_dim {dil.env_dim}\nisometry v ({dil.v.shape[0]}x{dil.v.shape[1]}):\n"
                  f"{np.array2string(dil.v, precision=6, suppress_small=True)}\n")
    return EXIT_OK


def cmd_falsify(args, out) -> int:
    phi = formats.read_map(args.map_file)
    w = k_positivity_falsify(phi, args.k, restarts=args.restarts, iters=args.iters, seed=args.seed,
                             tol=args.tolerance)
    if args.machine:
        out.write(formats.dumps({"witness": None if w is None else formats.witness_to_doc(w)}) + "\n")
    elif w is None:
        out.write(f"no Schmidt-rank-{args.k} witness found (evidence of {args.k}-positivity, not a proof)\n")
    else:
        out.write(f"witness k={w.k} value {w.value:.9f}\n")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--trials", type=int, default=1000)
    common.add_argument("--tol", type=float, default=None, help="override the solver tolerance")
    common.add_argument("--out", default=None, help="write output to PATH instead of stdout")
    common.add_argument("--machine", action="store_true", help="emit machine-readable documents")

    parser = argparse.ArgumentParser(prog="grusskit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("paper-example", parents=[common], help="reproduce the transpose-map counterexample")
    sub.add_parser("suite", parents=[common], help="run all randomized verification suites")
    p = sub.add_parser("defect", parents=[common], help="Gruss defect and bound for a map and two matrices")
    p.add_argument("map_file")
    p.add_argument("a_file")
    p.add_argument("b_file")
    p = sub.add_parser("radius", parents=[common], help="distance from a matrix to the scalars")
    p.add_argument("a_file")
    p = sub.add_parser("decompose", parents=[common], help="two-unitary convex decomposition")
    p.add_argument("a_file")
    p = sub.add_parser("dilate", parents=[common], help="Stinespring dilation of a unital CP map")
    p.add_argument("map_file")
    p = sub.add_parser("falsify", parents=[common], help="search for a k-positivity violation")
    p.add_argument("map_file")
    p.add_argument("k", type=int)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--iters", type=int, default=200)
    return parser


COMMANDS = {
    "paper-example": cmd_paper_example,
    "suite": cmd_suite,
    "defect": cmd_defect,
    "radius": cmd_radius,
    "decompose": cmd_decompose,
    "dilate": cmd_dilate,
    "falsify": cmd_falsify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    try:
        args.tolerance = DEFAULT_TOL if args.tol is None else replace(DEFAULT_TOL, solve_tol=args.tol)
    except ValueError as exc:
        parser.error(str(exc))
    out = sys.stdout if args.out is None else open(args.out, "w")
    try:
        return COMMANDS[args.command](args, out)
    except FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except GrussKitError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    finally:
        if out is not sys.stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
