"""Text serialization for matrices, maps and result structures.

Documents are JSON. Floats are written with 17 significant digits so every
double round-trips exactly. A matrix is::

    {"rows": 2, "cols": 2, "data": [[re, im], [re, im], ...]}   # row-major

and a map is ``{"dim_in": n, "dim_out": m, "choi": <matrix>}``.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from grusskit.errors import GrussKitError
from grusskit.gruss import Disk, GrussReport, SuiteReport
from grusskit.posmaps import MapRep, SchmidtWitness


class FormatError(GrussKitError):
    """A document does not parse in the declared format."""


def _num(x) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite value {x}")
    if x == int(x) and abs(x) < 1e16:
        return str(int(x)) if x != 0 or math.copysign(1, x) > 0 else "-0.0"
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Serialize nested dicts/lists/scalars; lists of scalars stay on one line."""
    pad = "  " * indent
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if obj is None:
        return "null"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f'{pad}  {json.dumps(k)}: {dumps(v, indent + 1)}' for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(obj, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        if all(isinstance(v, (list, tuple)) and all(not isinstance(w, (dict, list, tuple)) for w in v)
               for v in obj):
            return "[" + ", ".join(dumps(v) for v in obj) + "]"
        items = [f"{pad}  {dumps(v, indent + 1)}" for v in obj]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


# -- matrices and maps -----------------------------------------------------------

def matrix_to_doc(A) -> dict:
    A = np.asarray(A, dtype=np.complex128)
    if A.ndim == 1:
        A = A[:, None]
    return {"rows": A.shape[0], "cols": A.shape[1],
            "data": [[z.real, z.imag] for z in A.ravel()]}


def matrix_from_doc(doc) -> np.ndarray:
    try:
        rows, cols, data = int(doc["rows"]), int(doc["cols"]), doc["data"]
        if rows < 1 or cols < 1:
            raise FormatError("rows and cols must be positive")
        if len(data) != rows * cols:
            raise FormatError(f"data has {len(data)} entries, expected {rows * cols}")
        vals = np.array([complex(float(re), float(im)) for re, im in data], dtype=np.complex128)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed matrix document: {exc}") from exc
    if not np.all(np.isfinite(vals)):
        raise FormatError("matrix entries must be finite")
    return vals.reshape(rows, cols)


def map_to_doc(phi: MapRep) -> dict:
    return {"dim_in": phi.dim_in, "dim_out": phi.dim_out, "choi": matrix_to_doc(phi.choi)}


def map_from_doc(doc) -> MapRep:
    try:
        n, m = int(doc["dim_in"]), int(doc["dim_out"])
        choi = matrix_from_doc(doc["choi"])
        return MapRep(n, m, choi)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed map document: {exc}") from exc


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"not a valid document: {exc}") from exc


def read_matrix(path) -> np.ndarray:
    return matrix_from_doc(loads(_read(path)))


def read_map(path) -> MapRep:
    return map_from_doc(loads(_read(path)))


def write_matrix(path, A):
    Path(path).write_text(dumps(matrix_to_doc(A)) + "\n")


def write_map(path, phi: MapRep):
    Path(path).write_text(dumps(map_to_doc(phi)) + "\n")


def _read(path) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc.strerror}") from exc


# -- result structures -----------------------------------------------------------------

def disk_to_doc(d: Disk) -> dict:
    c = complex(d.center)
    return {"center_re": c.real, "center_im": c.imag, "radius": d.radius}


def gruss_report_to_doc(r: GrussReport) -> dict:
    return {"defect": r.defect, "bound": r.bound, "radius_a": disk_to_doc(r.radius_a),
            "radius_b": disk_to_doc(r.radius_b), "holds": bool(r.holds), "margin": r.margin}


def gruss_report_from_doc(doc) -> GrussReport:
    def disk(d):
        return Disk(complex(d["center_re"], d["center_im"]), float(d["radius"]))
    return GrussReport(float(doc["defect"]), disk(doc["radius_a"]), disk(doc["radius_b"]),
                       float(doc["bound"]), bool(doc["holds"]), float(doc["margin"]))


def trace_to_doc(report) -> dict:
    return {"all_hold": report.all_hold,
            "links": [{"stage": l.stage, "label": l.label, "left": l.left, "relation": l.relation,
                       "right": l.right, "requires": l.requires, "holds": l.holds}
                      for l in report.links]}


def decomposition_to_doc(dec) -> dict:
    return {"scale": dec.scale, "weights": list(dec.weights),
            "unitaries": [matrix_to_doc(u) for u in dec.unitaries]}


def dilation_to_doc(dil) -> dict:
    return {"env_dim": dil.env_dim, "v": matrix_to_doc(dil.v)}


def witness_to_doc(w: SchmidtWitness) -> dict:
    return {"k": w.k, "value": w.value,
            "left_vectors": [matrix_to_doc(v) for v in w.left_vectors],
            "right_vectors": [matrix_to_doc(v) for v in w.right_vectors]}


def suite_to_doc(s: SuiteReport) -> dict:
    return {"name": s.name, "trials": s.trials, "passed": s.passed, "ok": s.ok,
            "contractual": s.contractual,
            "worst_margin": s.worst_margin if math.isfinite(s.worst_margin) else None,
            "notes": list(s.notes)}
