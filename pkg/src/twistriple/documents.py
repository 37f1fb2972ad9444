"""Flat-file format for spectral triples.

A triple document is JSON with complex numbers as [re, im] pairs and
matrices as row-major arrays of rows. Serialisation is canonical (sorted
keys, fixed indentation, shortest round-tripping float literals), so
save -> load is entrywise exact and load -> save reproduces the bytes.
"""

from __future__ import annotations

import json
import math
from typing import Any, Optional

import numpy as np

from .algebra import Representation
from .axioms import RealStructure, SignTriple, SpectralTriple, Twist
from .linalg import Antiunitary

__all__ = ["DocumentError", "to_document", "from_document", "dumps", "loads", "save", "load"]


class DocumentError(ValueError):
    """Raised when a triple document is malformed."""


def _canonical_float(x: float) -> float:
    return float(x) + 0.0  # folds -0.0 into +0.0 so serialisation is canonical


def _matrix_to_doc(m: np.ndarray) -> list:
    return [[[_canonical_float(v.real), _canonical_float(v.imag)] for v in row]
            for row in np.asarray(m, dtype=complex)]


def _matrix_from_doc(obj: Any, dim: int, name: str) -> np.ndarray:
    if not isinstance(obj, list) or len(obj) != dim:
        raise DocumentError(f"{name}: expected {dim} rows")
    out = np.zeros((dim, dim), dtype=complex)
    for i, row in enumerate(obj):
        if not isinstance(row, list) or len(row) != dim:
            raise DocumentError(f"{name}: row {i} must have {dim} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(x, (int, float)) for x in entry)):
                raise DocumentError(f"{name}: entry ({i},{j}) must be a [re, im] pair")
            re, im = float(entry[0]), float(entry[1])
            if not (math.isfinite(re) and math.isfinite(im)):
                raise DocumentError(f"{name}: entry ({i},{j}) is not finite")
            out[i, j] = complex(re, im)
    return out


def _sign_from_doc(obj: Any, name: str) -> int:
    if obj not in (1, -1):
        raise DocumentError(f"{name} must be 1 or -1")
    return int(obj)


def to_document(t: SpectralTriple) -> dict:
    doc: dict[str, Any] = {
        "dim": t.dim,
        "points": t.rep.n_points,
        "rep": list(t.rep.point_of),
        "dirac": _matrix_to_doc(t.dirac),
        "grading": None if t.grading is None else _matrix_to_doc(t.grading),
        "real": None,
        "twist": None,
    }
    if t.real is not None:
        doc["real"] = {
            "unitary": _matrix_to_doc(t.real.j.u),
            "eps": t.real.signs.eps,
            "eps_prime": t.real.signs.eps_prime,
            "eps_dprime": t.real.signs.eps_dprime,
        }
    if t.twist is not None:
        doc["twist"] = {
            "nu": _matrix_to_doc(t.twist.nu),
            "implements_automorphism": bool(t.twist.implements_algebra_automorphism),
        }
    return doc


def from_document(doc: Any) -> SpectralTriple:
    if not isinstance(doc, dict):
        raise DocumentError("document must be a JSON object")
    try:
        dim = int(doc["dim"])
        points = int(doc["points"])
        rep_list = doc["rep"]
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"missing or malformed header field: {exc}") from exc
    if not isinstance(rep_list, list) or len(rep_list) != dim:
        raise DocumentError("rep must list one point index per basis vector")
    try:
        rep = Representation(tuple(int(p) for p in rep_list))
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"invalid representation: {exc}") from exc
    if rep.n_points != points:
        raise DocumentError(f"rep uses {rep.n_points} points but document says {points}")
    if "dirac" not in doc:
        raise DocumentError("document has no dirac matrix")
    dirac = _matrix_from_doc(doc["dirac"], dim, "dirac")

    grading = None
    if doc.get("grading") is not None:
        grading = _matrix_from_doc(doc["grading"], dim, "grading")

    real: Optional[RealStructure] = None
    robj = doc.get("real")
    if robj is not None:
        if not isinstance(robj, dict) or "unitary" not in robj:
            raise DocumentError("real: expected an object with a unitary matrix")
        eps = _sign_from_doc(robj.get("eps"), "real.eps")
        eps_prime = _sign_from_doc(robj.get("eps_prime"), "real.eps_prime")
        eps_dprime = robj.get("eps_dprime")
        if eps_dprime is not None:
            eps_dprime = _sign_from_doc(eps_dprime, "real.eps_dprime")
        real = RealStructure(
            j=Antiunitary(_matrix_from_doc(robj["unitary"], dim, "real.unitary")),
            signs=SignTriple(eps=eps, eps_prime=eps_prime, eps_dprime=eps_dprime),
        )

    twist: Optional[Twist] = None
    tobj = doc.get("twist")
    if tobj is not None:
        if not isinstance(tobj, dict) or "nu" not in tobj:
            raise DocumentError("twist: expected an object with a nu matrix")
        flag = tobj.get("implements_automorphism")
        if not isinstance(flag, bool):
            raise DocumentError("twist.implements_automorphism must be a boolean")
        twist = Twist(nu=_matrix_from_doc(tobj["nu"], dim, "twist.nu"),
                      implements_algebra_automorphism=flag)

    try:
        return SpectralTriple(rep=rep, dirac=dirac, grading=grading, real=real, twist=twist)
    except ValueError as exc:
        raise DocumentError(str(exc)) from exc


def dumps(t: SpectralTriple) -> str:
    return json.dumps(to_document(t), sort_keys=True, indent=2) + "\n"


def loads(text: str) -> SpectralTriple:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from exc
    return from_document(doc)


def save(t: SpectralTriple, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(dumps(t))


def load(path) -> SpectralTriple:
    with open(path, "r", encoding="ascii") as fh:
        return loads(fh.read())
