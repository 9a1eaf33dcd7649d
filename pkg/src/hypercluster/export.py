"""JSON and CSV serialization of states, density matrices and counts."""
from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

import numpy as np

SCHEMA_VERSION = 1
_DIGITS = 12


def _num(x: float) -> float:
    v = round(float(x), _DIGITS)
    return 0.0 if v == 0 else v  # no "-0.0" in output


def to_jsonable(obj):
    """Recursively convert numpy values and complex numbers to plain JSON types.

    Complex numbers become ``{"re": .., "im": ..}``; floats are rounded to 12
    decimals so output is stable across platforms with identical arithmetic.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return {"re": _num(obj.real), "im": _num(obj.imag)}
    if isinstance(obj, (float, np.floating)):
        return _num(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, indent=2) + "\n"


def matrix_to_json(m: np.ndarray) -> dict:
    m = np.asarray(m)
    return {"shape": list(m.shape), "re": m.real.tolist(), "im": m.imag.tolist()}


def matrix_from_json(d: dict) -> np.ndarray:
    return np.asarray(d["re"], dtype=float) + 1j * np.asarray(d["im"], dtype=float)


def matrix_to_csv(m: np.ndarray) -> str:
    """Row-major CSV, each cell written as two columns ``re,im``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    m = np.asarray(m)
    w.writerow([f"{p}{j}" for j in range(m.shape[1]) for p in ("re", "im")])
    for row in m:
        w.writerow([v for z in row for v in (repr(_num(z.real)), repr(_num(z.imag)))])
    return buf.getvalue()


def matrix_from_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))[1:]
    vals = np.array([[float(x) for x in r] for r in rows])
    return vals[:, 0::2] + 1j * vals[:, 1::2]


def records_to_csv(records: list[dict]) -> str:
    """Flat list of dicts -> CSV with the union of keys (first-seen order)."""
    if not records:
        return ""
    keys = []
    for r in records:
        for k in r:
            if k not in keys:
                keys.append(k)
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=keys, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: _csv_cell(r.get(k, "")) for k in keys})
    return buf.getvalue()


def _csv_cell(v):
    v = to_jsonable(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return v


def counts_to_json(records) -> list[dict]:
    return [r.to_dict() for r in records]


def parse_angle(text: str) -> float:
    """Radians, with pi literals allowed: ``"3pi/2"``, ``"-pi/4"``, ``"pi"``, ``"0.5"``."""
    t = str(text).strip().replace(" ", "").replace("π", "pi").lower()
    if "pi" not in t:
        return float(t)
    num, sep, den = t.partition("/")
    if sep and not den:
        raise ValueError(f"missing denominator in {text!r}")
    coef = num.replace("*", "").replace("pi", "")
    if coef in ("", "+"):
        c = Fraction(1)
    elif coef == "-":
        c = Fraction(-1)
    else:
        c = Fraction(coef)
    if sep:
        c /= Fraction(den)
    return float(c) * np.pi
