"""JSON and CSV serialization.

Every JSON document has the envelope ``{tool_version, config_echo,
results}``.  Complex numbers become ``{"re": ..., "im": ...}``; NaN and
infinities become ``null``.
"""

from __future__ import annotations

import csv
import dataclasses
import enum
import io
import json
import math
from typing import Any

import numpy as np

from . import __version__
from .circle import BoundarySample, GridMask, Spectrum
from .constraints import ConstraintSet, Functional, KernelPolynomial
from .admissibility import SweepReport
from .witness import Witness

__all__ = ["to_jsonable", "envelope", "dumps", "sweep_csv", "SWEEP_CSV_COLUMNS",
           "complex_from_record", "functional_from_record"]

SWEEP_CSV_COLUMNS = (
    "N", "eta", "gamma", "lower_paper", "eps_lower", "eps_upper", "upper_paper",
    "sandwich_ok", "witness_norm_g", "witness_target", "delta",
)


def _float(x: float):
    x = float(x)
    return x if math.isfinite(x) else None


def _complex(z) -> dict:
    z = complex(z)
    return {"re": _float(z.real), "im": _float(z.imag)}


def complex_from_record(rec) -> complex:
    if isinstance(rec, dict):
        return complex(float(rec["re"]), float(rec.get("im", 0.0)))
    if isinstance(rec, (list, tuple)):
        return complex(float(rec[0]), float(rec[1]))
    return complex(rec)


def functional_from_record(rec) -> Functional:
    """Inverse of the ``(frequency, re, im)`` list encoding."""
    return Functional({int(k): complex(float(re), float(im)) for k, re, im in rec})


def to_jsonable(obj: Any) -> Any:
    if obj is None or isinstance(obj, (bool, str)):
        return obj
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return _complex(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()] if obj.dtype.kind != "c" else [
            _complex(v) for v in obj
        ]
    if isinstance(obj, BoundarySample):
        return {"n_grid": obj.n, "values": to_jsonable(np.asarray(obj.values, dtype=complex))}
    if isinstance(obj, Spectrum):
        return [{"k": k, **_complex(c)} for k, c in obj.items()]
    if isinstance(obj, GridMask):
        return {"n_grid": obj.grid.n_grid, "count": obj.count}
    if isinstance(obj, Functional):
        return [[k, _float(c.real), _float(c.imag)] for k, c in obj.density]
    if isinstance(obj, ConstraintSet):
        return [to_jsonable(phi) for phi in obj]
    if isinstance(obj, KernelPolynomial):
        return {"coeffs": to_jsonable(obj.coeffs), "sup_norm": _float(obj.sup_norm),
                "residual": _float(obj.residual)}
    if isinstance(obj, Witness):
        out = {f.name: to_jsonable(getattr(obj, f.name))
               for f in dataclasses.fields(obj) if f.name != "g"}
        out["within_bound"] = obj.within_bound
        out["target_met"] = obj.target_met
        return out
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_jsonable(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def envelope(config: Any, results: Any) -> dict:
    return {
        "tool_version": __version__,
        "config_echo": to_jsonable(config),
        "results": to_jsonable(results),
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=True, allow_nan=False) + "\n"


def _csv_row(row) -> dict:
    last = row.witness_stats[-1] if row.witness_stats else {}
    br = row.bracket
    return {
        "N": row.N,
        "eta": repr(row.eta),
        "gamma": repr(row.gamma),
        "lower_paper": repr(row.lower_closed_form),
        "eps_lower": repr(br.lower) if br else "",
        "eps_upper": repr(br.upper) if br else "",
        "upper_paper": repr(row.upper_closed_form),
        "sandwich_ok": str(row.sandwich_ok).lower(),
        "witness_norm_g": repr(last["norm_g"]) if last else "",
        "witness_target": repr(last["target"]) if last else "",
        "delta": repr(last["delta"]) if last else "",
    }


def sweep_csv(report: SweepReport) -> str:
    """One line per cell; witness columns refer to the smallest delta."""
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=SWEEP_CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow(_csv_row(row))
    return buf.getvalue()
