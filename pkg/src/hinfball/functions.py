"""Named test-function families, built reproducibly from parameters."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from .admissibility import theorem2_construction
from .circle import BoundaryGrid, BoundarySample, from_spectrum
from .constraints import ConstraintSet
from .errors import ContractViolation
from .outer import FLOOR, make_outer

__all__ = [
    "FunctionKind",
    "FunctionSpec",
    "blaschke_product",
    "poly_fraction",
    "build_function",
]


class FunctionKind(str, enum.Enum):
    THEOREM2 = "THEOREM2"
    BLASCHKE = "BLASCHKE"
    POLY_FRACTION = "POLY_FRACTION"
    OUTER_FROM_MODULUS = "OUTER_FROM_MODULUS"
    SPECTRUM_LITERAL = "SPECTRUM_LITERAL"


@dataclass(frozen=True)
class FunctionSpec:
    kind: FunctionKind
    params: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "kind", FunctionKind(self.kind))
        _VALIDATORS[self.kind](self.params)


def _need(params, *names):
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise ContractViolation(f"missing parameters: {', '.join(missing)}")


def _check_theorem2(p):
    _need(p, "N", "eta", "gamma")
    if int(p["N"]) != p["N"] or p["N"] < 1:
        raise ContractViolation("N must be a positive integer")
    for name in ("eta", "gamma"):
        if not 0.0 < p[name] < 1.0:
            raise ContractViolation(f"{name} must lie in (0, 1)")


def _check_blaschke(p):
    _need(p, "zeros")
    if any(abs(complex(a)) >= 1.0 for a in p["zeros"]):
        raise ContractViolation("Blaschke zeros must lie in the open unit disk")


def _check_fraction(p):
    _need(p, "numerator", "denominator")
    den = np.asarray([complex(c) for c in p["denominator"]])
    if not np.any(den):
        raise ContractViolation("denominator must be nonzero")
    nz = np.flatnonzero(den)
    roots = np.polynomial.polynomial.polyroots(den[: nz[-1] + 1]) if nz[-1] > 0 else []
    if any(abs(r) <= 1.0 for r in roots):
        raise ContractViolation("denominator must not vanish on the closed unit disk")


def _check_modulus(p):
    _need(p, "modulus")
    if any(float(v) < 0 for v in p["modulus"]):
        raise ContractViolation("modulus values must be nonnegative")


def _check_spectrum(p):
    _need(p, "terms")
    if not p["terms"]:
        raise ContractViolation("spectrum literal needs at least one term")


_VALIDATORS = {
    FunctionKind.THEOREM2: _check_theorem2,
    FunctionKind.BLASCHKE: _check_blaschke,
    FunctionKind.POLY_FRACTION: _check_fraction,
    FunctionKind.OUTER_FROM_MODULUS: _check_modulus,
    FunctionKind.SPECTRUM_LITERAL: _check_spectrum,
}


def blaschke_product(zeros, grid: BoundaryGrid) -> BoundarySample:
    """Finite Blaschke product ``prod (z - a)/(1 - conj(a) z)``."""
    z = grid.points
    values = np.ones(grid.n_grid, dtype=complex)
    for a in zeros:
        a = complex(a)
        values *= (z - a) / (1.0 - a.conjugate() * z)
    return BoundarySample(grid, values)


def poly_fraction(numerator, denominator, grid: BoundaryGrid) -> BoundarySample:
    z = grid.points
    num = np.polynomial.polynomial.polyval(z, np.asarray(numerator, dtype=complex))
    den = np.polynomial.polynomial.polyval(z, np.asarray(denominator, dtype=complex))
    return BoundarySample(grid, num / den)


def build_function(
    spec: FunctionSpec, grid: BoundaryGrid, floor: float = FLOOR
) -> tuple[BoundarySample, ConstraintSet | None]:
    """Sample the function described by ``spec``.

    Only ``THEOREM2`` comes with its own constraint set; the other kinds
    return ``None`` in that slot.
    """
    p = spec.params
    kind = spec.kind
    if kind is FunctionKind.THEOREM2:
        phi, f = theorem2_construction(int(p["N"]), float(p["eta"]), float(p["gamma"]), grid=grid)
        return f, phi
    if kind is FunctionKind.BLASCHKE:
        return blaschke_product(p["zeros"], grid), None
    if kind is FunctionKind.POLY_FRACTION:
        return poly_fraction(p["numerator"], p["denominator"], grid), None
    if kind is FunctionKind.OUTER_FROM_MODULUS:
        modulus = np.asarray(p["modulus"], dtype=float)
        if modulus.shape != (grid.n_grid,):
            raise ContractViolation(
                f"modulus has {modulus.size} values but n_grid is {grid.n_grid}"
            )
        return make_outer(BoundarySample(grid, modulus), floor).boundary, None
    terms = {int(k): complex(v) for k, v in dict(p["terms"]).items()}
    return from_spectrum(terms, grid), None
