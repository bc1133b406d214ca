"""Outer functions from boundary moduli, and boundary-function classifiers."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d, minimum_filter1d

from .circle import (
    TOL_SUP,
    BoundarySample,
    GridMask,
    analyticity_defect,
    conjugate_function,
    measure,
    sup_norm,
)
from .errors import ContractViolation

__all__ = [
    "FLOOR",
    "MOLLIFY_WIDTH",
    "DEFAULT_LADDER",
    "TOL_STAB",
    "Verdict",
    "OuterResult",
    "ExtremalityReport",
    "SublevelSet",
    "TwoLevelModulus",
    "make_outer",
    "two_level_modulus",
    "log_minorant",
    "mollify_below",
    "inner_defect",
    "extremality_test",
    "sublevel_set",
    "exposed_mass",
]

FLOOR = 1e-9
#: Half-width, in grid cells, of the smoothing kernel used on two-level moduli.
MOLLIFY_WIDTH = 32
DEFAULT_LADDER = tuple(2.0 ** -k for k in range(4, 41, 4))
TOL_STAB = 1e-3
_SLOPE_RUNGS = 4


class Verdict(str, enum.Enum):
    EXTREME_LIKELY = "EXTREME_LIKELY"
    NOT_EXTREME = "NOT_EXTREME"
    INCONCLUSIVE = "INCONCLUSIVE"


@dataclass(frozen=True, eq=False)
class OuterResult:
    boundary: BoundarySample
    modulus_error: float
    analyticity: float


@dataclass(frozen=True)
class ExtremalityReport:
    floor_ladder: tuple[float, ...]
    integrals: tuple[float, ...]
    slope: float
    verdict: Verdict


@dataclass(frozen=True, eq=False)
class SublevelSet:
    eta: float
    mask: GridMask
    measure: float


@dataclass(frozen=True, eq=False)
class TwoLevelModulus:
    """A two-level modulus smoothed from below.

    ``core`` marks the cells of the original mask on which the modulus
    still equals the mask's level exactly.
    """

    modulus: BoundarySample
    core: GridMask


def make_outer(w: BoundarySample, floor: float = FLOOR) -> OuterResult:
    """Outer function whose boundary modulus is ``max(w, floor)``.

    Computes ``exp(L + i*conj(L))`` with ``L = log(max(w, floor))``.  The
    conjugate has zero mean, so the analytic extension is real and
    positive at the origin.
    """
    if floor <= 0:
        raise ContractViolation(f"floor must be positive, got {floor}")
    vals = np.asarray(w.values)
    if vals.dtype.kind == "c":
        if np.abs(vals.imag).max() > 1e-13 * max(1.0, np.abs(vals).max()):
            raise ContractViolation("modulus must be real-valued")
        vals = vals.real
    if np.any(vals < 0):
        raise ContractViolation("modulus must be nonnegative")

    target = np.maximum(vals, floor)
    log_mod = BoundarySample(w.grid, np.log(target))
    phase = conjugate_function(log_mod)
    g = BoundarySample(w.grid, np.exp(log_mod.values + 1j * phase.values))
    err = float(np.abs(np.abs(g.values) - target).max())
    return OuterResult(boundary=g, modulus_error=err, analyticity=analyticity_defect(g))


def log_minorant(log_values: np.ndarray, width: int) -> np.ndarray:
    """Smooth pointwise minorant of a (log-)modulus on the circle.

    A sliding minimum over ``2*width+1`` cells followed by a Gaussian of
    standard deviation ``width/8`` truncated to the same window: every
    output value is a convex combination of window minima, so it never
    exceeds the input.  Eight standard deviations leave a truncation jump
    near 1e-14.  Cells whose window is flat keep their value bit-exactly.
    """
    L = np.asarray(log_values, dtype=float)
    if width <= 0:
        return L.copy()
    size = 2 * width + 1
    lmin = minimum_filter1d(L, size, mode="wrap")
    offsets = np.arange(-width, width + 1)
    kernel = np.exp(-0.5 * (offsets / (width / 8.0)) ** 2)
    kernel /= kernel.sum()
    out = np.zeros_like(L)
    for s, k in zip(offsets, kernel):
        out += k * np.roll(lmin, s)
    flat = maximum_filter1d(lmin, size, mode="wrap") == minimum_filter1d(lmin, size, mode="wrap")
    out[flat] = lmin[flat]
    return np.minimum(out, L)


def mollify_below(w: BoundarySample, width: int = MOLLIFY_WIDTH, floor: float = FLOOR) -> BoundarySample:
    """``exp`` of :func:`log_minorant` applied to ``log(max(w, floor))``."""
    if width < 0:
        raise ContractViolation("mollification width must be nonnegative")
    vals = np.maximum(np.real(np.asarray(w.values)), floor)
    return w.with_values(np.exp(log_minorant(np.log(vals), width)))


def two_level_modulus(
    mask: GridMask, inside: float, outside: float, width: int = MOLLIFY_WIDTH
) -> TwoLevelModulus:
    """``inside`` on ``mask`` and ``outside`` elsewhere, mollified from below.

    The transition lands inside whichever region carries the larger level,
    so the result never exceeds the sharp two-level function.
    """
    if inside <= 0 or outside <= 0:
        raise ContractViolation("two-level moduli must be strictly positive")
    if width < 0:
        raise ContractViolation("mollification width must be nonnegative")
    member = np.asarray(mask.member)
    sharp = np.where(member, inside, outside)
    log_u = log_minorant(np.log(sharp), width)
    u = np.exp(log_u)
    exact = log_u == np.log(sharp)
    u[exact] = sharp[exact]
    core = member & exact
    return TwoLevelModulus(BoundarySample(mask.grid, u), GridMask(mask.grid, core))


def inner_defect(f: BoundarySample) -> float:
    """``max_j | |f(zeta_j)| - 1 |`` over the grid."""
    return float(np.abs(np.abs(f.values) - 1.0).max())


def _check_in_ball(f: BoundarySample, tol_sup: float) -> float:
    norm = sup_norm(f)
    if norm > 1.0 + tol_sup:
        raise ContractViolation(f"||f|| = {norm:.12g} exceeds 1 + tol_sup")
    return norm


def extremality_test(
    f: BoundarySample,
    ladder=DEFAULT_LADDER,
    tol_stab: float = TOL_STAB,
    tol_sup: float = TOL_SUP,
) -> ExtremalityReport:
    """Floor-ladder diagnostic for divergence of the integral of ``log(1-|f|)``.

    For each floor ``tau`` the truncated integral ``I(tau)`` of
    ``log(max(1-|f|, tau))`` is computed.  A convergent integral makes
    ``I`` stabilize; a divergent one keeps decreasing by roughly equal
    steps per rung.  Anything in between is reported as inconclusive.
    """
    _check_in_ball(f, tol_sup)
    taus = tuple(float(t) for t in ladder)
    if len(taus) < 2 or any(t <= 0 for t in taus) or any(
        b >= a for a, b in zip(taus, taus[1:])
    ):
        raise ContractViolation("ladder must be strictly decreasing, positive, length >= 2")

    gap = 1.0 - np.abs(f.values)
    integrals = tuple(float(np.mean(np.log(np.maximum(gap, t)))) for t in taus)

    tail = slice(-min(_SLOPE_RUNGS, len(taus)), None)
    x = np.log(np.asarray(taus[tail]))
    y = np.asarray(integrals[tail])
    slope = float(np.polyfit(x, y, 1)[0]) if len(x) >= 2 else 0.0

    steps = -np.diff(integrals)
    one_cell = np.log(taus[-2] / taus[-1]) / f.n
    if abs(steps[-1]) < tol_stab + one_cell:
        verdict = Verdict.NOT_EXTREME
    elif len(steps) >= 2 and steps[-1] >= 0.5 * steps[-2]:
        verdict = Verdict.EXTREME_LIKELY
    else:
        verdict = Verdict.INCONCLUSIVE
    return ExtremalityReport(taus, integrals, slope, verdict)


def sublevel_set(f: BoundarySample, eta: float) -> SublevelSet:
    """Grid version of ``{zeta : |f(zeta)| <= eta}``."""
    if not 0.0 < eta < 1.0:
        raise ContractViolation(f"eta must lie in (0, 1), got {eta}")
    mask = GridMask(f.grid, np.abs(f.values) <= eta)
    return SublevelSet(eta=float(eta), mask=mask, measure=measure(mask))


def exposed_mass(f: BoundarySample, tol: float = 1e-9, tol_sup: float = TOL_SUP) -> float:
    """Measure of the grid set where ``|f|`` is within ``tol`` of 1.

    A positive value is the grid surrogate of the measure condition
    characterizing exposed points of the unit ball of H-infinity.
    """
    _check_in_ball(f, tol_sup)
    return measure(GridMask(f.grid, np.abs(np.abs(f.values) - 1.0) <= tol))
