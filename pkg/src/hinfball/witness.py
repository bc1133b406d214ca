"""Perturbations certifying failure of (strong) extremality.

Both constructions follow the same pattern: build an outer function
``G`` whose modulus leaves room next to ``|f|``, multiply by a unit-sup
polynomial ``p`` of degree ``<= N`` chosen so that ``G*p`` satisfies the
``N`` constraints, and measure ``||f +- G*p||``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .circle import (
    TOL_SUP,
    BoundarySample,
    GridMask,
    Spectrum,
    analyticity_defect,
    from_spectrum,
    measure,
    refine,
    sup_norm,
)
from .constraints import (
    TOL_KERNEL,
    ConstraintSet,
    kernel_polynomial,
    membership_defect,
    poly_eval,
    poly_sup,
)
from .errors import ContractViolation, DegenerateInputError
from .outer import (
    DEFAULT_LADDER,
    FLOOR,
    MOLLIFY_WIDTH,
    Verdict,
    extremality_test,
    inner_defect,
    make_outer,
    mollify_below,
    sublevel_set,
    two_level_modulus,
)

__all__ = [
    "NAZAROV_C",
    "TOL_ANALYTIC",
    "WitnessKind",
    "ConstantMethod",
    "Witness",
    "TNReport",
    "extreme_violation_witness",
    "strong_violation_witness",
    "restricted_sup_constant",
    "turan_nazarov_check",
    "mask_sup",
    "random_set",
    "tn_corpus",
]

#: Constant in the Turan-Nazarov inequality shown admissible by Nazarov.
NAZAROV_C = math.pi / (16.0 * math.e)
TOL_ANALYTIC = 1e-8


class WitnessKind(str, enum.Enum):
    EXTREME_VIOLATION = "EXTREME_VIOLATION"
    STRONG_VIOLATION = "STRONG_VIOLATION"


class ConstantMethod(str, enum.Enum):
    NAZAROV = "NAZAROV"
    EMPIRICAL = "EMPIRICAL"


@dataclass(frozen=True, eq=False)
class Witness:
    g: BoundarySample
    norm_g: float
    norm_plus: float
    norm_minus: float
    membership: float
    analyticity: float
    target_bound: float
    kind: WitnessKind
    # ||f +- g|| must not exceed this for the witness to count
    norm_bound: float
    p_coeffs: np.ndarray
    f_membership: float
    core_measure: float = float("nan")
    target_uneroded: float = float("nan")

    @property
    def within_bound(self) -> bool:
        return max(self.norm_plus, self.norm_minus) <= self.norm_bound

    @property
    def target_met(self) -> bool:
        return self.norm_g >= self.target_bound

    def invariants_hold(
        self, tol_kernel: float = TOL_KERNEL, tol_analytic: float = TOL_ANALYTIC
    ) -> bool:
        return (
            self.norm_g > 0
            and self.membership <= tol_kernel * max(1.0, self.norm_g)
            and self.analyticity <= tol_analytic
            and self.within_bound
            and self.target_met
        )


@dataclass(frozen=True)
class TNReport:
    n_terms: int
    set_measure: float
    lhs: float
    restricted_sup: float
    bound: float
    c_used: float

    @property
    def ratio(self) -> float:
        return self.lhs / self.bound if self.bound > 0 else math.inf

    def holds(self, tol: float = TOL_SUP) -> bool:
        return self.lhs <= self.bound * (1.0 + tol)


def _require_unit_norm(f: BoundarySample, tol_sup: float) -> float:
    norm = sup_norm(f)
    if abs(norm - 1.0) > tol_sup:
        raise ContractViolation(f"f must have unit sup norm, got {norm:.12g}")
    return norm


def _assemble(f, g, kind, norm_bound, target, p_coeffs, phi_set, **extra) -> Witness:
    return Witness(
        g=g,
        norm_g=sup_norm(g),
        norm_plus=sup_norm(f + g),
        norm_minus=sup_norm(f - g),
        membership=membership_defect(g, phi_set),
        analyticity=analyticity_defect(g),
        target_bound=target,
        kind=kind,
        norm_bound=norm_bound,
        p_coeffs=p_coeffs,
        f_membership=membership_defect(f, phi_set),
        **extra,
    )


def extreme_violation_witness(
    f: BoundarySample,
    phi_set: ConstraintSet,
    floor: float = FLOOR,
    tol_sup: float = TOL_SUP,
    tol_kernel: float = TOL_KERNEL,
    ladder=DEFAULT_LADDER,
    strict: bool = True,
    width: int = MOLLIFY_WIDTH,
) -> Witness:
    """Nonzero ``g`` in the constrained space with ``|f +- g| <= 1``.

    ``g = G*p`` where ``G`` is outer with modulus ``1-|f|`` (floored) and
    ``p`` comes from :func:`kernel_polynomial`.  The modulus is replaced
    by a smooth minorant (see :func:`mollify_below`) so that the inequality
    survives band-limited interpolation.  With ``strict`` the floor
    ladder must not indicate a divergent log integral; otherwise the
    floored construction is returned regardless and only certifies
    ``||f +- g|| <= 1 + floor``.
    """
    _require_unit_norm(f, tol_sup)
    gap = 1.0 - np.abs(f.values)
    if np.all(gap <= floor):
        raise DegenerateInputError(
            "witness construction requires a non-inner f with convergent log integral",
            kind=DegenerateInputError.INNER,
        )
    if strict:
        report = extremality_test(f, ladder=ladder, tol_sup=tol_sup)
        if report.verdict is Verdict.EXTREME_LIKELY:
            raise DegenerateInputError(
                "log(1-|f|) diverges at grid resolution; f is numerically extreme",
                kind=DegenerateInputError.INNER,
            )

    modulus = mollify_below(f.with_values(np.clip(gap, 0.0, None)), width, floor)
    G = make_outer(modulus, floor).boundary
    p = kernel_polynomial(G, phi_set, tol_kernel)
    g = G * p.sample(f.grid)
    bound = 1.0 + tol_sup + floor * (1.0 + p.sup_norm)
    return _assemble(f, g, WitnessKind.EXTREME_VIOLATION, bound, 0.0, p.coeffs, phi_set)


def strong_violation_witness(
    f: BoundarySample,
    phi_set: ConstraintSet,
    eta: float,
    delta: float,
    width: int = MOLLIFY_WIDTH,
    method: ConstantMethod = ConstantMethod.NAZAROV,
    tol_sup: float = TOL_SUP,
    tol_kernel: float = TOL_KERNEL,
    seed: int = 0,
) -> Witness:
    """``g`` with ``||f +- g|| <= 1 + delta`` and ``||g||`` bounded below.

    The outer factor has modulus ``1-eta`` on the sublevel set
    ``{|f| <= eta}`` and ``delta/2`` elsewhere, smoothed from below.  The
    target ``(1-eta)/C`` uses the restricted-sup constant ``C`` of the
    set's core, the part where the modulus is exactly ``1-eta``.
    """
    if delta <= 0:
        raise ContractViolation("delta must be positive")
    if tol_sup > delta / 4:
        raise ContractViolation("tol_sup must not exceed delta/4")
    _require_unit_norm(f, tol_sup)
    if inner_defect(f) <= tol_sup:
        raise DegenerateInputError("f is numerically inner", kind=DegenerateInputError.INNER)
    level = sublevel_set(f, eta)
    if level.mask.count == 0:
        raise DegenerateInputError(
            f"sublevel set at eta={eta} is empty",
            kind=DegenerateInputError.EMPTY_SUBLEVEL,
        )
    shaped = two_level_modulus(level.mask, 1.0 - eta, delta / 2.0, width)
    if shaped.core.count == 0:
        raise DegenerateInputError(
            f"sublevel set at eta={eta} is thinner than the mollification margin",
            kind=DegenerateInputError.EMPTY_SUBLEVEL,
        )
    N = len(phi_set)
    G = make_outer(shaped.modulus, FLOOR).boundary
    p = kernel_polynomial(G, phi_set, tol_kernel)
    g = G * p.sample(f.grid)
    C = restricted_sup_constant(shaped.core, N, method, seed=seed)
    target = (1.0 - eta) / C
    full = (1.0 - eta) / restricted_sup_constant(level.mask, N, ConstantMethod.NAZAROV)
    return _assemble(
        f, g, WitnessKind.STRONG_VIOLATION, 1.0 + delta, target, p.coeffs, phi_set,
        core_measure=measure(shaped.core), target_uneroded=full,
    )


def _cell_points(E: GridMask, oversample: int) -> np.ndarray:
    """Angles of the ``oversample``-refined grid lying in the cells of ``E``."""
    n = E.grid.n_grid
    m = n * oversample
    cell = np.rint(np.arange(m) / oversample).astype(int) % n
    return 2.0 * np.pi * np.flatnonzero(E.member[cell]) / m


def mask_sup(values_fine: np.ndarray, E: GridMask) -> float:
    """Max of refined values over the cells of ``E``."""
    n = E.grid.n_grid
    os = len(values_fine) // n
    cell = np.rint(np.arange(len(values_fine)) / os).astype(int) % n
    return float(np.abs(values_fine[E.member[cell]]).max())


def restricted_sup_constant(
    E: GridMask,
    N: int,
    method: ConstantMethod = ConstantMethod.NAZAROV,
    seed: int = 0,
    starts: int = 16,
    maxiter: int = 2000,
) -> float:
    """Constant ``C`` with ``||q|| <= C * sup_E |q|`` for degree-``N`` polynomials.

    ``NAZAROV`` returns ``(1/(c*m(E)))**N``, valid for every such ``q``.
    ``EMPIRICAL`` searches for a polynomial with a large ratio and returns
    a certified lower bound on the best constant.
    """
    m_E = measure(E)
    if m_E <= 0:
        raise ContractViolation("restricted sup constant needs a set of positive measure")
    if N < 0:
        raise ContractViolation("N must be nonnegative")
    method = ConstantMethod(method)
    if method is ConstantMethod.NAZAROV:
        return (1.0 / (NAZAROV_C * m_E)) ** N
    if N == 0:
        return 1.0
    return _empirical_constant(E, N, seed, starts, maxiter)


def _empirical_constant(E: GridMask, N: int, seed: int, starts: int, maxiter: int) -> float:
    rng = np.random.default_rng(seed)
    e_theta = _cell_points(E, 4)
    if e_theta.size > 1024:
        e_theta = e_theta[:: int(np.ceil(e_theta.size / 1024))]
    e_pow = np.exp(1j * np.outer(e_theta, np.arange(N + 1)))
    m_t = 64 * (N + 1)
    t_pow = np.exp(1j * np.outer(2.0 * np.pi * np.arange(m_t) / m_t, np.arange(N + 1)))

    def neg_ratio(x):
        a = x[: N + 1] + 1j * x[N + 1:]
        inside = np.abs(e_pow @ a).max()
        return -np.abs(t_pow @ a).max() / inside if inside > 0 else 0.0

    # the ratio is a quotient of maxima, so derivative-free search with a restart
    opts = {"xatol": 1e-10, "fatol": 1e-12, "maxiter": maxiter * (N + 1)}
    best_x, best = None, 0.0
    for _ in range(starts):
        x = rng.standard_normal(2 * (N + 1))
        for _ in range(2):
            res = minimize(neg_ratio, x, method="Nelder-Mead", options=opts)
            x = res.x / np.linalg.norm(res.x)
        if -res.fun > best:
            best, best_x = -res.fun, x.copy()

    # certify: exact outer max, inner max inflated by a Bernstein slack per cell
    a = best_x[: N + 1] + 1j * best_x[N + 1:]
    outer_max = poly_sup(a)
    pts = _cell_points(E, 8)
    inner = np.abs(poly_eval(a, np.exp(1j * pts))).max()
    spacing = 2.0 * np.pi / (8 * E.grid.n_grid)
    inner_upper = inner + 0.5 * spacing * N * outer_max
    return max(1.0, float(outer_max / inner_upper))


def turan_nazarov_check(
    q_spectrum: Spectrum, E: GridMask, c: float = NAZAROV_C, oversample: int | None = None
) -> TNReport:
    """Evaluate both sides of the Turan-Nazarov estimate for one ``q`` and set."""
    m_E = measure(E)
    if m_E <= 0:
        raise ContractViolation("Turan-Nazarov check needs a set of positive measure")
    q = from_spectrum(q_spectrum, E.grid)
    scale = float(np.abs(q_spectrum.coeffs).max())
    n_terms = int(np.count_nonzero(np.abs(q_spectrum.coeffs) > 1e-14 * scale)) if scale else 0
    fine = refine(q, oversample)
    lhs = sup_norm(q, oversample)
    restricted = mask_sup(fine, E)
    bound = (1.0 / (c * m_E)) ** max(n_terms - 1, 0) * restricted
    return TNReport(
        n_terms=n_terms, set_measure=m_E, lhs=lhs, restricted_sup=restricted,
        bound=bound, c_used=c,
    )


def random_set(grid, rng, min_measure: float, max_arcs: int = 2) -> GridMask:
    """Random arc, or union of up to ``max_arcs`` arcs, of measure ``>= min_measure``."""
    while True:
        k = int(rng.integers(1, max_arcs + 1))
        mask = GridMask(grid, np.zeros(grid.n_grid, dtype=bool))
        for _ in range(k):
            length = rng.uniform(min_measure / k, 1.0 / k) * 2.0 * math.pi
            mask = mask | GridMask.arc(grid, rng.uniform(0.0, 2.0 * math.pi), length)
        if measure(mask) >= min_measure and mask.count < grid.n_grid:
            return mask


def tn_corpus(
    grid,
    count: int = 1000,
    max_terms: int = 5,
    min_measure: float = 0.05,
    max_freq: int = 32,
    seed: int = 0,
) -> list[TNReport]:
    """Turan-Nazarov reports for random sparse polynomials on random sets.

    Each ``q`` has between 1 and ``max_terms`` nonzero coefficients at
    distinct frequencies in ``[-max_freq, max_freq]``.
    """
    if max_freq >= grid.n_grid // 2:
        raise ContractViolation("max_freq must stay below n_grid/2")
    rng = np.random.default_rng(seed)
    freqs = np.arange(-max_freq, max_freq + 1)
    out = []
    for _ in range(count):
        n = int(rng.integers(1, max_terms + 1))
        ks = rng.choice(freqs, size=n, replace=False)
        cs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        q = Spectrum.from_mapping(dict(zip(ks.tolist(), cs)), grid.n_grid)
        out.append(turan_nazarov_check(q, random_set(grid, rng, min_measure)))
    return out
