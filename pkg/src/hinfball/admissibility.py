"""Brackets for the admissibility threshold and the sandwich sweep.

For a unit-norm ``f`` in a constrained space, the infimum of admissible
epsilons is bracketed from both sides:

* below by ``(c * m(E_eta))**N * (1 - eta)``, maximized over a ladder of
  levels ``eta`` (the strong-violation witness beats this for every delta);
* above by ``sqrt(1 - rho**2)`` with ``rho`` the essential infimum of
  ``|f|`` (the parallelogram identity bounds every admissible ``g``).

The extremal construction ``f = z**N * F`` with a two-level outer ``F``
sits in the target class and realizes the upper bound exactly.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .circle import (
    TOL_SUP,
    BoundaryGrid,
    BoundarySample,
    GridMask,
    from_spectrum,
    min_modulus,
    refine,
    sup_norm,
)
from .constraints import (
    ConstraintSet,
    analytic_kernel_basis,
    fourier_constraints,
)
from .errors import ContractViolation, HinfballError
from .outer import MOLLIFY_WIDTH, make_outer, sublevel_set, two_level_modulus
from .witness import NAZAROV_C, strong_violation_witness

__all__ = [
    "DEFAULT_ETA_GRID",
    "DEFAULT_DELTA_LADDER",
    "LowerProvenance",
    "UpperProvenance",
    "AdmissibilityBracket",
    "SweepConfig",
    "SweepRow",
    "SweepReport",
    "theorem2_construction",
    "eps_upper",
    "eps_lower",
    "bracket",
    "probe_samples",
    "probe_admissibility",
    "run_sweep",
]

DEFAULT_ETA_GRID = tuple(float(x) for x in np.linspace(0.02, 0.98, 33))
DEFAULT_DELTA_LADDER = (0.1, 0.03, 0.01, 0.003, 0.001)
# keeps |f| <= eta on E robust to rounding in exp(log(eta))
_LEVEL_SHRINK = 1e-12
# FFT interpolation resolves |f| only to a few ulps; closer to 1 counts as 1
_UNIT_RESOLUTION = 64 * np.finfo(float).eps


class LowerProvenance(str, enum.Enum):
    NAZAROV_SWEEP = "NAZAROV_SWEEP"
    WITNESS_EMPIRICAL = "WITNESS_EMPIRICAL"
    NONE = "NONE"


class UpperProvenance(str, enum.Enum):
    PARALLELOGRAM = "PARALLELOGRAM"
    TRIVIAL_2 = "TRIVIAL_2"


@dataclass(frozen=True)
class AdmissibilityBracket:
    lower: float
    upper: float
    lower_provenance: LowerProvenance
    upper_provenance: UpperProvenance
    lower_eta: float | None = None

    def __post_init__(self):
        if not 0.0 <= self.lower <= self.upper <= 2.0:
            raise ContractViolation(
                f"bracket must satisfy 0 <= lower <= upper <= 2, got [{self.lower}, {self.upper}]"
            )


@dataclass(frozen=True)
class SweepConfig:
    N_values: tuple[int, ...] = (1, 2, 3)
    eta_values: tuple[float, ...] = (0.3, 0.5, 0.8)
    gamma_values: tuple[float, ...] = (0.25, 0.5, 0.75)
    delta_ladder: tuple[float, ...] = DEFAULT_DELTA_LADDER
    n_grid: int = 4096
    seed: int = 0
    trials_per_cell: int = 16
    oversample: int = 4
    width: int = MOLLIFY_WIDTH
    tol: float = 1e-9

    def __post_init__(self):
        for name in ("N_values", "eta_values", "gamma_values", "delta_ladder"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
        if any(int(N) != N or N < 1 for N in self.N_values):
            raise ContractViolation("N_values must be positive integers")
        for name in ("eta_values", "gamma_values"):
            if any(not 0.0 < v < 1.0 for v in getattr(self, name)):
                raise ContractViolation(f"{name} must lie in (0, 1)")
        d = self.delta_ladder
        if not d or any(x <= 0 for x in d) or any(b >= a for a, b in zip(d, d[1:])):
            raise ContractViolation("delta_ladder must be positive and strictly descending")
        if self.trials_per_cell < 0:
            raise ContractViolation("trials_per_cell must be nonnegative")
        BoundaryGrid(self.n_grid, self.oversample)

    @property
    def grid(self) -> BoundaryGrid:
        return BoundaryGrid(self.n_grid, self.oversample)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "SweepConfig":
        known = {f for f in cls.__dataclass_fields__}
        unknown = set(data) - known
        if unknown:
            raise ContractViolation(f"unknown sweep config keys: {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class SweepRow:
    N: int
    eta: float
    gamma: float
    lower_closed_form: float
    upper_closed_form: float
    bracket: AdmissibilityBracket | None = None
    sandwich_ok: bool = False
    witness_stats: list[dict] = field(default_factory=list)
    violation_count: int = 0
    probe_best: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SweepReport:
    config: SweepConfig
    rows: tuple[SweepRow, ...]

    @property
    def violations(self) -> int:
        return sum(r.violation_count for r in self.rows) + sum(
            1 for r in self.rows if not r.sandwich_ok
        )


def theorem2_construction(
    N: int,
    eta: float,
    gamma: float,
    E: GridMask | None = None,
    grid: BoundaryGrid | None = None,
    width: int = MOLLIFY_WIDTH,
) -> tuple[ConstraintSet, BoundarySample]:
    """``z**N`` times an outer function equal to ``eta`` on ``E`` and 1 off it.

    ``E`` defaults to the arc of measure ``gamma`` starting at angle 0.
    The smoothing sits outside ``E``, so ``|f| <= eta`` exactly on ``E``
    and ``eta <= |f| <= 1`` everywhere.
    """
    if int(N) != N or N < 1:
        raise ContractViolation(f"N must be a positive integer, got {N}")
    if not 0.0 < eta < 1.0 or not 0.0 < gamma < 1.0:
        raise ContractViolation("eta and gamma must lie in (0, 1)")
    if E is None:
        grid = grid or BoundaryGrid(4096)
        E = GridMask.arc(grid, 0.0, 2.0 * math.pi * gamma)
    else:
        grid = E.grid
        if abs(E.count / grid.n_grid - gamma) > 1.0 / grid.n_grid:
            raise ContractViolation("measure(E) must equal gamma within one grid cell")
    low = eta * (1.0 - _LEVEL_SHRINK)
    modulus = two_level_modulus(E, low, 1.0, width).modulus
    F = make_outer(modulus).boundary
    f = F * grid.points ** int(N)
    return fourier_constraints(int(N)), f


def eps_upper(f: BoundarySample, tol_sup: float = TOL_SUP) -> float:
    """``sqrt(1 - rho**2)`` with ``rho`` the oversampled minimum of ``|f|``.

    Any ``g`` with ``||f +- g|| < 1 + delta`` obeys
    ``|g|**2 <= (1 + delta)**2 - |f|**2`` pointwise, so every epsilon
    above this value is admissible whatever the constraints.  A minimum
    within 64 ulps of 1 is taken as 1, since the square root would
    otherwise turn interpolation rounding into a spurious 1e-8.
    """
    norm = sup_norm(f)
    if norm > 1.0 + tol_sup:
        raise ContractViolation(f"||f|| = {norm:.12g} exceeds 1 + tol_sup")
    rho = min(min_modulus(f), 1.0)
    if 1.0 - rho <= _UNIT_RESOLUTION:
        rho = 1.0
    return math.sqrt(max(0.0, 1.0 - rho * rho))


def eps_lower(
    f: BoundarySample, N: int, eta_grid=DEFAULT_ETA_GRID, tol_sup: float = TOL_SUP
) -> tuple[float, float | None]:
    """Best ``(c * m(E_eta))**N * (1 - eta)`` over ``eta_grid``.

    Returns ``(value, eta)``; ``eta`` is None when every sublevel set is
    empty.  Ties go to the first rung.
    """
    norm = sup_norm(f)
    if abs(norm - 1.0) > tol_sup:
        raise ContractViolation(f"f must have unit norm, got {norm:.12g}")
    best, best_eta = 0.0, None
    for eta in eta_grid:
        m = sublevel_set(f, float(eta)).measure
        value = (NAZAROV_C * m) ** N * (1.0 - eta)
        if value > best:
            best, best_eta = value, float(eta)
    return best, best_eta


def bracket(f: BoundarySample, N: int, eta_grid=DEFAULT_ETA_GRID) -> AdmissibilityBracket:
    lower, eta = eps_lower(f, N, eta_grid)
    upper = eps_upper(f)
    return AdmissibilityBracket(
        lower=lower,
        upper=upper,
        lower_provenance=LowerProvenance.NAZAROV_SWEEP if eta is not None else LowerProvenance.NONE,
        upper_provenance=UpperProvenance.PARALLELOGRAM,
        lower_eta=eta,
    )


def _largest_feasible_scale(f_fine, y_fine, delta, iterations=40) -> float:
    # t -> max ||f +- t y|| is convex and <= 1 + delta at t = 0
    limit = 1.0 + delta
    y_norm = np.abs(y_fine).max()
    lo, hi = 0.0, (2.0 + delta) / y_norm
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        worst = max(np.abs(f_fine + mid * y_fine).max(), np.abs(f_fine - mid * y_fine).max())
        if worst <= limit:
            lo = mid
        else:
            hi = mid
    return lo


def probe_samples(
    f: BoundarySample,
    phi_set: ConstraintSet,
    delta: float,
    trials: int,
    seed: int,
    max_degree: int = 32,
) -> np.ndarray:
    """``||t*y||`` for ``trials`` random feasible perturbations.

    Each ``y`` is a random analytic polynomial of degree ``<= max_degree``
    with a random decay rate, drawn from the null space of the
    constraints, and ``t`` is the largest scale keeping
    ``||f +- t*y|| <= 1 + delta``.
    """
    if delta <= 0:
        raise ContractViolation("delta must be positive")
    max_degree = min(max_degree, f.n // 2 - 1)
    basis = analytic_kernel_basis(phi_set, max_degree)
    rng = np.random.default_rng(seed)
    f_fine = refine(f)
    out = np.empty(trials)
    for i in range(trials):
        decay = rng.uniform(0.0, 0.5)
        weights = np.exp(-decay * np.arange(max_degree + 1))
        target = (rng.standard_normal(max_degree + 1) + 1j * rng.standard_normal(max_degree + 1)) * weights
        coeffs = basis @ (basis.conj().T @ target)
        if not np.any(np.abs(coeffs) > 0):
            coeffs = basis[:, rng.integers(basis.shape[1])]
        y = from_spectrum(dict(enumerate(coeffs)), f.grid)
        y_fine = refine(y)
        t = _largest_feasible_scale(f_fine, y_fine, delta)
        out[i] = t * np.abs(y_fine).max()
    return out


def probe_admissibility(
    f: BoundarySample,
    phi_set: ConstraintSet,
    eps: float,
    delta: float,
    trials: int,
    seed: int,
) -> float:
    """Largest ``||t*y||`` found by :func:`probe_samples`.

    A result ``>= eps`` certifies that ``eps`` is not admissible at this
    ``delta``; ``eps`` itself is only the comparison threshold.
    """
    samples = probe_samples(f, phi_set, delta, trials, seed)
    return float(samples.max()) if samples.size else 0.0


def _run_cell(args) -> SweepRow:
    config, N, eta, gamma, cell_seed = args
    lower_closed_form = (NAZAROV_C * gamma) ** N * (1.0 - eta)
    upper_closed_form = math.sqrt(1.0 - eta * eta)
    try:
        phi, f = theorem2_construction(N, eta, gamma, grid=config.grid, width=config.width)
        ladder = tuple(sorted(set(DEFAULT_ETA_GRID) | {float(eta)}))
        br = bracket(f, N, ladder)
        stats = []
        violations = 0
        for delta in config.delta_ladder:
            w = strong_violation_witness(f, phi, eta, delta, width=config.width)
            ok = w.within_bound and w.target_met
            violations += 0 if ok else 1
            stats.append({
                "delta": delta,
                "norm_g": w.norm_g,
                "norm_plus": w.norm_plus,
                "norm_minus": w.norm_minus,
                "target": w.target_bound,
                "membership": w.membership,
                "ok": ok,
            })
        probe_best = None
        if config.trials_per_cell:
            delta = config.delta_ladder[-1]
            samples = probe_samples(f, phi, delta, config.trials_per_cell, cell_seed)
            probe_best = float(samples.max())
            # parallelogram bound on every feasible perturbation
            rho = min(min_modulus(f), 1.0)
            if probe_best > math.sqrt((1.0 + delta) ** 2 - rho * rho) + config.tol:
                violations += 1
        tol = config.tol
        sandwich_ok = (
            lower_closed_form <= br.lower + tol
            and br.lower <= br.upper + tol
            and br.upper <= upper_closed_form + tol
        )
        return SweepRow(N, eta, gamma, lower_closed_form, upper_closed_form, br,
                        sandwich_ok, stats, violations, probe_best)
    except HinfballError as exc:
        return SweepRow(N, eta, gamma, lower_closed_form, upper_closed_form,
                        error=f"{type(exc).__name__}: {exc}")


def run_sweep(config: SweepConfig, max_workers: int | None = None) -> SweepReport:
    """Build, bracket and witness every ``(N, eta, gamma)`` cell.

    Cells are independent; with ``max_workers`` they run in a process
    pool, and rows keep the grid order either way.
    """
    cells = []
    index = 0
    for N in config.N_values:
        for eta in config.eta_values:
            for gamma in config.gamma_values:
                cells.append((config, int(N), float(eta), float(gamma), config.seed + index))
                index += 1
    if max_workers and max_workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=max_workers) as pool:
            rows = list(pool.map(_run_cell, cells))
    else:
        rows = [_run_cell(c) for c in cells]
    return SweepReport(config, tuple(rows))
