"""Finite constraint sets on H-infinity and the rank-nullity multiplier.

A functional is given by a trigonometric-polynomial density ``psi`` and
acts through ``phi(h) = integral of h*psi dm``.  In Fourier terms
``phi(h) = sum_k psi_hat(k) * h_hat(-k)``, which the grid quadrature
reproduces exactly for every sample.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.linalg import null_space
from scipy.optimize import minimize_scalar

from .circle import BoundarySample, sup_norm
from .errors import ConditioningError, ContractViolation, DegenerateInputError

__all__ = [
    "TOL_KERNEL",
    "Functional",
    "ConstraintSet",
    "KernelPolynomial",
    "apply",
    "fourier_constraints",
    "random_constraints",
    "kernel_polynomial",
    "membership_defect",
    "analytic_kernel_basis",
    "poly_eval",
    "poly_sup",
]

TOL_KERNEL = 1e-9


@dataclass(frozen=True)
class Functional:
    """``h -> integral of h * psi dm`` for a finitely supported density."""

    density: tuple[tuple[int, complex], ...]

    def __init__(self, density: Mapping[int, complex] | Sequence[tuple[int, complex]]):
        items = density.items() if isinstance(density, Mapping) else density
        merged: dict[int, complex] = {}
        for k, c in items:
            merged[int(k)] = merged.get(int(k), 0j) + complex(c)
        cleaned = tuple(sorted((k, c) for k, c in merged.items() if c != 0))
        if not cleaned:
            raise ContractViolation("functional density must be nonzero")
        object.__setattr__(self, "density", cleaned)

    @property
    def degree(self) -> int:
        return max(abs(k) for k, _ in self.density)

    def as_dict(self) -> dict[int, complex]:
        return dict(self.density)

    def __call__(self, h: BoundarySample) -> complex:
        return apply(self, h)


@dataclass(frozen=True)
class ConstraintSet:
    functionals: tuple[Functional, ...]

    def __post_init__(self):
        fs = tuple(self.functionals)
        if not fs:
            raise ContractViolation("a constraint set needs at least one functional")
        if len(set(fs)) != len(fs):
            raise ContractViolation("functionals in a constraint set must be distinct")
        object.__setattr__(self, "functionals", fs)

    def __len__(self) -> int:
        return len(self.functionals)

    def __iter__(self):
        return iter(self.functionals)

    @property
    def N(self) -> int:
        return len(self.functionals)


@dataclass(frozen=True)
class KernelPolynomial:
    coeffs: np.ndarray
    sup_norm: float
    residual: float

    @property
    def degree(self) -> int:
        nz = np.flatnonzero(np.abs(self.coeffs) > 1e-14)
        return int(nz[-1]) if nz.size else -1

    def sample(self, grid) -> BoundarySample:
        return BoundarySample(grid, poly_eval(self.coeffs, grid.points))


def apply(phi: Functional, h: BoundarySample) -> complex:
    spec = h.spectrum
    return complex(sum(c * spec[-k] for k, c in phi.density))


def fourier_constraints(N: int) -> ConstraintSet:
    """``h -> h_hat(k-1)`` for ``k = 1..N``; annihilates ``z**N * H-infinity``."""
    if N < 1:
        raise ContractViolation(f"N must be >= 1, got {N}")
    return ConstraintSet(tuple(Functional({-(k - 1): 1.0}) for k in range(1, N + 1)))


def random_constraints(N: int, degree: int, seed: int) -> ConstraintSet:
    """``N`` random densities supported on ``[-degree, degree]``."""
    if N < 1 or degree < 0:
        raise ContractViolation("need N >= 1 and degree >= 0")
    rng = np.random.default_rng(seed)
    freqs = range(-degree, degree + 1)
    out: list[Functional] = []
    while len(out) < N:
        c = rng.standard_normal(2 * degree + 1) + 1j * rng.standard_normal(2 * degree + 1)
        phi = Functional(dict(zip(freqs, c)))
        if phi not in out:
            out.append(phi)
    return ConstraintSet(tuple(out))


def membership_defect(h: BoundarySample, phi_set: ConstraintSet) -> float:
    return max(abs(apply(phi, h)) for phi in phi_set)


def poly_eval(coeffs, z) -> np.ndarray:
    """Evaluate ``sum_j coeffs[j] * z**j``."""
    return np.polynomial.polynomial.polyval(z, np.asarray(coeffs))


def poly_sup(coeffs) -> float:
    """Maximum of ``|p|`` on the circle.

    Samples ``64*(N+1)`` equispaced angles, then polishes the three
    largest local maxima with a bounded scalar search.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    m = 64 * len(coeffs)
    theta = 2.0 * np.pi * np.arange(m) / m
    vals = np.abs(poly_eval(coeffs, np.exp(1j * theta)))
    best = float(vals.max())
    if len(coeffs) <= 1:
        return best
    peaks = np.flatnonzero((vals >= np.roll(vals, 1)) & (vals >= np.roll(vals, -1)))
    h = 2.0 * np.pi / m
    for j in peaks[np.argsort(vals[peaks])[::-1][:3]]:
        res = minimize_scalar(
            lambda t: -abs(poly_eval(coeffs, np.exp(1j * t))),
            bounds=(theta[j] - h, theta[j] + h),
            method="bounded",
            options={"xatol": 1e-13},
        )
        best = max(best, float(-res.fun))
    return best


def _constraint_matrix(G: BoundarySample, phi_set: ConstraintSet, n_cols: int) -> np.ndarray:
    # T[j, i] = phi_j(G z^i) = sum_k psi_hat_j(k) * G_hat(-k - i)
    n = G.n
    c = G.spectrum.coeffs
    T = np.zeros((len(phi_set), n_cols), dtype=complex)
    for j, phi in enumerate(phi_set):
        for k, a in phi.density:
            idx = (-k - np.arange(n_cols)) % n
            T[j] += a * c[idx]
    return T


def kernel_polynomial(
    G: BoundarySample, phi_set: ConstraintSet, tol_kernel: float = TOL_KERNEL
) -> KernelPolynomial:
    """Unit-sup polynomial ``p`` of degree ``<= N`` with ``G*p`` annihilated by ``phi_set``.

    The ``N x (N+1)`` matrix ``T[j, i] = phi_j(G z^i)`` always has a
    nontrivial kernel.  The right singular vector belonging to the first
    vanishing singular value is taken, rotated so its first nonzero
    coefficient is real and positive, and scaled to unit sup norm.
    """
    N = len(phi_set)
    T = _constraint_matrix(G, phi_set, N + 1)
    _, s, vh = np.linalg.svd(T, full_matrices=True)
    s_full = np.concatenate([s, np.zeros(N + 1 - len(s))])
    scale = s_full[0] if s_full[0] > 0 else 1.0
    rank = int(np.count_nonzero(s_full > 1e-13 * scale))
    alpha = vh[min(rank, N)].conj()

    lead = alpha[np.flatnonzero(np.abs(alpha) > 1e-12 * np.abs(alpha).max())[0]]
    alpha = alpha * (abs(lead) / lead)
    alpha = alpha / poly_sup(alpha)

    g = G * BoundarySample(G.grid, poly_eval(alpha, G.grid.points))
    residual = membership_defect(g, phi_set)
    bound = tol_kernel * max(1.0, sup_norm(G))
    if residual > bound:
        raise ConditioningError(
            f"kernel residual {residual:.3e} exceeds tolerance {bound:.3e}"
        )
    return KernelPolynomial(coeffs=alpha, sup_norm=poly_sup(alpha), residual=residual)


def analytic_kernel_basis(phi_set: ConstraintSet, max_degree: int) -> np.ndarray:
    """Orthonormal basis of polynomials of degree ``<= max_degree`` annihilated by ``phi_set``.

    Columns are coefficient vectors; ``phi(z**k) = psi_hat(-k)``.
    """
    A = np.zeros((len(phi_set), max_degree + 1), dtype=complex)
    for j, phi in enumerate(phi_set):
        for k, a in phi.density:
            if -max_degree <= k <= 0:
                A[j, -k] += a
    basis = null_space(A)
    if basis.shape[1] == 0:
        raise DegenerateInputError(
            "constraint set leaves no analytic polynomial of the requested degree",
            kind=DegenerateInputError.EMPTY_KERNEL,
        )
    return basis
