"""Uniform-grid boundary functions on the unit circle.

A boundary function is stored through its values at the ``n`` points
``exp(2*pi*i*j/n)``.  Haar measure becomes the counting measure divided by
``n``, so the k-th Fourier coefficient is the discrete quadrature

    c(k) = (1/n) * sum_j conj(zeta_j)**k * values[j]

which is exact for trigonometric polynomials of degree below ``n/2``.
Frequencies are indexed in ``[-n/2, n/2)``; the bin ``-n/2`` aliases
``+n/2`` and is treated as having no definite sign.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator, Mapping, Union

import numpy as np

from .errors import ContractViolation, FrequencyRangeError

__all__ = [
    "TOL_SUP",
    "BoundaryGrid",
    "BoundarySample",
    "Spectrum",
    "GridMask",
    "to_spectrum",
    "from_spectrum",
    "refine",
    "sup_norm",
    "min_modulus",
    "conjugate_function",
    "analyticity_defect",
    "measure",
]

#: Slack added to every "<= 1" style check made on oversampled maxima.
TOL_SUP = 1e-6


@dataclass(frozen=True)
class BoundaryGrid:
    """``n_grid`` equispaced points on the circle plus a refinement factor."""

    n_grid: int
    oversample: int = 4

    def __post_init__(self):
        n = self.n_grid
        if not isinstance(n, (int, np.integer)) or n < 64 or n & (n - 1):
            raise ContractViolation(f"n_grid must be a power of two >= 64, got {n!r}")
        if not isinstance(self.oversample, (int, np.integer)) or self.oversample < 1:
            raise ContractViolation(f"oversample must be a positive integer, got {self.oversample!r}")

    @property
    def angles(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_grid) / self.n_grid

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * self.angles)

    @property
    def frequencies(self) -> np.ndarray:
        """Integer frequency of each FFT bin, in numpy's ordering."""
        return np.fft.fftfreq(self.n_grid, d=1.0 / self.n_grid).astype(int)

    def check_frequency(self, k: int) -> None:
        half = self.n_grid // 2
        if not -half <= k < half:
            raise FrequencyRangeError(
                f"frequency {k} outside [{-half}, {half}) for n_grid={self.n_grid}"
            )

    def sample(self, values) -> "BoundarySample":
        return BoundarySample(self, values)

    def evaluate(self, func) -> "BoundarySample":
        """Sample ``func(zeta)`` at the grid points."""
        return BoundarySample(self, func(self.points))


@dataclass(frozen=True, eq=False)
class BoundarySample:
    """Values of a boundary function at the points of ``grid``.

    The array is copied and frozen; the spectrum is computed lazily and
    cached (the computation is idempotent, so concurrent first access is
    harmless).
    """

    grid: BoundaryGrid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, copy=True)
        if vals.dtype.kind not in "fc":
            vals = vals.astype(float)
        if vals.shape != (self.grid.n_grid,):
            raise ContractViolation(
                f"expected {self.grid.n_grid} values, got shape {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise ContractViolation("boundary sample contains NaN or Inf")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    @property
    def n(self) -> int:
        return self.grid.n_grid

    @property
    def is_real(self) -> bool:
        return self.values.dtype.kind == "f"

    @cached_property
    def spectrum(self) -> "Spectrum":
        return Spectrum(np.fft.fft(self.values) / self.n)

    def modulus(self) -> np.ndarray:
        return np.abs(self.values)

    def with_values(self, values) -> "BoundarySample":
        return BoundarySample(self.grid, values)

    def __add__(self, other: "BoundarySample") -> "BoundarySample":
        _same_grid(self, other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "BoundarySample") -> "BoundarySample":
        _same_grid(self, other)
        return self.with_values(self.values - other.values)

    def __mul__(self, other) -> "BoundarySample":
        if isinstance(other, BoundarySample):
            _same_grid(self, other)
            return self.with_values(self.values * other.values)
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __neg__(self) -> "BoundarySample":
        return self.with_values(-self.values)


def _same_grid(a: BoundarySample, b: BoundarySample) -> None:
    if a.grid.n_grid != b.grid.n_grid:
        raise ContractViolation(
            f"grid mismatch: {a.grid.n_grid} vs {b.grid.n_grid} points"
        )


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Fourier coefficients on a grid, stored densely in FFT order."""

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex, copy=True)
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    @property
    def n(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, k: int) -> complex:
        half = self.n // 2
        if not -half <= k < half:
            raise FrequencyRangeError(f"frequency {k} outside [{-half}, {half})")
        return complex(self.coeffs[k % self.n])

    def items(self, tol: float = 0.0) -> Iterator[tuple[int, complex]]:
        """Yield ``(k, c_k)`` for ``|c_k| > tol`` in increasing ``k``."""
        half = self.n // 2
        for k in range(-half, half):
            c = self.coeffs[k % self.n]
            if abs(c) > tol:
                yield k, complex(c)

    def support(self, tol: float = 0.0) -> list[int]:
        return [k for k, _ in self.items(tol)]

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, complex], n: int) -> "Spectrum":
        grid_check = BoundaryGrid(n)
        c = np.zeros(n, dtype=complex)
        for k, v in mapping.items():
            grid_check.check_frequency(int(k))
            c[int(k) % n] += v
        return cls(c)


SpectrumLike = Union[Spectrum, Mapping[int, complex]]


@dataclass(frozen=True, eq=False)
class GridMask:
    """Boolean membership of each grid point in a subset of the circle."""

    grid: BoundaryGrid
    member: np.ndarray

    def __post_init__(self):
        m = np.array(self.member, dtype=bool, copy=True)
        if m.shape != (self.grid.n_grid,):
            raise ContractViolation(
                f"mask must have {self.grid.n_grid} entries, got shape {m.shape}"
            )
        m.flags.writeable = False
        object.__setattr__(self, "member", m)

    @property
    def count(self) -> int:
        return int(np.count_nonzero(self.member))

    @classmethod
    def arc(cls, grid: BoundaryGrid, start: float, length: float) -> "GridMask":
        """Grid points whose angle lies in ``[start, start + length)``.

        ``length`` is an angle; the number of points is ``ceil(length/h)``
        so the mask never has smaller measure than the arc it stands for.
        """
        n = grid.n_grid
        h = 2.0 * np.pi / n
        count = min(n, int(np.ceil(length / h - 1e-9)))
        first = int(np.ceil(start / h - 1e-9))
        idx = (first + np.arange(count)) % n
        member = np.zeros(n, dtype=bool)
        member[idx] = True
        return cls(grid, member)

    def __or__(self, other: "GridMask") -> "GridMask":
        return GridMask(self.grid, self.member | other.member)

    def __and__(self, other: "GridMask") -> "GridMask":
        return GridMask(self.grid, self.member & other.member)

    def __invert__(self) -> "GridMask":
        return GridMask(self.grid, ~self.member)


def to_spectrum(s: BoundarySample) -> Spectrum:
    """Fourier coefficients of ``s`` by exact grid quadrature."""
    return s.spectrum


def from_spectrum(sp: SpectrumLike, grid: BoundaryGrid) -> BoundarySample:
    """Inverse of :func:`to_spectrum`.

    ``sp`` may be a dense :class:`Spectrum` of matching size or a sparse
    mapping ``{k: c_k}``; frequencies outside ``[-n/2, n/2)`` raise
    :class:`FrequencyRangeError`.
    """
    if isinstance(sp, Spectrum):
        if sp.n != grid.n_grid:
            raise FrequencyRangeError(
                f"spectrum has {sp.n} bins but grid has {grid.n_grid} points"
            )
        coeffs = sp.coeffs
    else:
        coeffs = Spectrum.from_mapping(sp, grid.n_grid).coeffs
    return BoundarySample(grid, np.fft.ifft(coeffs) * grid.n_grid)


def refine(s: BoundarySample, oversample: int | None = None) -> np.ndarray:
    """Band-limited interpolation of ``s`` onto ``oversample * n`` points.

    The Nyquist bin is kept at ``-n/2`` so that every original grid value
    is reproduced exactly at indices ``oversample * j``.
    """
    m = s.grid.oversample if oversample is None else int(oversample)
    if m < 1:
        raise ContractViolation("oversample must be >= 1")
    if m == 1:
        return np.asarray(s.values)
    n = s.n
    c = np.fft.fft(s.values)
    padded = np.zeros(n * m, dtype=complex)
    padded[: n // 2] = c[: n // 2]
    padded[-(n // 2):] = c[n // 2:]
    return np.fft.ifft(padded) * m


def sup_norm(s: BoundarySample, oversample: int | None = None) -> float:
    """Oversampled surrogate for the essential supremum of ``|s|``."""
    fine = np.abs(refine(s, oversample))
    return float(max(fine.max(), np.abs(s.values).max()))


def min_modulus(s: BoundarySample, oversample: int | None = None) -> float:
    """Oversampled surrogate for the essential infimum of ``|s|``."""
    fine = np.abs(refine(s, oversample))
    return float(min(fine.min(), np.abs(s.values).min()))


def _sign_multiplier(grid: BoundaryGrid) -> np.ndarray:
    k = grid.frequencies
    sgn = np.sign(k).astype(float)
    sgn[grid.n_grid // 2] = 0.0  # Nyquist bin has no sign
    return sgn


def conjugate_function(u: BoundarySample) -> BoundarySample:
    """Harmonic conjugate of a real boundary function.

    Multiplies the spectrum by ``-i*sgn(k)``; the mean and the Nyquist bin
    are dropped, so ``u + i*conjugate_function(u)`` has no negative
    frequencies.
    """
    vals = np.asarray(u.values)
    if vals.dtype.kind == "c":
        scale = max(1.0, float(np.abs(vals).max()))
        if np.abs(vals.imag).max() > 1e-13 * scale:
            raise ContractViolation("conjugate_function requires a real-valued sample")
        vals = vals.real
    c = np.fft.fft(vals)
    out = np.fft.ifft(c * (-1j * _sign_multiplier(u.grid))).real
    return BoundarySample(u.grid, out)


def analyticity_defect(s: BoundarySample) -> float:
    """Largest ``|c(k)|`` over strictly negative frequencies ``-n/2 < k < 0``."""
    c = s.spectrum.coeffs
    neg = c[s.n // 2 + 1:]
    return float(np.abs(neg).max()) if neg.size else 0.0


def measure(mask: GridMask) -> float:
    """Normalized Haar measure of a grid mask."""
    return mask.count / mask.grid.n_grid
