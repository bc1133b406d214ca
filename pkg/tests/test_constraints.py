import numpy as np
import pytest

from hinfball.circle import BoundaryGrid, from_spectrum
from hinfball.constraints import (
    ConstraintSet,
    Functional,
    analytic_kernel_basis,
    apply,
    fourier_constraints,
    kernel_polynomial,
    membership_defect,
    poly_eval,
    poly_sup,
    random_constraints,
)
from hinfball.errors import ContractViolation, DegenerateInputError
from hinfball.outer import make_outer

GRID = BoundaryGrid(512)


def test_functional_merges_and_sorts():
    phi = Functional([(2, 1.0), (-1, 2.0), (2, 0.5)])
    assert phi.density == ((-1, 2.0), (2, 1.5))
    assert phi.degree == 2
    with pytest.raises(ContractViolation):
        Functional({3: 0.0})


def test_constraint_set_distinct():
    phi = Functional({0: 1.0})
    with pytest.raises(ContractViolation):
        ConstraintSet((phi, Functional({0: 1.0})))
    with pytest.raises(ContractViolation):
        ConstraintSet(())


def test_fourier_constraints_read_coefficients():
    h = from_spectrum({0: 3.0, 1: -2.0, 2: 1j, 5: 7.0}, GRID)
    phis = fourier_constraints(3)
    vals = [apply(phi, h) for phi in phis]
    np.testing.assert_allclose(vals, [3.0, -2.0, 1j], atol=1e-14)
    assert membership_defect(GRID.evaluate(lambda z: z**3 * (1 + z)), phis) < 1e-14


def test_functional_matches_quadrature():
    phi = Functional({-2: 0.5 + 1j, 1: -0.3})
    h = GRID.evaluate(lambda z: np.exp(z))
    psi = 0.5 + 1j
    psi_vals = psi * GRID.points**-2 - 0.3 * GRID.points
    direct = np.mean(h.values * psi_vals)
    assert apply(phi, h) == pytest.approx(direct, abs=1e-13)


def test_random_constraints_reproducible():
    a = random_constraints(3, 4, seed=7)
    b = random_constraints(3, 4, seed=7)
    assert a == b
    assert a != random_constraints(3, 4, seed=8)
    assert all(phi.degree <= 4 for phi in a)


def test_poly_sup_matches_dense_sampling():
    rng = np.random.default_rng(0)
    for _ in range(10):
        c = rng.standard_normal(6) + 1j * rng.standard_normal(6)
        z = np.exp(2j * np.pi * np.arange(200_000) / 200_000)
        dense = np.abs(poly_eval(c, z)).max()
        assert poly_sup(c) == pytest.approx(dense, rel=1e-8)
        assert poly_sup(c) >= dense - 1e-12


@pytest.mark.parametrize("N", [1, 2, 4])
def test_kernel_polynomial_fourier(N):
    G = make_outer(GRID.evaluate(lambda z: 1.5 + np.real(z))).boundary
    p = kernel_polynomial(G, fourier_constraints(N))
    assert p.sup_norm == pytest.approx(1.0)
    assert p.degree <= N
    g = G * p.sample(GRID)
    assert membership_defect(g, fourier_constraints(N)) < 1e-12
    # fourier constraints force G*p to vanish to order N at 0
    assert np.allclose(p.coeffs[:N], 0, atol=1e-12)


def test_kernel_polynomial_random_constraints():
    G = make_outer(GRID.evaluate(lambda z: 2.0 + np.imag(z))).boundary
    phis = random_constraints(4, 6, seed=11)
    p = kernel_polynomial(G, phis)
    g = G * p.sample(GRID)
    assert np.abs(g.values).max() > 1e-3
    assert membership_defect(g, phis) < 1e-9
    # leading nonzero coefficient is real positive
    lead = p.coeffs[np.flatnonzero(np.abs(p.coeffs) > 1e-14)[0]]
    assert abs(lead.imag) <= 1e-15 * abs(lead) and lead.real > 0


def test_kernel_polynomial_deterministic():
    G = make_outer(GRID.evaluate(lambda z: 2.0 + np.real(z**2))).boundary
    phis = random_constraints(3, 5, seed=2)
    a, b = kernel_polynomial(G, phis), kernel_polynomial(G, phis)
    np.testing.assert_array_equal(a.coeffs, b.coeffs)


def test_analytic_kernel_basis():
    phis = fourier_constraints(2)
    B = analytic_kernel_basis(phis, 5)
    assert B.shape[1] == 4
    # the first two coefficients vanish for every basis vector
    np.testing.assert_allclose(B[:2], 0, atol=1e-14)
    with pytest.raises(DegenerateInputError):
        analytic_kernel_basis(fourier_constraints(4), 3)
