import math

import numpy as np
import pytest

from hinfball.admissibility import (
    AdmissibilityBracket,
    LowerProvenance,
    SweepConfig,
    UpperProvenance,
    bracket,
    eps_lower,
    eps_upper,
    probe_admissibility,
    probe_samples,
    run_sweep,
    theorem2_construction,
)
from hinfball.circle import BoundaryGrid, GridMask, analyticity_defect, min_modulus, sup_norm
from hinfball.constraints import fourier_constraints, membership_defect
from hinfball.errors import ContractViolation, DegenerateInputError
from hinfball.functions import blaschke_product
from hinfball.outer import make_outer
from hinfball.witness import NAZAROV_C

GRID = BoundaryGrid(1024)


@pytest.mark.parametrize("N,eta,gamma", [(1, 0.5, 0.5), (2, 0.3, 0.25), (3, 0.8, 0.75)])
def test_theorem2_construction(N, eta, gamma):
    phis, f = theorem2_construction(N, eta, gamma, grid=GRID)
    assert sup_norm(f) == pytest.approx(1.0, abs=1e-9)
    assert min_modulus(f) == pytest.approx(eta, abs=1e-9)
    assert membership_defect(f, phis) < 1e-12
    assert analyticity_defect(f) < 1e-10
    E = GridMask.arc(GRID, 0.0, 2 * math.pi * gamma)
    assert np.all(np.abs(f.values[E.member]) <= eta)


def test_theorem2_custom_set_and_validation():
    E = GridMask.arc(GRID, 1.0, 2 * math.pi * 0.25)
    _, f = theorem2_construction(1, 0.5, 0.25, E=E)
    assert np.all(np.abs(f.values[E.member]) <= 0.5)
    with pytest.raises(ContractViolation):
        theorem2_construction(1, 0.5, 0.5, E=E)
    with pytest.raises(ContractViolation):
        theorem2_construction(0, 0.5, 0.5, grid=GRID)
    with pytest.raises(ContractViolation):
        theorem2_construction(1, 1.5, 0.5, grid=GRID)


def test_eps_upper_values():
    _, f = theorem2_construction(1, 0.5, 0.5, grid=GRID)
    assert eps_upper(f) == pytest.approx(math.sqrt(0.75), abs=1e-9)
    assert eps_upper(blaschke_product([0.5, 0.1j], GRID)) <= 1e-8
    assert eps_upper(GRID.evaluate(lambda z: (1 + z) / 2)) == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(ContractViolation):
        eps_upper(GRID.evaluate(lambda z: 2 * z))


def test_eps_upper_antitone():
    base = np.exp(0.2 * np.cos(GRID.angles))
    f2 = make_outer(GRID.sample(0.5 * base / base.max())).boundary
    f1 = make_outer(GRID.sample(0.8 * base / base.max())).boundary
    assert eps_upper(f1) <= eps_upper(f2)


def test_eps_lower_values():
    _, f = theorem2_construction(1, 0.5, 0.5, grid=GRID)
    value, eta = eps_lower(f, 1, (0.5,))
    assert value == pytest.approx(NAZAROV_C * 0.5 * 0.5, rel=0.05)
    assert value >= NAZAROV_C * 0.5 * 0.5
    assert eta == 0.5
    assert eps_lower(blaschke_product([0.3], GRID), 2) == (0.0, None)
    with pytest.raises(ContractViolation):
        eps_lower(GRID.evaluate(lambda z: 0.5 * z), 1)


def test_eps_lower_monotone_in_measure():
    _, f_small = theorem2_construction(2, 0.5, 0.25, grid=GRID)
    _, f_big = theorem2_construction(2, 0.5, 0.5, grid=GRID)
    assert eps_lower(f_big, 2)[0] >= eps_lower(f_small, 2)[0]


def test_bracket_provenance():
    _, f = theorem2_construction(2, 0.3, 0.5, grid=GRID)
    br = bracket(f, 2)
    assert br.lower_provenance is LowerProvenance.NAZAROV_SWEEP
    assert br.upper_provenance is UpperProvenance.PARALLELOGRAM
    assert 0 < br.lower <= br.upper
    br = bracket(blaschke_product([0.2], GRID), 1)
    assert br.lower_provenance is LowerProvenance.NONE
    with pytest.raises(ContractViolation):
        AdmissibilityBracket(0.5, 0.2, LowerProvenance.NONE, UpperProvenance.PARALLELOGRAM)


def test_probe_respects_parallelogram_bound():
    phis, f = theorem2_construction(1, 0.5, 0.5, grid=GRID)
    s = probe_samples(f, phis, 0.01, 50, seed=0)
    assert s.shape == (50,)
    assert np.all(s <= math.sqrt(1.01**2 - 0.25) + 1e-6)
    assert np.all(s > 0)


def test_probe_deterministic_and_seeded():
    phis, f = theorem2_construction(2, 0.5, 0.5, grid=GRID)
    a = probe_admissibility(f, phis, 0.1, 0.01, 20, seed=4)
    b = probe_admissibility(f, phis, 0.1, 0.01, 20, seed=4)
    assert a == b
    assert a != probe_admissibility(f, phis, 0.1, 0.01, 20, seed=5)


def test_probe_never_beats_upper_bound():
    phis, f = theorem2_construction(1, 0.5, 0.5, grid=GRID)
    best = probe_admissibility(f, phis, eps_upper(f) + 0.01, 0.01, 100, seed=1)
    assert best < eps_upper(f) + 0.01


def test_probe_on_inner_is_small():
    B = blaschke_product([0.5, -0.2 + 0.3j], GRID)
    best = probe_admissibility(B, fourier_constraints(1), 0.1, 1e-3, 50, seed=0)
    assert best <= math.sqrt(1.001**2 - 1) + 1e-6


def test_probe_errors():
    phis, f = theorem2_construction(1, 0.5, 0.5, grid=GRID)
    with pytest.raises(ContractViolation):
        probe_samples(f, phis, 0.0, 5, 0)
    with pytest.raises(DegenerateInputError):
        probe_samples(f, fourier_constraints(40), 0.01, 5, 0, max_degree=16)


def test_sweep_config_roundtrip_and_validation():
    cfg = SweepConfig(N_values=[1], eta_values=[0.5], gamma_values=[0.5])
    assert SweepConfig.from_dict(cfg.to_dict()) == cfg
    with pytest.raises(ContractViolation):
        SweepConfig.from_dict({"nope": 1})
    with pytest.raises(ContractViolation):
        SweepConfig(delta_ladder=(0.01, 0.1))
    with pytest.raises(ContractViolation):
        SweepConfig(eta_values=(1.0,))
    with pytest.raises(ContractViolation):
        SweepConfig(n_grid=1000)


def test_sweep_single_cell():
    cfg = SweepConfig(N_values=(1,), eta_values=(0.5,), gamma_values=(0.5,), n_grid=1024,
                      trials_per_cell=4)
    rep = run_sweep(cfg)
    assert len(rep.rows) == 1
    row = rep.rows[0]
    assert row.sandwich_ok and row.error is None
    assert rep.violations == 0
    assert len(row.witness_stats) == len(cfg.delta_ladder)
    assert row.lower_closed_form == pytest.approx(0.01806, abs=1e-5)
    assert row.upper_closed_form == pytest.approx(math.sqrt(0.75))


def test_sweep_empty_and_errors():
    assert run_sweep(SweepConfig(N_values=())).rows == ()
    # a ramp wider than the complement of E empties the core: error row, not a crash
    cfg = SweepConfig(N_values=(1,), eta_values=(0.5,), gamma_values=(0.99,), n_grid=64,
                      width=32, trials_per_cell=0)
    rep = run_sweep(cfg)
    assert rep.rows[0].error is not None
    assert rep.violations == 1


def test_sweep_parallel_matches_serial():
    cfg = SweepConfig(N_values=(1, 2), eta_values=(0.5,), gamma_values=(0.25, 0.5),
                      n_grid=1024, trials_per_cell=3)
    a, b = run_sweep(cfg), run_sweep(cfg, max_workers=2)
    assert [r.bracket for r in a.rows] == [r.bracket for r in b.rows]
    assert [r.probe_best for r in a.rows] == [r.probe_best for r in b.rows]
