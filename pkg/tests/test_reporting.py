import json
import math

import numpy as np
import pytest

from hinfball import __version__
from hinfball.admissibility import SweepConfig, run_sweep
from hinfball.circle import BoundaryGrid
from hinfball.constraints import Functional, random_constraints
from hinfball.errors import ContractViolation
from hinfball.functions import FunctionKind, FunctionSpec, build_function, poly_fraction
from hinfball.reporting import (
    SWEEP_CSV_COLUMNS,
    complex_from_record,
    dumps,
    envelope,
    functional_from_record,
    sweep_csv,
    to_jsonable,
)

GRID = BoundaryGrid(256)


def test_complex_roundtrip_is_bit_exact():
    z = complex(0.1 + 1e-17, -math.pi)
    rec = json.loads(json.dumps(to_jsonable(z)))
    assert complex_from_record(rec) == z


def test_nonfinite_become_null():
    assert to_jsonable(float("nan")) is None
    assert to_jsonable([1.0, float("inf")]) == [1.0, None]
    assert dumps({"a": to_jsonable(float("nan"))}).strip() == '{\n  "a": null\n}'


def test_functional_roundtrip():
    for phi in random_constraints(3, 4, seed=0):
        rec = json.loads(json.dumps(to_jsonable(phi)))
        assert functional_from_record(rec) == phi
    assert to_jsonable(Functional({-1: 2j})) == [[-1, 0.0, 2.0]]


def test_envelope_shape():
    doc = envelope({"x": 1}, {"y": np.float64(2.0)})
    assert doc == {"tool_version": __version__, "config_echo": {"x": 1}, "results": {"y": 2.0}}


def test_unserializable():
    with pytest.raises(TypeError):
        to_jsonable(object())


def test_sweep_csv_columns():
    cfg = SweepConfig(N_values=(1,), eta_values=(0.5,), gamma_values=(0.5,), n_grid=1024,
                      trials_per_cell=2)
    text = sweep_csv(run_sweep(cfg))
    lines = text.splitlines()
    assert lines[0].split(",") == list(SWEEP_CSV_COLUMNS)
    row = dict(zip(SWEEP_CSV_COLUMNS, lines[1].split(",")))
    assert row["sandwich_ok"] == "true"
    assert float(row["delta"]) == cfg.delta_ladder[-1]


@pytest.mark.parametrize("kind,params", [
    ("THEOREM2", {"N": 2, "eta": 0.5, "gamma": 0.25}),
    ("BLASCHKE", {"zeros": [0.5, 0.1j]}),
    ("POLY_FRACTION", {"numerator": [1, 1], "denominator": [2]}),
    ("OUTER_FROM_MODULUS", {"modulus": list(np.full(256, 0.5))}),
    ("SPECTRUM_LITERAL", {"terms": {0: 0.5, 1: 0.5}}),
])
def test_build_function_kinds(kind, params):
    f, phi = build_function(FunctionSpec(kind, params), GRID)
    assert f.n == 256
    assert (phi is not None) == (kind == "THEOREM2")


@pytest.mark.parametrize("kind,params", [
    (FunctionKind.THEOREM2, {"N": 2, "eta": 1.5, "gamma": 0.25}),
    (FunctionKind.THEOREM2, {"N": 0, "eta": 0.5, "gamma": 0.25}),
    (FunctionKind.THEOREM2, {"eta": 0.5}),
    (FunctionKind.BLASCHKE, {"zeros": [1.0]}),
    (FunctionKind.POLY_FRACTION, {"numerator": [1], "denominator": [1, 2]}),
    (FunctionKind.POLY_FRACTION, {"numerator": [1], "denominator": [0]}),
    (FunctionKind.OUTER_FROM_MODULUS, {"modulus": [-1.0]}),
    (FunctionKind.SPECTRUM_LITERAL, {"terms": {}}),
])
def test_function_spec_validation(kind, params):
    with pytest.raises(ContractViolation):
        FunctionSpec(kind, params)


def test_modulus_size_must_match():
    spec = FunctionSpec(FunctionKind.OUTER_FROM_MODULUS, {"modulus": [1.0] * 64})
    with pytest.raises(ContractViolation):
        build_function(spec, GRID)


def test_poly_fraction_values():
    f = poly_fraction([0, 1], [2, -1], GRID)
    np.testing.assert_allclose(f.values, GRID.points / (2 - GRID.points))
