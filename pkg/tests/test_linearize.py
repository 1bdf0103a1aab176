import json
import random

import pytest

from gammalin.exactnum import zeta
from gammalin.linearize import certify_solution, constraint_system, counting_compatibility
from gammalin.linmat import PAULI_X, PAULI_Z, ExactMatrix, ShapeError, clock_shift, evaluate
from gammalin.ncalg import NCPoly, expand_power


def words(*ws):
    return sum((NCPoly.word(w) for w in ws), NCPoly.zero())


def test_constraint_system_examples():
    assert constraint_system(2).counted_equation_count == 3
    s3 = constraint_system(3)
    assert s3.counted_equation_count == 4 and s3.unknown_count == 3
    polys = [c.poly for c in s3.perm_sum_constraints]
    assert polys == [words("XXY", "XYX", "YXX"), words("YYX", "YXY", "XYY")]
    assert constraint_system(2).perm_sum_constraints[0].poly == words("XY", "YX")
    with pytest.raises(ValueError):
        constraint_system(0)


@pytest.mark.parametrize("n", range(1, 13))
def test_constraint_count_law(n):
    s = constraint_system(n)
    assert len(s.perm_sum_constraints) == n - 1
    assert s.counted_equation_count == n + 1
    assert bool(counting_compatibility(n)) == (n <= 2)


def test_counting_compatibility_examples():
    assert counting_compatibility(1) and counting_compatibility(2)
    v = counting_compatibility(3)
    assert not v
    assert (v.condition_count, v.unknown_count) == (4, 3)
    assert "incompatible" in v.explanation


def test_certify_examples():
    r = certify_solution(2, 3, 4, 5, PAULI_X, PAULI_Z)
    assert r.all_constraints_pass and r.gz_power_check and r.fermat_check

    U, V = clock_shift(3)
    r = certify_solution(3, 1, 2, 2, U, V)
    assert r.all_constraints_pass
    assert not r.gz_power_check and not r.fermat_check

    one = ExactMatrix.identity(2)
    r = certify_solution(1, 2, 3, 5, one, one)
    assert r.all_constraints_pass and r.gz_power_check and r.fermat_check


def test_certify_reports_defects():
    r = certify_solution(3, 3, 4, 5, PAULI_X, PAULI_Z)
    failed = [c for c in r.constraints if not c.passed]
    assert {c.name for c in failed} == {"unit_power_X", "unit_power_Y", "perm_sum_1", "perm_sum_2"}
    d = r.to_dict()
    assert all("defect" in c for c in d["constraints"] if not c["passed"])
    json.loads(r.to_json())


def test_certify_shape_errors():
    with pytest.raises(ShapeError):
        certify_solution(2, 3, 4, 5, PAULI_X, ExactMatrix.identity(3))
    with pytest.raises(ValueError):
        certify_solution(2, 3, 4, 0, PAULI_X, PAULI_Z)


def test_degenerate_inputs_reported():
    r = certify_solution(2, 0, 5, 5, PAULI_X, PAULI_Z)
    assert r.degenerate and r.notes
    assert r.fermat_check and r.gz_power_check


@pytest.mark.parametrize("n", range(2, 5))
def test_linearization_identity_on_witnesses(n):
    U, V = clock_shift(n)
    one = ExactMatrix.identity(n, U.field)
    power = expand_power([("x", "X"), ("y", "Y")], n)
    for a in range(0, 11):
        for b in range(0, 11):
            assert evaluate(power, {"X": U, "Y": V}, {"x": a, "y": b}) == one.scale(a ** n + b ** n)


def _cases():
    rng = random.Random(3)
    cases = [(2, 3, 4, 5), (2, 5, 12, 13), (2, 1, 1, 2), (3, 1, 2, 2), (1, 2, 3, 5), (1, 2, 3, 6)]
    while len(cases) < 30:
        n = rng.randint(1, 5)
        x, y = rng.randint(0, 9), rng.randint(0, 9)
        z = rng.choice([rng.randint(1, 12), round((x ** n + y ** n) ** (1 / n)) or 1])
        cases.append((n, x, y, z))
    return cases


@pytest.mark.parametrize("n,x,y,z", _cases())
def test_certification_consistency(n, x, y, z):
    if n == 1:
        gx = gy = ExactMatrix.identity(2)
    elif n == 2:
        gx, gy = PAULI_X, PAULI_Z
    else:
        gx, gy = clock_shift(n)
    r = certify_solution(n, x, y, z, gx, gy)
    assert r.all_constraints_pass
    assert r.gz_power_check == r.fermat_check


def test_cyclotomic_z_division_exact():
    U, V = clock_shift(4)
    r = certify_solution(4, 1, 1, 3, U, V)
    assert r.gz == (U + V) / 3
    assert r.gz.field == "cyclotomic:4"
    assert zeta(4) ** 4 == 1
