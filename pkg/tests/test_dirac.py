import itertools

import pytest

from gammalin.dirac import (
    MOSTLY_MINUS,
    DiracSet,
    MetricSignature,
    dirac_relations,
    hamiltonian_square_symbolic,
    standard_dirac_set,
    verify_clifford,
    verify_dirac_algebra,
)
from gammalin.linmat import ExactMatrix, ShapeError
from gammalin.ncalg import NCPoly

p1, p2, p3, m = (NCPoly.variable(v) for v in ("p1", "p2", "p3", "m"))


@pytest.fixture(scope="module")
def dset():
    return standard_dirac_set()


def test_standard_set_examples(dset):
    one = ExactMatrix.identity(4, dset.beta.field)
    assert dset.beta @ dset.beta == one
    a1 = dset.alphas[0]
    assert (a1 @ dset.beta + dset.beta @ a1).is_zero()
    assert dset.alphas[1] @ dset.alphas[1] == one
    assert verify_dirac_algebra(dset).all_passed


def test_beta_identity_breaks_anticommutation(dset):
    one = ExactMatrix.identity(4, dset.beta.field)
    bad = DiracSet(dset.alphas, one)
    report = verify_dirac_algebra(bad)
    failed = report.failed()
    assert {c.name for c in failed} == {f"alpha{i} beta + beta alpha{i} = 0" for i in (1, 2, 3)}
    for i, c in enumerate(failed):
        assert c.defect == dset.alphas[i].scale(2)


def test_equal_alphas_break_mutual_anticommutation(dset):
    a1 = dset.alphas[0]
    bad = DiracSet((a1, a1, dset.alphas[2]), dset.beta)
    c = verify_dirac_algebra(bad)["alpha1 alpha2 + alpha2 alpha1 = 0"]
    assert not c.passed
    assert c.defect == ExactMatrix.identity(4, a1.field).scale(2)


def test_shape_mismatch(dset):
    with pytest.raises(ShapeError):
        verify_dirac_algebra(DiracSet(dset.alphas, ExactMatrix.identity(2, dset.beta.field)))
    with pytest.raises(ShapeError):
        verify_clifford(dset.gammas()[:3])


def test_hamiltonian_square():
    assert hamiltonian_square_symbolic() == p1 * p1 + p2 * p2 + p3 * p3 + m * m
    assert hamiltonian_square_symbolic(massless=True) == p1 * p1 + p2 * p2 + p3 * p3


def test_hamiltonian_square_without_beta_rules_keeps_cross_terms():
    h = hamiltonian_square_symbolic(dirac_relations(alpha_beta=False))
    for i in (1, 2, 3):
        a = NCPoly.symbol(f"A{i}")
        b = NCPoly.symbol("B")
        pi = NCPoly.variable(f"p{i}")
        cross = pi * m * (a * b + b * a)
        assert (h - cross) != h
    rest = h - sum(
        (NCPoly.variable(f"p{i}") * m * (NCPoly.word((f"A{i}", "B")) + NCPoly.word(("B", f"A{i}"))) for i in (1, 2, 3)),
        NCPoly.zero(),
    )
    assert rest == p1 * p1 + p2 * p2 + p3 * p3 + m * m


def test_hamiltonian_square_symmetric_under_relabeling():
    h = hamiltonian_square_symbolic()
    for perm in itertools.permutations(("p1", "p2", "p3")):
        relabeled = sum(
            (c * NCPoly.word(w, 1, tuple((dict(zip(("p1", "p2", "p3"), perm)).get(v, v), e) for v, e in mono))
             for mono, w, c in h),
            NCPoly.zero(),
        )
        assert relabeled == h


def test_clifford(dset):
    gammas = dset.gammas()
    report = verify_clifford(gammas, MOSTLY_MINUS)
    assert report.all_passed and len(report.checks) == 10
    one = ExactMatrix.identity(4, dset.beta.field)
    assert gammas[0] @ gammas[0] == one
    for g in gammas[1:]:
        assert g @ g == -one


def test_clifford_fails_for_identities(dset):
    one = ExactMatrix.identity(4, dset.beta.field)
    report = verify_clifford([one] * 4)
    for c in report.checks:
        mu, nu = (int(t.split("=")[1]) for t in c.name.split())
        if mu != nu:
            assert not c.passed and c.defect == one.scale(2)
    assert report["mu=0 nu=0"].passed


def test_metric_signature_validation():
    assert MOSTLY_MINUS[0, 0] == 1 and MOSTLY_MINUS[2, 2] == -1 and MOSTLY_MINUS[0, 1] == 0
    with pytest.raises(ValueError):
        MetricSignature((1, 2, -1, -1))
    # wrong signature flips the spatial checks
    flipped = verify_clifford(standard_dirac_set().gammas(), MetricSignature((-1, 1, 1, 1)))
    assert not flipped.all_passed
