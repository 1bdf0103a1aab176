"""Acceptance gate: one test per criterion, each run at its stated tolerance and time budget.

A PASS/FAIL line per criterion is printed in the pytest terminal summary
(see conftest.py), or directly when this file is run as a script.
"""

import functools
import itertools
import time
from fractions import Fraction as F
from pathlib import Path

import numpy as np

from gammalin.dirac import (
    MOSTLY_MINUS,
    hamiltonian_square_symbolic,
    standard_dirac_set,
    verify_clifford,
    verify_dirac_algebra,
)
from gammalin.exactnum import Cyclotomic, zeta
from gammalin.linearize import certify_solution, constraint_system, counting_compatibility
from gammalin.linmat import ExactMatrix, build_gamma_triple, clock_shift, evaluate, mat_pow
from gammalin.ncalg import NCPoly, RelationSet, expand_power, perm_sum, reduce
from gammalin.numsearch import SearchConfig, grad_check, random_unit_disc, search
from gammalin.specdsl import DslError, format, parse, run_text

RESULTS: dict[int, tuple[bool, str]] = {}
SCRIPTS = Path(__file__).parent / "scripts"


def criterion(number, title, budget=None):
    def wrap(fn):
        @functools.wraps(fn)
        def inner():
            t0 = time.perf_counter()
            try:
                fn()
            except BaseException as exc:
                RESULTS[number] = (False, f"{title}: {type(exc).__name__}: {exc}"[:200])
                raise
            elapsed = time.perf_counter() - t0
            timing = f"{elapsed:.2f}s" + (f" (budget {budget}s)" if budget else "")
            if budget is not None and elapsed >= budget:
                RESULTS[number] = (False, f"{title}: over time budget, {timing}")
                raise AssertionError(f"criterion {number} took {elapsed:.2f}s, budget {budget}s")
            RESULTS[number] = (True, f"{title}: {timing}")
        return inner
    return wrap


def summary_lines():
    lines = []
    for n in range(1, 11):
        if n in RESULTS:
            ok, detail = RESULTS[n]
            lines.append(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
        else:
            lines.append(f"criterion {n:2d}: NOT RUN")
    return lines


def _brute_triples(z_max):
    return [(x, y, z) for z in range(1, z_max + 1) for x in range(1, z) for y in range(1, z) if x * x + y * y == z * z]


def _words(*ws):
    return sum((NCPoly.word(w) for w in ws), NCPoly.zero())


@criterion(1, "gamma triple for (3, 4, 5)", budget=1)
def test_criterion_01_triple_345():
    t = build_gamma_triple(3, 4, 5)
    assert t.gz == ExactMatrix([[F(4, 5), F(3, 5)], [F(3, 5), F(-4, 5)]])
    assert t.gz @ t.gz == ExactMatrix.identity(2)
    assert t.gz.trace() == 0
    assert t.gz.det() == -1
    assert t.gz.scale(5) == t.gx.scale(3) + t.gy.scale(4)


@criterion(2, "triple sweep z <= 100", budget=5)
def test_criterion_02_triple_sweep():
    triples = _brute_triples(100)
    assert len(triples) == 104
    for x, y, z in triples:
        t = build_gamma_triple(x, y, z)
        one = ExactMatrix.identity(2)
        assert x * x + y * y == z * z
        assert t.gz.scale(z) == t.gx.scale(x) + t.gy.scale(y)
        assert t.gx @ t.gx == one and t.gy @ t.gy == one and t.gz @ t.gz == one
        assert (t.gx @ t.gy + t.gy @ t.gx).is_zero()
        assert all(t.invariant_checks().values())


@criterion(3, "n = 3 relations and counts", budget=1)
def test_criterion_03_n3_relations():
    s = constraint_system(3)
    polys = [c.poly for c in s.perm_sum_constraints]
    assert polys[0] == _words("XXY", "XYX", "YXX")
    assert polys[1] == _words("YYX", "YXY", "XYY")
    for p in polys:
        assert len(p) == 3 and all(c == 1 for _, _, c in p)
    assert s.counted_equation_count == 4 and s.unknown_count == 3
    assert not counting_compatibility(3)


@criterion(4, "counting law n = 1..12")
def test_criterion_04_counting_law():
    for n in range(1, 13):
        s = constraint_system(n)
        assert len(s.perm_sum_constraints) == n - 1
        assert s.counted_equation_count == n + 1
        assert bool(counting_compatibility(n)) == (n + 1 <= 3)


@criterion(5, "anticommutation reduction of (xX + yY)^2")
def test_criterion_05_anticommutation():
    rels = RelationSet([("XX", 1), ("YY", 1), ("XY", -NCPoly.word("YX"))])
    got = reduce(expand_power([("x", "X"), ("y", "Y")], 2), rels)
    x, y = NCPoly.variable("x"), NCPoly.variable("y")
    assert got == x * x + y * y
    assert str(got) == "(x^2 + y^2)*1"


@criterion(6, "Dirac suite", budget=1)
def test_criterion_06_dirac():
    s = standard_dirac_set()
    assert verify_dirac_algebra(s).all_passed
    p1, p2, p3, m = (NCPoly.variable(v) for v in ("p1", "p2", "p3", "m"))
    assert hamiltonian_square_symbolic() == p1 * p1 + p2 * p2 + p3 * p3 + m * m
    assert verify_clifford(s.gammas(), MOSTLY_MINUS).all_passed


@criterion(7, "clock/shift probe n = 2..6", budget=10)
def test_criterion_07_clock_shift():
    for n in range(2, 7):
        U, V = clock_shift(n)
        one = ExactMatrix.identity(n, U.field)
        assert U.field == f"cyclotomic:{n}"
        assert mat_pow(U, n) == one and mat_pow(V, n) == one
        for k in range(1, n):
            assert evaluate(perm_sum(n, k), {"X": U, "Y": V}).is_zero()
    U, V = clock_shift(3)
    r = certify_solution(3, 1, 2, 2, U, V)
    assert r.all_constraints_pass
    assert not r.fermat_check


def _q_weight_sum(n, k, q):
    total = Cyclotomic(q.order)
    for arr in set(itertools.permutations("X" * (n - k) + "Y" * k)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if arr[i] == "Y" and arr[j] == "X")
        total = total + q ** inv
    return total


@criterion(8, "q-binomial brute force vs reduce")
def test_criterion_08_q_binomial():
    for n in range(1, 7):
        for order in sorted({n, 2, 3, 4, 5, 6}):
            q = zeta(order)
            rels = RelationSet([("YX", q * NCPoly.word("XY"))])
            for k in range(n + 1):
                brute = _q_weight_sum(n, k, q)
                assert reduce(perm_sum(n, k), rels) == brute * NCPoly.word("X" * (n - k) + "Y" * k)
                if order == n and 0 < k < n:
                    assert brute == 0


@criterion(9, "numerical search and gradient check", budget=60)
def test_criterion_09_numerical_search():
    assert search(SearchConfig(n=2, d=2, seed=42)).residual < 1e-8
    assert search(SearchConfig(n=3, d=3, seed=42)).residual < 1e-8
    rng = np.random.default_rng(42)
    worst = 0.0
    for i in range(100):
        n = 2 + i % 3
        d = 1 + i % 3
        A, B = random_unit_disc(rng, d), random_unit_disc(rng, d)
        worst = max(worst, grad_check(A, B, n))
    assert worst < 1e-5


@criterion(10, "parser corpus, diagnostics, stated outputs")
def test_criterion_10_parser():
    corpus = sorted(SCRIPTS.glob("*.ncs"))
    assert len(corpus) == 20
    for path in corpus:
        p = parse(path.read_text())
        assert parse(format(p)) == p
    errors = sorted((SCRIPTS / "errors").glob("*.ncs"))
    assert errors
    for path in errors:
        text = path.read_text()
        try:
            parse(text)
        except DslError as e:
            assert 0 <= e.span.start <= e.span.end <= len(text.encode())
            assert e.span.line >= 1 and e.span.column >= 1
        else:
            raise AssertionError(f"{path.name} parsed without error")
    assert run_text(
        "symbols X Y; vars x y; relation X*X = 1; relation Y*Y = 1; relation Y*X = -1*X*Y; reduce (x*X + y*Y)^2;"
    ).outputs == ["(x^2 + y^2)*1"]
    assert run_text("symbols X Y; permsum 3 1;").outputs == ["X*X*Y + X*Y*X + Y*X*X"]
    assert run_text(
        "symbols X Y; vars x y; let w = zeta(3); relation Y*X = w*X*Y; relation X^3 = 1; "
        "relation Y^3 = 1; reduce (x*X + y*Y)^3;"
    ).outputs == ["(x^3 + y^3)*1"]


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except BaseException:
                pass
    print("\n".join(summary_lines()))
    raise SystemExit(0 if all(ok for ok, _ in RESULTS.values()) and len(RESULTS) == 10 else 1)
