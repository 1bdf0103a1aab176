import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gammalin.linmat import PAULI_X, PAULI_Z, clock_shift
from gammalin.numsearch import (
    SearchConfig,
    ShapeError,
    grad_check,
    gradient,
    random_unit_disc,
    residual,
    search,
    value_and_grad,
)


def brute_residual(A, B, n):
    """Oracle: enumerate every length-n word explicitly."""
    d = A.shape[0]
    eye = np.eye(d)
    sums = [np.zeros((d, d), dtype=complex) for _ in range(n + 1)]
    for seq in itertools.product((0, 1), repeat=n):
        M = eye.astype(complex)
        for s in seq:
            M = M @ (B if s else A)
        sums[sum(seq)] += M
    sums[0] -= eye
    sums[n] -= eye
    return sum(np.linalg.norm(S, "fro") ** 2 for S in sums)


def random_pair(seed, d):
    rng = np.random.default_rng(seed)
    return random_unit_disc(rng, d), random_unit_disc(rng, d)


def random_unitary(rng, d):
    Z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / abs(np.diag(R)))


def test_residual_examples():
    assert residual(PAULI_X.to_complex(), PAULI_Z.to_complex(), 2) < 1e-15
    for d in (1, 2, 3):
        assert residual(np.eye(d), np.eye(d), 3) == pytest.approx(18 * d)
    U, V = clock_shift(3)
    assert residual(U.to_complex(), V.to_complex(), 3) < 1e-12


def test_residual_shape_error():
    with pytest.raises(ShapeError):
        residual(np.eye(2), np.eye(3), 2)
    with pytest.raises(ShapeError):
        residual(np.ones((2, 3)), np.ones((2, 3)), 2)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 3), st.integers(1, 6))
def test_residual_matches_word_enumeration(seed, d, n):
    A, B = random_pair(seed, d)
    assert residual(A, B, n) == pytest.approx(brute_residual(A, B, n), rel=1e-10)


@pytest.mark.parametrize("n,d", [(2, 2), (3, 2), (3, 3), (4, 2), (5, 1)])
def test_grad_check(n, d):
    for seed in range(5):
        A, B = random_pair(seed, d)
        assert grad_check(A, B, n) < 1e-5


def test_gradient_vanishes_at_exact_solutions():
    gA, gB = gradient(PAULI_X.to_complex(), PAULI_Z.to_complex(), 2)
    assert np.linalg.norm(gA) + np.linalg.norm(gB) < 1e-8
    for n in range(2, 7):
        U, V = clock_shift(n)
        gA, gB = gradient(U.to_complex(), V.to_complex(), n)
        assert np.linalg.norm(gA) + np.linalg.norm(gB) < 1e-8


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 4), st.integers(1, 5))
def test_residual_unitary_conjugation_invariant(seed, d, n):
    rng = np.random.default_rng(seed)
    A, B = random_unit_disc(rng, d), random_unit_disc(rng, d)
    Q = random_unitary(rng, d)
    Qh = Q.conj().T
    assert residual(Q @ A @ Qh, Q @ B @ Qh, n) == pytest.approx(residual(A, B, n), rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32), st.integers(1, 4), st.integers(1, 5))
def test_residual_swap_symmetry(seed, d, n):
    A, B = random_pair(seed, d)
    assert residual(B, A, n) == pytest.approx(residual(A, B, n), rel=1e-12)


def test_value_and_grad_consistent():
    A, B = random_pair(1, 3)
    v, gA, gB = value_and_grad(A, B, 4)
    assert v == residual(A, B, 4)
    assert np.allclose((gA, gB), gradient(A, B, 4))


def test_config_validation():
    for bad in ({"n": 0, "d": 2}, {"n": 2, "d": 0}, {"n": 2, "d": 2, "restarts": 0}, {"n": 2, "d": 2, "tol": 0.0}):
        with pytest.raises(ValueError):
            SearchConfig(**bad)


def test_search_examples():
    r = search(SearchConfig(n=2, d=2, seed=42))
    assert r.residual < 1e-10 and r.seed == 42
    assert residual(r.A, r.B, 2) == pytest.approx(r.residual, rel=1e-15, abs=0)
    r = search(SearchConfig(n=3, d=3, seed=42))
    assert r.residual < 1e-8


@pytest.mark.parametrize("n", range(2, 7))
def test_search_finds_known_witness_cells(n):
    assert search(SearchConfig(n=n, d=n, seed=42)).residual < 1e-8


def test_search_reproducible():
    cfg = SearchConfig(n=3, d=2, seed=7, restarts=3, max_iters=500)
    a, b = search(cfg), search(cfg)
    assert a.residual == b.residual and a.restart == b.restart and a.iterations == b.iterations
    assert np.array_equal(a.A, b.A) and np.array_equal(a.B, b.B)
    assert a.per_restart == b.per_restart


def scalar_floor_oracle():
    """Grid scan of the n=3, d=1 residual over the complex disc |a|,|b| <= 1.3, then local polish."""
    xs = np.arange(-1.3, 1.3001, 0.05)
    pts = (xs[:, None] + 1j * xs[None, :]).ravel()
    pts = pts[abs(pts) <= 1.3]
    a = pts[:, None]
    b = pts[None, :]
    f = abs(a ** 3 - 1) ** 2 + abs(b ** 3 - 1) ** 2 + 9 * abs(a * a * b) ** 2 + 9 * abs(a * b * b) ** 2
    i, j = np.unravel_index(np.argmin(f), f.shape)
    best = f[i, j]
    # local polish with a shrinking pattern search
    za, zb, h = pts[i], pts[j], 0.05
    moves = [1, -1, 1j, -1j]
    g = lambda p, q: abs(p ** 3 - 1) ** 2 + abs(q ** 3 - 1) ** 2 + 9 * abs(p * p * q) ** 2 + 9 * abs(p * q * q) ** 2
    while h > 1e-9:
        improved = False
        for m in moves:
            for da, db in ((m * h, 0), (0, m * h)):
                v = g(za + da, zb + db)
                if v < best:
                    best, za, zb, improved = v, za + da, zb + db, True
        if not improved:
            h /= 2
    return best


def test_scalar_case_has_positive_floor():
    floor = scalar_floor_oracle()
    assert floor >= 0.5
    for seed in (0, 1, 42):
        r = search(SearchConfig(n=3, d=1, seed=seed, restarts=8, max_iters=2000))
        assert r.residual >= 0.5
        assert r.residual == pytest.approx(floor, rel=1e-3)


def test_real_mode_stays_real():
    r = search(SearchConfig(n=2, d=2, seed=3, restarts=4, real=True))
    assert np.all(r.A.imag == 0) and np.all(r.B.imag == 0)
    assert r.real and r.residual < 1e-8


def test_odd_dimension_n2_cannot_anticommute():
    r = search(SearchConfig(n=2, d=3, seed=42, restarts=4, max_iters=3000))
    assert r.residual > 0.5
