"""Numerical residual search over complex matrix pairs.

The residual for power ``n`` is

    ||A^n - 1||^2 + ||B^n - 1||^2 + sum_{k=1}^{n-1} ||S_k(A, B)||^2

with ``S_k`` the sum of all distinct words with n-k copies of A and k of
B (Frobenius norms).  All ``S_k`` come out of one table: ``S^(m)_k`` is the
sum over length-m words with k B's, built by appending the last letter,

    S^(m)_k = S^(m-1)_k A + S^(m-1)_{k-1} B,

and the gradient is the reverse sweep through that same table.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)


class ShapeError(ValueError):
    pass


@dataclass(frozen=True)
class SearchConfig:
    n: int
    d: int
    restarts: int = 32
    max_iters: int = 10_000
    initial_step: float = 1e-2
    grow: float = 1.2
    shrink: float = 0.5
    tol: float = 1e-12
    seed: int = 0
    real: bool = False

    def __post_init__(self):
        for name in ("n", "d", "restarts", "max_iters"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValueError(f"{name} must be a positive integer, got {v!r}")
        if not self.tol > 0 or not self.initial_step > 0:
            raise ValueError("tol and initial_step must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ValueError("seed must fit in 64 bits")


@dataclass
class SearchResult:
    residual: float
    A: np.ndarray
    B: np.ndarray
    restart: int
    iterations: int
    seed: int
    n: int
    d: int
    real: bool = False
    restarts_run: int = 0
    per_restart: list[float] = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "real": self.real,
            "residual": self.residual,
            "restart": self.restart,
            "iterations": self.iterations,
            "restarts_run": self.restarts_run,
            "seed": self.seed,
        }


def _check(A: np.ndarray, B: np.ndarray) -> None:
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape != B.shape:
        raise ShapeError(f"need two square matrices of equal size, got {A.shape} and {B.shape}")


def _table(A: np.ndarray, B: np.ndarray, n: int) -> list[list[np.ndarray]]:
    eye = np.eye(A.shape[0], dtype=complex)
    table = [[eye]]
    for m in range(1, n + 1):
        prev = table[-1]
        row = []
        for k in range(m + 1):
            acc = prev[k] @ A if k < m else None
            if k > 0:
                acc = prev[k - 1] @ B if acc is None else acc + prev[k - 1] @ B
            row.append(acc)
        table.append(row)
    return table


def _defects(last: list[np.ndarray], n: int) -> list[np.ndarray]:
    eye = np.eye(last[0].shape[0])
    out = list(last)
    out[0] = last[0] - eye
    out[n] = last[n] - eye
    return out


def residual(A, B, n: int) -> float:
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    _check(A, B)
    table = _table(A, B, n)
    return float(sum(np.vdot(D, D).real for D in _defects(table[n], n)))


def value_and_grad(A, B, n: int) -> tuple[float, np.ndarray, np.ndarray]:
    """Residual plus its gradient packed as ``dRe + 1j*dIm`` per entry."""
    A = np.asarray(A, dtype=complex)
    B = np.asarray(B, dtype=complex)
    _check(A, B)
    table = _table(A, B, n)
    defects = _defects(table[n], n)
    value = float(sum(np.vdot(D, D).real for D in defects))

    AH, BH = A.conj().T, B.conj().T
    GA = np.zeros_like(A)
    GB = np.zeros_like(B)
    adj = defects
    for m in range(n, 0, -1):
        prev = table[m - 1]
        new_adj = [np.zeros_like(A) for _ in range(m)]
        for k in range(m + 1):
            R = adj[k]
            if k < m:
                GA += prev[k].conj().T @ R
                new_adj[k] += R @ AH
            if k > 0:
                GB += prev[k - 1].conj().T @ R
                new_adj[k - 1] += R @ BH
        adj = new_adj
    return value, 2 * GA, 2 * GB


def gradient(A, B, n: int) -> tuple[np.ndarray, np.ndarray]:
    _, gA, gB = value_and_grad(A, B, n)
    return gA, gB


def grad_check(A, B, n: int, h: float = 1e-6) -> float:
    """Max coordinatewise error of the analytic gradient against central differences.

    Each error is divided by ``max(|analytic|, |numeric|, 1)``, i.e. relative
    for large components and absolute near zero.
    """
    A = np.array(A, dtype=complex)
    B = np.array(B, dtype=complex)
    _, gA, gB = value_and_grad(A, B, n)
    worst = 0.0
    for M, G in ((A, gA), (B, gB)):
        for idx in np.ndindex(M.shape):
            for unit, analytic in ((1.0, G[idx].real), (1j, G[idx].imag)):
                orig = M[idx]
                M[idx] = orig + h * unit
                fp = residual(A, B, n)
                M[idx] = orig - h * unit
                fm = residual(A, B, n)
                M[idx] = orig
                numeric = (fp - fm) / (2 * h)
                err = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1.0)
                worst = max(worst, err)
    return worst


def random_unit_disc(rng: np.random.Generator, d: int, real: bool = False) -> np.ndarray:
    if real:
        return rng.uniform(-1.0, 1.0, size=(d, d)).astype(complex)
    r = np.sqrt(rng.uniform(0.0, 1.0, size=(d, d)))
    theta = rng.uniform(0.0, 2 * np.pi, size=(d, d))
    return r * np.exp(1j * theta)


def _descend(A, B, config: SearchConfig) -> tuple[np.ndarray, np.ndarray, float, int]:
    n = config.n
    f, gA, gB = value_and_grad(A, B, n)
    step = config.initial_step
    it = 0
    while it < config.max_iters and f > config.tol:
        it += 1
        if config.real:
            gA, gB = gA.real, gB.real
        A_new = A - step * gA
        B_new = B - step * gB
        f_new = residual(A_new, B_new, n)
        if np.isfinite(f_new) and f_new < f:
            A, B = A_new, B_new
            f, gA, gB = value_and_grad(A, B, n)
            step *= config.grow
        else:
            step *= config.shrink
            if step < 1e-300:
                break
    return A, B, f, it


def search(config: SearchConfig) -> SearchResult:
    """Adaptive-step gradient descent from seeded restarts; the best restart wins.

    Restart ``r`` draws its start from ``default_rng([seed, r])`` so restarts
    are independent of each other. Once a restart reaches ``tol`` the
    remaining restarts are skipped.
    """
    best = None
    per_restart = []
    for r in range(config.restarts):
        rng = np.random.default_rng([config.seed, r])
        A0 = random_unit_disc(rng, config.d, config.real)
        B0 = random_unit_disc(rng, config.d, config.real)
        A, B, f, iters = _descend(A0, B0, config)
        per_restart.append(f)
        log.debug("restart %d: residual %.3e after %d iterations", r, f, iters)
        if best is None or f < best[2]:
            best = (A, B, f, iters, r)
        if best[2] <= config.tol:
            break
    A, B, f, iters, r = best
    return SearchResult(
        residual=residual(A, B, config.n),
        A=A,
        B=B,
        restart=r,
        iterations=iters,
        seed=config.seed,
        n=config.n,
        d=config.d,
        real=config.real,
        restarts_run=len(per_restart),
        per_restart=per_restart,
    )
