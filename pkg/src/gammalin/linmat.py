"""Dense exact matrices over Q or Q(zeta_n), fixtures, and NCPoly evaluation."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .exactnum import (
    Cyclotomic,
    IncompatibleFieldError,
    as_scalar,
    field_of,
    in_field,
    parse_scalar,
    render_scalar,
    zeta,
)
from .ncalg import NCPoly, Word


class ShapeError(ValueError):
    pass


FieldError = IncompatibleFieldError


class MissingBindingError(LookupError):
    pass


class NotATripleError(ValueError):
    def __init__(self, x: int, y: int, z: int):
        self.defect = z * z - x * x - y * y
        super().__init__(f"not a Pythagorean triple (defect {self.defect})")


def _common_field(values) -> str:
    fields = {field_of(v) for v in values}
    cyclo = sorted(f for f in fields if f != "rational")
    if len(cyclo) > 1:
        # rational-valued cyclotomics are harmless; anything else is a real clash
        real = {field_of(v) for v in values if isinstance(v, Cyclotomic) and not v.is_rational()}
        if len(real) > 1:
            raise FieldError(f"mixed scalar fields {sorted(real)}")
        return real.pop() if real else cyclo[0]
    return cyclo[0] if cyclo else "rational"


class ExactMatrix:
    __slots__ = ("_rows", "_field")

    def __init__(self, rows: Sequence[Sequence], field: str | None = None):
        rows = [list(r) for r in rows]
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ShapeError(f"matrix must be square and nonempty, got rows of lengths {[len(r) for r in rows]}")
        flat = [as_scalar(v) for r in rows for v in r]
        if field is None:
            field = _common_field(flat)
        self._field = field
        self._rows = tuple(tuple(in_field(v, field) for v in r) for r in rows)

    @classmethod
    def _make(cls, rows, field: str) -> ExactMatrix:
        obj = cls.__new__(cls)
        obj._rows = tuple(tuple(r) for r in rows)
        obj._field = field
        return obj

    @classmethod
    def identity(cls, dim: int, field: str = "rational") -> ExactMatrix:
        return cls([[1 if i == j else 0 for j in range(dim)] for i in range(dim)], field)

    @classmethod
    def zeros(cls, dim: int, field: str = "rational") -> ExactMatrix:
        return cls([[0] * dim for _ in range(dim)], field)

    @classmethod
    def diag(cls, entries: Sequence, field: str | None = None) -> ExactMatrix:
        n = len(entries)
        z = Cyclotomic(int(field.split(":")[1])) if field and field != "rational" else Fraction(0)
        return cls([[entries[i] if i == j else z for j in range(n)] for i in range(n)], field)

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def field(self) -> str:
        return self._field

    @property
    def rows(self) -> tuple[tuple, ...]:
        return self._rows

    def __getitem__(self, ij):
        i, j = ij
        return self._rows[i][j]

    def _check(self, other: ExactMatrix) -> None:
        if not isinstance(other, ExactMatrix):
            raise TypeError(f"expected ExactMatrix, got {type(other).__name__}")
        if other.dim != self.dim:
            raise ShapeError(f"dimension mismatch: {self.dim} vs {other.dim}")
        if other.field != self.field:
            raise FieldError(f"field mismatch: {self.field} vs {other.field}")

    def __add__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        return ExactMatrix._make([[a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self._field)

    def __sub__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        return ExactMatrix._make([[a - b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)], self._field)

    def __neg__(self):
        return ExactMatrix._make([[-a for a in r] for r in self._rows], self._field)

    def scale(self, c) -> ExactMatrix:
        c = in_field(c, self._field)
        return ExactMatrix._make([[c * a for a in r] for r in self._rows], self._field)

    def __mul__(self, c):
        if isinstance(c, ExactMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __truediv__(self, c):
        c = in_field(c, self._field)
        if not c:
            raise ZeroDivisionError("matrix divided by zero scalar")
        return self.scale(1 / c if isinstance(c, Fraction) else c.inverse())

    def __matmul__(self, other):
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        self._check(other)
        cols = list(zip(*other._rows))
        zero = in_field(0, self._field)
        out = []
        for r in self._rows:
            row = []
            for col in cols:
                acc = zero
                for a, b in zip(r, col):
                    if a and b:
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return ExactMatrix._make(out, self._field)

    def __pow__(self, k: int) -> ExactMatrix:
        if not isinstance(k, int) or k < 0:
            raise ValueError("matrix powers must be non-negative integers")
        result = ExactMatrix.identity(self.dim, self._field)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, ExactMatrix):
            return NotImplemented
        return self.dim == other.dim and all(
            a == b for r, s in zip(self._rows, other._rows) for a, b in zip(r, s)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(a for r in self._rows for a in r)

    def trace(self):
        return sum((self._rows[i][i] for i in range(self.dim)), in_field(0, self._field))

    def det(self):
        """Determinant by exact Gaussian elimination."""
        a = [list(r) for r in self._rows]
        n = self.dim
        det = in_field(1, self._field)
        for c in range(n):
            pivot = next((r for r in range(c, n) if a[r][c]), None)
            if pivot is None:
                return in_field(0, self._field)
            if pivot != c:
                a[c], a[pivot] = a[pivot], a[c]
                det = -det
            p = a[c][c]
            det = det * p
            for r in range(c + 1, n):
                if a[r][c]:
                    f = a[r][c] / p
                    a[r] = [x - f * y for x, y in zip(a[r], a[c])]
        return det

    def conjugate_transpose(self) -> ExactMatrix:
        def conj(v):
            return v.conjugate() if isinstance(v, Cyclotomic) else v
        return ExactMatrix([[conj(self._rows[j][i]) for j in range(self.dim)] for i in range(self.dim)], self._field)

    def frobenius_norm_sq(self):
        """Sum of |entry|^2, exact (lands in the real subfield)."""
        total = in_field(0, self._field)
        for r in self._rows:
            for v in r:
                total = total + (v * v.conjugate() if isinstance(v, Cyclotomic) else v * v)
        if isinstance(total, Cyclotomic) and total.is_rational():
            return total.rational_value()
        return total

    def to_complex(self):
        import numpy as np
        return np.array([[complex(v) for v in r] for r in self._rows], dtype=complex)

    def to_strings(self) -> list[list[str]]:
        return [[render_scalar(v) for v in r] for r in self._rows]

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]], field: str = "rational") -> ExactMatrix:
        return cls([[parse_scalar(str(v), field) for v in r] for r in rows], field)

    def __str__(self) -> str:
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in self.to_strings()) + "]"

    def __repr__(self) -> str:
        return f"ExactMatrix({self}, field={self._field!r})"


def mat_mul(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    return a @ b


def mat_pow(a: ExactMatrix, k: int) -> ExactMatrix:
    return a ** k


def is_scalar_multiple_of_identity(m: ExactMatrix):
    """Return ``c`` if ``m == c * 1`` exactly, else ``None``."""
    c = m[0, 0]
    for i, row in enumerate(m.rows):
        for j, v in enumerate(row):
            if (i == j and v != c) or (i != j and v):
                return None
    if isinstance(c, Cyclotomic) and c.is_rational():
        return c.rational_value()
    return c


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------

PAULI_X = ExactMatrix([[0, 1], [1, 0]])
PAULI_Z = ExactMatrix([[1, 0], [0, -1]])


@dataclass(frozen=True)
class GammaTriple:
    x: int
    y: int
    z: int
    gx: ExactMatrix
    gy: ExactMatrix
    gz: ExactMatrix

    def invariant_checks(self) -> dict[str, bool]:
        one = ExactMatrix.identity(2)
        return {
            "pythagorean": self.x ** 2 + self.y ** 2 == self.z ** 2,
            "linear_ansatz": self.z * self.gz == self.x * self.gx + self.y * self.gy,
            "gx_squared": self.gx @ self.gx == one,
            "gy_squared": self.gy @ self.gy == one,
            "gz_squared": self.gz @ self.gz == one,
            "anticommutator": (self.gx @ self.gy + self.gy @ self.gx).is_zero(),
        }

    def holds(self) -> bool:
        return all(self.invariant_checks().values())


def build_gamma_triple(x: int, y: int, z: int) -> GammaTriple:
    if x * x + y * y != z * z or z == 0:
        raise NotATripleError(x, y, z)
    gz = ExactMatrix([
        [Fraction(y, z), Fraction(x, z)],
        [Fraction(x, z), Fraction(-y, z)],
    ])
    return GammaTriple(x, y, z, PAULI_X, PAULI_Z, gz)


def clock_shift(n: int) -> tuple[ExactMatrix, ExactMatrix]:
    """Clock ``U = diag(1, w, ..., w^(n-1))`` and shift ``V`` with ``V[i][i+1] = 1``.

    They satisfy ``U^n = V^n = 1`` and ``V @ U == w * U @ V`` for ``w = zeta(n)``.
    """
    if not isinstance(n, int) or n < 2:
        raise ValueError(f"clock_shift needs n >= 2, got {n!r}")
    field = f"cyclotomic:{n}"
    w = zeta(n)
    U = ExactMatrix.diag([w ** i for i in range(n)], field)
    V = ExactMatrix([[1 if j == (i + 1) % n else 0 for j in range(n)] for i in range(n)], field)
    return U, V


# ---------------------------------------------------------------------------
# Evaluation of noncommutative polynomials
# ---------------------------------------------------------------------------

def evaluate(
    p: NCPoly,
    symbol_assignment: Mapping[str, ExactMatrix],
    var_assignment: Mapping[str, object] | None = None,
    dim: int | None = None,
    field: str | None = None,
) -> ExactMatrix:
    var_assignment = var_assignment or {}
    mats = list(symbol_assignment.values())
    for m in mats[1:]:
        mats[0]._check(m)
    if mats:
        dim, field = mats[0].dim, mats[0].field
    dim = dim or 1
    field = field or "rational"

    missing = sorted(p.symbols() - set(symbol_assignment))
    if missing:
        raise MissingBindingError(f"unassigned symbol(s): {', '.join(missing)}")
    missing = sorted(p.variables() - set(var_assignment))
    if missing:
        raise MissingBindingError(f"unassigned variable(s): {', '.join(missing)}")

    words: dict[Word, ExactMatrix] = {(): ExactMatrix.identity(dim, field)}

    def word_matrix(w: Word) -> ExactMatrix:
        if w not in words:
            words[w] = word_matrix(w[:-1]) @ symbol_assignment[w[-1]]
        return words[w]

    total = ExactMatrix.zeros(dim, field)
    for mono, word, c in p.terms():
        coeff = in_field(c, field)
        for v, e in mono:
            coeff = coeff * in_field(var_assignment[v], field) ** e
        if coeff:
            total = total + word_matrix(word).scale(coeff)
    return total


def pythagorean_triples(z_max: int, primitive: bool = False):
    """Triples (x, y, z) with x^2 + y^2 = z^2, z <= z_max, from Euclid's (m, n) parameterization.

    Both orientations (x, y) and (y, x) are produced; with ``primitive=False``
    all multiples k*(x, y, z) are included too.
    """
    out = set()
    m = 2
    while m * m + 1 <= z_max:
        for n in range(1, m):
            if (m - n) % 2 == 1 and math.gcd(m, n) == 1:
                a, b, c = m * m - n * n, 2 * m * n, m * m + n * n
                for k in range(1, (1 if primitive else z_max // c) + 1):
                    if k * c <= z_max:
                        out.add((k * a, k * b, k * c))
                        out.add((k * b, k * a, k * c))
        m += 1
    return sorted(out, key=lambda t: (t[2], t[0]))
