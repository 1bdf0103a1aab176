"""Exact scalars: rationals (``fractions.Fraction``) and cyclotomic field elements.

A :class:`Cyclotomic` of order ``n`` is a polynomial in the primitive root
``zeta_n`` kept reduced modulo the n-th cyclotomic polynomial, so every
nonzero element has an exact inverse.
"""

from __future__ import annotations

import cmath
import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational as _RationalABC
from typing import Sequence, Union

Rational = Fraction


class InvalidOrderError(ValueError):
    pass


class IncompatibleFieldError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Polynomial helpers over Q; coefficient lists are low degree first.
# ---------------------------------------------------------------------------

def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence, b: Sequence) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _poly_divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    a = _trim([Fraction(c) for c in a])
    b = _trim([Fraction(c) for c in b])
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    while len(a) >= len(b):
        shift = len(a) - len(b)
        c = a[-1] / lead
        q[shift] = c
        for i, bi in enumerate(b):
            a[shift + i] -= c * bi
        a.pop()
        _trim(a)
    return _trim(q), a


def _poly_sub(a: Sequence, b: Sequence) -> list:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, constant term first."""
    if n < 1:
        raise InvalidOrderError(f"cyclotomic order must be >= 1, got {n}")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, cyclotomic_polynomial(d))
            assert not rem
    return tuple(int(c) for c in num)


def euler_phi(n: int) -> int:
    return len(cyclotomic_polynomial(n)) - 1


# ---------------------------------------------------------------------------
# Cyclotomic field elements
# ---------------------------------------------------------------------------

class Cyclotomic:
    """Element of Q(zeta_n) stored as ``phi(n)`` rational coefficients."""

    __slots__ = ("_order", "_coeffs")

    def __init__(self, order: int, coeffs: Sequence = ()):
        if not isinstance(order, int) or order < 1:
            raise InvalidOrderError(f"cyclotomic order must be >= 1, got {order!r}")
        self._order = order
        self._coeffs = _reduce(order, [Fraction(c) for c in coeffs])

    @classmethod
    def _raw(cls, order: int, coeffs: tuple) -> Cyclotomic:
        obj = cls.__new__(cls)
        obj._order = order
        obj._coeffs = coeffs
        return obj

    @property
    def order(self) -> int:
        return self._order

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return self._coeffs

    def is_rational(self) -> bool:
        return all(c == 0 for c in self._coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._coeffs[0]

    def _coerce(self, other) -> Cyclotomic | None:
        if isinstance(other, Cyclotomic):
            if other._order != self._order:
                raise IncompatibleFieldError(
                    f"cannot combine elements of Q(z{self._order}) and Q(z{other._order})"
                )
            return other
        if isinstance(other, (int, _RationalABC)):
            return Cyclotomic(self._order, [other])
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic._raw(self._order, tuple(a + b for a, b in zip(self._coeffs, o._coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return Cyclotomic._raw(self._order, tuple(-a for a in self._coeffs))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return Cyclotomic(self._order, _poly_mul(self._coeffs, o._coeffs))

    __rmul__ = __mul__

    def inverse(self) -> Cyclotomic:
        if not self:
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # extended Euclid: u*a + v*phi = 1
        phi = [Fraction(c) for c in cyclotomic_polynomial(self._order)]
        r0, r1 = phi, _trim(list(self._coeffs))
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        # r1 is a nonzero constant because phi is irreducible
        c = r1[0]
        return Cyclotomic(self._order, [x / c for x in s1])

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        base = self
        if k < 0:
            base, k = self.inverse(), -k
        result = Cyclotomic._raw(self._order, _one_coeffs(self._order))
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> Cyclotomic:
        """Complex conjugate, i.e. the automorphism zeta -> zeta^-1."""
        n = self._order
        out = [Fraction(0)] * n
        for j, c in enumerate(self._coeffs):
            out[(-j) % n] += c
        return Cyclotomic(n, out)

    def __complex__(self) -> complex:
        n = self._order
        return sum(
            (float(c) * cmath.exp(2j * math.pi * j / n) for j, c in enumerate(self._coeffs)),
            0j,
        )

    def __bool__(self) -> bool:
        return any(self._coeffs)

    def __eq__(self, other) -> bool:
        if isinstance(other, Cyclotomic):
            if other._order == self._order:
                return self._coeffs == other._coeffs
            return self.is_rational() and other.is_rational() and self._coeffs[0] == other._coeffs[0]
        if isinstance(other, (int, _RationalABC)):
            return self.is_rational() and self._coeffs[0] == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self._coeffs[0])
        return hash((self._order, self._coeffs))

    def __repr__(self) -> str:
        return f"Cyclotomic({self._order}, {[str(c) for c in self._coeffs]})"

    def __str__(self) -> str:
        return render_cyclotomic(self)


def _one_coeffs(order: int) -> tuple:
    return (Fraction(1),) + (Fraction(0),) * (euler_phi(order) - 1)


def _reduce(order: int, coeffs: list) -> tuple:
    phi = cyclotomic_polynomial(order)
    deg = len(phi) - 1
    p = list(coeffs)
    # phi is monic, so plain synthetic division stays in Q
    for top in range(len(p) - 1, deg - 1, -1):
        c = p[top]
        if c:
            shift = top - deg
            for i, pi in enumerate(phi):
                p[shift + i] -= c * pi
    p = p[:deg] + [Fraction(0)] * (deg - len(p))
    return tuple(p)


def zeta(n: int) -> Cyclotomic:
    """Canonical primitive n-th root of unity."""
    if not isinstance(n, int) or n < 1:
        raise InvalidOrderError(f"root-of-unity order must be >= 1, got {n!r}")
    return Cyclotomic(n, [0, 1])


def cyclo_mul(a: Cyclotomic, b: Cyclotomic) -> Cyclotomic:
    if a.order != b.order:
        raise IncompatibleFieldError(f"order mismatch: {a.order} vs {b.order}")
    return a * b


def cyclo_inverse(a: Cyclotomic) -> Cyclotomic:
    return a.inverse()


# ---------------------------------------------------------------------------
# Generic scalar helpers
# ---------------------------------------------------------------------------

Scalar = Union[Fraction, Cyclotomic]


def as_scalar(value) -> Scalar:
    if isinstance(value, (Fraction, Cyclotomic)):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, _RationalABC):
        return Fraction(value.numerator, value.denominator)
    raise TypeError(f"not an exact scalar: {value!r}")


def field_of(value) -> str:
    """``"rational"`` or ``"cyclotomic:<n>"``."""
    if isinstance(value, Cyclotomic):
        return f"cyclotomic:{value.order}"
    as_scalar(value)
    return "rational"


def field_order(field: str) -> int:
    if field == "rational":
        return 1
    m = re.fullmatch(r"cyclotomic:(\d+)", field)
    if not m or int(m.group(1)) < 1:
        raise IncompatibleFieldError(f"unknown scalar field {field!r}")
    return int(m.group(1))


def in_field(value, field: str) -> Scalar:
    """Coerce ``value`` into ``field``; rationals embed anywhere, nothing else moves."""
    value = as_scalar(value)
    if field == "rational":
        if isinstance(value, Cyclotomic):
            if not value.is_rational():
                raise IncompatibleFieldError(f"{value} is not rational")
            return value.rational_value()
        return value
    n = field_order(field)
    if isinstance(value, Cyclotomic):
        if value.order == n:
            return value
        if value.is_rational():
            return Cyclotomic(n, [value.rational_value()])
        raise IncompatibleFieldError(f"{value} does not live in Q(z{n})")
    return Cyclotomic(n, [value])


def abs_squared(value) -> Fraction | Cyclotomic:
    value = as_scalar(value)
    if isinstance(value, Cyclotomic):
        prod = value * value.conjugate()
        return prod.rational_value() if prod.is_rational() else prod
    return value * value


def render_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def render_cyclotomic(a: Cyclotomic) -> str:
    name = f"z{a.order}"
    parts = []
    for j, c in enumerate(a.coeffs):
        if c == 0:
            continue
        if j == 0:
            body = render_rational(abs(c))
        else:
            mono = name if j == 1 else f"{name}^{j}"
            body = mono if abs(c) == 1 else f"{render_rational(abs(c))}*{mono}"
        parts.append(("-" if c < 0 else "+", body))
    if not parts:
        return "0"
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


def render_scalar(value) -> str:
    value = as_scalar(value)
    if isinstance(value, Cyclotomic):
        return render_cyclotomic(value)
    return render_rational(value)


_TERM_RE = re.compile(
    r"\s*([+-])?\s*(?:(\d+(?:/\d+)?)\s*(?:\*\s*)?)?(?:z(\d+)(?:\^(\d+))?)?\s*"
)


def parse_rational(text: str) -> Fraction:
    m = re.fullmatch(r"\s*(-?\d+)(?:\s*/\s*(\d+))?\s*", text)
    if not m:
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(int(m.group(1)), int(m.group(2) or 1))


def parse_cyclotomic(text: str, order: int) -> Cyclotomic:
    """Inverse of :func:`render_cyclotomic`, e.g. ``"-1 - z3"``."""
    pos, total, first = 0, Cyclotomic(order), True
    text = text.strip()
    if not text:
        raise ValueError("empty cyclotomic literal")
    while pos < len(text):
        m = _TERM_RE.match(text, pos)
        sign, num, zord, power = m.groups()
        if m.end() == pos or (num is None and zord is None) or (sign is None and not first):
            raise ValueError(f"malformed cyclotomic literal {text!r} at offset {pos}")
        if zord is not None and int(zord) != order:
            raise IncompatibleFieldError(f"literal uses z{zord} but field is Q(z{order})")
        coeff = Fraction(num) if num else Fraction(1)
        if sign == "-":
            coeff = -coeff
        exp = 0 if zord is None else int(power or 1)
        total = total + coeff * zeta(order) ** exp
        pos, first = m.end(), False
    return total


def parse_scalar(text: str, field: str = "rational") -> Scalar:
    if field == "rational":
        return parse_rational(text)
    return parse_cyclotomic(text, field_order(field))
