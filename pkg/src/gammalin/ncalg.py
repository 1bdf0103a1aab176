"""Noncommutative polynomials with commuting scalar variables.

A term is ``coeff * monomial * word``: the monomial collects commuting
variables (``x``, ``y``, ``p1`` ...), the word is an ordered tuple of
noncommuting symbols (``"X"``, ``"Y"``, ``"A1"`` ...).  The empty word is
the identity.
"""

from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .exactnum import Cyclotomic, as_scalar, render_scalar

Word = tuple[str, ...]
Monomial = tuple[tuple[str, int], ...]

EMPTY_WORD: Word = ()
ONE_MONOMIAL: Monomial = ()


class IllFormedInputError(ValueError):
    pass


class NonTerminatingError(ValueError):
    """A rewrite rule set that does not strictly decrease the term order."""

    def __init__(self, message: str, rule_index: int | None = None, rule=None):
        super().__init__(message)
        self.rule_index = rule_index
        self.rule = rule


def _natural_key(name: str):
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", name))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    exps = dict(a)
    for v, e in b:
        exps[v] = exps.get(v, 0) + e
    return tuple(sorted(exps.items(), key=lambda t: _natural_key(t[0])))


def mono_from(exponents: Mapping[str, int]) -> Monomial:
    if any(e < 0 for e in exponents.values()):
        raise ValueError("negative exponent in commutative monomial")
    return tuple(sorted(((v, e) for v, e in exponents.items() if e), key=lambda t: _natural_key(t[0])))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Monomial):
    # graded lex, highest first: x^2, x*y, y^2, ..., 1
    return (-mono_degree(m), tuple((_natural_key(v), -e) for v, e in m))


def _word_sort_key(w: Word):
    return (len(w), tuple(_natural_key(s) for s in w))


def render_monomial(m: Monomial) -> str:
    return "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)


def render_word(w: Word) -> str:
    return "*".join(w) if w else "1"


def _needs_parens(coeff) -> bool:
    return isinstance(coeff, Cyclotomic) and sum(1 for c in coeff.coeffs if c) > 1


class NCPoly:
    """Finite sum of terms keyed by ``(monomial, word)``; zero coefficients are never stored."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict = {}
        for (mono, word), c in items:
            key = (tuple(mono), tuple(word))
            acc[key] = acc.get(key, 0) + as_scalar(c)
        self._terms = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def _from_dict(cls, d: dict) -> NCPoly:
        obj = cls.__new__(cls)
        obj._terms = {k: v for k, v in d.items() if v != 0}
        return obj

    @classmethod
    def zero(cls) -> NCPoly:
        return cls._from_dict({})

    @classmethod
    def constant(cls, c) -> NCPoly:
        return cls._from_dict({(ONE_MONOMIAL, EMPTY_WORD): as_scalar(c)})

    @classmethod
    def one(cls) -> NCPoly:
        return cls.constant(1)

    @classmethod
    def symbol(cls, name: str) -> NCPoly:
        return cls._from_dict({(ONE_MONOMIAL, (name,)): Fraction(1)})

    @classmethod
    def variable(cls, name: str) -> NCPoly:
        return cls._from_dict({(((name, 1),), EMPTY_WORD): Fraction(1)})

    @classmethod
    def word(cls, word: Iterable[str], coeff=1, monomial: Monomial = ONE_MONOMIAL) -> NCPoly:
        return cls._from_dict({(tuple(monomial), tuple(word)): as_scalar(coeff)})

    # -- inspection ---------------------------------------------------------

    def terms(self) -> list[tuple[Monomial, Word, object]]:
        keys = sorted(self._terms, key=lambda k: (_word_sort_key(k[1]), _mono_sort_key(k[0])))
        return [(m, w, self._terms[(m, w)]) for m, w in keys]

    def __iter__(self) -> Iterator[tuple[Monomial, Word, object]]:
        return iter(self.terms())

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, word: Sequence[str], monomial: Monomial = ONE_MONOMIAL):
        return self._terms.get((tuple(monomial), tuple(word)), Fraction(0))

    def words(self) -> set[Word]:
        return {w for _, w in self._terms}

    def symbols(self) -> set[str]:
        return {s for _, w in self._terms for s in w}

    def variables(self) -> set[str]:
        return {v for m, _ in self._terms for v, _ in m}

    def as_dict(self) -> dict:
        return dict(self._terms)

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other) -> NCPoly | None:
        if isinstance(other, NCPoly):
            return other
        try:
            return NCPoly.constant(other)
        except TypeError:
            return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = dict(self._terms)
        for k, v in o._terms.items():
            d[k] = d.get(k, 0) + v
        return NCPoly._from_dict(d)

    __radd__ = __add__

    def __neg__(self) -> NCPoly:
        return NCPoly._from_dict({k: -v for k, v in self._terms.items()})

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if not isinstance(other, NCPoly):
            try:
                c = as_scalar(other)
            except TypeError:
                return NotImplemented
            return NCPoly._from_dict({k: v * c for k, v in self._terms.items()})
        d: dict = {}
        for (m1, w1), c1 in self._terms.items():
            for (m2, w2), c2 in other._terms.items():
                key = (mono_mul(m1, m2), w1 + w2)
                d[key] = d.get(key, 0) + c1 * c2
        return NCPoly._from_dict(d)

    def __rmul__(self, other):
        # scalars and monomials commute with everything
        return self.__mul__(other)

    def __pow__(self, k: int) -> NCPoly:
        if not isinstance(k, int) or k < 0:
            raise ValueError("NCPoly powers must be non-negative integers")
        result = NCPoly.one()
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other) -> bool:
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self._terms == o._terms

    __hash__ = None

    # -- transforms ---------------------------------------------------------

    def map_words(self, fn: Callable[[Word], Word]) -> NCPoly:
        return NCPoly((((m, fn(w)), c) for (m, w), c in self._terms.items()))

    def rename_symbols(self, mapping: Mapping[str, str]) -> NCPoly:
        return self.map_words(lambda w: tuple(mapping.get(s, s) for s in w))

    def commutative_image(self) -> NCPoly:
        """Send every symbol to the identity word."""
        return self.map_words(lambda w: EMPTY_WORD)

    # -- rendering ----------------------------------------------------------

    def __repr__(self) -> str:
        return f"NCPoly({str(self)!r})"

    def __str__(self) -> str:
        return render(self)


def _render_coeff_poly(items: list[tuple[Monomial, object]]) -> list[tuple[str, str]]:
    """Signed pieces of a commutative polynomial, e.g. [("+", "x^2"), ("-", "3*y")]."""
    pieces = []
    for mono, c in items:
        neg = False
        if isinstance(c, Fraction) and c < 0:
            neg, c = True, -c
        elif isinstance(c, Cyclotomic) and c.is_rational() and c.rational_value() < 0:
            neg, c = True, -c
        mtxt = render_monomial(mono)
        ctxt = render_scalar(c)
        if _needs_parens(c):
            ctxt = f"({ctxt})"
        if mtxt and c == 1:
            body = mtxt
        elif mtxt:
            body = f"{ctxt}*{mtxt}"
        else:
            body = ctxt
        pieces.append(("-" if neg else "+", body))
    return pieces


def _join(pieces: list[tuple[str, str]]) -> str:
    if not pieces:
        return "0"
    sign, body = pieces[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in pieces[1:]:
        out += f" {sign} {body}"
    return out


def render(p: NCPoly) -> str:
    """Group terms by word: ``(x^2 + y^2)*1``, ``x*y*X*Y - Y*X``."""
    by_word: dict[Word, list] = {}
    for mono, word, c in p.terms():
        by_word.setdefault(word, []).append((mono, c))
    pieces = []
    for word in sorted(by_word, key=_word_sort_key):
        coeff_pieces = _render_coeff_poly(by_word[word])
        wtxt = render_word(word)
        if len(coeff_pieces) == 1:
            sign, body = coeff_pieces[0]
            if body == "1":
                pieces.append((sign, wtxt))
            elif word:
                pieces.append((sign, f"{body}*{wtxt}"))
            else:
                pieces.append((sign, body))
        else:
            pieces.append(("+", f"({_join(coeff_pieces)})*{wtxt}"))
    return _join(pieces)


# ---------------------------------------------------------------------------
# Multiset permutations and power expansion
# ---------------------------------------------------------------------------

def multiset_permutations(items: Sequence) -> Iterator[tuple]:
    """Distinct arrangements of ``items`` in lexicographic order (next-permutation walk)."""
    a = sorted(items)
    n = len(a)
    while True:
        yield tuple(a)
        i = n - 2
        while i >= 0 and a[i] >= a[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while a[j] <= a[i]:
            j -= 1
        a[i], a[j] = a[j], a[i]
        a[i + 1:] = reversed(a[i + 1:])


def perm_sum(n: int, k: int, symbols: tuple[str, str] = ("X", "Y"), multiplicity: bool = False) -> NCPoly:
    """Sum of the C(n, k) distinct words with n-k copies of the first symbol and k of the second.

    With ``multiplicity=True`` every word is weighted by (n-k)! k!, i.e. the
    sum runs over all n! orderings of labelled letters.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"perm_sum needs n >= 1, got {n!r}")
    if not isinstance(k, int) or not 0 <= k <= n:
        raise ValueError(f"perm_sum needs 0 <= k <= n, got k={k!r}, n={n}")
    x, y = symbols
    if x == y:
        raise IllFormedInputError("perm_sum symbols must differ")
    weight = math.factorial(n - k) * math.factorial(k) if multiplicity else 1
    # permute indices so the walk order does not depend on symbol spelling
    letters = [0] * (n - k) + [1] * k
    return NCPoly._from_dict({
        (ONE_MONOMIAL, tuple(symbols[i] for i in arr)): Fraction(weight)
        for arr in multiset_permutations(letters)
    })


def linear_form(pairs: Sequence[tuple[str, str]]) -> NCPoly:
    names = [s for _, s in pairs]
    if len(set(names)) != len(names):
        raise IllFormedInputError(f"duplicate symbol in linear form: {names}")
    out = NCPoly.zero()
    for var, sym in pairs:
        out = out + NCPoly.variable(var) * NCPoly.symbol(sym)
    return out


def expand_power(pairs: Sequence[tuple[str, str]], n: int) -> NCPoly:
    """Full noncommutative expansion of ``(sum var_i * sym_i) ** n``."""
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"expand_power needs n >= 1, got {n!r}")
    form = linear_form(pairs)
    return form ** n


def grade(p: NCPoly) -> dict[Monomial, NCPoly]:
    """Split ``p`` by commutative monomial; each part keeps only its words."""
    parts: dict[Monomial, dict] = {}
    for mono, word, c in p.terms():
        parts.setdefault(mono, {})[(ONE_MONOMIAL, word)] = c
    return {m: NCPoly._from_dict(d) for m, d in parts.items()}


# ---------------------------------------------------------------------------
# Rewriting
# ---------------------------------------------------------------------------

def deglex_key(word: Word, order: Mapping[str, int]):
    return (len(word), tuple(order[s] for s in word))


def _rule_decreases(pattern: Word, replacement: NCPoly, rank: Mapping[str, int]) -> bool:
    key = deglex_key(pattern, rank)
    return all(deglex_key(w, rank) < key for w in replacement.words())


class RelationSet:
    """Ordered rewrite rules ``pattern -> replacement`` under a deg-lex term order.

    If ``symbol_order`` is omitted, the first ordering of the involved symbols
    (natural sort first, then the remaining permutations) under which every
    rule decreases is used. Rules are never reoriented.
    """

    MAX_ORDER_SEARCH_SYMBOLS = 8

    def __init__(self, rules: Iterable[tuple[Sequence[str], object]], symbol_order: Sequence[str] | None = None):
        norm = []
        for pattern, repl in rules:
            pattern = tuple(pattern)
            if not pattern:
                raise IllFormedInputError("rewrite rule pattern must be a nonempty word")
            if not isinstance(repl, NCPoly):
                repl = NCPoly.constant(repl)
            norm.append((pattern, repl))
        self.rules: list[tuple[Word, NCPoly]] = norm
        involved = sorted({s for p, r in norm for s in p + tuple(r.symbols())}, key=_natural_key)
        if symbol_order is None:
            self.symbol_order = self._infer_order(involved)
        else:
            symbol_order = tuple(symbol_order)
            missing = set(involved) - set(symbol_order)
            if missing:
                raise IllFormedInputError(f"symbol order lacks {sorted(missing)}")
            rank = {s: i for i, s in enumerate(symbol_order)}
            for i, (p, r) in enumerate(norm):
                if not _rule_decreases(p, r, rank):
                    raise NonTerminatingError(
                        f"rule {render_word(p)} -> {r} does not decrease the term order", i, (p, r)
                    )
            self.symbol_order = symbol_order
        self._rank = {s: i for i, s in enumerate(self.symbol_order)}

    def _orders(self, symbols: list[str]) -> Iterator[tuple[str, ...]]:
        yield tuple(symbols)
        if len(symbols) <= self.MAX_ORDER_SEARCH_SYMBOLS:
            it = itertools.permutations(symbols)
            next(it)
            yield from it

    def _find_order(self, rules, symbols) -> tuple[str, ...] | None:
        for order in self._orders(symbols):
            rank = {s: i for i, s in enumerate(order)}
            if all(_rule_decreases(p, r, rank) for p, r in rules):
                return order
        return None

    def _infer_order(self, symbols: list[str]) -> tuple[str, ...]:
        order = self._find_order(self.rules, symbols)
        if order is not None:
            return order
        for i in range(len(self.rules)):
            prefix = self.rules[: i + 1]
            syms = sorted({s for p, r in prefix for s in p + tuple(r.symbols())}, key=_natural_key)
            if self._find_order(prefix, syms) is None:
                p, r = self.rules[i]
                raise NonTerminatingError(
                    f"rule {render_word(p)} -> {r} does not decrease the term order "
                    f"under any symbol order compatible with the earlier rules", i, (p, r)
                )
        raise NonTerminatingError("no symbol order orients every rule")  # pragma: no cover

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    def __repr__(self) -> str:
        body = "; ".join(f"{render_word(p)} -> {r}" for p, r in self.rules)
        return f"RelationSet([{body}], order={list(self.symbol_order)})"

    def _find_redex(self, word: Word, strategy: str):
        n = len(word)
        if strategy == "leftmost":
            positions, rules = range(n), list(enumerate(self.rules))
        elif strategy == "rightmost":
            positions, rules = range(n - 1, -1, -1), list(enumerate(self.rules))[::-1]
        else:
            raise ValueError(f"unknown reduction strategy {strategy!r}")
        for i in positions:
            for _, (pat, repl) in rules:
                if word[i:i + len(pat)] == pat:
                    return i, pat, repl
        return None

    def normal_form_of_word(self, word: Word, strategy: str = "leftmost", _cache: dict | None = None) -> dict:
        cache = {} if _cache is None else _cache
        key = (word, strategy)
        if key in cache:
            return cache[key]
        hit = self._find_redex(word, strategy)
        if hit is None:
            result = {(ONE_MONOMIAL, word): Fraction(1)}
        else:
            i, pat, repl = hit
            left, right = word[:i], word[i + len(pat):]
            result: dict = {}
            for (m, w), c in repl.as_dict().items():
                for (m2, w2), c2 in self.normal_form_of_word(left + w + right, strategy, cache).items():
                    k = (mono_mul(m, m2), w2)
                    result[k] = result.get(k, 0) + c * c2
            result = {k: v for k, v in result.items() if v != 0}
        cache[key] = result
        return result


def reduce(p: NCPoly, relations: RelationSet, strategy: str = "leftmost") -> NCPoly:
    """Rewrite ``p`` to normal form: no rule pattern occurs in any surviving word."""
    cache: dict = {}
    out: dict = {}
    for (mono, word), c in p.as_dict().items():
        for (m2, w2), c2 in relations.normal_form_of_word(word, strategy, cache).items():
            k = (mono_mul(mono, m2), w2)
            out[k] = out.get(k, 0) + c * c2
    return NCPoly._from_dict(out)


def is_normal(p: NCPoly, relations: RelationSet) -> bool:
    return all(relations._find_redex(w, "leftmost") is None for w in p.words())
