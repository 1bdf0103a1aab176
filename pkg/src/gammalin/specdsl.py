"""A small scripting language for relation experiments (``.ncs`` files).

    # anticommuting involutions
    symbols X Y;
    vars x y;
    relation X*X = 1;
    relation Y*Y = 1;
    relation Y*X = -1*X*Y;
    reduce (x*X + y*Y)^2;

Uppercase identifiers are noncommuting symbols, lowercase ones are
commuting variables or ``let``-bound scalars.  Every identifier must be
declared before use.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

from .exactnum import IncompatibleFieldError, InvalidOrderError, zeta
from .ncalg import NCPoly, NonTerminatingError, RelationSet, perm_sum, reduce

KEYWORDS = frozenset({"symbols", "vars", "let", "relation", "expand", "reduce", "permsum", "check", "zeta"})
PUNCT = {";": "SEMI", "=": "EQ", "+": "PLUS", "-": "MINUS", "*": "STAR", "/": "SLASH",
         "^": "CARET", "(": "LPAREN", ")": "RPAREN"}
TOKEN_TEXT = {v: repr(k) for k, v in PUNCT.items()}
TOKEN_TEXT.update({"IDENT": "identifier", "INT": "integer", "EOF": "end of input"})

MAX_EXPONENT = 64
MAX_NESTING = 100


# ---------------------------------------------------------------------------
# Locations and errors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SourceSpan:
    line: int
    column: int
    start: int  # UTF-8 byte offsets into the source
    end: int

    def merge(self, other: SourceSpan) -> SourceSpan:
        return SourceSpan(self.line, self.column, self.start, max(self.end, other.end))

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}"


class DslError(Exception):
    def __init__(self, message: str, span: SourceSpan, expected: frozenset[str] = frozenset()):
        self.message = message
        self.span = span
        self.expected = expected
        text = f"{span}: {message}"
        if expected:
            text += f" (expected {', '.join(sorted(expected))})"
        super().__init__(text)


class LexError(DslError):
    pass


class ParseError(DslError):
    pass


class UndeclaredIdentifierError(DslError):
    pass


class DeclarationError(DslError):
    pass


class RelationError(DslError):
    pass


class RunError(DslError):
    pass


# ---------------------------------------------------------------------------
# Lexer
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    span: SourceSpan

    def describe(self) -> str:
        return "end of input" if self.kind == "EOF" else repr(self.text)


def tokenize(text: str) -> list[Token]:
    tokens = []
    i, line, col, byte = 0, 1, 1, 0
    n = len(text)

    def width(s: str) -> int:
        return len(s.encode("utf-8"))

    while i < n:
        c = text[i]
        if c == "\n":
            i, line, col, byte = i + 1, line + 1, 1, byte + 1
            continue
        if c.isspace():
            i, col, byte = i + 1, col + 1, byte + width(c)
            continue
        if c == "#":
            while i < n and text[i] != "\n":
                byte += width(text[i])
                i += 1
                col += 1
            continue
        j = i
        if c.isascii() and (c.isalpha() or c == "_"):
            while j < n and text[j].isascii() and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "KW" if word in KEYWORDS else "IDENT"
        elif c.isascii() and c.isdigit():
            while j < n and text[j].isascii() and text[j].isdigit():
                j += 1
            word, kind = text[i:j], "INT"
        elif c in PUNCT:
            j, word, kind = i + 1, c, PUNCT[c]
        else:
            raise LexError(f"unexpected character {c!r}", SourceSpan(line, col, byte, byte + width(c)))
        w = width(word)
        tokens.append(Token(kind, word, SourceSpan(line, col, byte, byte + w)))
        i, col, byte = j, col + (j - i), byte + w
    tokens.append(Token("EOF", "", SourceSpan(line, col, byte, byte)))
    return tokens


# ---------------------------------------------------------------------------
# Syntax tree; spans never take part in equality
# ---------------------------------------------------------------------------

def _span():
    return field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Num:
    value: Fraction
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Name:
    name: str
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Zeta:
    order: int
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Neg:
    operand: object
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Sum:
    first: object
    rest: tuple  # of (op, node), op in "+-"
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Prod:
    factors: tuple
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class SymbolsDecl:
    names: tuple[str, ...]
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class VarsDecl:
    names: tuple[str, ...]
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Let:
    name: str
    expr: object
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Relation:
    lhs: object
    rhs: object
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Expand:
    expr: object
    span: SourceSpan | None = _span()

    @property
    def power(self) -> int | None:
        return self.expr.exponent if isinstance(self.expr, Pow) else None


@dataclass(frozen=True)
class Reduce:
    expr: object
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class PermSum:
    n: int
    k: int
    symbols: tuple[str, str] | None = None
    span: SourceSpan | None = _span()


@dataclass(frozen=True)
class Check:
    lhs: object
    rhs: object
    span: SourceSpan | None = _span()


COMMANDS = (Expand, Reduce, PermSum, Check)


@dataclass(frozen=True)
class Program:
    statements: tuple

    @property
    def symbols(self) -> tuple[str, ...]:
        return tuple(n for s in self.statements if isinstance(s, SymbolsDecl) for n in s.names)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(n for s in self.statements if isinstance(s, VarsDecl) for n in s.names)

    @property
    def scalars(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.statements if isinstance(s, Let))

    @property
    def relations(self) -> tuple[Relation, ...]:
        return tuple(s for s in self.statements if isinstance(s, Relation))

    @property
    def commands(self) -> tuple:
        return tuple(s for s in self.statements if isinstance(s, COMMANDS))


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

ATOM_START = frozenset({"integer", "identifier", "'zeta'", "'('", "'-'"})


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        t = self.tokens[self.pos]
        if t.kind != "EOF":
            self.pos += 1
        return t

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def fail(self, expected) -> ParseError:
        t = self.tok
        return ParseError(f"unexpected {t.describe()}", t.span, frozenset(expected))

    def expect(self, kind: str, text: str | None = None) -> Token:
        if not self.at(kind, text):
            raise self.fail({repr(text) if text else TOKEN_TEXT[kind]})
        return self.advance()

    def parse_program(self) -> list:
        stmts = []
        while not self.at("EOF"):
            stmts.append(self.parse_statement())
        return stmts

    def parse_statement(self):
        t = self.tok
        if t.kind != "KW" or t.text == "zeta":
            raise self.fail({"'symbols'", "'vars'", "'let'", "'relation'", "'expand'",
                             "'reduce'", "'permsum'", "'check'"})
        self.advance()
        kw = t.text
        if kw in ("symbols", "vars"):
            names = [self.expect("IDENT").text]
            while self.at("IDENT"):
                names.append(self.advance().text)
            node_cls = SymbolsDecl if kw == "symbols" else VarsDecl
            node = (node_cls, (tuple(names),))
        elif kw == "let":
            name = self.expect("IDENT").text
            self.expect("EQ")
            node = (Let, (name, self.parse_expr()))
        elif kw in ("relation", "check"):
            lhs = self.parse_expr()
            self.expect("EQ")
            node = (Relation if kw == "relation" else Check, (lhs, self.parse_expr()))
        elif kw in ("expand", "reduce"):
            node = (Expand if kw == "expand" else Reduce, (self.parse_expr(),))
        else:  # permsum
            n = int(self.expect("INT").text)
            k = int(self.expect("INT").text)
            syms = None
            if self.at("IDENT"):
                syms = (self.advance().text, self.expect("IDENT").text)
            node = (PermSum, (n, k, syms))
        end = self.expect("SEMI")
        cls, args = node
        return cls(*args, span=t.span.merge(end.span))

    def parse_expr(self):
        self.depth += 1
        if self.depth > MAX_NESTING:
            raise ParseError("expression nested too deeply", self.tok.span)
        start = self.tok.span
        first = self.parse_term()
        rest = []
        while self.at("PLUS") or self.at("MINUS"):
            op = self.advance().text
            rest.append((op, self.parse_term()))
        self.depth -= 1
        if not rest:
            return first
        return Sum(first, tuple(rest), span=start.merge(self.tokens[self.pos - 1].span))

    def parse_term(self):
        start = self.tok.span
        factors = [self.parse_unary()]
        while self.at("STAR"):
            self.advance()
            factors.append(self.parse_unary())
        if len(factors) == 1:
            return factors[0]
        return Prod(tuple(factors), span=start.merge(self.tokens[self.pos - 1].span))

    def parse_unary(self):
        if self.at("MINUS"):
            t = self.advance()
            self.depth += 1
            if self.depth > MAX_NESTING:
                raise ParseError("expression nested too deeply", t.span)
            operand = self.parse_unary()
            self.depth -= 1
            return Neg(operand, span=t.span.merge(self.tokens[self.pos - 1].span))
        return self.parse_power()

    def parse_power(self):
        start = self.tok.span
        base = self.parse_atom()
        if self.at("CARET"):
            self.advance()
            t = self.expect("INT")
            exp = int(t.text)
            if exp > MAX_EXPONENT:
                raise ParseError(f"exponent {exp} exceeds the limit {MAX_EXPONENT}", t.span)
            return Pow(base, exp, span=start.merge(t.span))
        return base

    def parse_atom(self):
        t = self.tok
        if t.kind == "INT":
            self.advance()
            if self.at("SLASH"):
                self.advance()
                d = self.expect("INT")
                if int(d.text) == 0:
                    raise ParseError("zero denominator", d.span)
                return Num(Fraction(int(t.text), int(d.text)), span=t.span.merge(d.span))
            return Num(Fraction(int(t.text)), span=t.span)
        if t.kind == "IDENT":
            self.advance()
            return Name(t.text, span=t.span)
        if t.kind == "KW" and t.text == "zeta":
            self.advance()
            self.expect("LPAREN")
            o = self.expect("INT")
            end = self.expect("RPAREN")
            if int(o.text) < 1:
                raise ParseError("zeta order must be >= 1", o.span)
            return Zeta(int(o.text), span=t.span.merge(end.span))
        if t.kind == "LPAREN":
            self.advance()
            inner = self.parse_expr()
            self.expect("RPAREN")
            return inner
        raise self.fail(ATOM_START)


# ---------------------------------------------------------------------------
# Evaluation of expressions
# ---------------------------------------------------------------------------

def _walk(node) -> Iterator:
    yield node
    if isinstance(node, Neg):
        yield from _walk(node.operand)
    elif isinstance(node, Sum):
        yield from _walk(node.first)
        for _, n in node.rest:
            yield from _walk(n)
    elif isinstance(node, Prod):
        for n in node.factors:
            yield from _walk(n)
    elif isinstance(node, Pow):
        yield from _walk(node.base)


def _is_symbol(name: str) -> bool:
    return name[0].isupper()


def evaluate_expr(node, scalars: dict) -> NCPoly:
    """Turn an expression into an NCPoly; lowercase names not in ``scalars`` are variables."""
    try:
        return _eval(node, scalars)
    except (IncompatibleFieldError, InvalidOrderError, ZeroDivisionError) as exc:
        raise RunError(str(exc), node.span) from None


def _eval(node, scalars: dict) -> NCPoly:
    if isinstance(node, Num):
        return NCPoly.constant(node.value)
    if isinstance(node, Zeta):
        return NCPoly.constant(zeta(node.order))
    if isinstance(node, Name):
        if _is_symbol(node.name):
            return NCPoly.symbol(node.name)
        if node.name in scalars:
            return NCPoly.constant(scalars[node.name])
        return NCPoly.variable(node.name)
    if isinstance(node, Neg):
        return -_eval(node.operand, scalars)
    if isinstance(node, Sum):
        acc = _eval(node.first, scalars)
        for op, n in node.rest:
            v = _eval(n, scalars)
            acc = acc + v if op == "+" else acc - v
        return acc
    if isinstance(node, Prod):
        acc = _eval(node.factors[0], scalars)
        for n in node.factors[1:]:
            acc = acc * _eval(n, scalars)
        return acc
    if isinstance(node, Pow):
        # X^3 means X*X*X; the algebra core never sees exponents on words
        return _eval(node.base, scalars) ** node.exponent
    raise TypeError(f"not an expression node: {node!r}")


def _scalar_value(poly: NCPoly):
    if poly.is_zero():
        return Fraction(0)
    if len(poly) == 1:
        (mono, word, c), = poly.terms()
        if not mono and not word:
            return c
    return None


# ---------------------------------------------------------------------------
# Semantic checks
# ---------------------------------------------------------------------------

class _Checker:
    def __init__(self):
        self.symbols: dict[str, SourceSpan] = {}
        self.variables: dict[str, SourceSpan] = {}
        self.scalars: dict[str, object] = {}
        self.rules: list = []

    def declared(self, name: str) -> bool:
        return name in self.symbols or name in self.variables or name in self.scalars

    def declare(self, name: str, span: SourceSpan, kind: str) -> None:
        if self.declared(name):
            raise DeclarationError(f"{name!r} is already declared", span)
        if kind == "symbol" and not _is_symbol(name):
            raise DeclarationError(f"symbol {name!r} must start with an uppercase letter", span)
        if kind != "symbol" and _is_symbol(name):
            raise DeclarationError(f"{kind} {name!r} must start with a lowercase letter", span)

    def check_names(self, expr) -> None:
        for node in _walk(expr):
            if isinstance(node, Name):
                ok = node.name in self.symbols if _is_symbol(node.name) else (
                    node.name in self.variables or node.name in self.scalars)
                if not ok:
                    raise UndeclaredIdentifierError(f"undeclared identifier {node.name}", node.span)

    def statement(self, s) -> None:
        if isinstance(s, (SymbolsDecl, VarsDecl)):
            kind = "symbol" if isinstance(s, SymbolsDecl) else "variable"
            target = self.symbols if kind == "symbol" else self.variables
            for name in s.names:
                self.declare(name, s.span, kind)
                target[name] = s.span
        elif isinstance(s, Let):
            self.declare(s.name, s.span, "scalar")
            self.check_names(s.expr)
            value = _scalar_value(evaluate_expr(s.expr, self.scalars))
            if value is None:
                raise DeclarationError(f"let {s.name}: right side is not a scalar", s.expr.span)
            self.scalars[s.name] = value
        elif isinstance(s, Relation):
            self.relation(s)
        elif isinstance(s, (Expand, Reduce)):
            self.check_names(s.expr)
        elif isinstance(s, Check):
            self.check_names(s.lhs)
            self.check_names(s.rhs)
        elif isinstance(s, PermSum):
            for name in s.symbols or ():
                if name not in self.symbols:
                    raise UndeclaredIdentifierError(f"undeclared identifier {name}", s.span)

    def relation(self, s: Relation) -> None:
        # orientation is structural, so it is checked before name resolution
        lhs = evaluate_expr(s.lhs, self.scalars)
        rhs = evaluate_expr(s.rhs, self.scalars)
        pattern = _relation_pattern(lhs)
        if pattern is None:
            raise RelationError("relation left side must be a single word of symbols", s.lhs.span)
        try:
            RelationSet(self.rules + [(pattern, rhs)])
        except NonTerminatingError:
            raise RelationError(
                f"relation does not decrease term order: {format_expr(s.lhs)} -> {rhs}", s.span
            ) from None
        self.check_names(s.lhs)
        self.check_names(s.rhs)
        self.rules.append((pattern, rhs))


def _relation_pattern(lhs: NCPoly):
    if len(lhs) != 1:
        return None
    (mono, word, c), = lhs.terms()
    if mono or not word or c != 1:
        return None
    return word


def parse(text: str) -> Program:
    """Parse and validate a script; every failure is a :class:`DslError` with a span."""
    parser = _Parser(text)
    stmts = parser.parse_program()
    checker = _Checker()
    for s in stmts:
        checker.statement(s)
    return Program(tuple(stmts))


# ---------------------------------------------------------------------------
# Canonical formatting
# ---------------------------------------------------------------------------

def format_expr(node) -> str:
    if isinstance(node, Num):
        v = node.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(node, Name):
        return node.name
    if isinstance(node, Zeta):
        return f"zeta({node.order})"
    if isinstance(node, Neg):
        inner = node.operand
        body = format_expr(inner)
        return f"-({body})" if isinstance(inner, (Sum, Prod)) else f"-{body}"
    if isinstance(node, Sum):
        parts = [_paren_if(node.first, Sum)]
        for op, n in node.rest:
            parts.append(f"{op} {_paren_if(n, Sum)}")
        return " ".join(parts)
    if isinstance(node, Prod):
        return "*".join(_paren_if(f, (Sum, Prod)) for f in node.factors)
    if isinstance(node, Pow):
        base = node.base
        wrap = isinstance(base, (Sum, Prod, Neg, Pow)) or (isinstance(base, Num) and base.value.denominator != 1)
        b = format_expr(base)
        return f"({b})^{node.exponent}" if wrap else f"{b}^{node.exponent}"
    raise TypeError(f"not an expression node: {node!r}")


def _paren_if(node, kinds) -> str:
    s = format_expr(node)
    return f"({s})" if isinstance(node, kinds) else s


def format_statement(s) -> str:
    if isinstance(s, SymbolsDecl):
        return "symbols " + " ".join(s.names) + ";"
    if isinstance(s, VarsDecl):
        return "vars " + " ".join(s.names) + ";"
    if isinstance(s, Let):
        return f"let {s.name} = {format_expr(s.expr)};"
    if isinstance(s, Relation):
        return f"relation {format_expr(s.lhs)} = {format_expr(s.rhs)};"
    if isinstance(s, Check):
        return f"check {format_expr(s.lhs)} = {format_expr(s.rhs)};"
    if isinstance(s, Expand):
        return f"expand {format_expr(s.expr)};"
    if isinstance(s, Reduce):
        return f"reduce {format_expr(s.expr)};"
    if isinstance(s, PermSum):
        syms = f" {s.symbols[0]} {s.symbols[1]}" if s.symbols else ""
        return f"permsum {s.n} {s.k}{syms};"
    raise TypeError(f"not a statement: {s!r}")


def format(p: Program) -> str:  # noqa: A001 - mirrors parse()
    return "".join(format_statement(s) + "\n" for s in p.statements)


# ---------------------------------------------------------------------------
# Running
# ---------------------------------------------------------------------------

@dataclass
class CommandResult:
    command: str
    output: str
    span: SourceSpan | None = None


@dataclass
class Report:
    results: list[CommandResult] = field(default_factory=list)

    @property
    def outputs(self) -> list[str]:
        return [r.output for r in self.results]

    def to_dict(self) -> dict:
        return {"results": [{"command": r.command, "output": r.output,
                             "line": r.span.line if r.span else None} for r in self.results]}

    def render_text(self) -> str:
        return "\n".join(f"{r.command}\n  => {r.output}" for r in self.results)


def run(p: Program) -> Report:
    scalars: dict = {}
    rules: list = []
    symbols: list[str] = []
    report = Report()
    for s in p.statements:
        if isinstance(s, SymbolsDecl):
            symbols.extend(s.names)
        elif isinstance(s, Let):
            scalars[s.name] = _scalar_value(evaluate_expr(s.expr, scalars))
        elif isinstance(s, Relation):
            rules.append((_relation_pattern(evaluate_expr(s.lhs, scalars)), evaluate_expr(s.rhs, scalars)))
        elif isinstance(s, COMMANDS):
            out = _run_command(s, scalars, rules, symbols)
            report.results.append(CommandResult(format_statement(s)[:-1], out, s.span))
    return report


def _run_command(s, scalars, rules, symbols) -> str:
    try:
        relations = RelationSet(rules)
        if isinstance(s, Expand):
            return str(evaluate_expr(s.expr, scalars))
        if isinstance(s, Reduce):
            return str(reduce(evaluate_expr(s.expr, scalars), relations))
        if isinstance(s, Check):
            diff = reduce(evaluate_expr(s.lhs, scalars) - evaluate_expr(s.rhs, scalars), relations)
            return "true" if diff.is_zero() else f"false (difference {diff})"
        names = s.symbols
        if names is None:
            if len(symbols) < 2:
                raise RunError("permsum needs two declared symbols", s.span)
            names = (symbols[0], symbols[1])
        return str(perm_sum(s.n, s.k, names))
    except DslError:
        raise
    except (ValueError, ArithmeticError) as exc:
        raise RunError(str(exc), s.span) from None


def run_text(text: str) -> Report:
    return run(parse(text))
