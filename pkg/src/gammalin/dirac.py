"""Dirac alpha/beta matrices, the Hamiltonian square, and the gamma-matrix Clifford relation."""

from __future__ import annotations

from dataclasses import dataclass

from .exactnum import zeta
from .linmat import ExactMatrix, ShapeError
from .ncalg import NCPoly, RelationSet, expand_power, reduce
from .report import CheckReport, RelationCheck

FIELD = "cyclotomic:4"
ALPHA_SYMBOLS = ("A1", "A2", "A3")
BETA_SYMBOL = "B"


@dataclass(frozen=True)
class MetricSignature:
    diagonal: tuple[int, int, int, int] = (1, -1, -1, -1)

    def __post_init__(self):
        if len(self.diagonal) != 4 or any(e not in (1, -1) for e in self.diagonal):
            raise ValueError(f"metric diagonal must be four entries of +-1, got {self.diagonal}")

    def __getitem__(self, mu_nu) -> int:
        mu, nu = mu_nu
        return self.diagonal[mu] if mu == nu else 0

    @property
    def eta(self) -> ExactMatrix:
        return ExactMatrix.diag(list(self.diagonal))


MOSTLY_MINUS = MetricSignature()


@dataclass(frozen=True)
class DiracSet:
    alphas: tuple[ExactMatrix, ExactMatrix, ExactMatrix]
    beta: ExactMatrix

    @property
    def dim(self) -> int:
        return self.beta.dim

    def gammas(self) -> list[ExactMatrix]:
        """gamma^0 = beta, gamma^i = beta alpha^i."""
        return [self.beta] + [self.beta @ a for a in self.alphas]


def _pauli() -> list[ExactMatrix]:
    i = zeta(4)
    return [
        ExactMatrix([[0, 1], [1, 0]], FIELD),
        ExactMatrix([[0, -i], [i, 0]], FIELD),
        ExactMatrix([[1, 0], [0, -1]], FIELD),
    ]


def _block(a, b, c, d) -> ExactMatrix:
    top = [list(ra) + list(rb) for ra, rb in zip(a.rows, b.rows)]
    bottom = [list(rc) + list(rd) for rc, rd in zip(c.rows, d.rows)]
    return ExactMatrix(top + bottom, a.field)


def standard_dirac_set() -> DiracSet:
    """Dirac representation: alpha^i = [[0, s_i], [s_i, 0]], beta = diag(1, 1, -1, -1)."""
    zero = ExactMatrix.zeros(2, FIELD)
    one = ExactMatrix.identity(2, FIELD)
    alphas = tuple(_block(zero, s, s, zero) for s in _pauli())
    beta = _block(one, zero, zero, -one)
    return DiracSet(alphas, beta)


def _same_shape(mats) -> None:
    dims = {m.dim for m in mats}
    if len(dims) != 1:
        raise ShapeError(f"matrices of differing dimension {sorted(dims)}")
    for m in mats[1:]:
        mats[0]._check(m)


def verify_dirac_algebra(s: DiracSet) -> CheckReport:
    mats = list(s.alphas) + [s.beta]
    _same_shape(mats)
    one = ExactMatrix.identity(s.dim, s.beta.field)
    report = CheckReport("Dirac alpha/beta algebra")
    for i, a in enumerate(s.alphas, 1):
        report.checks.append(RelationCheck.from_defect(f"alpha{i}^2 = 1", a @ a - one))
    report.checks.append(RelationCheck.from_defect("beta^2 = 1", s.beta @ s.beta - one))
    for i, a in enumerate(s.alphas, 1):
        report.checks.append(
            RelationCheck.from_defect(f"alpha{i} beta + beta alpha{i} = 0", a @ s.beta + s.beta @ a)
        )
    for i in range(3):
        for j in range(i + 1, 3):
            a, b = s.alphas[i], s.alphas[j]
            report.checks.append(
                RelationCheck.from_defect(f"alpha{i + 1} alpha{j + 1} + alpha{j + 1} alpha{i + 1} = 0", a @ b + b @ a)
            )
    return report


def dirac_relations(alpha_beta: bool = True, alpha_alpha: bool = True) -> RelationSet:
    """Rewrite rules for the alpha/beta algebra with A1 < A2 < A3 < B.

    ``alpha_beta=False`` drops the alpha-beta anticommutation rules;
    ``alpha_alpha=False`` drops the mutual alpha anticommutation rules.
    """
    minus = -NCPoly.one()
    rules = [((s, s), 1) for s in ALPHA_SYMBOLS + (BETA_SYMBOL,)]
    if alpha_beta:
        rules += [((BETA_SYMBOL, a), minus * NCPoly.word((a, BETA_SYMBOL))) for a in ALPHA_SYMBOLS]
    if alpha_alpha:
        for i, ai in enumerate(ALPHA_SYMBOLS):
            for aj in ALPHA_SYMBOLS[i + 1:]:
                rules.append(((aj, ai), minus * NCPoly.word((ai, aj))))
    return RelationSet(rules, symbol_order=ALPHA_SYMBOLS + (BETA_SYMBOL,))


def hamiltonian_square_symbolic(relations: RelationSet | None = None, massless: bool = False) -> NCPoly:
    """Reduce ``(p1 A1 + p2 A2 + p3 A3 + m B)^2``; with all rules this is ``(p1^2 + p2^2 + p3^2 + m^2)*1``."""
    form = [(f"p{i}", a) for i, a in enumerate(ALPHA_SYMBOLS, 1)]
    if not massless:
        form.append(("m", BETA_SYMBOL))
    return reduce(expand_power(form, 2), relations or dirac_relations())


def verify_clifford(gammas, eta: MetricSignature = MOSTLY_MINUS) -> CheckReport:
    """Check gamma^mu gamma^nu + gamma^nu gamma^mu = 2 eta^{mu nu} for the 10 unordered pairs."""
    gammas = list(gammas)
    if len(gammas) != 4:
        raise ShapeError(f"expected 4 gamma matrices, got {len(gammas)}")
    _same_shape(gammas)
    one = ExactMatrix.identity(gammas[0].dim, gammas[0].field)
    report = CheckReport("Clifford relation {g^mu, g^nu} = 2 eta^{mu nu}")
    for mu in range(4):
        for nu in range(mu, 4):
            g, h = gammas[mu], gammas[nu]
            defect = g @ h + h @ g - one.scale(2 * eta[mu, nu])
            report.checks.append(RelationCheck.from_defect(f"mu={mu} nu={nu}", defect))
    return report
