"""Constraint systems for the linearized power sum ``z*Gz = x*Gx + y*Gy``.

Raising the ansatz to the n-th power forces every mixed word sum to vanish
and each generator to be an n-th root of the identity.  This module builds
that relation set, reproduces the condition-counting verdict (n + 1
conditions against 3 unknown matrices), and certifies concrete candidates
exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .linmat import ExactMatrix, ShapeError, evaluate
from .ncalg import NCPoly, perm_sum
from .report import RelationCheck

UNKNOWN_COUNT = 3


@dataclass(frozen=True)
class Constraint:
    name: str
    poly: NCPoly
    target: str  # "zero" or "identity"

    def __str__(self) -> str:
        return f"{self.poly} = {'0' if self.target == 'zero' else '1'}"


@dataclass
class ConstraintSystem:
    n: int
    algebraic_constraints: list[Constraint]
    counted_equation_count: int
    unknown_count: int = UNKNOWN_COUNT

    @property
    def perm_sum_constraints(self) -> list[Constraint]:
        return [c for c in self.algebraic_constraints if c.name.startswith("perm_sum")]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "algebraic_constraints": [
                {"name": c.name, "lhs": str(c.poly), "rhs": "0" if c.target == "zero" else "1"}
                for c in self.algebraic_constraints
            ],
            "perm_sum_constraint_count": len(self.perm_sum_constraints),
            "counted_equation_count": self.counted_equation_count,
            "unknown_count": self.unknown_count,
        }


def constraint_system(n: int) -> ConstraintSystem:
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"constraint_system needs n >= 1, got {n!r}")
    cons = [
        Constraint("unit_power_X", NCPoly.word(("X",) * n), "identity"),
        Constraint("unit_power_Y", NCPoly.word(("Y",) * n), "identity"),
    ]
    cons += [Constraint(f"perm_sum_{k}", perm_sum(n, k), "zero") for k in range(1, n)]
    # the tally counts the n-1 vanishing sums plus the scalar equation and the ansatz
    return ConstraintSystem(n, cons, counted_equation_count=(n - 1) + 2)


@dataclass(frozen=True)
class Compatibility:
    n: int
    compatible: bool
    condition_count: int
    unknown_count: int
    explanation: str

    def __bool__(self) -> bool:
        return self.compatible

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "compatible": self.compatible,
            "condition_count": self.condition_count,
            "unknown_count": self.unknown_count,
            "explanation": self.explanation,
        }


def counting_compatibility(n: int) -> Compatibility:
    """Counting verdict only: n + 1 conditions against 3 unknowns.

    This says nothing about whether matrices satisfying the relations exist.
    """
    conditions = n + 1
    ok = conditions <= UNKNOWN_COUNT
    word = "compatible" if ok else "incompatible"
    explanation = (
        f"{conditions} conditions vs {UNKNOWN_COUNT} unknown matrices: "
        f"{conditions} {'<=' if ok else '>'} {UNKNOWN_COUNT}, {word} by counting"
    )
    return Compatibility(n, ok, conditions, UNKNOWN_COUNT, explanation)


@dataclass
class CertificationReport:
    n: int
    triple: tuple[int, int, int]
    constraints: list[RelationCheck]
    gz: ExactMatrix
    gz_power_check: bool
    fermat_check: bool
    degenerate: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def all_constraints_pass(self) -> bool:
        return all(c.passed for c in self.constraints)

    def to_dict(self) -> dict:
        x, y, z = self.triple
        return {
            "n": self.n,
            "triple": [x, y, z],
            "field": self.gz.field,
            "dim": self.gz.dim,
            "constraints": [c.to_dict() for c in self.constraints],
            "all_constraints_pass": self.all_constraints_pass,
            "gz": self.gz.to_strings(),
            "gz_power_check": self.gz_power_check,
            "fermat_check": self.fermat_check,
            "degenerate": self.degenerate,
            "notes": list(self.notes),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def render_text(self) -> str:
        x, y, z = self.triple
        lines = [f"certify n={self.n} (x, y, z) = ({x}, {y}, {z}) dim={self.gz.dim} field={self.gz.field}"]
        for c in self.constraints:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.expression}")
            if c.defect is not None:
                lines.append(f"         defect {c.defect}")
        lines.append(f"  Gz = (x*Gx + y*Gy)/z = {self.gz}")
        lines.append(f"  [{'PASS' if self.gz_power_check else 'FAIL'}] Gz^{self.n} = 1")
        lines.append(f"  [{'PASS' if self.fermat_check else 'FAIL'}] {z}^{self.n} = {x}^{self.n} + {y}^{self.n}")
        lines.extend(f"  note: {note}" for note in self.notes)
        return "\n".join(lines)


def certify_solution(n: int, x: int, y: int, z: int, gx: ExactMatrix, gy: ExactMatrix) -> CertificationReport:
    if z == 0:
        raise ValueError("z must be nonzero")
    if gx.dim != gy.dim:
        raise ShapeError(f"gx is {gx.dim}x{gx.dim} but gy is {gy.dim}x{gy.dim}")
    gx._check(gy)

    system = constraint_system(n)
    one = ExactMatrix.identity(gx.dim, gx.field)
    assignment = {"X": gx, "Y": gy}
    checks = []
    for c in system.algebraic_constraints:
        value = evaluate(c.poly, assignment)
        defect = value - one if c.target == "identity" else value
        checks.append(RelationCheck.from_defect(c.name, defect, str(c)))

    gz = (x * gx + y * gy) / z
    report = CertificationReport(
        n=n,
        triple=(x, y, z),
        constraints=checks,
        gz=gz,
        gz_power_check=gz ** n == one,
        fermat_check=z ** n == x ** n + y ** n,
        degenerate=(x == 0 or y == 0),
    )
    if report.degenerate:
        report.notes.append("degenerate input: a zero coefficient collapses the constraint set")
    return report
