"""Pass/fail records shared by the linearization and Dirac checks."""

from __future__ import annotations

from dataclasses import dataclass, field

from .exactnum import render_scalar
from .linmat import ExactMatrix


@dataclass
class RelationCheck:
    name: str
    passed: bool
    expression: str = ""
    defect: ExactMatrix | None = None

    @classmethod
    def from_defect(cls, name: str, defect: ExactMatrix, expression: str = "") -> RelationCheck:
        ok = defect.is_zero()
        return cls(name, ok, expression, None if ok else defect)

    def to_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.expression:
            out["expression"] = self.expression
        if self.defect is not None:
            out["defect"] = self.defect.to_strings()
            out["defect_norm_sq"] = render_scalar(self.defect.frobenius_norm_sq())
        return out


@dataclass
class CheckReport:
    title: str
    checks: list[RelationCheck] = field(default_factory=list)

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> RelationCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list[RelationCheck]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "all_passed": self.all_passed,
            "checks": [c.to_dict() for c in self.checks],
        }

    def render_text(self) -> str:
        lines = [self.title]
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"  [{mark}] {c.name}" + (f"  {c.expression}" if c.expression else ""))
            if c.defect is not None:
                lines.append(f"         defect {c.defect}  |defect|^2 = {render_scalar(c.defect.frobenius_norm_sq())}")
        return "\n".join(lines)
