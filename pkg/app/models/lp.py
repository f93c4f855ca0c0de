from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Tuple

from pydantic import Field, model_validator

from app.models.base import FrozenModel, Rational


class Variable(FrozenModel):
    label: str
    lower: Rational = Fraction(0)
    upper: Optional[Rational] = None


class Constraint(FrozenModel):
    """sum(coefficients[j] * x_j) <= rhs"""

    label: str
    coefficients: Dict[int, Rational]
    rhs: Rational


class LinearProgram(FrozenModel):
    """Maximize objective . x subject to constraints and variable bounds."""

    name: str = "lp"
    variables: Tuple[Variable, ...] = ()
    objective: Dict[int, Rational] = Field(default_factory=dict)
    constraints: Tuple[Constraint, ...] = ()

    @model_validator(mode="after")
    def check_labels(self) -> "LinearProgram":
        labels = [v.label for v in self.variables] + [r.label for r in self.constraints]
        if len(set(labels)) != len(labels):
            raise ValueError("variable and constraint labels must be unique")
        n = len(self.variables)
        for j in self.objective:
            if not 0 <= j < n:
                raise ValueError(f"objective references unknown variable {j}")
        for row in self.constraints:
            for j in row.coefficients:
                if not 0 <= j < n:
                    raise ValueError(f"constraint {row.label} references unknown variable {j}")
        for var in self.variables:
            if var.upper is not None and var.upper < var.lower:
                raise ValueError(f"variable {var.label} has empty bounds")
        return self

    @cached_property
    def index(self) -> Dict[str, int]:
        return {v.label: j for j, v in enumerate(self.variables)}

    def to_lp_text(self) -> str:
        """CPLEX-LP style dump for cross-checking with external solvers."""

        def num(q: Fraction) -> str:
            from app.services.graph_core import format_rational

            text = format_rational(q)
            return f"{float(q):.15g}" if "/" in text else text

        def linear(coefs: Dict[int, Fraction]) -> str:
            terms: List[str] = []
            for j in sorted(coefs):
                q = coefs[j]
                if q == 0:
                    continue
                sign = "-" if q < 0 else "+"
                mag = abs(q)
                body = self.variables[j].label if mag == 1 else f"{num(mag)} {self.variables[j].label}"
                terms.append(f"{sign} {body}")
            if not terms:
                return "0"
            text = " ".join(terms)
            return text[2:] if text.startswith("+ ") else text

        lines = [f"\\ {self.name}", "Maximize", f" obj: {linear(self.objective)}", "Subject To"]
        for row in self.constraints:
            lines.append(f" {row.label}: {linear(row.coefficients)} <= {num(row.rhs)}")
        lines.append("Bounds")
        for var in self.variables:
            if var.upper is None:
                lines.append(f" {var.label} >= {num(var.lower)}")
            else:
                lines.append(f" {num(var.lower)} <= {var.label} <= {num(var.upper)}")
        lines.append("End")
        return "\n".join(lines) + "\n"


class ExtremeSolution(FrozenModel):
    """An optimal basic feasible solution in exact arithmetic."""

    values: Tuple[Rational, ...]
    objective: Rational
    tight: Tuple[str, ...]
    basis: Tuple[str, ...]
    pivots: int = 0
    pivot_rule: str = "dantzig"

    def value(self, lp: LinearProgram, label: str) -> Fraction:
        return self.values[lp.index[label]]


class GapRow(FrozenModel):
    n: int
    lp1_value: Rational
    ip_opt: Rational
    ip_exact: bool
    ratio: Rational
