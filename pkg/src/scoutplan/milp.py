"""Solver-agnostic mixed-integer linear program representation.

Models are built incrementally (single writer) and then treated as immutable;
a finished model can be shared across concurrent solvers.  The objective is
always minimized.  Quadratic terms never appear here: cost products are
linearized before they reach this layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

BINARY = "binary"
INTEGER = "integer"
CONTINUOUS = "continuous"

FEAS_TOL = 1e-6
INT_TOL = 1e-6


class Sense(str, Enum):
    LE = "<="
    EQ = "=="
    GE = ">="


@dataclass(frozen=True)
class VarDef:
    """One decision variable; ids are dense in insertion order."""

    id: int
    kind: str
    lower: float
    upper: float
    name: str


class LinExpr:
    """Sparse linear expression: coefficient map plus a constant term."""

    __slots__ = ("coeffs", "constant")

    def __init__(self, coeffs: dict[int, float] | None = None, constant: float = 0.0):
        self.coeffs: dict[int, float] = {}
        if coeffs:
            for var, coef in coeffs.items():
                self.add_term(var, coef)
        self.constant = constant

    def add_term(self, var: int, coef: float) -> "LinExpr":
        if not math.isfinite(coef):
            raise ValueError(f"non-finite coefficient for variable {var}")
        if coef == 0.0:
            return self
        new = self.coeffs.get(var, 0.0) + coef
        if new == 0.0:
            self.coeffs.pop(var, None)
        else:
            self.coeffs[var] = new
        return self

    def value(self, assignment) -> float:
        return self.constant + sum(
            coef * assignment[var] for var, coef in self.coeffs.items()
        )

    def __repr__(self):
        terms = " + ".join(f"{c}*x{v}" for v, c in sorted(self.coeffs.items()))
        return f"LinExpr({terms or '0'} + {self.constant})"


@dataclass(frozen=True)
class Constraint:
    expr: LinExpr
    sense: Sense
    rhs: float
    name: str


@dataclass
class Model:
    """Minimization MILP: variable table, constraints, linear objective."""

    name: str = "model"
    variables: list[VarDef] = field(default_factory=list)
    constraints: list[Constraint] = field(default_factory=list)
    objective: LinExpr = field(default_factory=LinExpr)
    _names: set[str] = field(default_factory=set, repr=False)

    def add_var(self, kind: str, lower: float, upper: float, name: str) -> int:
        if name in self._names:
            raise ValueError(f"duplicate variable name {name!r}")
        if lower > upper:
            raise ValueError(f"variable {name!r}: lower {lower} > upper {upper}")
        if kind == BINARY and (lower, upper) != (0.0, 1.0):
            raise ValueError(f"binary variable {name!r} must have bounds [0, 1]")
        if kind not in (BINARY, INTEGER, CONTINUOUS):
            raise ValueError(f"unknown variable kind {kind!r}")
        vid = len(self.variables)
        self.variables.append(VarDef(vid, kind, float(lower), float(upper), name))
        self._names.add(name)
        return vid

    def add_constraint(self, expr: LinExpr, sense: Sense, rhs: float, name: str) -> int:
        if not math.isfinite(rhs):
            raise ValueError(f"constraint {name!r}: non-finite rhs")
        self.constraints.append(Constraint(expr, sense, float(rhs), name))
        return len(self.constraints) - 1

    def integer_ids(self) -> list[int]:
        return [v.id for v in self.variables if v.kind in (BINARY, INTEGER)]

    def check(self) -> None:
        n = len(self.variables)
        for con in self.constraints:
            for var in con.expr.coeffs:
                if not 0 <= var < n:
                    raise ValueError(f"constraint {con.name!r} references unknown variable {var}")
        for var in self.objective.coeffs:
            if not 0 <= var < n:
                raise ValueError(f"objective references unknown variable {var}")


@dataclass(frozen=True)
class Violation:
    kind: str      # "constraint" | "bound" | "integrality"
    name: str
    amount: float


@dataclass(frozen=True)
class EvalResult:
    objective: float
    violations: tuple[Violation, ...]

    @property
    def feasible(self) -> bool:
        return not self.violations


def evaluate(model: Model, assignment, feas_tol: float = FEAS_TOL,
             int_tol: float = INT_TOL) -> EvalResult:
    """Objective value and all constraint/bound/integrality violations.

    assignment maps variable id to value (any indexable covering all ids).
    """
    for var in model.variables:
        try:
            assignment[var.id]
        except (KeyError, IndexError):
            raise KeyError(f"assignment missing variable {var.name!r} (id {var.id})")

    violations = []
    for var in model.variables:
        x = assignment[var.id]
        if x < var.lower - feas_tol:
            violations.append(Violation("bound", var.name, var.lower - x))
        elif x > var.upper + feas_tol:
            violations.append(Violation("bound", var.name, x - var.upper))
        if var.kind in (BINARY, INTEGER) and abs(x - round(x)) > int_tol:
            violations.append(Violation("integrality", var.name, abs(x - round(x))))

    for con in model.constraints:
        lhs = con.expr.value(assignment)
        slack = lhs - con.rhs
        if con.sense is Sense.LE and slack > feas_tol:
            violations.append(Violation("constraint", con.name, slack))
        elif con.sense is Sense.GE and slack < -feas_tol:
            violations.append(Violation("constraint", con.name, -slack))
        elif con.sense is Sense.EQ and abs(slack) > feas_tol:
            violations.append(Violation("constraint", con.name, abs(slack)))

    return EvalResult(model.objective.value(assignment), tuple(violations))


# -- MPS export ---------------------------------------------------------------

_SENSE_ROW = {Sense.LE: "L", Sense.GE: "G", Sense.EQ: "E"}


def _num(value: float) -> str:
    text = f"{value:.12g}"
    return text


def export_mps(model: Model) -> str:
    """Fixed-format MPS text for the model.

    Column order follows variable ids and row order the constraint list, so
    identical models produce byte-identical text.  Variable and row names are
    emitted as x<id> / c<index> to respect the 8-character field; the
    objective row is OBJ.  A nonzero objective constant is encoded as an RHS
    entry on OBJ (the usual convention: readers subtract it).
    """
    lines = [f"NAME          {model.name.upper()[:8] or 'MODEL'}"]
    lines.append("ROWS")
    lines.append(" N  OBJ")
    for i, con in enumerate(model.constraints):
        lines.append(f" {_SENSE_ROW[con.sense]}  c{i}")

    by_col: dict[int, list[tuple[str, float]]] = {v.id: [] for v in model.variables}
    for var, coef in model.objective.coeffs.items():
        by_col[var].append(("OBJ", coef))
    for i, con in enumerate(model.constraints):
        for var, coef in sorted(con.expr.coeffs.items()):
            by_col[var].append((f"c{i}", coef))

    lines.append("COLUMNS")
    marker = 0
    in_int = False
    for var in model.variables:
        is_int = var.kind in (BINARY, INTEGER)
        if is_int and not in_int:
            lines.append(f"    MARKER{marker:04d}  'MARKER'                 'INTORG'")
            marker += 1
            in_int = True
        elif not is_int and in_int:
            lines.append(f"    MARKER{marker:04d}  'MARKER'                 'INTEND'")
            marker += 1
            in_int = False
        entries = by_col[var.id] or [("OBJ", 0.0)]
        for row, coef in entries:
            lines.append(f"    x{var.id:<8} {row:<9} {_num(coef)}")
    if in_int:
        lines.append(f"    MARKER{marker:04d}  'MARKER'                 'INTEND'")

    lines.append("RHS")
    if model.objective.constant != 0.0:
        lines.append(f"    RHS       {'OBJ':<9} {_num(-model.objective.constant)}")
    for i, con in enumerate(model.constraints):
        rhs = con.rhs - con.expr.constant
        if rhs != 0.0:
            name = f"c{i}"
            lines.append(f"    RHS       {name:<9} {_num(rhs)}")

    lines.append("BOUNDS")
    for var in model.variables:
        name = f"x{var.id}"
        if var.kind == BINARY:
            lines.append(f" BV BND       {name}")
            continue
        if var.lower == var.upper:
            lines.append(f" FX BND       {name:<9} {_num(var.lower)}")
            continue
        if math.isinf(var.lower):
            lines.append(f" MI BND       {name}")
        elif var.lower != 0.0 or var.kind == INTEGER:
            lines.append(f" LO BND       {name:<9} {_num(var.lower)}")
        if not math.isinf(var.upper):
            lines.append(f" UP BND       {name:<9} {_num(var.upper)}")
    lines.append("ENDATA")
    return "\n".join(lines) + "\n"
