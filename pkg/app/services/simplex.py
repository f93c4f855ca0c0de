"""
Exact primal simplex over Fractions, in sparse dictionary form.

Every variable is shifted to x' = x - lower >= 0 and finite upper bounds
become rows, so the working problem is

    maximize c.x'  subject to  A x' <= b,  x' >= 0

and each basic solution is a corner of the original feasible region. The
non-basic variables of the final dictionary are the tight bounds/rows that
certify it.
"""
import logging
import random
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from app.core.config import settings
from app.core.errors import LPInfeasibleError, LPUnboundedError, ParameterError
from app.models.lp import ExtremeSolution, LinearProgram

logger = logging.getLogger(__name__)

ZERO = Fraction(0)
PIVOT_RULES = ("dantzig", "bland")


class SimplexDictionary:
    """
    Rows are x_basic[i] = beta[i] - sum(rows[i][j] * x_j) over non-basic j;
    the objective is z = z0 + sum(obj[j] * x_j).
    """

    def __init__(self, lp: LinearProgram, pivot_rule: str, degenerate_limit: int, column_seed: Optional[int]):
        self.lp = lp
        self.pivot_rule = pivot_rule
        self.degenerate_limit = degenerate_limit
        n = len(lp.variables)
        self.n = n

        self.row_labels: List[str] = []
        self.rows: List[Dict[int, Fraction]] = []
        self.beta: List[Fraction] = []
        lower = [v.lower for v in lp.variables]
        for con in lp.constraints:
            shift = sum((q * lower[j] for j, q in con.coefficients.items()), ZERO)
            self.rows.append({j: q for j, q in con.coefficients.items() if q != 0})
            self.beta.append(con.rhs - shift)
            self.row_labels.append(con.label)
        for j, var in enumerate(lp.variables):
            if var.upper is not None:
                self.rows.append({j: Fraction(1)})
                self.beta.append(var.upper - var.lower)
                self.row_labels.append(f"ub:{var.label}")

        self.m = len(self.rows)
        self.basic: List[int] = [n + i for i in range(self.m)]
        self.nonbasic = set(range(n))
        self.aux = n + self.m
        self.obj: Dict[int, Fraction] = {}
        self.z0 = ZERO

        keys = list(range(n + self.m))
        if column_seed is not None:
            random.Random(column_seed).shuffle(keys)
        keys.append(n + self.m)
        self.key = keys
        self.pivots = 0
        self.degenerate_streak = 0

    def label_of(self, var: int) -> str:
        if var < self.n:
            return f"lb:{self.lp.variables[var].label}"
        return self.row_labels[var - self.n]

    def pivot(self, r: int, s: int) -> None:
        row = self.rows[r]
        a = row[s]
        leaving = self.basic[r]
        new_row = {j: q / a for j, q in row.items() if j != s}
        new_row[leaving] = 1 / a
        new_beta = self.beta[r] / a
        self.rows[r] = new_row
        self.beta[r] = new_beta

        for i, other in enumerate(self.rows):
            if i == r:
                continue
            t = other.pop(s, None)
            if t is None:
                continue
            for j, q in new_row.items():
                updated = other.get(j, ZERO) - t * q
                if updated:
                    other[j] = updated
                else:
                    other.pop(j, None)
            self.beta[i] -= t * new_beta

        cs = self.obj.pop(s, None)
        if cs is not None:
            for j, q in new_row.items():
                updated = self.obj.get(j, ZERO) - cs * q
                if updated:
                    self.obj[j] = updated
                else:
                    self.obj.pop(j, None)
            self.z0 += cs * new_beta

        self.basic[r] = s
        self.nonbasic.discard(s)
        self.nonbasic.add(leaving)
        self.pivots += 1

    def choose_entering(self) -> Optional[int]:
        candidates = [j for j, q in self.obj.items() if q > 0]
        if not candidates:
            return None
        if self.pivot_rule == "bland" or self.degenerate_streak >= self.degenerate_limit:
            return min(candidates, key=lambda j: self.key[j])
        return min(candidates, key=lambda j: (-self.obj[j], self.key[j]))

    def choose_leaving(self, s: int) -> Optional[int]:
        best = None
        best_ratio = None
        for i, row in enumerate(self.rows):
            a = row.get(s)
            if a is None or a <= 0:
                continue
            ratio = self.beta[i] / a
            if (
                best is None
                or ratio < best_ratio
                or (ratio == best_ratio and self.key[self.basic[i]] < self.key[self.basic[best]])
            ):
                best, best_ratio = i, ratio
        return best

    def optimize(self) -> None:
        while True:
            s = self.choose_entering()
            if s is None:
                return
            r = self.choose_leaving(s)
            if r is None:
                raise LPUnboundedError(f"{self.lp.name}: objective unbounded along {self.label_of(s)}")
            if self.beta[r] == 0:
                self.degenerate_streak += 1
            else:
                self.degenerate_streak = 0
            self.pivot(r, s)
            if self.pivots % 200 == 0:
                logger.debug(f"{self.lp.name}: {self.pivots} pivots, objective {self.z0}")

    def phase_one(self) -> None:
        if all(b >= 0 for b in self.beta):
            return
        aux = self.aux
        for row in self.rows:
            row[aux] = Fraction(-1)
        self.nonbasic.add(aux)
        self.obj = {aux: Fraction(-1)}
        self.z0 = ZERO
        r = min(range(self.m), key=lambda i: (self.beta[i], self.key[self.basic[i]]))
        self.pivot(r, aux)
        self.optimize()
        if self.z0 < 0:
            raise LPInfeasibleError(f"{self.lp.name}: no feasible point (phase one optimum {self.z0})")

        if aux in self.basic:
            r = self.basic.index(aux)
            entries = [j for j, q in self.rows[r].items() if q != 0]
            if entries:
                self.pivot(r, min(entries, key=lambda j: self.key[j]))
            else:
                # redundant row: x_aux = 0 identically
                del self.rows[r]
                del self.beta[r]
                del self.basic[r]
                self.m -= 1
        for row in self.rows:
            row.pop(aux, None)
        self.nonbasic.discard(aux)

    def install_objective(self) -> None:
        lp = self.lp
        self.z0 = sum((q * lp.variables[j].lower for j, q in lp.objective.items()), ZERO)
        self.obj = {}
        position = {var: i for i, var in enumerate(self.basic)}
        for j, q in lp.objective.items():
            if q == 0:
                continue
            if j in self.nonbasic:
                self.obj[j] = self.obj.get(j, ZERO) + q
                continue
            i = position[j]
            self.z0 += q * self.beta[i]
            for k, a in self.rows[i].items():
                self.obj[k] = self.obj.get(k, ZERO) - q * a
        self.obj = {j: q for j, q in self.obj.items() if q != 0}
        self.degenerate_streak = 0

    def extract(self) -> ExtremeSolution:
        lp = self.lp
        shifted = [ZERO] * self.n
        slack: Dict[int, Fraction] = {}
        for i, var in enumerate(self.basic):
            if var < self.n:
                shifted[var] = self.beta[i]
            else:
                slack[var] = self.beta[i]
        values = tuple(shifted[j] + lp.variables[j].lower for j in range(self.n))
        objective = sum((q * values[j] for j, q in lp.objective.items()), ZERO)
        if objective != self.z0:
            raise ArithmeticError(f"{lp.name}: objective bookkeeping drifted ({objective} != {self.z0})")
        basis = tuple(sorted(self.label_of(var) for var in self.nonbasic))
        return ExtremeSolution(
            values=values,
            objective=objective,
            tight=tight_labels(lp, values),
            basis=basis,
            pivots=self.pivots,
            pivot_rule=self.pivot_rule,
        )


def tight_labels(lp: LinearProgram, values: Tuple[Fraction, ...]) -> Tuple[str, ...]:
    """Labels of every bound and row holding with equality at `values`."""
    tight: List[str] = []
    for j, var in enumerate(lp.variables):
        if values[j] == var.lower:
            tight.append(f"lb:{var.label}")
        if var.upper is not None and values[j] == var.upper:
            tight.append(f"ub:{var.label}")
    for con in lp.constraints:
        lhs = sum((q * values[j] for j, q in con.coefficients.items()), ZERO)
        if lhs == con.rhs:
            tight.append(con.label)
    return tuple(sorted(tight))


def solve_extreme(
    lp: LinearProgram,
    *,
    pivot_rule: Optional[str] = None,
    column_seed: Optional[int] = None,
    degenerate_limit: Optional[int] = None,
) -> ExtremeSolution:
    """
    Optimal corner of `lp` in exact arithmetic.

    `dantzig` picks the steepest reduced cost and falls back to Bland's
    smallest-index rule after `degenerate_limit` consecutive degenerate
    pivots; `bland` uses the smallest-index rule throughout. A column seed
    permutes the index order both rules break ties with.
    """
    pivot_rule = pivot_rule or settings.PIVOT_RULE
    if pivot_rule not in PIVOT_RULES:
        raise ParameterError(f"unknown pivot rule {pivot_rule!r}; expected one of {PIVOT_RULES}")
    degenerate_limit = settings.DEGENERATE_PIVOT_LIMIT if degenerate_limit is None else degenerate_limit

    dictionary = SimplexDictionary(lp, pivot_rule, degenerate_limit, column_seed)
    dictionary.phase_one()
    dictionary.install_objective()
    dictionary.optimize()
    solution = dictionary.extract()
    logger.debug(
        f"{lp.name}: optimum {solution.objective} after {solution.pivots} pivots "
        f"({len(lp.variables)} variables, {len(lp.constraints)} rows, rule {pivot_rule})"
    )
    return solution


def matrix_rank(rows: List[List[Fraction]]) -> int:
    """Rank by exact Gaussian elimination."""
    work = [list(r) for r in rows]
    rank = 0
    cols = len(work[0]) if work else 0
    for col in range(cols):
        pivot = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        head = work[rank]
        for i in range(rank + 1, len(work)):
            factor = work[i][col]
            if factor == 0:
                continue
            factor /= head[col]
            work[i] = [a - factor * b for a, b in zip(work[i], head)]
        rank += 1
    return rank


def is_feasible_point(lp: LinearProgram, values: Tuple[Fraction, ...]) -> bool:
    for j, var in enumerate(lp.variables):
        if values[j] < var.lower or (var.upper is not None and values[j] > var.upper):
            return False
    for con in lp.constraints:
        if sum((q * values[j] for j, q in con.coefficients.items()), ZERO) > con.rhs:
            return False
    return True


def verify_corner(lp: LinearProgram, solution: ExtremeSolution) -> bool:
    """Feasible, and the constraints tight at the point have full column rank."""
    if not is_feasible_point(lp, solution.values):
        return False
    n = len(lp.variables)
    if n == 0:
        return True
    by_label = {con.label: con for con in lp.constraints}
    matrix: List[List[Fraction]] = []
    for label in tight_labels(lp, solution.values):
        row = [ZERO] * n
        if label.startswith("lb:") or label.startswith("ub:"):
            row[lp.index[label[3:]]] = Fraction(1)
        else:
            for j, q in by_label[label].coefficients.items():
                row[j] = q
        matrix.append(row)
    return bool(matrix) and matrix_rank(matrix) == n
