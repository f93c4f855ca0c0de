"""Exhaustive exact solver; ground truth for every ratio certificate."""
import logging
from fractions import Fraction
from typing import List, Optional

from app.core.config import settings
from app.core.errors import OracleLimitError
from app.models.instance import EdgePacking, Instance
from app.models.solutions import OracleResult
from app.services.graph_core import upper_bound, weighted_upper_bound

logger = logging.getLogger(__name__)


class _Search:
    """
    Include-first depth-first search over edge ids 0..m-1. The first optimum
    met in that order is kept, which for equal-size sets is the
    lexicographically smallest sorted id sequence.
    """

    def __init__(self, inst: Instance, prune: bool):
        self.inst = inst
        self.prune = prune
        self.weights = [inst.weight(e) for e in range(inst.m)]
        self.rest = [Fraction(0)] * (inst.m + 1)
        for e in range(inst.m - 1, -1, -1):
            self.rest[e] = self.rest[e + 1] + self.weights[e]
        self.ceiling = weighted_upper_bound(inst) if inst.is_weighted else Fraction(upper_bound(inst))
        self.deg = [0] * inst.n
        self.at_vertex: List[List[int]] = [[] for _ in range(inst.n)]
        self.chosen: List[int] = []
        self.best_value = Fraction(-1)
        self.best: Optional[List[int]] = None
        self.explored = 0

    def _violated_around(self, u: int, v: int) -> bool:
        c, deg, edges = self.inst.c, self.deg, self.inst.edges
        for x in (u, v):
            for f in self.at_vertex[x]:
                a, b = edges[f]
                if deg[a] > c[a] and deg[b] > c[b]:
                    return True
        return False

    def _leaf_feasible(self) -> bool:
        c, deg, edges = self.inst.c, self.deg, self.inst.edges
        for f in self.chosen:
            a, b = edges[f]
            if deg[a] > c[a] and deg[b] > c[b]:
                return False
        return True

    def visit(self, e: int, value: Fraction) -> None:
        self.explored += 1
        if self.prune and (value + self.rest[e] <= self.best_value or self.best_value >= self.ceiling):
            return
        if e == self.inst.m:
            if value > self.best_value and (self.prune or self._leaf_feasible()):
                self.best_value = value
                self.best = list(self.chosen)
            return

        u, v = self.inst.edges[e]
        self.deg[u] += 1
        self.deg[v] += 1
        self.at_vertex[u].append(e)
        self.at_vertex[v].append(e)
        self.chosen.append(e)
        if not (self.prune and self._violated_around(u, v)):
            self.visit(e + 1, value + self.weights[e])
        self.chosen.pop()
        self.at_vertex[v].pop()
        self.at_vertex[u].pop()
        self.deg[v] -= 1
        self.deg[u] -= 1

        self.visit(e + 1, value)


def exact_opt(
    inst: Instance,
    *,
    prune: Optional[bool] = None,
    limit: Optional[int] = None,
) -> OracleResult:
    """
    Optimum over all 2^m edge subsets. Pruning (bound and monotone violation
    cuts) never changes the answer; turn it off for audit runs.
    """
    limit = settings.ORACLE_EDGE_LIMIT if limit is None else limit
    prune = settings.ORACLE_PRUNING if prune is None else prune
    if inst.m > limit:
        raise OracleLimitError(inst.m, limit)

    search = _Search(inst, prune)
    search.visit(0, Fraction(0))
    logger.debug(f"oracle explored {search.explored} nodes (m={inst.m}, prune={prune}), value {search.best_value}")
    return OracleResult(
        value=search.best_value,
        witness=EdgePacking.of(search.best or ()),
        explored=search.explored,
        pruned=prune,
    )
