from fractions import Fraction
from itertools import combinations
from typing import Iterator, List, Optional

from app.models.instance import EdgePacking, Instance
from app.models.tree import LabelKind, RootedTree
from app.services.graph_core import is_feasible, packing_degrees, packing_value


def all_packings(edge_ids: List[int]) -> Iterator[EdgePacking]:
    """
    Every subset of `edge_ids`, smallest first.
    """
    for size in range(len(edge_ids) + 1):
        for subset in combinations(edge_ids, size):
            yield EdgePacking.of(subset)


def brute_force_opt(inst: Instance) -> Fraction:
    """
    Optimum by plain enumeration, independent of the pruned oracle.

    Args:
        inst: an instance with few edges

    Returns:
        The largest value of a feasible packing
    """
    return max(packing_value(inst, p) for p in all_packings(list(range(inst.m))) if is_feasible(inst, p))


def subtree_edges(tree: RootedTree, v: int) -> List[int]:
    """Edges of the subtree hanging from v."""
    edges = []
    stack = list(tree.children[v])
    while stack:
        u = stack.pop()
        edges.append(tree.parent_edge[u])
        stack.extend(tree.children[u])
    return sorted(edges)


def brute_force_label(inst: Instance, tree: RootedTree, v: int, kind: LabelKind) -> Optional[int]:
    """
    Restricted subtree optimum by enumeration:

    - h: degree of v at most c_v - 1
    - g: degree of v exactly c_v
    - b: degree of v at least c_v, every chosen neighbour of v within its bound

    Returns None when no packing of the subtree qualifies.
    """
    best = None
    for p in all_packings(subtree_edges(tree, v)):
        if not is_feasible(inst, p):
            continue
        deg = packing_degrees(inst, p)
        if kind == "h":
            ok = deg[v] <= inst.c[v] - 1
        elif kind == "g":
            ok = deg[v] == inst.c[v]
        else:
            neighbours = [u for u in tree.children[v] if tree.parent_edge[u] in p]
            ok = deg[v] >= inst.c[v] and all(deg[u] <= inst.c[u] for u in neighbours)
        if ok and (best is None or len(p) > best):
            best = len(p)
    return best


def _solve_square(rows: List[List[Fraction]], rhs: List[Fraction]) -> Optional[List[Fraction]]:
    """Unique solution of a square system, or None when singular."""
    size = len(rows)
    work = [list(r) + [b] for r, b in zip(rows, rhs)]
    for col in range(size):
        pivot = next((i for i in range(col, size) if work[i][col] != 0), None)
        if pivot is None:
            return None
        work[col], work[pivot] = work[pivot], work[col]
        head = work[col]
        for i in range(size):
            if i != col and work[i][col] != 0:
                factor = work[i][col] / head[col]
                work[i] = [a - factor * b for a, b in zip(work[i], head)]
    return [work[i][size] / work[i][i] for i in range(size)]


def best_vertex_by_enumeration(lp) -> Fraction:
    """
    Optimum of a bounded LP by trying every square subsystem of its rows
    and bounds; only usable for a handful of variables.
    """
    n = len(lp.variables)
    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    for con in lp.constraints:
        row = [Fraction(0)] * n
        for j, q in con.coefficients.items():
            row[j] = q
        rows.append(row)
        rhs.append(con.rhs)
    for j, var in enumerate(lp.variables):
        lower = [Fraction(0)] * n
        lower[j] = Fraction(-1)
        rows.append(lower)
        rhs.append(-var.lower)
        if var.upper is not None:
            upper = [Fraction(0)] * n
            upper[j] = Fraction(1)
            rows.append(upper)
            rhs.append(var.upper)

    best = None
    for subset in combinations(range(len(rows)), n):
        point = _solve_square([rows[i] for i in subset], [rhs[i] for i in subset])
        if point is None:
            continue
        if any(sum(a * x for a, x in zip(row, point)) > b for row, b in zip(rows, rhs)):
            continue
        value = sum(q * point[j] for j, q in lp.objective.items())
        if best is None or value > best:
            best = value
    return best
