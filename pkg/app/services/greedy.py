"""
Combinatorial approximations: edge addition (factor 4) and edge deletion
(factor 2). Both ignore weights.
"""
import logging
import random
from typing import List, Optional, Sequence, Tuple

from app.core.errors import ParameterError
from app.models.instance import EdgeId, EdgePacking, Instance
from app.models.solutions import GreedyTrace

logger = logging.getLogger(__name__)


def random_order(inst: Instance, seed: int) -> Tuple[EdgeId, ...]:
    order = list(range(inst.m))
    random.Random(seed).shuffle(order)
    return tuple(order)


def _resolve_order(inst: Instance, order: Optional[Sequence[EdgeId]]) -> Tuple[EdgeId, ...]:
    if order is None:
        return tuple(range(inst.m))
    order = tuple(order)
    if sorted(order) != list(range(inst.m)):
        raise ParameterError("edge order must be a permutation of all edge ids")
    return order


def _can_add(inst: Instance, deg: List[int], members: List[List[EdgeId]], e: EdgeId) -> bool:
    """Whether Y + e still satisfies the degree condition, given Y's degrees."""
    c, edges = inst.c, inst.edges
    u, v = edges[e]
    deg[u] += 1
    deg[v] += 1
    try:
        if deg[u] > c[u] and deg[v] > c[v]:
            return False
        for x in (u, v):
            if deg[x] <= c[x]:
                continue
            for f in members[x]:
                a, b = edges[f]
                if deg[a] > c[a] and deg[b] > c[b]:
                    return False
        return True
    finally:
        deg[u] -= 1
        deg[v] -= 1


def edge_addition(inst: Instance, order: Optional[Sequence[EdgeId]] = None) -> Tuple[EdgePacking, GreedyTrace]:
    """
    Grow a maximal feasible set Y in the given order, then build Z from the
    unused edges around vertices still below their bound; return the larger
    of the two (Y on ties).
    """
    order = _resolve_order(inst, order)
    c, edges = inst.c, inst.edges
    deg = [0] * inst.n
    members: List[List[EdgeId]] = [[] for _ in range(inst.n)]
    in_y = [False] * inst.m

    for e in order:
        if _can_add(inst, deg, members, e):
            u, v = edges[e]
            deg[u] += 1
            deg[v] += 1
            members[u].append(e)
            members[v].append(e)
            in_y[e] = True

    A = tuple(v for v in range(inst.n) if deg[v] < c[v])
    z_edges: List[EdgeId] = []
    claimed = set()
    for v in A:
        free = [e for e in inst.incidence[v] if not in_y[e]]
        need = c[v] - deg[v]
        picked = free[:need]
        # unused edges never join two vertices of A, since Y is maximal
        assert not claimed.intersection(picked), f"Z edges of vertex {v} overlap another A vertex"
        claimed.update(free)
        z_edges.extend(picked)

    Y = EdgePacking.of(e for e in range(inst.m) if in_y[e])
    Z = EdgePacking.of(z_edges)
    chosen = "Y" if len(Y) >= len(Z) else "Z"
    trace = GreedyTrace(order=order, Y=Y, A=A, Z=Z, chosen=chosen)
    logger.debug(f"edge addition: |Y|={len(Y)} |Z|={len(Z)} |A|={len(A)} -> {chosen}")
    return (Y if chosen == "Y" else Z), trace


def edge_deletion(inst: Instance, order: Optional[Sequence[EdgeId]] = None) -> EdgePacking:
    """
    Start from all edges and scan once; drop an edge when both endpoints are
    strictly over their bound at that moment.
    """
    order = _resolve_order(inst, order)
    c, edges = inst.c, inst.edges
    deg = list(inst.degrees)
    keep = [True] * inst.m
    for e in order:
        u, v = edges[e]
        if deg[u] > c[u] and deg[v] > c[v]:
            keep[e] = False
            deg[u] -= 1
            deg[v] -= 1
    result = EdgePacking.of(e for e in range(inst.m) if keep[e])
    logger.debug(f"edge deletion kept {len(result)} of {inst.m} edges")
    return result
