"""
Exact solver for unweighted trees.

Every vertex v gets three subtree optima, h(v), g(v) and b(v) (see
TreeLabels), computed children-first. A child u attached to its parent
contributes either through its h solution (u covers the new edge) or,
when the parent stays within its own bound, through its b solution.
"""
import logging
import time
from typing import Dict, List, Optional, Tuple

import networkx as nx

from app.core.config import settings
from app.core.errors import ParameterError, SolverMismatchError, TreeStructureError
from app.models.instance import EdgeId, EdgePacking, Instance, VertexId
from app.models.tree import LabelKind, RootedTree, TreeLabels
from app.services.graph_core import is_feasible, make_instance, normalize_instance

logger = logging.getLogger(__name__)

INFEASIBLE = float("-inf")


def root_tree(inst: Instance, root: Optional[VertexId] = None) -> RootedTree:
    n = inst.n
    if n == 0:
        raise TreeStructureError("edge-count", "the empty graph is not a tree")
    if inst.m != n - 1:
        raise TreeStructureError("edge-count", f"a tree on {n} vertices has {n - 1} edges, got m = {inst.m}")
    root = settings.TREE_DEFAULT_ROOT if root is None else root
    if not 0 <= root < n:
        raise ParameterError(f"root {root} is not a vertex of a graph on {n} vertices")

    parent: List[Optional[VertexId]] = [None] * n
    parent_edge: List[Optional[EdgeId]] = [None] * n
    children: List[List[VertexId]] = [[] for _ in range(n)]
    seen = [False] * n
    seen[root] = True
    order = [root]
    i = 0
    while i < len(order):
        v = order[i]
        i += 1
        for e in inst.incidence[v]:
            if e == parent_edge[v]:
                continue
            a, b = inst.edges[e]
            u = b if a == v else a
            if seen[u]:
                raise TreeStructureError("cycle", f"edge {e} = ({a}, {b}) closes a cycle")
            seen[u] = True
            parent[u] = v
            parent_edge[u] = e
            children[v].append(u)
            order.append(u)

    if len(order) < n:
        missing = [v for v in range(n) if not seen[v]]
        raise TreeStructureError(
            "disconnected", f"{len(missing)} vertices unreachable from root {root} (first: {missing[:5]})"
        )

    return RootedTree(
        root=root,
        parent=tuple(parent),
        parent_edge=tuple(parent_edge),
        children=tuple(tuple(ch) for ch in children),
        order=tuple(order),
    )


class _TreeTable:
    """Bottom-up label computation and top-down witness emission."""

    def __init__(self, inst: Instance, tree: RootedTree):
        self.inst = inst
        self.tree = tree
        n = tree.n
        self.h = [INFEASIBLE] * n
        self.g = [INFEASIBLE] * n
        self.b = [INFEASIBLE] * n
        self.part: List[LabelKind] = ["h"] * n
        self.H: List[Tuple[VertexId, ...]] = [()] * n
        self.G: List[Tuple[VertexId, ...]] = [()] * n
        self.B: List[Tuple[VertexId, ...]] = [()] * n
        self.S1: List[Tuple[VertexId, ...]] = [()] * n
        self.S2: List[Tuple[VertexId, ...]] = [()] * n

    def free(self, u: VertexId):
        return max(self.h[u], self.g[u], self.b[u])

    def compute(self) -> None:
        h, g, b = self.h, self.g, self.b
        for v in reversed(self.tree.order):
            kids = self.tree.children[v]
            c = self.inst.c[v]
            Hs, Gs, Bs = [], [], []
            for u in kids:
                if h[u] >= max(g[u], b[u]):
                    Hs.append(u)
                    self.part[u] = "h"
                elif g[u] > max(h[u], b[u]):
                    Gs.append(u)
                    self.part[u] = "g"
                else:
                    Bs.append(u)
                    self.part[u] = "b"
            self.H[v], self.G[v], self.B[v] = tuple(Hs), tuple(Gs), tuple(Bs)
            free_sum = sum(self.free(u) for u in kids)
            hb = len(Hs) + len(Bs)

            if c >= 1:
                h[v] = free_sum + min(c - 1, hb)

            if hb >= c:
                g[v] = free_sum + c
            else:
                k = c - hb
                pool = sorted((g[u] - max(h[u], b[u]), u) for u in Gs if max(h[u], b[u]) > INFEASIBLE)
                if len(pool) >= k:
                    self.S1[v] = tuple(u for _, u in pool[:k])
                    g[v] = free_sum + hb + k - sum(key for key, _ in pool[:k])

            if len(Hs) >= c:
                b[v] = free_sum + len(Hs)
            else:
                k = c - len(Hs)
                pool = sorted((self.free(u) - h[u], u) for u in Gs + Bs if h[u] > INFEASIBLE)
                if len(pool) >= k:
                    self.S2[v] = tuple(u for _, u in pool[:k])
                    b[v] = free_sum + len(Hs) + k - sum(key for key, _ in pool[:k])

    def root_choice(self) -> Tuple[int, LabelKind]:
        r = self.tree.root
        best_kind, best = None, INFEASIBLE
        for kind, table in (("h", self.h), ("g", self.g), ("b", self.b)):
            if table[r] > best:
                best_kind, best = kind, table[r]
        return int(best), best_kind

    def attachments(self, v: VertexId, kind: LabelKind) -> Dict[VertexId, LabelKind]:
        """Children joined to v under label `kind`, with the label each one uses."""
        c = self.inst.c[v]
        by_route: Dict[VertexId, LabelKind] = {u: "h" for u in self.H[v]}
        by_route.update({u: "b" for u in self.B[v]})
        hb = sorted(by_route)
        if kind == "h":
            return {u: by_route[u] for u in hb[: c - 1]} if c >= 1 else {}
        if kind == "g":
            if len(hb) >= c:
                return {u: by_route[u] for u in hb[:c]}
            joined = dict(by_route)
            joined.update({u: ("h" if self.h[u] >= self.b[u] else "b") for u in self.S1[v]})
            return joined
        joined = {u: "h" for u in self.H[v]}
        joined.update({u: "h" for u in self.S2[v]})
        return joined

    def witness(self, kind: LabelKind) -> EdgePacking:
        chosen: List[EdgeId] = []
        stack = [(self.tree.root, kind)]
        while stack:
            v, kind = stack.pop()
            joined = self.attachments(v, kind)
            for u in self.tree.children[v]:
                if u in joined:
                    chosen.append(self.tree.parent_edge[u])
                    stack.append((u, joined[u]))
                else:
                    stack.append((u, self.part[u]))
        return EdgePacking.of(chosen)

    def labels(self) -> TreeLabels:
        def boundary(values) -> Tuple[int, ...]:
            return tuple(0 if x == INFEASIBLE else int(x) for x in values)

        return TreeLabels(
            root=self.tree.root,
            h=boundary(self.h),
            g=boundary(self.g),
            b=boundary(self.b),
            h_ok=tuple(x != INFEASIBLE for x in self.h),
            g_ok=tuple(x != INFEASIBLE for x in self.g),
            b_ok=tuple(x != INFEASIBLE for x in self.b),
            H=tuple(self.H),
            G=tuple(self.G),
            B=tuple(self.B),
            S1=tuple(self.S1),
            S2=tuple(self.S2),
        )


def tree_dp(inst: Instance, root: Optional[VertexId] = None) -> Tuple[int, TreeLabels, EdgePacking]:
    """
    Optimum of an unweighted tree instance with a witness packing.

    Args:
        inst: a connected tree; bounds above the degree are capped first.
        root: vertex to hang the tree from (settings.TREE_DEFAULT_ROOT by default).

    Returns:
        (value, labels, witness) with len(witness) == value.
    """
    if inst.is_weighted:
        raise SolverMismatchError("the tree solver handles unweighted instances only")
    started = time.perf_counter()
    inst = normalize_instance(inst)
    tree = root_tree(inst, root)

    table = _TreeTable(inst, tree)
    table.compute()
    value, kind = table.root_choice()
    witness = table.witness(kind)
    if len(witness) != value or not is_feasible(inst, witness):
        logger.error(f"tree witness check failed: |witness| = {len(witness)}, value = {value}")
        raise RuntimeError(f"reconstructed tree witness does not realise value {value}")

    elapsed = time.perf_counter() - started
    if elapsed > settings.TREE_SOFT_SECONDS:
        logger.warning(f"tree solver took {elapsed:.2f}s on n={inst.n}, above {settings.TREE_SOFT_SECONDS}s")
    logger.info(f"tree solver: value {value} via {kind}({tree.root}) on n={inst.n} in {elapsed:.3f}s")
    return value, table.labels(), witness


def components(inst: Instance) -> List[Tuple[VertexId, ...]]:
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(inst.n))
    graph.add_edges_from(inst.edges)
    return sorted(tuple(sorted(part)) for part in nx.connected_components(graph))


def solve_forest(inst: Instance) -> Tuple[int, EdgePacking]:
    """Sum of per-component tree optima; each component is rooted at its smallest vertex."""
    if inst.is_weighted:
        raise SolverMismatchError("the tree solver handles unweighted instances only")
    parts = components(inst)
    where = {}
    for index, part in enumerate(parts):
        for local, v in enumerate(part):
            where[v] = (index, local)

    edges_of: List[List[EdgeId]] = [[] for _ in parts]
    for e, (u, _) in enumerate(inst.edges):
        edges_of[where[u][0]].append(e)

    total, chosen = 0, []
    for index, part in enumerate(parts):
        ids = edges_of[index]
        local_edges = [(where[u][1], where[v][1]) for u, v in (inst.edges[e] for e in ids)]
        sub = make_instance(len(part), local_edges, c=[inst.c[v] for v in part])
        value, _, witness = tree_dp(sub, root=0)
        total += value
        chosen.extend(ids[e] for e in witness.edges)
    logger.info(f"forest solver: {len(parts)} components, value {total}")
    return total, EdgePacking.of(chosen)


def is_tree(inst: Instance) -> bool:
    if inst.n == 0 or inst.m != inst.n - 1:
        return False
    return len(components(inst)) == 1


def is_forest(inst: Instance) -> bool:
    parts = components(inst)
    owner = {v: index for index, part in enumerate(parts) for v in part}
    counts = [0] * len(parts)
    for u, _ in inst.edges:
        counts[owner[u]] += 1
    return all(counts[i] == len(part) - 1 for i, part in enumerate(parts))
