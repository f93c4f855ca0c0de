from typing import Dict, List, Literal, Optional, Tuple

from app.models.base import FrozenModel
from app.models.instance import VertexId

LabelKind = Literal["h", "g", "b"]


class RootedTree(FrozenModel):
    """
    A tree instance hung from `root`. `order` lists parents before their
    children; walking it backwards visits every child before its parent.
    """

    root: VertexId
    parent: Tuple[Optional[VertexId], ...]
    parent_edge: Tuple[Optional[int], ...]
    children: Tuple[Tuple[VertexId, ...], ...]
    order: Tuple[VertexId, ...]

    @property
    def n(self) -> int:
        return len(self.parent)


class TreeLabels(FrozenModel):
    """
    Subtree optima per vertex:

    - h: the vertex ends below its bound (degree <= c_v - 1)
    - g: the vertex ends exactly at its bound
    - b: the vertex ends at or above its bound and every chosen neighbour
      below it respects its own bound

    Infeasible labels read as 0 and carry a False flag. `H`, `G`, `B` are
    the child partitions; `S1` and `S2` the children pulled out of their best
    label to fill the g and b recurrences.
    """

    root: VertexId
    h: Tuple[int, ...]
    g: Tuple[int, ...]
    b: Tuple[int, ...]
    h_ok: Tuple[bool, ...]
    g_ok: Tuple[bool, ...]
    b_ok: Tuple[bool, ...]
    H: Tuple[Tuple[VertexId, ...], ...]
    G: Tuple[Tuple[VertexId, ...], ...]
    B: Tuple[Tuple[VertexId, ...], ...]
    S1: Tuple[Tuple[VertexId, ...], ...]
    S2: Tuple[Tuple[VertexId, ...], ...]

    def label(self, v: VertexId, kind: LabelKind) -> Optional[int]:
        """Label value, or None when infeasible."""
        ok = {"h": self.h_ok, "g": self.g_ok, "b": self.b_ok}[kind][v]
        if not ok:
            return None
        return {"h": self.h, "g": self.g, "b": self.b}[kind][v]

    def as_table(self) -> List[Dict[str, object]]:
        rows = []
        for v in range(len(self.h)):
            rows.append(
                {
                    "vertex": v,
                    "h": self.h[v] if self.h_ok[v] else None,
                    "g": self.g[v] if self.g_ok[v] else None,
                    "b": self.b[v] if self.b_ok[v] else None,
                    "H": list(self.H[v]),
                    "G": list(self.G[v]),
                    "B": list(self.B[v]),
                    "S1": list(self.S1[v]),
                    "S2": list(self.S2[v]),
                }
            )
        return rows
