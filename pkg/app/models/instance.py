from fractions import Fraction
from functools import cached_property
from typing import FrozenSet, Optional, Tuple

from pydantic import Field, field_serializer, model_validator

from app.models.base import FrozenModel, Rational

VertexId = int
EdgeId = int


class Instance(FrozenModel):
    """
    A PDBEP instance: an undirected multigraph on vertices 0..n-1, a degree
    bound per vertex and, optionally, a non-negative weight per edge.

    Edge identifiers are positions in `edges`.
    """

    n: int = Field(ge=0)
    edges: Tuple[Tuple[VertexId, VertexId], ...] = ()
    c: Tuple[int, ...] = ()
    weights: Optional[Tuple[Rational, ...]] = None

    @model_validator(mode="after")
    def check_structure(self) -> "Instance":
        if len(self.c) != self.n:
            raise ValueError(f"expected {self.n} degree bounds, got {len(self.c)}")
        for v, bound in enumerate(self.c):
            if bound < 0:
                raise ValueError(f"vertex {v} has negative degree bound {bound}")
        for e, (u, v) in enumerate(self.edges):
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {e} = ({u}, {v}) references a vertex outside 0..{self.n - 1}")
            if u == v:
                raise ValueError(f"edge {e} is a self-loop on vertex {u}")
        if self.weights is not None:
            if len(self.weights) != len(self.edges):
                raise ValueError(f"expected {len(self.edges)} weights, got {len(self.weights)}")
            for e, w in enumerate(self.weights):
                if w < 0:
                    raise ValueError(f"edge {e} has negative weight {w}")
        return self

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def is_weighted(self) -> bool:
        return self.weights is not None

    def weight(self, e: EdgeId) -> Fraction:
        if self.weights is None:
            return Fraction(1)
        return self.weights[e]

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def incidence(self) -> Tuple[Tuple[EdgeId, ...], ...]:
        """Incident edge ids per vertex, ascending."""
        inc = [[] for _ in range(self.n)]
        for e, (u, v) in enumerate(self.edges):
            inc[u].append(e)
            inc[v].append(e)
        return tuple(tuple(ids) for ids in inc)

    @property
    def is_normalized(self) -> bool:
        return all(b <= d for b, d in zip(self.c, self.degrees))


class EdgePacking(FrozenModel):
    """A set of edge ids of one instance; the object every solver emits."""

    edges: FrozenSet[EdgeId] = frozenset()

    @classmethod
    def of(cls, ids) -> "EdgePacking":
        return cls(edges=frozenset(ids))

    @field_serializer("edges")
    def serialize_edges(self, edges: FrozenSet[EdgeId]) -> list:
        return sorted(edges)

    @property
    def ids(self) -> Tuple[EdgeId, ...]:
        return tuple(sorted(self.edges))

    def __len__(self) -> int:
        return len(self.edges)

    def __contains__(self, e: object) -> bool:
        return e in self.edges
