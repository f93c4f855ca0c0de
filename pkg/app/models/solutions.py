from fractions import Fraction
from typing import Dict, List, Literal, Optional, Tuple

from pydantic import Field

from app.models.base import FrozenModel, Rational
from app.models.instance import EdgeId, EdgePacking, VertexId


class OracleResult(FrozenModel):
    value: Rational
    witness: EdgePacking
    explored: int = 0
    pruned: bool = True


class GreedyTrace(FrozenModel):
    order: Tuple[EdgeId, ...]
    Y: EdgePacking
    A: Tuple[VertexId, ...] = ()
    Z: EdgePacking = EdgePacking()
    chosen: Literal["Y", "Z"] = "Y"


class RoundingIteration(FrozenModel):
    """One LP solve of the iterative rounding loop."""

    index: int
    residual_edges: int
    residual_vertices: int
    lp_objective: Rational
    zeroed: Tuple[EdgeId, ...] = ()
    rounded: Optional[EdgeId] = None
    y_rounded: Optional[Rational] = None
    endpoint: Optional[VertexId] = None
    other: Optional[VertexId] = None
    f_endpoint: Optional[int] = None
    z_endpoint: Optional[Rational] = None
    f_other: Optional[int] = None
    z_other: Optional[Rational] = None
    # some residual edge has y = 0 or y >= 1/2 in this corner
    half_or_zero_witness: bool
    # exact rank check of the tight rows; None when not requested
    corner_verified: Optional[bool] = None

    @property
    def endpoint_ok(self) -> bool:
        """A rounded edge was charged to an endpoint with spare bound and z = 0."""
        if self.rounded is None:
            return True
        return self.f_endpoint is not None and self.f_endpoint > 0 and self.z_endpoint == 0


class RoundingState(FrozenModel):
    eps: Rational
    residual: Tuple[EdgeId, ...] = ()
    C: Tuple[VertexId, ...] = ()
    f: Tuple[int, ...] = ()
    accepted: EdgePacking = EdgePacking()
    iterations: Tuple[RoundingIteration, ...] = ()
    root_lp_value: Rational = Fraction(0)


class HeavySets(FrozenModel):
    """H(v) per vertex, ordered by (weight desc, edge id asc)."""

    sets: Tuple[Tuple[EdgeId, ...], ...]


class DirectedEdge(FrozenModel):
    edge: EdgeId
    tail: VertexId
    head: VertexId
    bit: int
    family: Literal["A", "B"]


class Partition(FrozenModel):
    T: EdgePacking
    discarded: Tuple[EdgeId, ...]
    directed: Tuple[DirectedEdge, ...]
    k: int
    labels: Tuple[int, ...]

    def family(self, kind: Literal["A", "B"], r: int) -> EdgePacking:
        return EdgePacking.of(d.edge for d in self.directed if d.family == kind and d.bit == r)

    def candidates(self) -> List[Tuple[str, EdgePacking]]:
        """T, A_0..A_{k-1}, B_0..B_{k-1}, in that order."""
        out = [("T", self.T)]
        out.extend((f"A{r}", self.family("A", r)) for r in range(self.k))
        out.extend((f"B{r}", self.family("B", r)) for r in range(self.k))
        return out


class WeightedResult(FrozenModel):
    packing: EdgePacking
    partition: Partition
    family_weights: Dict[str, Rational] = Field(default_factory=dict)
    chosen: str = "T"
