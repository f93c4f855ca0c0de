"""
Logarithmic-factor approximation for edge-weighted instances: split the
heavy edges into T and O(log n) bipartite families and keep the heaviest.
"""
import logging
import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from app.core.errors import ParameterError
from app.models.instance import EdgePacking, Instance
from app.models.solutions import DirectedEdge, HeavySets, Partition, WeightedResult
from app.services.graph_core import packing_value

logger = logging.getLogger(__name__)


def heavy_sets(inst: Instance) -> HeavySets:
    """H(v): the c_v heaviest incident edges, ties to the smaller edge id."""
    sets = []
    for v in range(inst.n):
        ranked = sorted(inst.incidence[v], key=lambda e: (-inst.weight(e), e))
        sets.append(tuple(ranked[: inst.c[v]]))
    return HeavySets(sets=tuple(sets))


def bit_count(n: int) -> int:
    """k = ceil(log2 n); 0 for n <= 1."""
    return (n - 1).bit_length() if n > 1 else 0


def _labels(inst: Instance, labels: Optional[Sequence[int]], relabel_seed: Optional[int]) -> List[int]:
    if labels is not None and relabel_seed is not None:
        raise ParameterError("pass either explicit labels or a relabel seed, not both")
    if relabel_seed is not None:
        out = list(range(inst.n))
        random.Random(relabel_seed).shuffle(out)
        return out
    if labels is None:
        return list(range(inst.n))
    labels = list(labels)
    if sorted(labels) != list(range(inst.n)):
        raise ParameterError("labels must be a permutation of 0..n-1")
    return labels


def partition_edges(
    inst: Instance,
    heavy: Optional[HeavySets] = None,
    *,
    labels: Optional[Sequence[int]] = None,
    relabel_seed: Optional[int] = None,
) -> Partition:
    heavy = heavy or heavy_sets(inst)
    label = _labels(inst, labels, relabel_seed)
    members = [set(s) for s in heavy.sets]
    k = bit_count(inst.n)

    T, discarded, directed = [], [], []
    for e, (u, v) in enumerate(inst.edges):
        in_u, in_v = e in members[u], e in members[v]
        if in_u and in_v:
            T.append(e)
        elif not in_u and not in_v:
            discarded.append(e)
        else:
            tail, head = (u, v) if in_v else (v, u)
            diff = label[tail] ^ label[head]
            r = (diff & -diff).bit_length() - 1
            family = "A" if (label[tail] >> r) & 1 == 0 else "B"
            directed.append(DirectedEdge(edge=e, tail=tail, head=head, bit=r, family=family))

    return Partition(
        T=EdgePacking.of(T),
        discarded=tuple(discarded),
        directed=tuple(directed),
        k=k,
        labels=tuple(label),
    )


def partition_solve(
    inst: Instance,
    *,
    labels: Optional[Sequence[int]] = None,
    relabel_seed: Optional[int] = None,
) -> WeightedResult:
    """
    Heaviest of T, A_0..A_{k-1}, B_0..B_{k-1}; the first listed wins ties.
    Unweighted instances are treated as unit-weight.
    """
    partition = partition_edges(inst, labels=labels, relabel_seed=relabel_seed)
    weights: Dict[str, Fraction] = {}
    best_name, best_set, best_weight = None, None, None
    for name, candidate in partition.candidates():
        w = packing_value(inst, candidate)
        weights[name] = w
        if best_weight is None or w > best_weight:
            best_name, best_set, best_weight = name, candidate, w

    logger.debug(f"weighted families: {', '.join(f'{k}={w}' for k, w in weights.items())}")
    logger.info(f"weighted partition picked {best_name} with weight {best_weight} (k={partition.k})")
    return WeightedResult(packing=best_set, partition=partition, family_weights=weights, chosen=best_name)


def certificate_sum(inst: Instance, partition: Partition) -> Fraction:
    """2 w(T) + sum of all family weights; equals the heavy-set bound."""
    total = 2 * packing_value(inst, partition.T)
    total += sum((inst.weight(d.edge) for d in partition.directed), Fraction(0))
    return total
