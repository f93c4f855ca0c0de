"""Seeded instance generators for the harness and the HTTP surface."""
import logging
import math
import random
from typing import List, Tuple

import networkx as nx

from app.core.errors import ParameterError
from app.models.instance import Instance
from app.models.report import GeneratorSpec
from app.services.graph_core import make_instance

logger = logging.getLogger(__name__)


def _structure(spec: GeneratorSpec, rng: random.Random) -> List[Tuple[int, int]]:
    n = spec.n
    if spec.family == "gnm":
        if spec.m is None:
            raise ParameterError("the gnm family needs m")
        if spec.multigraph:
            if spec.m and n < 2:
                raise ParameterError(f"cannot place {spec.m} edges on {n} vertices")
            return [tuple(sorted(rng.sample(range(n), 2))) for _ in range(spec.m)]
        limit = n * (n - 1) // 2
        if spec.m > limit:
            raise ParameterError(f"a simple graph on {n} vertices has at most {limit} edges, asked for {spec.m}")
        graph = nx.gnm_random_graph(n, spec.m, seed=rng.randrange(2**32))
    elif spec.family == "tree":
        if n <= 2:
            graph = nx.path_graph(n)
        else:
            graph = nx.from_prufer_sequence([rng.randrange(n) for _ in range(n - 2)])
    elif spec.family == "complete":
        graph = nx.complete_graph(n)
    elif spec.family == "star":
        if n == 0:
            raise ParameterError("a star needs a center")
        graph = nx.star_graph(n - 1)
    else:
        graph = nx.path_graph(n)
    return sorted(tuple(sorted(edge)) for edge in graph.edges())


def _bounds(spec: GeneratorSpec, degrees: List[int], rng: random.Random) -> List[int]:
    if spec.bound == "fixed":
        return [spec.bound_value] * spec.n
    if spec.bound == "uniform":
        return [rng.randint(1, d) if d else 0 for d in degrees]
    return [math.ceil(spec.bound_fraction * d) for d in degrees]


def generate(spec: GeneratorSpec) -> Instance:
    """
    Deterministic instance for `spec`; the seed drives structure, bounds and
    weights from one stream, in that order. Bounds come out normalized.
    """
    rng = random.Random(spec.seed)
    edges = _structure(spec, rng)
    degrees = [0] * spec.n
    for u, v in edges:
        degrees[u] += 1
        degrees[v] += 1
    bounds = _bounds(spec, degrees, rng)
    weights = None
    if spec.weights == "uniform":
        weights = [rng.randint(spec.weight_low, spec.weight_high) for _ in edges]
    inst = make_instance(spec.n, edges, c=bounds, weights=weights)
    logger.debug(f"generated {spec.family} instance n={inst.n} m={inst.m} seed={spec.seed}")
    return inst
