from typing import Optional, Sequence

from app.models.instance import Instance
from app.models.report import GeneratorSpec
from app.services.generators import generate
from app.services.graph_core import make_instance


TRI_TEXT = "p pdbep 3 3\nc 0 1\nc 1 1\nc 2 1\ne 0 1\ne 1 2\ne 0 2\n"
STAR4_TEXT = "p pdbep 5 4\nc 0 1\nc 1 1\nc 2 1\nc 3 1\nc 4 1\ne 0 1\ne 0 2\ne 0 3\ne 0 4\n"


def create_triangle(bound: int = 1) -> Instance:
    """Create the triangle 0-1-2 with a uniform bound."""
    return make_instance(3, [(0, 1), (1, 2), (0, 2)], c=[bound] * 3)


def create_star(leaves: int, bound: int = 1) -> Instance:
    """Create a star with center 0."""
    return make_instance(leaves + 1, [(0, i) for i in range(1, leaves + 1)], c=[bound] * (leaves + 1))


def create_path(n: int, bound: int = 1, weights: Optional[Sequence[int]] = None) -> Instance:
    """Create the path 0-1-...-(n-1)."""
    return make_instance(n, [(i, i + 1) for i in range(n - 1)], c=[bound] * n, weights=weights)


def create_complete(n: int, bound: int = 1) -> Instance:
    return make_instance(n, [(u, v) for u in range(n) for v in range(u + 1, n)], c=[bound] * n)


def create_random_instance(seed: int, n_max: int = 7, m_max: int = 12, weighted: bool = False) -> Instance:
    """Create a small seeded G(n, m) instance with random bounds in [1, d_v]."""
    n = 2 + seed % (n_max - 1)
    m = min(m_max, n * (n - 1) // 2, 1 + (seed * 7) % m_max)
    spec = GeneratorSpec(
        family="gnm",
        n=n,
        m=m,
        bound="uniform",
        weights="uniform" if weighted else "none",
        weight_low=1,
        weight_high=20,
        seed=seed,
    )
    return generate(spec)


def create_random_tree(seed: int, n_max: int = 10) -> Instance:
    """Create a seeded random tree with random bounds in [1, d_v]."""
    n = 1 + seed % n_max
    return generate(GeneratorSpec(family="tree", n=n, bound="uniform", seed=seed))


def create_multigraph() -> Instance:
    """Two parallel edges between 0 and 1 plus a pendant edge 1-2."""
    return make_instance(3, [(0, 1), (0, 1), (1, 2)], c=[1, 1, 1])

