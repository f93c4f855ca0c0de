"""Model builders for the two relaxations and the integrality-gap sweep."""
import logging
import random
from fractions import Fraction
from itertools import combinations
from typing import Collection, Iterable, Mapping, Optional, Sequence, Tuple, Union

from app.core.config import settings
from app.core.errors import ParameterError
from app.models.base import to_fraction
from app.models.instance import EdgeId, Instance, VertexId
from app.models.lp import Constraint, GapRow, LinearProgram, Variable
from app.services.graph_core import make_instance, upper_bound
from app.services.oracle import exact_opt
from app.services.simplex import solve_extreme

logger = logging.getLogger(__name__)

Bounds = Union[Sequence[int], Mapping[VertexId, int]]


def build_lp1(inst: Instance) -> LinearProgram:
    """
    Natural relaxation: x_v marks v as bound-respecting, y_e selects e.

        max sum y_e
        y_e <= x_u + x_v                                  per edge
        sum_{e at v} y_e <= c_v x_v + d_v (1 - x_v)       per vertex
        0 <= x, y <= 1
    """
    n = inst.n
    variables = [Variable(label=f"x_{v}", upper=1) for v in range(n)]
    variables += [Variable(label=f"y_{e}", upper=1) for e in range(inst.m)]
    constraints = []
    for e, (u, v) in enumerate(inst.edges):
        coefs = {n + e: Fraction(1), u: Fraction(-1), v: Fraction(-1)}
        constraints.append(Constraint(label=f"edge_{e}", coefficients=coefs, rhs=0))
    for v in range(n):
        coefs = {n + e: Fraction(1) for e in inst.incidence[v]}
        slack = inst.degrees[v] - inst.c[v]
        if slack:
            coefs[v] = Fraction(slack)
        constraints.append(Constraint(label=f"vertex_{v}", coefficients=coefs, rhs=inst.degrees[v]))
    objective = {n + e: Fraction(1) for e in range(inst.m)}
    return LinearProgram(name="lp1", variables=tuple(variables), objective=objective, constraints=tuple(constraints))


def build_lp2(
    inst: Instance,
    C: Collection[VertexId],
    f: Bounds,
    eps: Union[Fraction, int, str],
    *,
    edges: Optional[Iterable[EdgeId]] = None,
    drop_isolated: bool = False,
) -> LinearProgram:
    """
    Penalized relaxation over the edge subset `edges` (default: all):

        max 2 sum y_e - (1 + eps) sum_{v not in C} z_v
        sum_{e at v} y_e <= f_v + z_v     v not in C
        sum_{e at v} y_e <= f_v           v in C
        0 <= y_e <= 1,  0 <= z_v <= |edges|

    The z upper bound never binds at an optimum; it keeps the region a
    polytope. With `drop_isolated`, vertices touching no edge of the subset
    get neither a row nor a z variable.
    """
    eps = to_fraction(eps)
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    C = set(C)
    edge_ids = sorted(range(inst.m) if edges is None else set(edges))
    for v in range(inst.n):
        if f[v] < 0:
            raise ParameterError(f"residual bound f[{v}] = {f[v]} is negative")

    incident = {v: [] for v in range(inst.n)}
    for e in edge_ids:
        u, v = inst.edges[e]
        incident[u].append(e)
        incident[v].append(e)
    active = [v for v in range(inst.n) if incident[v] or not drop_isolated]
    z_cap = len(edge_ids)

    variables = [Variable(label=f"y_{e}", upper=1) for e in edge_ids]
    y_index = {e: j for j, e in enumerate(edge_ids)}
    z_index = {}
    for v in active:
        if v not in C:
            z_index[v] = len(variables)
            variables.append(Variable(label=f"z_{v}", upper=z_cap))

    constraints = []
    for v in active:
        coefs = {y_index[e]: Fraction(1) for e in incident[v]}
        if v in z_index:
            coefs[z_index[v]] = Fraction(-1)
        constraints.append(Constraint(label=f"vertex_{v}", coefficients=coefs, rhs=f[v]))

    penalty = -(1 + eps)
    objective = {j: Fraction(2) for j in y_index.values()}
    objective.update({j: penalty for j in z_index.values()})
    return LinearProgram(name="lp2", variables=tuple(variables), objective=objective, constraints=tuple(constraints))


def random_residual_state(inst: Instance, rng: random.Random) -> Tuple[Tuple[VertexId, ...], Tuple[int, ...]]:
    """A random (C, f) for the penalized relaxation: C a subset of V, 0 <= f_v <= c_v."""
    C = tuple(v for v in range(inst.n) if rng.random() < 0.5)
    f = tuple(rng.randint(0, max(b, 0)) for b in inst.c)
    return C, f


def complete_instance(n: int, bound: int = 1) -> Instance:
    return make_instance(n, combinations(range(n), 2), c=[bound] * n)


def lp1_closed_form(n: int) -> Fraction:
    """LP1 optimum on K_n with unit bounds: n(n-1)^2 / (3n-4), from the symmetric optimum."""
    return Fraction(n * (n - 1) ** 2, 3 * n - 4)


def gap_demo(n: int, *, oracle_limit: Optional[int] = None) -> GapRow:
    """
    LP1 against the integer optimum on K_n with c = 1. The integer side is
    the oracle value while K_n fits the oracle, otherwise the sum-of-bounds
    bound n.
    """
    if n < 4:
        raise ParameterError(f"gap demo needs n >= 4, got {n}")
    oracle_limit = settings.ORACLE_EDGE_LIMIT if oracle_limit is None else oracle_limit
    inst = complete_instance(n)
    lp1_value = solve_extreme(build_lp1(inst)).objective
    if inst.m <= oracle_limit:
        ip_opt = exact_opt(inst, limit=oracle_limit).value
        exact = True
    else:
        ip_opt = Fraction(upper_bound(inst))
        exact = False
    row = GapRow(n=n, lp1_value=lp1_value, ip_opt=ip_opt, ip_exact=exact, ratio=lp1_value / ip_opt)
    logger.info(f"gap n={n}: lp1={lp1_value} ip={ip_opt} ({'oracle' if exact else 'bound'}) ratio={row.ratio}")
    return row
