"""
Iterative rounding over the penalized relaxation, followed by the
maximality repair that turns an IP2 approximation into a PDBEP one.
"""
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Tuple, Union

from app.core.config import settings
from app.core.errors import ParameterError, RoundingInvariantError
from app.models.base import to_fraction
from app.models.instance import EdgePacking, Instance
from app.models.solutions import RoundingIteration, RoundingState
from app.services.graph_core import packing_degrees
from app.services.lp import build_lp2
from app.services.simplex import solve_extreme, verify_corner

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)


def _eps(eps: Union[Fraction, int, str, None]) -> Fraction:
    eps = settings.default_eps if eps is None else to_fraction(eps)
    if eps <= 0:
        raise ParameterError(f"eps must be positive, got {eps}")
    return eps


def phi_value(inst: Instance, p: EdgePacking, eps: Union[Fraction, int, str]) -> Fraction:
    """2|p| - (1 + eps) * sum_v max(0, d'_v - c_v)"""
    eps = _eps(eps)
    deg = packing_degrees(inst, p)
    excess = sum(max(0, d - b) for d, b in zip(deg, inst.c))
    return 2 * len(p) - (1 + eps) * excess


def make_maximal(inst: Instance, p: EdgePacking, eps: Union[Fraction, int, str]) -> EdgePacking:
    """
    Apply single-edge removals and additions that strictly raise phi, in
    edge id order, until neither move helps. The fixed point has no edge
    with both endpoints over bound.
    """
    eps = _eps(eps)
    penalty = 1 + eps
    c, edges = inst.c, inst.edges
    chosen = [False] * inst.m
    for e in p.edges:
        chosen[e] = True
    deg = list(packing_degrees(inst, p))

    passes = 0
    changed = True
    while changed:
        changed = False
        passes += 1
        for e, (u, v) in enumerate(edges):
            if chosen[e]:
                over = (deg[u] > c[u]) + (deg[v] > c[v])
                if penalty * over - 2 > 0:
                    chosen[e] = False
                    deg[u] -= 1
                    deg[v] -= 1
                    changed = True
            else:
                over = (deg[u] + 1 > c[u]) + (deg[v] + 1 > c[v])
                if 2 - penalty * over > 0:
                    chosen[e] = True
                    deg[u] += 1
                    deg[v] += 1
                    changed = True

    result = EdgePacking.of(e for e in range(inst.m) if chosen[e])
    logger.debug(f"make_maximal: {len(p)} -> {len(result)} edges in {passes} passes")
    return result


def solve_ip2(
    inst: Instance,
    eps: Union[Fraction, int, str, None] = None,
    *,
    batch_zeros: bool = True,
    pivot_rule: Optional[str] = None,
    verify_corners: bool = False,
) -> Tuple[EdgePacking, RoundingState]:
    """
    Iterative rounding. Each round solves the relaxation on the residual
    graph; zero edges are dropped (all of them when batching), otherwise one
    edge with y_e >= 1/2 is accepted and charged to an endpoint with spare
    residual bound and z = 0. The accepted set is repaired to a maximal
    solution before returning. With `verify_corners` each LP solution also
    gets an exact rank check, recorded on its iteration.
    """
    eps = _eps(eps)
    if eps >= 1:
        raise ParameterError(f"eps must be below 1 for a meaningful ratio, got {eps}")

    f: List[int] = list(inst.c)
    C: set = set()
    residual = set(range(inst.m))
    accepted: List[int] = []
    iterations: List[RoundingIteration] = []
    root_value: Optional[Fraction] = None

    while residual:
        lp = build_lp2(inst, C, f, eps, edges=residual, drop_isolated=True)
        solution = solve_extreme(lp, pivot_rule=pivot_rule)
        if root_value is None:
            root_value = solution.objective

        def z(x: int) -> Fraction:
            j = lp.index.get(f"z_{x}")
            return Fraction(0) if j is None else solution.values[j]

        y = {e: solution.value(lp, f"y_{e}") for e in residual}
        active = {x for e in residual for x in inst.edges[e]}
        zeroed = sorted(e for e in residual if y[e] == 0)
        index = len(iterations)
        witness = bool(zeroed) or any(value >= HALF for value in y.values())
        corner_ok = verify_corner(lp, solution) if verify_corners else None
        if corner_ok is False:
            logger.warning(f"round {index}: LP solution is not a corner of the relaxation")

        if zeroed:
            dropped = zeroed if batch_zeros else zeroed[:1]
            residual.difference_update(dropped)
            iterations.append(
                RoundingIteration(
                    index=index,
                    residual_edges=len(y),
                    residual_vertices=len(active),
                    lp_objective=solution.objective,
                    zeroed=tuple(dropped),
                    half_or_zero_witness=witness,
                    corner_verified=corner_ok,
                )
            )
            logger.debug(f"round {index}: dropped {len(dropped)} zero edges")
            continue

        halves = sorted(e for e in residual if y[e] >= HALF)
        if not halves:
            raise RoundingInvariantError(
                f"round {index}: corner has no edge with y = 0 or y >= 1/2 "
                f"(residual {sorted(residual)})"
            )
        e = halves[0]
        a, b = inst.edges[e]
        eligible = [x for x in (a, b) if f[x] > 0 and z(x) == 0]
        if not eligible:
            raise RoundingInvariantError(
                f"round {index}: edge {e} has y = {y[e]} but neither endpoint has f > 0 and z = 0"
            )
        v = min(eligible, key=lambda x: (-f[x], x))
        u = b if v == a else a

        iterations.append(
            RoundingIteration(
                index=index,
                residual_edges=len(y),
                residual_vertices=len(active),
                lp_objective=solution.objective,
                rounded=e,
                y_rounded=y[e],
                endpoint=v,
                other=u,
                f_endpoint=f[v],
                z_endpoint=z(v),
                f_other=f[u],
                z_other=z(u),
                half_or_zero_witness=witness,
                corner_verified=corner_ok,
            )
        )
        f[v] -= 1
        C.add(v)
        f[u] = max(f[u] - 1, 0)
        residual.discard(e)
        accepted.append(e)
        logger.debug(f"round {index}: accepted edge {e} (y={y[e]}) charged to vertex {v}")

    if batch_zeros and len(iterations) > inst.n + 1:
        logger.warning(f"iterative rounding took {len(iterations)} rounds, above |V| + 1 = {inst.n + 1}")

    raw = EdgePacking.of(accepted)
    result = make_maximal(inst, raw, eps)
    state = RoundingState(
        eps=eps,
        residual=tuple(sorted(residual)),
        C=tuple(sorted(C)),
        f=tuple(f),
        accepted=raw,
        iterations=tuple(iterations),
        root_lp_value=root_value if root_value is not None else Fraction(0),
    )
    logger.info(f"iterative rounding: {len(result)} edges after {len(iterations)} rounds (eps={eps})")
    return result, state


def write_trace(state: RoundingState, path: Union[str, Path]) -> None:
    """One JSON object per LP solve."""
    with open(path, "w", encoding="utf-8") as fh:
        for record in state.iterations:
            fh.write(record.model_dump_json() + "\n")
