"""
Instance model plumbing: the text format, bound normalization, the degree
condition and the upper bounds every ratio certificate rests on.
"""
import hashlib
import logging
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from app.core.errors import InstanceParseError, ParameterError
from app.models.instance import EdgeId, EdgePacking, Instance, VertexId

logger = logging.getLogger(__name__)

FORMAT_TAG = "pdbep"


def make_instance(
    n: int,
    edges: Iterable[Tuple[VertexId, VertexId]],
    c: Optional[Sequence[Optional[int]]] = None,
    weights: Optional[Sequence[Union[Fraction, int, str]]] = None,
) -> Instance:
    """
    Build a normalized instance. A missing bound (None, or no `c` at all)
    defaults to the vertex degree; bounds above the degree are clamped.
    """
    edges = tuple((int(u), int(v)) for u, v in edges)
    degrees = [0] * n
    for u, v in edges:
        if 0 <= u < n:
            degrees[u] += 1
        if 0 <= v < n:
            degrees[v] += 1
    if c is None:
        bounds = list(degrees)
    else:
        if len(c) != n:
            raise ParameterError(f"expected {n} degree bounds, got {len(c)}")
        bounds = [degrees[v] if b is None else b for v, b in enumerate(c)]
    bounds = [b if b < 0 else min(b, degrees[v]) for v, b in enumerate(bounds)]
    try:
        return Instance(
            n=n,
            edges=edges,
            c=tuple(bounds),
            weights=None if weights is None else tuple(weights),
        )
    except ValidationError as e:
        raise ParameterError(str(e)) from e


def normalize_instance(inst: Instance) -> Instance:
    """Clamp c_v to d_v. Idempotent."""
    if inst.is_normalized:
        return inst
    bounds = tuple(min(b, d) for b, d in zip(inst.c, inst.degrees))
    return Instance(n=inst.n, edges=inst.edges, c=bounds, weights=inst.weights)


def _parse_int(token: str, what: str, line_number: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceParseError(f"malformed {what} {token!r}", line_number)


def parse_instance(text: str) -> Instance:
    """
    Parse the line-oriented instance format:

        p pdbep <n> <m>
        c <v> <bound>
        e <u> <v> [weight]

    `#` starts a comment. Missing bounds default to the vertex degree and
    every bound is clamped to the degree.
    """
    header: Optional[Tuple[int, int]] = None
    bounds: dict = {}
    edges: List[Tuple[int, int]] = []
    weights: List[Optional[Fraction]] = []
    last_line = 0

    for line_number, raw in enumerate(text.splitlines(), 1):
        last_line = line_number
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]

        if header is None:
            if kind != "p" or len(parts) != 4 or parts[1] != FORMAT_TAG:
                raise InstanceParseError(f"expected 'p {FORMAT_TAG} <n> <m>' header, got {line!r}", line_number)
            n = _parse_int(parts[2], "vertex count", line_number)
            m = _parse_int(parts[3], "edge count", line_number)
            if n < 0 or m < 0:
                raise InstanceParseError("vertex and edge counts must be non-negative", line_number)
            header = (n, m)
            continue

        n, m = header
        if kind == "p":
            raise InstanceParseError("duplicate 'p' header", line_number)
        elif kind == "c":
            if len(parts) != 3:
                raise InstanceParseError(f"malformed bound record {line!r}", line_number)
            v = _parse_int(parts[1], "vertex", line_number)
            bound = _parse_int(parts[2], "bound", line_number)
            if not 0 <= v < n:
                raise InstanceParseError(f"vertex {v} out of range (n = {n})", line_number)
            if bound < 0:
                raise InstanceParseError(f"negative bound {bound} for vertex {v}", line_number)
            if v in bounds:
                raise InstanceParseError(f"duplicate 'c' record for vertex {v}", line_number)
            bounds[v] = bound
        elif kind == "e":
            if len(parts) not in (3, 4):
                raise InstanceParseError(f"malformed edge record {line!r}", line_number)
            u = _parse_int(parts[1], "vertex", line_number)
            v = _parse_int(parts[2], "vertex", line_number)
            for x in (u, v):
                if not 0 <= x < n:
                    raise InstanceParseError(f"vertex {x} out of range (n = {n})", line_number)
            if u == v:
                raise InstanceParseError(f"self-loop on vertex {u}", line_number)
            weight = None
            if len(parts) == 4:
                try:
                    weight = Fraction(parts[3])
                except (ValueError, ZeroDivisionError):
                    raise InstanceParseError(f"malformed weight {parts[3]!r}", line_number)
                if weight < 0:
                    raise InstanceParseError(f"negative weight {parts[3]}", line_number)
            if len(edges) >= m:
                raise InstanceParseError(f"more than {m} edge records", line_number)
            edges.append((u, v))
            weights.append(weight)
        else:
            raise InstanceParseError(f"unknown record type {kind!r}", line_number)

    if header is None:
        raise InstanceParseError("missing 'p' header", last_line or 1)
    n, m = header
    if len(edges) != m:
        raise InstanceParseError(f"header announces {m} edges, found {len(edges)}", last_line)

    given = [w is not None for w in weights]
    if any(given) and not all(given):
        raise InstanceParseError("weights must be given for all edges or for none", last_line)

    inst = make_instance(
        n,
        edges,
        c=[bounds.get(v) for v in range(n)],
        weights=weights if any(given) else None,
    )
    logger.debug(f"parsed instance n={inst.n} m={inst.m} weighted={inst.is_weighted}")
    return inst


def format_rational(q: Fraction) -> str:
    """Shortest exact text: integer, terminating decimal, or p/q."""
    if q.denominator == 1:
        return str(q.numerator)
    den = q.denominator
    twos = fives = 0
    while den % 2 == 0:
        den //= 2
        twos += 1
    while den % 5 == 0:
        den //= 5
        fives += 1
    if den != 1:
        return f"{q.numerator}/{q.denominator}"
    digits = max(twos, fives)
    scaled = q * 10 ** digits
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled.numerator), 10 ** digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def serialize_instance(inst: Instance) -> str:
    lines = [f"p {FORMAT_TAG} {inst.n} {inst.m}"]
    lines.extend(f"c {v} {b}" for v, b in enumerate(inst.c))
    for e, (u, v) in enumerate(inst.edges):
        if inst.is_weighted:
            lines.append(f"e {u} {v} {format_rational(inst.weights[e])}")
        else:
            lines.append(f"e {u} {v}")
    return "\n".join(lines) + "\n"


def instance_digest(inst: Instance) -> str:
    return hashlib.sha256(serialize_instance(inst).encode("utf-8")).hexdigest()


def validate_packing(inst: Instance, p: EdgePacking) -> None:
    for e in p.edges:
        if not 0 <= e < inst.m:
            raise ParameterError(f"edge id {e} is not valid for an instance with {inst.m} edges")


def packing_value(inst: Instance, p: EdgePacking) -> Fraction:
    """|p| for unweighted instances, w(p) otherwise."""
    validate_packing(inst, p)
    if not inst.is_weighted:
        return Fraction(len(p))
    return sum((inst.weights[e] for e in p.edges), Fraction(0))


def serialize_packing(inst: Instance, p: EdgePacking) -> str:
    lines = [f"s {format_rational(packing_value(inst, p))}"]
    lines.extend(f"x {e}" for e in p.ids)
    return "\n".join(lines) + "\n"


def parse_packing(text: str) -> Tuple[Fraction, EdgePacking]:
    value: Optional[Fraction] = None
    ids = []
    for line_number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "s" and len(parts) == 2 and value is None:
            try:
                value = Fraction(parts[1])
            except ValueError:
                raise InstanceParseError(f"malformed value {parts[1]!r}", line_number)
        elif parts[0] == "x" and len(parts) == 2:
            ids.append(_parse_int(parts[1], "edge id", line_number))
        else:
            raise InstanceParseError(f"unexpected packing record {line!r}", line_number)
    if value is None:
        raise InstanceParseError("missing 's' record", 1)
    return value, EdgePacking.of(ids)


def packing_degrees(inst: Instance, p: EdgePacking) -> Tuple[int, ...]:
    """d'_v: number of packing edges incident on v, parallel edges counted."""
    validate_packing(inst, p)
    deg = [0] * inst.n
    for e in p.edges:
        u, v = inst.edges[e]
        deg[u] += 1
        deg[v] += 1
    return tuple(deg)


def violating_edges(inst: Instance, p: EdgePacking) -> List[EdgeId]:
    deg = packing_degrees(inst, p)
    bad = []
    for e in p.ids:
        u, v = inst.edges[e]
        if deg[u] > inst.c[u] and deg[v] > inst.c[v]:
            bad.append(e)
    return bad


def is_feasible(inst: Instance, p: EdgePacking) -> bool:
    """Degree condition: every chosen edge has an endpoint within its bound."""
    return not violating_edges(inst, p)


def upper_bound(inst: Instance) -> int:
    """Sum of degree bounds; no feasible packing is larger."""
    return sum(inst.c)


def weighted_upper_bound(inst: Instance) -> Fraction:
    """Sum over vertices of the weight of the vertex's heavy set."""
    from app.services.weighted import heavy_sets

    heavy = heavy_sets(inst)
    return sum(
        (inst.weight(e) for members in heavy.sets for e in members),
        Fraction(0),
    )
