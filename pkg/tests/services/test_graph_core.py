from fractions import Fraction

import pytest

from app.core.errors import InstanceParseError, ParameterError
from app.models.instance import EdgePacking
from app.services.graph_core import (
    instance_digest,
    is_feasible,
    make_instance,
    normalize_instance,
    packing_degrees,
    packing_value,
    parse_instance,
    parse_packing,
    serialize_instance,
    serialize_packing,
    upper_bound,
    violating_edges,
    weighted_upper_bound,
)
from tests.factories import STAR4_TEXT, TRI_TEXT, create_multigraph, create_random_instance
from tests.utils import all_packings


def test_parse_triangle(tri):
    inst = parse_instance(TRI_TEXT)
    assert inst == tri
    assert inst.edges == ((0, 1), (1, 2), (0, 2))
    assert inst.c == (1, 1, 1)


def test_parse_star(star4):
    inst = parse_instance(STAR4_TEXT)
    assert inst == star4
    assert inst.degrees == (4, 1, 1, 1, 1)


def test_parse_rejects_self_loop():
    with pytest.raises(InstanceParseError) as exc:
        parse_instance("p pdbep 2 1\ne 0 0\n")
    assert "self-loop" in str(exc.value)
    assert exc.value.line_number == 2


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("p pdbep 2 1\nc 0 1\nc 0 1\ne 0 1\n", "duplicate 'c'"),
        ("p pdbep 2 1\ne 0 2\n", "out of range"),
        ("p pdbep 2 1\ne 0 1 -3\n", "negative weight"),
        ("p pdbep 2 1\nx 0 1\n", "unknown record"),
        ("p pdbep 3 2\ne 0 1\n", "announces 2 edges"),
        ("e 0 1\n", "header"),
        ("p pdbep 3 2\ne 0 1 2\ne 1 2\n", "all edges or for none"),
    ],
)
def test_parse_errors_name_the_problem(text, fragment):
    with pytest.raises(InstanceParseError) as exc:
        parse_instance(text)
    assert fragment in str(exc.value)
    assert str(exc.value).startswith("line ")


def test_parse_defaults_and_clamps_bounds():
    # vertex 0 has no bound record, vertex 1 asks for more than its degree
    inst = parse_instance("p pdbep 3 2  # comment\nc 1 9\nc 2 0\ne 0 1\ne 1 2\n")
    assert inst.c == (1, 2, 0)
    assert inst.is_normalized


def test_parse_decimal_weights_exactly():
    inst = parse_instance("p pdbep 2 1\ne 0 1 0.1\n")
    assert inst.weights == (Fraction(1, 10),)


def test_serialize_round_trip():
    for seed in range(20):
        inst = create_random_instance(seed, weighted=seed % 2 == 0)
        text = serialize_instance(inst)
        assert parse_instance(text) == inst
        assert serialize_instance(parse_instance(text)) == text


def test_digest_is_stable(tri):
    assert instance_digest(tri) == instance_digest(parse_instance(TRI_TEXT))
    assert instance_digest(tri) != instance_digest(make_instance(3, [(0, 1), (1, 2), (0, 2)], c=[1, 1, 0]))


def test_normalize_is_idempotent():
    inst = normalize_instance(make_instance(3, [(0, 1)], c=[0, 1, 0]))
    assert normalize_instance(inst) == inst


def test_make_instance_rejects_bad_input():
    with pytest.raises(ParameterError):
        make_instance(2, [(0, 0)])
    with pytest.raises(ParameterError):
        make_instance(2, [(0, 1)], c=[1])


def test_packing_degrees(tri, star4):
    assert packing_degrees(tri, EdgePacking.of([0, 1, 2])) == (2, 2, 2)
    assert packing_degrees(tri, EdgePacking()) == (0, 0, 0)
    assert packing_degrees(star4, EdgePacking.of(range(4))) == (4, 1, 1, 1, 1)


def test_parallel_edges_count_twice():
    inst = create_multigraph()
    assert packing_degrees(inst, EdgePacking.of([0, 1])) == (2, 2, 0)
    assert not is_feasible(inst, EdgePacking.of([0, 1]))


def test_is_feasible_examples(tri, star4):
    assert is_feasible(tri, EdgePacking.of([0, 1]))
    assert not is_feasible(tri, EdgePacking.of([0, 1, 2]))
    assert violating_edges(tri, EdgePacking.of([0, 1, 2])) == [0, 1, 2]
    assert is_feasible(star4, EdgePacking.of(range(4)))


def test_is_feasible_agrees_with_degree_recheck():
    for seed in range(10):
        inst = create_random_instance(seed, m_max=8)
        for p in all_packings(list(range(inst.m))):
            deg = packing_degrees(inst, p)
            expected = all(deg[u] <= inst.c[u] or deg[v] <= inst.c[v] for u, v in (inst.edges[e] for e in p.edges))
            assert is_feasible(inst, p) == expected


def test_upper_bound(tri, star4):
    assert upper_bound(tri) == 3
    assert upper_bound(star4) == 5
    assert upper_bound(make_instance(3, [(0, 1), (1, 2)], c=[0, 0, 0])) == 0


def test_weighted_upper_bound(path3w):
    assert weighted_upper_bound(path3w) == 7
    assert weighted_upper_bound(make_instance(2, [(0, 1)], c=[1, 1], weights=[5])) == 10


def test_unit_weight_bound_is_below_cardinality_bound(tri, star4):
    for inst in (tri, star4):
        assert weighted_upper_bound(inst) <= upper_bound(inst)


def test_packing_text_round_trip(path3w):
    p = EdgePacking.of([1, 0])
    text = serialize_packing(path3w, p)
    assert text == "s 4\nx 0\nx 1\n"
    assert parse_packing(text) == (packing_value(path3w, p), p)


def test_parse_packing_requires_value():
    with pytest.raises(InstanceParseError):
        parse_packing("x 0\n")


@pytest.mark.parametrize("bad", [3, -1])
def test_packings_with_foreign_edge_ids_are_rejected(tri, bad):
    p = EdgePacking.of([0, bad])
    with pytest.raises(ParameterError):
        packing_value(tri, p)
    with pytest.raises(ParameterError):
        is_feasible(tri, p)
