from fractions import Fraction

import pytest

from app.core.errors import ParameterError
from app.services.graph_core import make_instance
from app.services.lp import build_lp1, build_lp2, complete_instance, gap_demo, lp1_closed_form
from app.services.simplex import is_feasible_point, solve_extreme
from tests.utils import best_vertex_by_enumeration


def test_lp1_shape(tri):
    lp = build_lp1(tri)
    assert len(lp.variables) == 6
    assert len(lp.constraints) == 6
    assert [c.label for c in lp.constraints[:3]] == ["edge_0", "edge_1", "edge_2"]


def test_lp1_single_edge():
    inst = make_instance(2, [(0, 1)], c=[1, 1])
    assert solve_extreme(build_lp1(inst)).objective == 1


def test_lp1_complete_graph_family_point():
    # x = 1/2 everywhere, y = 1 on pairs at cyclic distance at most n/4
    n = 8
    inst = complete_instance(n)
    lp = build_lp1(inst)
    values = [Fraction(1, 2)] * n
    for u, v in inst.edges:
        gap = min(v - u, n - (v - u))
        values.append(Fraction(1) if gap <= n // 4 else Fraction(0))
    assert is_feasible_point(lp, tuple(values))
    assert sum(values[n:]) == 16
    assert sum(values[n:]) >= Fraction((n - 1) ** 2, 4)


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_lp1_matches_closed_form(n):
    assert solve_extreme(build_lp1(complete_instance(n))).objective == lp1_closed_form(n)


def test_lp2_single_edge():
    inst = make_instance(2, [(0, 1)], c=[1, 1])
    lp = build_lp2(inst, (), [1, 1], Fraction(1, 10))
    solution = solve_extreme(lp)
    assert solution.objective == 2
    assert solution.value(lp, "y_0") == 1
    assert solution.value(lp, "z_0") == 0
    assert solution.value(lp, "z_1") == 0


def test_lp2_without_edges():
    inst = make_instance(2, [], c=[0, 0])
    assert solve_extreme(build_lp2(inst, (), [0, 0], 1)).objective == 0


def test_lp2_restricts_charged_vertices():
    inst = make_instance(3, [(0, 1), (1, 2)], c=[1, 2, 1])
    lp = build_lp2(inst, {1}, [1, 0, 1], Fraction(1, 10))
    assert "z_1" not in lp.index
    assert solve_extreme(lp).objective == 0


def test_lp2_triangle_against_vertex_enumeration(tri):
    lp = build_lp2(tri, (), [1, 1, 1], Fraction(1, 10))
    assert len(lp.variables) == 6
    assert solve_extreme(lp).objective == best_vertex_by_enumeration(lp)


@pytest.mark.parametrize("eps", [0, -1, "-1/2"])
def test_lp2_rejects_non_positive_eps(tri, eps):
    with pytest.raises(ParameterError):
        build_lp2(tri, (), [1, 1, 1], eps)


def test_lp_text_dump(tri):
    text = build_lp1(tri).to_lp_text()
    assert text.startswith("\\ lp1\nMaximize\n")
    assert " edge_0: - x_0 - x_1 + y_0 <= 0" in text
    assert " vertex_0: x_0 + y_0 + y_2 <= 2" in text
    assert text.rstrip().endswith("End")


def test_gap_small_sizes_use_the_oracle():
    row = gap_demo(5)
    assert row.ip_exact
    assert row.ip_opt == 4
    assert row.lp1_value >= 4
    assert gap_demo(6).ip_opt == 5


def test_gap_ratio_grows():
    rows = [gap_demo(n) for n in (8, 12, 16)]
    for row in rows:
        assert row.lp1_value == lp1_closed_form(row.n)
        assert row.lp1_value >= Fraction((row.n - 1) ** 2, 4)
    assert [row.ratio for row in rows] == [Fraction(49, 20), Fraction(121, 32), Fraction(225, 44)]
    assert rows[2].ratio > Fraction(7, 2)


def test_gap_rejects_small_n():
    with pytest.raises(ParameterError):
        gap_demo(3)
