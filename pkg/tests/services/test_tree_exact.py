import pytest

from app.core.errors import ParameterError, SolverMismatchError, TreeStructureError
from app.models.report import GeneratorSpec
from app.services.generators import generate
from app.services.graph_core import is_feasible, make_instance
from app.services.oracle import exact_opt
from app.services.tree_exact import is_forest, is_tree, root_tree, solve_forest, tree_dp
from tests.factories import create_path, create_random_tree, create_star
from tests.utils import brute_force_label


def test_path_rooted_in_the_middle(path3):
    value, labels, witness = tree_dp(path3, root=1)
    assert value == 2
    assert (labels.h[1], labels.g[1], labels.b[1]) == (0, 1, 2)
    assert labels.H[1] == (0, 2)
    assert witness.ids == (0, 1)


def test_single_edge():
    value, labels, witness = tree_dp(create_path(2), root=0)
    assert value == 1
    assert len(witness) == 1
    assert labels.label(1, "h") == 0
    assert labels.label(1, "g") is None
    assert labels.label(1, "b") is None


def test_star_from_the_center(star4):
    value, labels, _ = tree_dp(star4, root=0)
    assert value == 4
    assert (labels.h[0], labels.g[0], labels.b[0]) == (0, 1, 4)


def test_saturated_vertex_below_the_root():
    star = make_instance(5, [(0, i) for i in range(1, 5)], c=[4, 1, 1, 1, 1])
    value, labels, _ = tree_dp(star, root=1)
    assert value == 4
    assert labels.label(0, "h") == 3
    assert labels.label(0, "g") is None
    assert labels.label(0, "b") is None
    assert labels.as_table()[0]["g"] is None


def test_single_vertex():
    value, _, witness = tree_dp(make_instance(1, [], c=[0]))
    assert value == 0
    assert len(witness) == 0


def test_structure_errors(tri):
    with pytest.raises(TreeStructureError) as exc:
        tree_dp(tri)
    assert exc.value.reason == "edge-count"

    with pytest.raises(TreeStructureError) as exc:
        root_tree(make_instance(3, [(0, 1), (0, 1)], c=[1, 1, 1]))
    assert exc.value.reason == "cycle"

    split = make_instance(5, [(1, 2), (2, 3), (3, 1), (0, 4)], c=[1] * 5)
    with pytest.raises(TreeStructureError) as exc:
        root_tree(split, root=0)
    assert exc.value.reason == "disconnected"
    with pytest.raises(TreeStructureError) as exc:
        root_tree(split, root=1)
    assert exc.value.reason == "cycle"


def test_root_out_of_range(path3):
    with pytest.raises(ParameterError):
        tree_dp(path3, root=3)


def test_weighted_instances_are_rejected(path3w):
    with pytest.raises(SolverMismatchError):
        tree_dp(path3w)
    with pytest.raises(SolverMismatchError):
        solve_forest(path3w)


def test_matches_the_oracle_from_every_root():
    for seed in range(120):
        inst = create_random_tree(seed)
        opt = exact_opt(inst).value
        for root in range(inst.n):
            value, _, witness = tree_dp(inst, root=root)
            assert value == opt
            assert len(witness) == value
            assert is_feasible(inst, witness)


def test_labels_match_restricted_subtree_optima():
    for seed in range(60):
        inst = create_random_tree(seed, n_max=8)
        tree = root_tree(inst, root=seed % inst.n)
        _, labels, _ = tree_dp(inst, root=tree.root)
        for v in range(inst.n):
            for kind in ("h", "g", "b"):
                assert labels.label(v, kind) == brute_force_label(inst, tree, v, kind), (seed, v, kind)


def test_forest_sums_its_components():
    forest = make_instance(7, [(0, 1), (1, 2), (3, 4), (4, 5)], c=[1] * 7)
    assert is_forest(forest)
    assert not is_tree(forest)
    value, witness = solve_forest(forest)
    assert value == 4
    assert is_feasible(forest, witness)
    assert value == exact_opt(forest).value


def test_tree_predicates(tri, star4):
    assert is_tree(star4)
    assert is_forest(star4)
    assert not is_tree(tri)
    assert not is_forest(tri)


def test_large_tree():
    inst = generate(GeneratorSpec(family="tree", n=5000, bound="uniform", seed=7))
    value, _, witness = tree_dp(inst)
    assert len(witness) == value
    assert is_feasible(inst, witness)
    assert tree_dp(inst, root=4999)[0] == value


def test_star_from_a_leaf_matches_the_center():
    star = create_star(6, bound=2)
    assert tree_dp(star, root=3)[0] == tree_dp(star, root=0)[0]
