import pytest

from app.core.errors import ParameterError
from app.services.graph_core import is_feasible, make_instance, packing_value, weighted_upper_bound
from app.services.oracle import exact_opt
from app.services.weighted import bit_count, certificate_sum, heavy_sets, partition_solve
from tests.factories import create_random_instance, create_star


def test_heavy_sets_follow_weight(path3w):
    assert heavy_sets(path3w).sets == ((0,), (0,), (1,))


def test_heavy_sets_break_ties_by_edge_id():
    star = create_star(4, bound=2)
    assert heavy_sets(star).sets[0] == (0, 1)


def test_full_bounds_discard_nothing(tri):
    inst = make_instance(3, tri.edges, c=[2, 2, 2])
    partition = partition_solve(inst).partition
    assert partition.discarded == ()
    assert partition.T.ids == (0, 1, 2)


def test_weighted_path(path3w):
    result = partition_solve(path3w)
    partition = result.partition
    assert partition.k == 2
    assert partition.T.ids == (0,)
    (directed,) = partition.directed
    assert (directed.tail, directed.head, directed.bit, directed.family) == (1, 2, 0, "B")
    assert partition.family("B", 0).ids == (1,)
    assert result.chosen == "T"
    assert result.packing.ids == (0,)
    assert result.family_weights == {"T": 3, "A0": 0, "A1": 0, "B0": 1, "B1": 0}


def test_disjoint_edges_are_all_kept():
    inst = make_instance(4, [(0, 1), (2, 3)], c=[1, 1, 1, 1], weights=[5, 2])
    result = partition_solve(inst)
    assert result.packing.ids == (0, 1)


def test_bit_count():
    assert [bit_count(n) for n in (0, 1, 2, 3, 4, 5, 8, 9)] == [0, 0, 1, 2, 2, 3, 3, 4]


def test_single_vertex():
    result = partition_solve(make_instance(1, [], c=[0], weights=[]))
    assert result.chosen == "T"
    assert len(result.packing) == 0


def test_relabeling_is_seeded():
    inst = create_random_instance(4, weighted=True)
    first = partition_solve(inst, relabel_seed=11)
    assert first == partition_solve(inst, relabel_seed=11)
    assert sorted(first.partition.labels) == list(range(inst.n))


def test_labels_must_be_a_permutation(path3w):
    with pytest.raises(ParameterError):
        partition_solve(path3w, labels=[0, 0, 1])
    with pytest.raises(ParameterError):
        partition_solve(path3w, labels=[0, 1, 2], relabel_seed=1)


@pytest.mark.parametrize("relabel_seed", [None, 3])
def test_certificates_on_random_instances(relabel_seed):
    for seed in range(40):
        inst = create_random_instance(seed, m_max=12, weighted=True)
        result = partition_solve(inst, relabel_seed=relabel_seed)
        partition = result.partition

        for _, candidate in partition.candidates():
            assert is_feasible(inst, candidate)
        members = [set(partition.T.edges), set(partition.discarded)]
        members += [set(candidate.edges) for name, candidate in partition.candidates() if name != "T"]
        assert sum(len(m) for m in members) == inst.m
        assert set().union(*members) == set(range(inst.m))
        heavy = {e for s in heavy_sets(inst).sets for e in s}
        assert heavy == set(range(inst.m)) - set(partition.discarded)

        assert certificate_sum(inst, partition) == weighted_upper_bound(inst)
        opt = exact_opt(inst).value
        assert opt <= weighted_upper_bound(inst)
        assert opt <= (2 + 2 * partition.k) * packing_value(inst, result.packing)
        assert packing_value(inst, result.packing) == max(result.family_weights.values())
