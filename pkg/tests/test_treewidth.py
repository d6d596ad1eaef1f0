import random

import pytest

from conftest import complete, cycle, path, petersen, star
from twlab.errors import GuardError, InputError
from twlab.graphs import Graph, induced_subgraph
from twlab.treewidth import (
    TreeDecomposition,
    augment_with_set,
    check_nice,
    decompose_forest,
    decomposition_from_json,
    decomposition_of_subset,
    decomposition_to_json,
    exact_treewidth,
    from_elimination_order,
    heuristic_decomposition,
    relabel,
    to_nice,
    validate,
    width,
)


def random_graph(rng, n_max=9, p=0.4):
    n = rng.randint(1, n_max)
    return Graph(
        n,
        [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p],
    )


class TestValidate:
    def test_single_bag_k3(self, triangle):
        td = TreeDecomposition(Graph(1), [{0, 1, 2}])
        assert validate(td, triangle).ok
        assert width(td) == 2

    def test_path_two_bags(self):
        td = TreeDecomposition(Graph(2, [(0, 1)]), [{0, 1}, {1, 2}])
        assert validate(td, path(3)).ok
        assert width(td) == 1

    def test_missing_edge_reported(self):
        td = TreeDecomposition(Graph(2, [(0, 1)]), [{0, 1}, {2}])
        check = validate(td, path(3))
        assert not check.ok
        assert any("edge (1,2)" in v for v in check.violations)

    def test_non_tree_host_reported_first(self, triangle):
        host = Graph(3, [(0, 1)])  # disconnected
        td = TreeDecomposition(host, [{0, 1, 2}, {0}, {1}])
        check = validate(td, triangle)
        assert not check.ok
        assert "not a tree" in check.violations[0]

    def test_disconnected_occurrences_reported(self):
        td = TreeDecomposition(Graph(3, [(0, 1), (1, 2)]), [{0}, {1}, {0}])
        check = validate(td, Graph(2, []))
        assert any("disconnected" in v for v in check.violations)


class TestWidth:
    def test_empty_bag(self):
        assert width(TreeDecomposition(Graph(1), [set()])) == -1

    def test_pair_bags(self):
        assert width(TreeDecomposition(Graph(2, [(0, 1)]), [{0, 1}, {1, 2}])) == 1

    def test_big_bag(self):
        assert width(TreeDecomposition(Graph(1), [set(range(8))])) == 7


class TestFromEliminationOrder:
    def test_path_order(self):
        td = from_elimination_order(path(3), [0, 2, 1])
        assert validate(td, path(3)).ok
        assert width(td) == 1

    def test_clique_any_order(self):
        td = from_elimination_order(complete(4), [2, 0, 3, 1])
        assert validate(td, complete(4)).ok
        assert width(td) == 3

    def test_cycle_fill_in(self):
        td = from_elimination_order(cycle(4), [0, 1, 2, 3])
        assert validate(td, cycle(4)).ok
        assert width(td) == 2

    def test_rejects_non_permutation(self):
        with pytest.raises(InputError):
            from_elimination_order(path(3), [0, 0, 1])

    def test_random_graphs_always_valid(self):
        rng = random.Random(11)
        for _ in range(40):
            g = random_graph(rng)
            order = list(range(g.n))
            rng.shuffle(order)
            assert validate(from_elimination_order(g, order), g).ok


class TestHeuristics:
    @pytest.mark.parametrize("method", ["min-fill", "min-degree"])
    def test_tree_width_one(self, method):
        g = Graph(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)])
        td = heuristic_decomposition(g, method)
        assert validate(td, g).ok
        assert width(td) == 1

    def test_k5(self):
        assert width(heuristic_decomposition(complete(5), "min-degree")) == 4

    def test_c4_min_fill(self):
        assert width(heuristic_decomposition(cycle(4), "min-fill")) == 2

    def test_unknown_method(self):
        with pytest.raises(InputError):
            heuristic_decomposition(path(2), "random")

    def test_restarts_never_worse(self):
        rng = random.Random(3)
        for _ in range(10):
            g = random_graph(rng)
            base = width(heuristic_decomposition(g, "min-fill"))
            restarted = width(heuristic_decomposition(g, "min-fill", seed=5, restarts=4))
            assert restarted <= base

    def test_valid_on_random_graphs(self):
        rng = random.Random(23)
        for _ in range(30):
            g = random_graph(rng)
            for method in ("min-fill", "min-degree"):
                assert validate(heuristic_decomposition(g, method), g).ok


class TestExact:
    def test_p4(self):
        assert exact_treewidth(path(4))[0] == 1

    def test_c4(self):
        assert exact_treewidth(cycle(4))[0] == 2

    def test_petersen(self):
        value, td = exact_treewidth(petersen())
        assert value == 4
        assert validate(td, petersen()).ok
        assert width(td) == 4

    def test_guard(self):
        with pytest.raises(GuardError):
            exact_treewidth(Graph(20, []), limit=18)

    def test_heuristics_never_beat_exact(self):
        rng = random.Random(77)
        for _ in range(25):
            g = random_graph(rng, n_max=8)
            exact, _ = exact_treewidth(g)
            for method in ("min-fill", "min-degree"):
                assert width(heuristic_decomposition(g, method)) >= exact


class TestAugment:
    def test_empty_set_identity(self, triangle):
        td = TreeDecomposition(Graph(1), [{0, 1, 2}])
        assert augment_with_set(td, set(), triangle) == td

    def test_k3_from_edge(self, triangle):
        td = TreeDecomposition(Graph(1), [{0, 1}])
        out = augment_with_set(td, {2}, triangle)
        assert validate(out, triangle).ok
        assert width(out) == 2

    def test_invalid_base_rejected(self, triangle):
        td = TreeDecomposition(Graph(1), [{0}])  # misses edge (0,1)
        with pytest.raises(InputError):
            augment_with_set(td, {2}, triangle)

    def test_random_bound(self):
        rng = random.Random(5)
        for _ in range(100):
            g = random_graph(rng, n_max=9)
            xs = {v for v in range(g.n) if rng.random() < 0.3}
            td = decomposition_of_subset(g, xs)
            out = augment_with_set(td, xs, g)
            assert validate(out, g).ok
            assert width(out) <= width(td) + len(xs)


class TestDecomposeForest:
    def test_edgeless(self):
        g = Graph(4, [])
        td = decompose_forest(g)
        assert validate(td, g).ok
        assert width(td) == 0

    def test_single_edge(self):
        td = decompose_forest(path(2))
        assert validate(td, path(2)).ok
        assert width(td) == 1

    def test_two_paths(self):
        g = Graph(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7)])
        td = decompose_forest(g)
        assert validate(td, g).ok
        assert width(td) == 1

    def test_cycle_rejected_with_edge_named(self):
        with pytest.raises(InputError, match=r"cycle through edge \(\d+,\d+\)"):
            decompose_forest(cycle(3))


class TestToNice:
    def test_single_edge_chain(self):
        g = path(2)
        td = TreeDecomposition(Graph(1), [{0, 1}])
        ntd = to_nice(td, g)
        assert check_nice(ntd, g).ok
        kinds = sorted(n.kind for n in ntd.nodes)
        assert kinds == ["forget", "forget", "introduce", "introduce", "introduce_edge", "leaf"]

    def test_width_preserved_on_c4(self):
        g = cycle(4)
        td = heuristic_decomposition(g, "min-fill")
        ntd = to_nice(td, g)
        assert ntd.width() == width(td) == 2
        assert check_nice(ntd, g).ok

    def test_every_edge_introduced_once_on_randoms(self):
        rng = random.Random(9)
        for _ in range(30):
            g = random_graph(rng, n_max=10)
            ntd = to_nice(heuristic_decomposition(g), g)
            introduced = [n.edge for n in ntd.nodes if n.kind == "introduce_edge"]
            assert sorted(introduced) == list(g.edges)
            assert check_nice(ntd, g).ok

    def test_invalid_decomposition_rejected(self, triangle):
        with pytest.raises(InputError):
            to_nice(TreeDecomposition(Graph(1), [{0, 1}]), triangle)

    def test_flattening_is_valid(self):
        g = cycle(5)
        ntd = to_nice(heuristic_decomposition(g), g)
        assert validate(ntd.as_tree_decomposition(), g).ok


class TestRelabelAndJson:
    def test_relabel_round_trip(self):
        g = cycle(4)
        sub, idx = induced_subgraph(g, {1, 2, 3})
        td = heuristic_decomposition(sub)
        lifted = relabel(td, {v: u for u, v in idx.items()})
        assert validate(lifted, Graph(4, [(1, 2), (2, 3)])).ok is False  # vertex 0 missing
        back = relabel(lifted, idx)
        assert back == td

    def test_json_round_trip(self):
        td = heuristic_decomposition(cycle(5))
        assert decomposition_from_json(decomposition_to_json(td)) == td

    def test_malformed_json(self):
        with pytest.raises(InputError):
            decomposition_from_json({"nodes": 1})
