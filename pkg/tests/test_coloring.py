from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolor import coloring, generators
from hypercolor.coloring import ChoosabilityStatus, EdgeColoring, ListAssignment
from hypercolor.derived import clique_ranks, split_by_rank
from hypercolor.hcore import Hypergraph
from hypercolor.utils import Budget, BudgetExhausted


def petersen():
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    return Hypergraph(10, outer + inner + spokes)


@st.composite
def linear_hypergraphs(draw, max_n=10, max_m=16):
    n = draw(st.integers(min_value=2, max_value=max_n))
    m = draw(st.integers(min_value=0, max_value=max_m))
    rank_max = draw(st.integers(min_value=2, max_value=min(4, n)))
    seed = draw(st.integers(min_value=0, max_value=2**32))
    return generators.random_linear(n, m, 2, rank_max, seed)


PASCH = [(0, 1, 2), (0, 3, 4), (1, 3, 5), (2, 4, 5)]


def affine_classes(count):
    """The first ``count`` parallel classes of lines of the affine plane of order 3."""
    slopes = [None, 0, 1, 2][:count]
    lines = []
    for s in slopes:
        for c in range(3):
            if s is None:
                lines.append(tuple(3 * c + y for y in range(3)))
            else:
                lines.append(tuple(sorted(3 * x + (s * x + c) % 3 for x in range(3))))
    return lines


def pair_covering_case(seed):
    """Regular triples completed by every uncovered pair, vertices shuffled, random n-lists.

    The triples are 1-, 2- or 3-regular, so the rank-2 edges have degree at most
    ``n - 2 * Delta - 1`` where ``Delta`` is the degree of the triples.
    """
    rng = np.random.default_rng(seed)
    families = [
        (3, [(0, 1, 2)]),
        (6, [(0, 1, 2), (3, 4, 5)]),
        (9, [(0, 1, 2), (3, 4, 5), (6, 7, 8)]),
        (6, PASCH),
        (9, affine_classes(2)),
        (9, affine_classes(3)),
    ]
    n, triples = families[seed % len(families)]
    relabel = rng.permutation(n).tolist()
    triples = [tuple(relabel[x] for x in t) for t in triples]
    inside = {frozenset(pair) for t in triples for pair in combinations(t, 2)}
    pairs = [p for p in combinations(range(n), 2) if frozenset(p) not in inside]
    H = Hypergraph(n, triples + pairs)
    lists = {
        e: frozenset((rng.choice(2 * n, size=n, replace=False) + 1).tolist())
        for e, r in enumerate(H.ranks)
        if r == 2
    }
    return H, ListAssignment(lists)


class TestEdgeColoring:
    def test_json(self):
        c = EdgeColoring({1: 2, 0: 1})
        assert c.to_json_dict() == {"0": 1, "1": 2}
        assert c.n_colors == 2
        assert c.success

    def test_list_assignment(self):
        lists = ListAssignment.uniform(range(3), 2)
        assert lists[0] == frozenset({1, 2})
        assert lists.sizes() == {0: 2, 1: 2, 2: 2}
        assert lists.to_json_dict() == {"0": [1, 2], "1": [1, 2], "2": [1, 2]}

    def test_is_proper(self, triangle):
        assert coloring.is_proper(triangle, EdgeColoring({0: 1, 1: 2, 2: 3}))
        assert not coloring.is_proper(triangle, EdgeColoring({0: 1, 1: 2, 2: 1}))
        with pytest.raises(ValueError) as excinfo:
            coloring.is_proper(triangle, EdgeColoring({0: 1, 1: 2}))
        assert "coloring misses edge 2" in str(excinfo.value)


class TestEdgeOrder:
    def test_input(self, fano):
        assert coloring.edge_order(fano) == list(range(7))

    def test_decreasing_r(self):
        H = Hypergraph(5, [(0, 1), (1, 2), (2, 3), (1, 4)])
        R = clique_ranks(H)
        order = coloring.edge_order(H, "decreasing_r")
        assert [R[e] for e in order] == sorted(R, reverse=True)

    def test_random(self, fano):
        order = coloring.edge_order(fano, "random", seed=5)
        assert sorted(order) == list(range(7))
        assert order == coloring.edge_order(fano, "random", seed=5)
        with pytest.raises(ValueError) as excinfo:
            coloring.edge_order(fano, "random")
        assert "needs a seed" in str(excinfo.value)

    def test_invalid(self, fano):
        with pytest.raises(ValueError) as excinfo:
            coloring.edge_order(fano, "largest_first")
        assert "strategy='largest_first' is invalid" in str(excinfo.value)

    def test_degeneracy(self, fano, four_cycle, triangle):
        assert coloring.line_graph_degeneracy(fano) == 6
        assert coloring.line_graph_degeneracy(four_cycle) == 2
        assert coloring.line_graph_degeneracy(triangle) == 2
        assert coloring.line_graph_degeneracy(Hypergraph(4, [(0, 1), (2, 3)])) == 0


class TestGreedy:
    def test_success(self, fano):
        c = coloring.greedy_color(fano, 7)
        assert c.success
        assert c.colors == {e: e + 1 for e in range(7)}

    def test_failure_names_the_stuck_edge(self, triangle):
        failure = coloring.greedy_color(triangle, 2)
        assert not failure.success
        assert failure.stuck_edge == 2
        assert failure.exhausted_list == frozenset({1, 2})
        assert failure.blocked_by == {1: 0, 2: 1}
        assert failure.partial.colors == {0: 1, 1: 2}

    def test_respects_lists(self, triangle):
        lists = ListAssignment({0: {4, 5}, 1: {4}, 2: {5, 6}})
        c = coloring.greedy_list_color(triangle, lists, order=[1, 0, 2])
        assert c.colors == {1: 4, 0: 5, 2: 6}
        assert coloring.respects_lists(c, lists)

    def test_missing_list(self, triangle):
        with pytest.raises(ValueError) as excinfo:
            coloring.greedy_list_color(triangle, ListAssignment({0: {1}, 1: {2}}))
        assert "no list for edge 2" in str(excinfo.value)

    def test_bad_order(self, triangle):
        with pytest.raises(ValueError) as excinfo:
            coloring.greedy_color(triangle, 3, order=[0, 0, 1])
        assert "must be a permutation" in str(excinfo.value)

    def test_bad_palette(self, triangle):
        with pytest.raises(ValueError):
            coloring.greedy_color(triangle, 0)

    @settings(deadline=None, max_examples=200)
    @given(linear_hypergraphs(), st.integers(min_value=0, max_value=1000))
    def test_clique_rank_palette_always_suffices(self, H, seed):
        k = 1 + max(clique_ranks(H), default=0)
        orders = [
            coloring.edge_order(H, "input"),
            coloring.edge_order(H, "decreasing_r"),
            coloring.edge_order(H, "random", seed=seed),
            coloring.edge_order(H, "degeneracy"),
        ]
        for order in orders:
            c = coloring.greedy_color(H, k, order)
            assert c.success
            assert coloring.is_proper(H, c)

    @settings(deadline=None, max_examples=100)
    @given(linear_hypergraphs())
    def test_degeneracy_order_bounds_back_degrees(self, H):
        back = coloring.back_degrees(H, coloring.edge_order(H, "degeneracy"))
        assert max(back, default=0) == coloring.line_graph_degeneracy(H)
        c = coloring.greedy_color(
            H, coloring.line_graph_degeneracy(H) + 1, coloring.edge_order(H, "degeneracy")
        )
        assert c.success

    @pytest.mark.slow
    def test_clique_rank_palette_on_a_thousand_instances(self, random_linear_family):
        for i, H in enumerate(random_linear_family(1_000, seed=2)):
            k = 1 + max(clique_ranks(H), default=0)
            orders = [coloring.edge_order(H, "input"), coloring.edge_order(H, "decreasing_r")]
            orders += [coloring.edge_order(H, "random", seed=3 * i + s) for s in range(3)]
            for order in orders:
                c = coloring.greedy_color(H, k, order)
                assert c.success, f"instance {i}: {H.to_dict()}"
                assert coloring.is_proper(H, c)


class TestChromaticIndex:
    @pytest.mark.parametrize(
        "H, q",
        [
            (generators.projective_plane(2), 7),
            (generators.projective_plane(3), 13),
            (generators.near_pencil(4), 4),
            (generators.near_pencil(5), 5),
            (generators.near_pencil(6), 6),
            (generators.near_pencil(7), 7),
            (generators.complete_graph_hypergraph(3), 3),
            (generators.complete_graph_hypergraph(4), 3),
            (generators.complete_graph_hypergraph(5), 5),
            (generators.complete_graph_hypergraph(6), 5),
            (generators.complete_graph_hypergraph(7), 7),
            (petersen(), 4),
        ],
    )
    def test_exact_values(self, H, q):
        result = coloring.chromatic_index_exact(H)
        assert result.exact
        assert result.value == result.lower == result.upper == q
        assert coloring.is_proper(H, result.coloring)
        assert result.coloring.n_colors == q
        assert not result.limit_hit

    def test_budget_exhausted(self):
        result = coloring.chromatic_index_exact(petersen(), Budget(limit_nodes=1))
        assert result.limit_hit
        assert result.value is None
        assert not result.exact
        assert result.lower == 3
        assert result.upper >= 4
        assert coloring.is_proper(petersen(), result.coloring)

    def test_too_large(self):
        with pytest.raises(ValueError) as excinfo:
            coloring.chromatic_index_exact(generators.complete_graph_hypergraph(10))
        assert "limited to 40 edges, got 45" in str(excinfo.value)

    def test_bounds(self, fano):
        result = coloring.chromatic_index_bounds(fano)
        assert result.lower == result.upper == result.value == 7
        assert len(result.clique) == 7

    def test_empty(self):
        result = coloring.chromatic_index_exact(Hypergraph(3, []))
        assert result.value == 0

    @settings(deadline=None, max_examples=50)
    @given(linear_hypergraphs(max_n=8, max_m=12))
    def test_sandwich(self, H):
        result = coloring.chromatic_index_exact(H)
        assert result.lower <= result.value == result.upper <= result.greedy_upper
        assert result.value <= 1 + max(clique_ranks(H), default=-1)


class TestListColor:
    def test_list_color(self, triangle):
        lists = ListAssignment({0: {1, 2}, 1: {1, 2}, 2: {2, 3}})
        c = coloring.list_color(triangle, lists)
        assert coloring.is_proper(triangle, c)
        assert coloring.respects_lists(c, lists)
        assert c[2] == 3

    def test_uncolorable(self, triangle):
        lists = ListAssignment.uniform(range(3), 2)
        assert coloring.list_color(triangle, lists) is None
        assert coloring.verify_list_uncolorable(triangle, lists)

    def test_budget(self, fano):
        with pytest.raises(BudgetExhausted):
            coloring.list_color(fano, ListAssignment.uniform(range(7), 6), Budget(limit_nodes=3))


class TestChoosability:
    def test_triangle_not_2_choosable(self, triangle):
        verdict = coloring.is_k_choosable(triangle, 2)
        assert verdict.status is ChoosabilityStatus.NOT_CHOOSABLE
        assert verdict.witness.to_json_dict() == {"0": [1, 2], "1": [1, 2], "2": [1, 2]}
        assert coloring.verify_list_uncolorable(triangle, verdict.witness)

    def test_triangle_3_choosable(self, triangle):
        verdict = coloring.is_k_choosable(triangle, 3)
        assert verdict.status is ChoosabilityStatus.CHOOSABLE
        assert "degeneracy" in verdict.reason

    def test_triangle_3_choosable_by_enumeration(self, triangle):
        verdict = coloring.is_k_choosable(triangle, 3, use_degeneracy=False)
        assert verdict.status is ChoosabilityStatus.CHOOSABLE
        assert verdict.assignments_examined > 0

    def test_four_cycle_2_choosable(self, four_cycle):
        verdict = coloring.is_k_choosable(four_cycle, 2)
        assert verdict.status is ChoosabilityStatus.CHOOSABLE
        assert verdict.witness is None

    def test_path_not_1_choosable(self):
        verdict = coloring.is_k_choosable(Hypergraph(3, [(0, 1), (1, 2)]), 1)
        assert verdict.status is ChoosabilityStatus.NOT_CHOOSABLE
        assert verdict.witness.to_json_dict() == {"0": [1], "1": [1]}

    def test_budget(self, triangle):
        verdict = coloring.is_k_choosable(triangle, 2, Budget(limit_nodes=0))
        assert verdict.status is ChoosabilityStatus.INCONCLUSIVE
        assert verdict.limit_hit

    @pytest.mark.parametrize("k", [0, 6])
    def test_k_out_of_range(self, triangle, k):
        with pytest.raises(ValueError) as excinfo:
            coloring.is_k_choosable(triangle, k)
        assert "k must lie in [1, 5]" in str(excinfo.value)

    def test_too_large(self, fano):
        with pytest.raises(ValueError) as excinfo:
            coloring.is_k_choosable(fano, 3, max_edges=6)
        assert "limited to 6 edges, got 7" in str(excinfo.value)

    @settings(deadline=None, max_examples=150)
    @given(linear_hypergraphs(max_n=8, max_m=5), st.integers(min_value=1, max_value=3))
    def test_choosable_bounds_the_chromatic_index(self, H, k):
        verdict = coloring.is_k_choosable(
            H, k, Budget(limit_nodes=200_000), use_degeneracy=False
        )
        if verdict.status is ChoosabilityStatus.CHOOSABLE:
            assert coloring.chromatic_index_exact(H).value <= k
        elif verdict.status is ChoosabilityStatus.NOT_CHOOSABLE:
            assert coloring.verify_list_uncolorable(H, verdict.witness)


class TestExtension:
    def setup_method(self):
        self.H = Hypergraph(7, [(0, 1, 2), (0, 3), (1, 3), (2, 3), (3, 4)])

    def test_extends(self):
        result = coloring.extend_coloring(
            self.H, EdgeColoring({0: 1}), ListAssignment.uniform(range(1, 5), 7), 7
        )
        assert result.success
        assert result.hypothesis_holds
        assert result.count_bound == 5
        assert result.count_bound_holds
        assert result.available_counts == {1: 6, 2: 6, 3: 6, 4: 7}
        assert coloring.is_proper(self.H, result.coloring)
        assert result.coloring[0] == 1

    def test_hypothesis_fails_but_search_runs(self, caplog):
        result = coloring.extend_coloring(
            self.H, EdgeColoring({0: 1}), ListAssignment.uniform(range(1, 5), 4), 4
        )
        assert not result.hypothesis_holds
        assert result.success
        assert "Extension hypothesis fails" in caplog.text

    def test_stuck(self):
        lists = ListAssignment({1: {1, 2}, 2: {1, 2}, 3: {1, 2}, 4: {1, 2}})
        result = coloring.extend_coloring(self.H, EdgeColoring({0: 1}), lists, 2)
        assert not result.success
        assert result.coloring is None
        assert result.stuck[1] == frozenset({2})

    def test_wrong_edges(self):
        with pytest.raises(ValueError) as excinfo:
            coloring.extend_coloring(
                self.H, EdgeColoring({1: 1}), ListAssignment.uniform(range(1, 5), 7), 7
            )
        assert "exactly the rank >= 3 edges [0]" in str(excinfo.value)

    def test_short_list(self):
        lists = ListAssignment.uniform(range(1, 5), 7)
        lists.lists[2] = frozenset({1, 2})
        with pytest.raises(ValueError) as excinfo:
            coloring.extend_coloring(self.H, EdgeColoring({0: 1}), lists, 7)
        assert "list of edge 2 has 2 colors" in str(excinfo.value)

    @pytest.mark.parametrize("seed", range(100))
    def test_extension_with_pair_coverage(self, seed):
        H, lists = pair_covering_case(seed)
        split = split_by_rank(H)
        k3 = 1 + max(clique_ranks(split.h3))
        orders = [
            coloring.edge_order(split.h3, "input"),
            coloring.edge_order(split.h3, "decreasing_r"),
            coloring.edge_order(split.h3, "degeneracy"),
        ] + [coloring.edge_order(split.h3, "random", seed=s) for s in range(3)]
        for order in orders:
            h3 = coloring.greedy_color(split.h3, k3, order)
            assert h3.success
            h3_coloring = EdgeColoring({split.h3_edges[i]: c for i, c in h3.colors.items()})
            result = coloring.extend_coloring(H, h3_coloring, lists, H.n)
            assert result.hypothesis_holds
            assert result.count_bound == H.n - 2 * result.h3_max_degree
            assert result.count_bound_holds
            assert all(count >= result.count_bound for count in result.available_counts.values())
            assert result.success
            assert coloring.respects_lists(
                EdgeColoring({e: result.coloring[e] for e in split.h2_edges}), lists
            )


class TestDeficitExcess:
    def test_balance(self):
        H3 = Hypergraph(6, [(0, 1, 2, 3), (0, 4, 5)])
        balance = coloring.deficit_excess(H3, 2)
        assert balance[0] == (0, 1)
        assert balance[1] == (1, 1)
        assert balance[4] == (1, 0)

    def test_low_rank(self):
        with pytest.raises(ValueError):
            coloring.deficit_excess(Hypergraph(3, [(0, 1)]), 1)

    def test_delta_too_small(self):
        with pytest.raises(ValueError):
            coloring.deficit_excess(Hypergraph(5, [(0, 1, 2), (0, 3, 4)]), 1)
