from collections import Counter
from itertools import combinations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercolor import generators, hcore
from hypercolor.derived import analyze


def covers_every_pair_once(H):
    pairs = Counter(pair for edge in H.edges for pair in combinations(edge, 2))
    return len(pairs) == H.n * (H.n - 1) // 2 and set(pairs.values()) == {1}


class TestProjectivePlane:
    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_plane(self, q):
        H = generators.projective_plane(q)
        size = q * q + q + 1
        assert H.n == H.m == size
        assert set(H.ranks) == {q + 1}
        assert set(H.degrees) == {q + 1}
        assert covers_every_pair_once(H)

    @pytest.mark.parametrize("q", [1, 4, 17, "2"])
    def test_unsupported_order(self, q):
        with pytest.raises(ValueError):
            generators.projective_plane(q)


class TestSmallFamilies:
    def test_complete_graph(self):
        H = generators.complete_graph_hypergraph(5)
        assert H.m == 10
        assert set(H.ranks) == {2}
        assert covers_every_pair_once(H)

    def test_near_pencil(self, near_pencil5):
        assert near_pencil5.edges[0] == (0, 1, 2, 3)
        assert near_pencil5.m == 5
        assert covers_every_pair_once(near_pencil5)

    @pytest.mark.parametrize("n", [3, 9, 15, 21])
    def test_steiner_triple(self, n):
        H = generators.steiner_triple(n)
        assert H.m == n * (n - 1) // 6
        assert set(H.ranks) == {3}
        assert set(H.degrees) == {(n - 1) // 2}
        assert covers_every_pair_once(H)

    @pytest.mark.parametrize("n", [7, 13, 105])
    def test_steiner_triple_unsupported(self, n):
        with pytest.raises(ValueError) as excinfo:
            generators.steiner_triple(n)
        assert "is not supported" in str(excinfo.value)

    def test_too_small(self):
        with pytest.raises(ValueError):
            generators.complete_graph_hypergraph(1)
        with pytest.raises(ValueError):
            generators.near_pencil(2)


class TestRandomLinear:
    @settings(deadline=None, max_examples=50)
    @given(
        st.integers(min_value=3, max_value=12),
        st.integers(min_value=0, max_value=20),
        st.integers(min_value=0, max_value=2**32),
    )
    def test_linear_and_in_range(self, n, m_target, seed):
        H = generators.random_linear(n, m_target, 2, min(3, n), seed)
        assert hcore.validate(H).linear
        assert H.m <= m_target
        assert all(2 <= r <= min(3, n) for r in H.ranks)

    def test_reproducible(self):
        H1 = generators.random_linear(10, 8, 2, 4, seed=42)
        H2 = generators.random_linear(10, 8, 2, 4, seed=42)
        assert H1 == H2

    def test_partial_warns(self, caplog):
        H = generators.random_linear(4, 20, 2, 2, seed=0)
        assert H.m <= 6
        assert "stopped after" in caplog.text

    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(n=5, m_target=3, rank_min=1, rank_max=3, seed=0),
            dict(n=5, m_target=3, rank_min=3, rank_max=2, seed=0),
            dict(n=5, m_target=3, rank_min=2, rank_max=6, seed=0),
            dict(n=5, m_target=-1, rank_min=2, rank_max=3, seed=0),
            dict(n=5, m_target=3, rank_min=2, rank_max=3, seed=-4),
        ],
    )
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(ValueError):
            generators.random_linear(**kwargs)


class TestGenerate:
    def test_generate_plane(self):
        instance = generators.generate(generators.GenSpec("projective_plane", {"q": 2}))
        assert instance.hypergraph.n == 7
        assert not instance.partial
        assert instance.meta == {"kind": "projective_plane", "params": {"q": 2}, "seed": None}

    def test_generate_random_records_source(self):
        spec = generators.GenSpec(
            "random_linear", {"n": 6, "m_target": 4, "rank_min": 2, "rank_max": 3}, seed=3
        )
        instance = generators.generate(spec)
        assert instance.meta["rng"] == generators.RANDOM_SOURCE
        assert instance.meta["seed"] == 3
        assert instance.hypergraph == generators.random_linear(6, 4, 2, 3, seed=3)

    def test_random_needs_seed(self):
        spec = generators.GenSpec(
            "random_linear", {"n": 6, "m_target": 4, "rank_min": 2, "rank_max": 3}
        )
        with pytest.raises(ValueError) as excinfo:
            generators.generate(spec)
        assert "needs a seed" in str(excinfo.value)

    def test_unknown_kind(self):
        with pytest.raises(ValueError) as excinfo:
            generators.generate(generators.GenSpec("petersen"))
        assert "kind='petersen' is invalid" in str(excinfo.value)

    def test_wrong_parameters(self):
        with pytest.raises(ValueError) as excinfo:
            generators.generate(generators.GenSpec("near_pencil", {"q": 3}))
        assert "near_pencil takes parameters ['n']" in str(excinfo.value)

    def test_from_dict(self):
        spec = generators.GenSpec.from_dict({"kind": "steiner_triple", "params": {"n": 9}})
        assert spec == generators.GenSpec("steiner_triple", {"n": 9})
        assert generators.GenSpec.from_dict(spec.to_dict()) == spec

    def test_from_dict_without_kind(self):
        with pytest.raises(ValueError):
            generators.GenSpec.from_dict({"params": {"n": 9}})


class TestRandomSweepPlan:
    def test_deterministic(self):
        plan1 = generators.random_sweep_plan(5, seed=11)
        plan2 = generators.random_sweep_plan(5, seed=11)
        assert plan1 == plan2
        assert len(plan1) == 5

    def test_instances_fit_the_plan(self):
        for spec in generators.random_sweep_plan(10, n_min=3, n_max=6, seed=2, rank_max=3):
            H = generators.generate(spec).hypergraph
            stats = analyze(H)
            assert 3 <= stats.n <= 6
            assert stats.P <= 3
            assert stats.linear

    def test_invalid_sizes(self):
        with pytest.raises(ValueError):
            generators.random_sweep_plan(3, n_min=5, n_max=4)
