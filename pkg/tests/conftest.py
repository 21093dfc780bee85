#!/usr/bin/env python
# -*- coding: utf-8 -*-

from datetime import datetime

import numpy as np
import pandas as pd
import pytest

from hypercolor import generators, store
from hypercolor.hcore import Hypergraph


@pytest.fixture
def fano():
    return generators.projective_plane(2)


@pytest.fixture
def triangle():
    return generators.complete_graph_hypergraph(3)


@pytest.fixture
def k4():
    return generators.complete_graph_hypergraph(4)


@pytest.fixture
def four_cycle():
    return Hypergraph(4, [(0, 1), (1, 2), (2, 3), (0, 3)])


@pytest.fixture
def near_pencil5():
    return generators.near_pencil(5)


@pytest.fixture
def sts9():
    return generators.steiner_triple(9)


@pytest.fixture
def random_linear_family():
    """Seeded stream of random linear hypergraphs.

    Edge targets stay below the point where every vertex pair could be covered,
    so the rejection sampler never runs out of admissible edges.
    """

    def family(count, seed, n_min=3, n_max=12, m_max=12, rank_max=4):
        rng = np.random.default_rng(seed)
        for _ in range(count):
            n = int(rng.integers(n_min, n_max + 1))
            r = int(rng.integers(2, min(rank_max, n) + 1))
            room = 1 + (n * (n - 1) // 2 - 1) // (r * (r - 1) // 2)
            m = int(rng.integers(0, min(m_max, room) + 1))
            yield generators.random_linear(n, m, 2, r, int(rng.integers(2**32)))

    return family


@pytest.fixture
def instance():
    return '{"n": 3, "edges": [[1, 2], [0, 1], [0, 2]]}'


@pytest.fixture
def params():
    return "C1,C2,C3;limit_ms=None,limit_nodes=10000000"


@pytest.fixture
def metadata():
    return {
        "hypercolor": "0.1.0",
        "executed_at": datetime.now().isoformat(),
        "duration": 0.25,
    }


@pytest.fixture
def results():
    return pd.DataFrame(data=[[0, 3, "consistent"], [1, 7, "undecided"]], columns=["a", "b", "c"])


@pytest.fixture
def file_store(tmp_path):
    return store.FileStore(cache_store=tmp_path, normalize=True)
