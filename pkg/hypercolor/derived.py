from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, Iterable, List, Tuple

from .hcore import AnalysisReport, Hypergraph, validate


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on the vertices ``0 .. n-1``."""

    n: int
    adjacency: Tuple[FrozenSet[int], ...]

    def __post_init__(self) -> None:
        if len(self.adjacency) != self.n:
            raise ValueError(
                f"adjacency has {len(self.adjacency)} rows for a graph on {self.n} vertices"
            )
        for u, neighbours in enumerate(self.adjacency):
            if u in neighbours:
                raise ValueError(f"self-loop at vertex {u}")
            for v in neighbours:
                if u not in self.adjacency[v]:
                    raise ValueError(f"adjacency is not symmetric between {u} and {v}")

    @classmethod
    def from_edges(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> "Graph":
        adjacency = [set() for _ in range(n)]
        for u, v in pairs:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            adjacency[u].add(v)
            adjacency[v].add(u)
        return cls(n, tuple(frozenset(a) for a in adjacency))

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(a) for a in self.adjacency)

    def edges(self) -> List[Tuple[int, int]]:
        """Edges as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in sorted(self.adjacency[u]) if u < v]

    @property
    def number_of_edges(self) -> int:
        return sum(self.degrees) // 2


@dataclass(frozen=True)
class RankSplit:
    """Partition of the edges of a hypergraph by rank.

    ``h3`` holds the edges of rank at least 3 and ``h2`` those of rank 2, both
    over the full vertex set. ``h3_edges[i]`` (``h2_edges[i]``) is the index in
    the parent hypergraph of edge ``i`` of ``h3`` (``h2``).
    """

    h3: Hypergraph
    h2: Hypergraph
    h3_edges: Tuple[int, ...]
    h2_edges: Tuple[int, ...]


def clique_graph(H: Hypergraph) -> Graph:
    """Graph on the vertices of H with ``x ~ y`` iff some edge contains both."""
    return Graph.from_edges(H.n, (pair for e in H.edges for pair in combinations(e, 2)))


def line_graph(H: Hypergraph) -> Graph:
    """Graph on the edges of H with ``i ~ j`` iff edges ``i`` and ``j`` intersect."""
    sets = H.edge_sets
    return Graph.from_edges(
        H.m,
        ((i, j) for i, j in combinations(range(H.m), 2) if not sets[i].isdisjoint(sets[j])),
    )


def clique_degree(H: Hypergraph, x: int) -> int:
    """D(x): sum of ``r(e) - 1`` over the edges containing ``x``."""
    if not 0 <= x < H.n:
        raise ValueError(f"vertex {x} out of range [0, {H.n})")
    return sum(H.ranks[e] - 1 for e in H.vertex_edges[x])


def clique_rank(H: Hypergraph, e: int) -> int:
    """R(e): sum of ``d(x) - 1`` over the vertices of ``e``."""
    if not 0 <= e < H.m:
        raise ValueError(f"edge index {e} out of range [0, {H.m})")
    return sum(H.degrees[x] - 1 for x in H.edges[e])


def clique_degrees(H: Hypergraph) -> List[int]:
    return [clique_degree(H, x) for x in range(H.n)]


def clique_ranks(H: Hypergraph) -> List[int]:
    return [clique_rank(H, e) for e in range(H.m)]


def max_clique_degree(H: Hypergraph) -> int:
    """D(H), the largest clique degree (0 without vertices)."""
    return max(clique_degrees(H), default=0)


def split_by_rank(H: Hypergraph) -> RankSplit:
    rank1 = [i for i, r in enumerate(H.ranks) if r == 1]
    if rank1:
        raise ValueError(f"edge {rank1[0]} has rank 1; the rank split needs ranks >= 2")
    h3_edges = tuple(i for i, r in enumerate(H.ranks) if r >= 3)
    h2_edges = tuple(i for i, r in enumerate(H.ranks) if r == 2)
    h3 = Hypergraph(H.n, [H.edges[i] for i in h3_edges])
    h2 = Hypergraph(H.n, [H.edges[i] for i in h2_edges])
    # canonical sorting may reorder edges of a positional parent
    position = {edge: i for i, edge in enumerate(H.edges)}
    return RankSplit(
        h3=h3,
        h2=h2,
        h3_edges=tuple(position[e] for e in h3.edges),
        h2_edges=tuple(position[e] for e in h2.edges),
    )


def analyze(H: Hypergraph) -> AnalysisReport:
    """Collect the scalar statistics of a hypergraph."""
    degrees, ranks = H.degrees, H.ranks
    return AnalysisReport(
        n=H.n,
        m=H.m,
        delta_min=min(degrees, default=0),
        Delta=max(degrees, default=0),
        rho=min(ranks, default=0),
        P=max(ranks, default=0),
        maxD=max_clique_degree(H),
        maxR=max(clique_ranks(H), default=0),
        uniform=len(set(ranks)) <= 1,
        regular=len(set(degrees)) <= 1,
        linear=validate(H).linear,
    )
