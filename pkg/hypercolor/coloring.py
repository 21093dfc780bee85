import logging
from dataclasses import dataclass, field
from datetime import timedelta
from enum import Enum
from itertools import combinations
from typing import (
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

from .derived import clique_ranks, line_graph, split_by_rank
from .hcore import Hypergraph
from .utils import Budget, BudgetClock, BudgetExhausted

logger = logging.getLogger(__name__)

EXACT_MAX_EDGES = 40
CHOOSABILITY_MAX_EDGES = 8
CHOOSABILITY_MAX_K = 5
ORDER_STRATEGIES = ("input", "decreasing_r", "random", "degeneracy")

Adjacency = Sequence[FrozenSet[int]]


@dataclass
class EdgeColoring:
    """Mapping edge index -> color id."""

    colors: Dict[int, int]

    success = True

    def __getitem__(self, e: int) -> int:
        return self.colors[e]

    def __len__(self) -> int:
        return len(self.colors)

    @property
    def n_colors(self) -> int:
        return len(set(self.colors.values()))

    def to_json_dict(self) -> Dict[str, int]:
        return {str(e): c for e, c in sorted(self.colors.items())}


@dataclass
class ListAssignment:
    """Mapping edge index -> admissible colors."""

    lists: Dict[int, FrozenSet[int]]

    def __post_init__(self) -> None:
        self.lists = {int(e): frozenset(colors) for e, colors in self.lists.items()}

    @classmethod
    def uniform(cls, edges: Iterable[int], k: int) -> "ListAssignment":
        """Give every edge the palette ``{1, .., k}``."""
        palette = frozenset(range(1, k + 1))
        return cls({e: palette for e in edges})

    def __getitem__(self, e: int) -> FrozenSet[int]:
        return self.lists[e]

    def __contains__(self, e: int) -> bool:
        return e in self.lists

    def sizes(self) -> Dict[int, int]:
        return {e: len(colors) for e, colors in self.lists.items()}

    def to_json_dict(self) -> Dict[str, List[int]]:
        return {str(e): sorted(colors) for e, colors in sorted(self.lists.items())}


@dataclass
class ColoringFailure:
    """Greedy coloring got stuck: every color of ``exhausted_list`` is blocked."""

    stuck_edge: int
    exhausted_list: FrozenSet[int]
    blocked_by: Dict[int, int]
    partial: EdgeColoring

    success = False


class ChoosabilityStatus(str, Enum):
    CHOOSABLE = "choosable"
    NOT_CHOOSABLE = "not_choosable"
    INCONCLUSIVE = "inconclusive"


@dataclass
class ChoosabilityVerdict:
    k: int
    status: ChoosabilityStatus
    witness: Optional[ListAssignment] = None
    assignments_examined: int = 0
    limit_hit: bool = False
    reason: str = ""


@dataclass
class ChromaticIndexResult:
    """Outcome of the exact chromatic index search.

    ``value`` is None when the budget ran out before the bounds met; ``coloring``
    is always proper and uses ``upper`` colors.
    """

    value: Optional[int]
    lower: int
    upper: int
    coloring: EdgeColoring
    clique: Tuple[int, ...]
    greedy_upper: int
    nodes: int = 0
    limit_hit: bool = False
    elapsed: float = 0.0

    @property
    def exact(self) -> bool:
        return self.value is not None


@dataclass
class ExtensionResult:
    success: bool
    coloring: Optional[EdgeColoring]
    available_counts: Dict[int, int]
    count_bound: int
    count_bound_holds: bool
    hypothesis_holds: bool
    h3_max_degree: int
    h2_max_degree: int
    stuck: Optional[Dict[int, FrozenSet[int]]] = None
    notes: List[str] = field(default_factory=list)


class VertexBalance(NamedTuple):
    deficit: int
    excess: int


def _adjacency(H: Hypergraph) -> Tuple[FrozenSet[int], ...]:
    return line_graph(H).adjacency


def _check_order(m: int, order: Iterable[int]) -> List[int]:
    order = [int(e) for e in order]
    if sorted(order) != list(range(m)):
        raise ValueError(f"order must be a permutation of the {m} edge indices, got {order}")
    return order


def _to_coloring(colors: Sequence[int]) -> EdgeColoring:
    """0-based color list to a 1-based EdgeColoring."""
    return EdgeColoring({e: c + 1 for e, c in enumerate(colors)})


def is_proper(H: Hypergraph, c: EdgeColoring) -> bool:
    """True iff intersecting edges always get different colors."""
    missing = [e for e in range(H.m) if e not in c.colors]
    if missing:
        raise ValueError(f"coloring misses edge {missing[0]}")
    for edges in H.vertex_edges:
        seen = set()
        for e in edges:
            if c.colors[e] in seen:
                return False
            seen.add(c.colors[e])
    return True


def respects_lists(c: EdgeColoring, lists: ListAssignment) -> bool:
    return all(e in lists and color in lists[e] for e, color in c.colors.items())


def _smallest_last(adjacency: Adjacency) -> List[int]:
    remaining = set(range(len(adjacency)))
    degree = [len(a) for a in adjacency]
    removal = []
    while remaining:
        e = min(remaining, key=lambda v: (degree[v], v))
        remaining.remove(e)
        removal.append(e)
        for f in adjacency[e]:
            if f in remaining:
                degree[f] -= 1
    return removal[::-1]


def edge_order(H: Hypergraph, strategy: str = "input", seed: Optional[int] = None) -> List[int]:
    """Order in which greedy coloring visits the edges.

    Parameters
    ----------
    strategy : {'input', 'decreasing_r', 'random', 'degeneracy'}
        ``input`` keeps edge indices, ``decreasing_r`` sorts by decreasing clique
        rank, ``random`` is a seeded permutation and ``degeneracy`` removes a
        smallest-degree edge of the line graph repeatedly and colors in reverse
        removal order, so each edge has at most ``degeneracy`` colored
        neighbours when its turn comes.
    seed
        Seed of the ``random`` strategy.
    """
    if strategy == "input":
        return list(range(H.m))
    if strategy == "decreasing_r":
        R = clique_ranks(H)
        return sorted(range(H.m), key=lambda e: (-R[e], e))
    if strategy == "random":
        if seed is None:
            raise ValueError("the random order needs a seed")
        return np.random.default_rng(seed).permutation(H.m).tolist()
    if strategy == "degeneracy":
        return _smallest_last(_adjacency(H))
    raise ValueError(f"strategy={strategy!r} is invalid. Choose one of {ORDER_STRATEGIES}")


def back_degrees(H: Hypergraph, order: Iterable[int]) -> List[int]:
    """Number of neighbours colored before each edge, indexed by edge."""
    order = _check_order(H.m, order)
    position = {e: i for i, e in enumerate(order)}
    adjacency = _adjacency(H)
    return [sum(position[f] < position[e] for f in adjacency[e]) for e in range(H.m)]


def line_graph_degeneracy(H: Hypergraph) -> int:
    return max(back_degrees(H, edge_order(H, "degeneracy")), default=0)


def greedy_list_color(
    H: Hypergraph, lists: ListAssignment, order: Optional[Iterable[int]] = None
) -> Union[EdgeColoring, ColoringFailure]:
    """Color edges in ``order`` with the smallest list color no colored neighbour uses.

    Succeeds whenever every list is longer than the back-degree of its edge.
    Failure is returned, not raised, and names the stuck edge.
    """
    order = list(range(H.m)) if order is None else _check_order(H.m, order)
    missing = [e for e in range(H.m) if e not in lists]
    if missing:
        raise ValueError(f"no list for edge {missing[0]}")

    adjacency = _adjacency(H)
    colors: Dict[int, int] = {}
    for e in order:
        blocked_by = {colors[f]: f for f in adjacency[e] if f in colors}
        free = set(lists[e]).difference(blocked_by)
        if not free:
            return ColoringFailure(
                stuck_edge=e,
                exhausted_list=lists[e],
                blocked_by={c: f for c, f in blocked_by.items() if c in lists[e]},
                partial=EdgeColoring(colors),
            )
        colors[e] = min(free)
    return EdgeColoring(colors)


def greedy_color(
    H: Hypergraph, k: int, order: Optional[Iterable[int]] = None
) -> Union[EdgeColoring, ColoringFailure]:
    """Greedy list coloring with every list equal to ``{1, .., k}``."""
    if k < 1:
        raise ValueError(f"palette size must be at least 1, got {k}")
    return greedy_list_color(H, ListAssignment.uniform(range(H.m), k), order)


def _dsatur(adjacency: Adjacency) -> List[int]:
    """Saturation-ordered greedy coloring, 0-based colors."""
    size = len(adjacency)
    colors = [-1] * size
    neighbour_colors = [set() for _ in range(size)]
    uncolored = set(range(size))
    while uncolored:
        v = max(uncolored, key=lambda u: (len(neighbour_colors[u]), len(adjacency[u]), -u))
        c = 0
        while c in neighbour_colors[v]:
            c += 1
        colors[v] = c
        uncolored.remove(v)
        for u in adjacency[v]:
            neighbour_colors[u].add(c)
    return colors


def _greedy_clique(adjacency: Adjacency) -> Tuple[int, ...]:
    by_degree = sorted(range(len(adjacency)), key=lambda v: (-len(adjacency[v]), v))
    best: Tuple[int, ...] = ()
    for start in by_degree:
        clique, candidates = [start], set(adjacency[start])
        for v in by_degree:
            if v in candidates:
                clique.append(v)
                candidates &= adjacency[v]
        if len(clique) > len(best):
            best = tuple(sorted(clique))
    return best


def _packing_bound(H: Hypergraph) -> int:
    """ceil(m / a) where a bounds the size of a color class.

    A color class is a set of pairwise disjoint edges, so its ranks sum to at
    most ``n``; ``a`` is the largest number of smallest ranks fitting in ``n``.
    """
    if H.m == 0:
        return 0
    total = largest_class = 0
    for r in sorted(H.ranks):
        if total + r > H.n:
            break
        total += r
        largest_class += 1
    return -(-H.m // largest_class)


def chromatic_index_bounds(H: Hypergraph) -> ChromaticIndexResult:
    """Cheap bounds on q(H): clique and packing below, saturation greedy above."""
    adjacency = _adjacency(H)
    if H.m == 0:
        return ChromaticIndexResult(0, 0, 0, EdgeColoring({}), (), 0)
    clique = _greedy_clique(adjacency)
    lower = max(len(clique), _packing_bound(H))
    colors = _dsatur(adjacency)
    upper = max(colors) + 1
    return ChromaticIndexResult(
        value=upper if lower == upper else None,
        lower=lower,
        upper=upper,
        coloring=_to_coloring(colors),
        clique=clique,
        greedy_upper=upper,
    )


class _BranchAndBound:
    """Exact vertex coloring of a line graph.

    The clique found for the lower bound is precolored with distinct colors,
    then uncolored vertices are branched in saturation order. A vertex may only
    open the next unused color, which removes color-renaming symmetry.
    """

    def __init__(self, adjacency: Adjacency, clock: BudgetClock) -> None:
        self.adjacency = adjacency
        self.size = len(adjacency)
        self.degree = [len(a) for a in adjacency]
        self.clock = clock

    def solve(
        self, clique: Sequence[int], lower: int, upper: int, incumbent: Sequence[int]
    ) -> Tuple[int, List[int]]:
        self.lower = lower
        self.best_k, self.best = upper, list(incumbent)
        self.colors = [-1] * self.size
        self.counts = [[0] * upper for _ in range(self.size)]
        self.saturation = [0] * self.size
        for c, v in enumerate(clique):
            self._assign(v, c)
        self._search(len(clique), len(clique))
        return self.best_k, self.best

    def _assign(self, v: int, c: int) -> None:
        self.colors[v] = c
        for u in self.adjacency[v]:
            if self.counts[u][c] == 0:
                self.saturation[u] += 1
            self.counts[u][c] += 1

    def _unassign(self, v: int) -> None:
        c, self.colors[v] = self.colors[v], -1
        for u in self.adjacency[v]:
            self.counts[u][c] -= 1
            if self.counts[u][c] == 0:
                self.saturation[u] -= 1

    def _search(self, n_colored: int, k: int) -> bool:
        """Return True once an optimal coloring is proven."""
        self.clock.tick()
        if n_colored == self.size:
            self.best_k, self.best = k, self.colors[:]
            return k <= self.lower

        v = max(
            (u for u in range(self.size) if self.colors[u] < 0),
            key=lambda u: (self.saturation[u], self.degree[u]),
        )
        for c in range(k + 1):
            if max(k, c + 1) >= self.best_k:
                break
            if self.counts[v][c]:
                continue
            self._assign(v, c)
            done = self._search(n_colored + 1, max(k, c + 1))
            self._unassign(v)
            if done:
                return True
        return False


def chromatic_index_exact(
    H: Hypergraph, budget: Optional[Budget] = None, max_edges: int = EXACT_MAX_EDGES
) -> ChromaticIndexResult:
    """Exact q(H) as the chromatic number of the line graph, by branch and bound.

    Parameters
    ----------
    H
        Hypergraph with at most ``max_edges`` edges.
    budget
        Node and time limits. When exhausted the best bounds so far are returned
        with ``limit_hit=True`` and ``value=None``.
    max_edges
        Size cap, 40 by default.
    """
    if H.m > max_edges:
        raise ValueError(f"exact chromatic index is limited to {max_edges} edges, got {H.m}")
    clock = (budget or Budget()).start()
    result = chromatic_index_bounds(H)

    if not result.exact:
        incumbent = [result.coloring[e] - 1 for e in range(H.m)]
        search = _BranchAndBound(_adjacency(H), clock)
        try:
            k, colors = search.solve(result.clique, result.lower, result.upper, incumbent)
            result.value = result.lower = result.upper = k
        except BudgetExhausted:
            logger.warning(
                f"Exact chromatic index search stopped after {clock.nodes} nodes "
                f"with bounds [{result.lower}, {search.best_k}]"
            )
            result.limit_hit = True
            k, colors = search.best_k, search.best
            result.upper = k
        result.coloring = _to_coloring(colors)

    result.nodes, result.elapsed = clock.nodes, clock.elapsed
    if not result.lower <= result.upper <= result.greedy_upper:
        raise RuntimeError(
            f"bounds out of order: lower={result.lower}, q<={result.upper}, "
            f"greedy={result.greedy_upper}"
        )
    if not is_proper(H, result.coloring) or result.coloring.n_colors != result.upper:
        raise RuntimeError("exact search returned an improper coloring")
    logger.info(
        f"Chromatic index of a {H.m}-edge hypergraph: bounds [{result.lower}, {result.upper}] "
        f"after {result.nodes} nodes in {timedelta(seconds=result.elapsed)}"
    )
    return result


def _list_color_search(
    adjacency: Adjacency, lists: Sequence[FrozenSet[int]], clock: BudgetClock
) -> Optional[List[int]]:
    """Backtracking list coloring, fewest remaining colors first."""
    size = len(adjacency)
    colors: List[Optional[int]] = [None] * size

    def options(v: int) -> List[int]:
        taken = {colors[u] for u in adjacency[v]}
        return [c for c in sorted(lists[v]) if c not in taken]

    def search(n_colored: int) -> bool:
        clock.tick()
        if n_colored == size:
            return True
        chosen, chosen_options = -1, None
        for v in range(size):
            if colors[v] is not None:
                continue
            opts = options(v)
            if not opts:
                return False
            if chosen_options is None or (len(opts), -len(adjacency[v])) < (
                len(chosen_options),
                -len(adjacency[chosen]),
            ):
                chosen, chosen_options = v, opts
        for c in chosen_options:
            colors[chosen] = c
            if search(n_colored + 1):
                return True
        colors[chosen] = None
        return False

    return list(colors) if search(0) else None


def list_color(
    H: Hypergraph, lists: ListAssignment, budget: Optional[Budget] = None
) -> Optional[EdgeColoring]:
    """Exact list coloring; None when no proper coloring from the lists exists.

    Raises :py:class:`~hypercolor.utils.BudgetExhausted` when the budget runs out.
    """
    missing = [e for e in range(H.m) if e not in lists]
    if missing:
        raise ValueError(f"no list for edge {missing[0]}")
    clock = (budget or Budget()).start()
    colors = _list_color_search(_adjacency(H), [lists[e] for e in range(H.m)], clock)
    return None if colors is None else EdgeColoring(dict(enumerate(colors)))


def verify_list_uncolorable(H: Hypergraph, lists: ListAssignment) -> bool:
    """True iff no proper coloring from ``lists`` exists.

    Plain backtracking in edge index order over per-vertex used colors; kept
    independent from the line-graph search it double checks.
    """
    used_at = [set() for _ in range(H.n)]

    def place(e: int) -> bool:
        if e == H.m:
            return True
        for c in sorted(lists[e]):
            if all(c not in used_at[x] for x in H.edges[e]):
                for x in H.edges[e]:
                    used_at[x].add(c)
                if place(e + 1):
                    return True
                for x in H.edges[e]:
                    used_at[x].discard(c)
        return False

    return not place(0)


def _canonical_assignments(
    adjacency: Adjacency, k: int, clock: BudgetClock
) -> Iterator[Tuple[FrozenSet[int], ...]]:
    """k-list assignments of the line-graph vertices, one per class under color renaming.

    Colors are numbered by first appearance: the list of edge ``i`` reuses some
    of the ``used`` colors seen so far and takes the next fresh colors
    ``used, used + 1, ..``, so at most ``k * m`` colors appear.

    Only assignments where every color of a list also lies in the list of an
    intersecting edge are produced: an edge with a private color can always
    take it, and swapping that color for one of its neighbours' keeps an
    uncolorable assignment uncolorable. Edges meeting no other edge get fresh
    colors only. A list is checked as soon as its last neighbour is assigned.
    """
    size = len(adjacency)
    closing: List[List[int]] = [[] for _ in range(size)]
    for i, neighbours in enumerate(adjacency):
        if neighbours:
            closing[max(neighbours | {i})].append(i)
    lists: List[FrozenSet[int]] = []

    def shared(i: int) -> bool:
        return lists[i] <= frozenset().union(*(lists[f] for f in adjacency[i]))

    def extend(i: int, used: int) -> Iterator[Tuple[FrozenSet[int], ...]]:
        clock.tick()
        if i == size:
            yield tuple(lists)
            return
        for fresh in range(k + 1) if adjacency[i] else (k,):
            reuse = k - fresh
            if reuse > used:
                continue
            new = tuple(range(used, used + fresh))
            for old in combinations(range(used), reuse):
                lists.append(frozenset(old + new))
                if all(shared(j) for j in closing[i]):
                    yield from extend(i + 1, used + fresh)
                lists.pop()

    yield from extend(0, 0)


def is_k_choosable(
    H: Hypergraph,
    k: int,
    budget: Optional[Budget] = None,
    max_edges: int = CHOOSABILITY_MAX_EDGES,
    use_degeneracy: bool = True,
) -> ChoosabilityVerdict:
    """Decide whether every assignment of k-color lists admits a proper coloring.

    Assignments are enumerated up to color renaming and each one is tested by
    exact list coloring. The first uncolorable assignment is returned as the
    witness, with colors numbered from 1.

    Parameters
    ----------
    k
        List size, ``1 <= k <= 5``.
    max_edges
        Size cap, 8 by default.
    use_degeneracy
        If True, answer ``choosable`` without enumeration when ``k`` exceeds the
        degeneracy of the line graph (greedy coloring in degeneracy order
        always succeeds then).
    """
    if H.m > max_edges:
        raise ValueError(f"choosability is limited to {max_edges} edges, got {H.m}")
    if not 1 <= k <= CHOOSABILITY_MAX_K:
        raise ValueError(f"k must lie in [1, {CHOOSABILITY_MAX_K}], got {k}")

    if use_degeneracy and k > line_graph_degeneracy(H):
        return ChoosabilityVerdict(
            k, ChoosabilityStatus.CHOOSABLE, reason="k exceeds the line-graph degeneracy"
        )

    clock = (budget or Budget()).start()
    adjacency = _adjacency(H)
    examined = 0
    try:
        for assignment in _canonical_assignments(adjacency, k, clock):
            examined += 1
            if _list_color_search(adjacency, assignment, clock) is not None:
                continue
            witness = ListAssignment(
                {e: frozenset(c + 1 for c in colors) for e, colors in enumerate(assignment)}
            )
            if not verify_list_uncolorable(H, witness):
                raise RuntimeError("choosability witness is colorable after all")
            return ChoosabilityVerdict(
                k,
                ChoosabilityStatus.NOT_CHOOSABLE,
                witness=witness,
                assignments_examined=examined,
                reason="uncolorable list assignment found",
            )
    except BudgetExhausted as exc:
        logger.warning(f"Choosability search for k={k} stopped: {exc}")
        return ChoosabilityVerdict(
            k,
            ChoosabilityStatus.INCONCLUSIVE,
            assignments_examined=examined,
            limit_hit=True,
            reason=str(exc),
        )
    return ChoosabilityVerdict(
        k,
        ChoosabilityStatus.CHOOSABLE,
        assignments_examined=examined,
        reason="every canonical assignment is colorable",
    )


def extend_coloring(
    H: Hypergraph,
    h3_coloring: EdgeColoring,
    lists: ListAssignment,
    n_colors: int,
    budget: Optional[Budget] = None,
) -> ExtensionResult:
    """Extend a coloring of the rank >= 3 edges to the rank-2 edges.

    Every rank-2 edge ``e = (x, y)`` may use the colors of its list not already
    taken at ``x`` or ``y`` by rank >= 3 edges; the rank-2 edges are then list
    colored exactly from those sets.

    Parameters
    ----------
    H
        Hypergraph without rank-1 edges.
    h3_coloring
        Proper coloring of the edges of rank >= 3, keyed by their index in H.
    lists
        Lists of the rank-2 edges, keyed by their index in H, each with at
        least ``n_colors`` colors.
    n_colors
        List size of the extension. The extension is expected to succeed when
        ``max degree of H2 <= n_colors - 2 * max degree of H3 - 1``; a warning is
        logged and the search still runs otherwise.
    """
    split = split_by_rank(H)
    h3_edges = set(split.h3_edges)
    if set(h3_coloring.colors) != h3_edges:
        raise ValueError(
            f"the coloring must cover exactly the rank >= 3 edges {sorted(h3_edges)}, "
            f"got {sorted(h3_coloring.colors)}"
        )
    for x, edges in enumerate(H.vertex_edges):
        seen: Dict[int, int] = {}
        for e in edges:
            if e not in h3_edges:
                continue
            color = h3_coloring[e]
            if color in seen:
                raise ValueError(
                    f"the rank >= 3 coloring is not proper: edges {seen[color]} and {e} "
                    f"meet at vertex {x} with color {color}"
                )
            seen[color] = e
    for e in split.h2_edges:
        if e not in lists:
            raise ValueError(f"no list for rank-2 edge {e}")
        if len(lists[e]) < n_colors:
            raise ValueError(
                f"list of edge {e} has {len(lists[e])} colors, fewer than n_colors={n_colors}"
            )

    delta3 = max(split.h3.degrees, default=0)
    delta2 = max(split.h2.degrees, default=0)
    hypothesis = delta2 <= n_colors - 2 * delta3 - 1
    count_bound = n_colors - 2 * delta3
    notes = [
        "available colors per rank-2 edge are at least n_colors - 2 * max degree of H3; "
        "the hypothesis is read as n_colors - 2 * max degree of H3 >= max degree of H2 + 1"
    ]
    if not hypothesis:
        logger.warning(
            f"Extension hypothesis fails: max degree of H2 is {delta2} > "
            f"{n_colors} - 2 * {delta3} - 1. Attempting the extension anyway"
        )
        notes.append("hypothesis violated; extension attempted anyway")

    if not split.h2_edges:
        return ExtensionResult(
            True, h3_coloring, {}, count_bound, True, hypothesis, delta3, 0, notes=notes
        )

    taken_at = [set() for _ in range(H.n)]
    for e in split.h3_edges:
        for x in H.edges[e]:
            taken_at[x].add(h3_coloring[e])
    available = {}
    for e in split.h2_edges:
        x, y = H.edges[e]
        available[e] = frozenset(lists[e] - taken_at[x] - taken_at[y])
    counts = {e: len(colors) for e, colors in available.items()}
    count_holds = all(count >= count_bound for count in counts.values())

    clock = (budget or Budget()).start()
    try:
        solution = _list_color_search(
            line_graph(split.h2).adjacency, [available[e] for e in split.h2_edges], clock
        )
    except BudgetExhausted as exc:
        notes.append(f"search stopped: {exc}")
        solution = None

    if solution is None:
        return ExtensionResult(
            False,
            None,
            counts,
            count_bound,
            count_holds,
            hypothesis,
            delta3,
            delta2,
            stuck=available,
            notes=notes,
        )

    colors = dict(h3_coloring.colors)
    colors.update({e: solution[i] for i, e in enumerate(split.h2_edges)})
    coloring = EdgeColoring(colors)
    if not is_proper(H, coloring):
        raise RuntimeError("extension produced an improper coloring")
    return ExtensionResult(
        True, coloring, counts, count_bound, count_holds, hypothesis, delta3, delta2, notes=notes
    )


def deficit_excess(H3: Hypergraph, Delta: int) -> List[VertexBalance]:
    """Per vertex: deficit ``Delta - d(x)`` and excess ``sum over edges at x of max(r - 3, 0)``."""
    low = [e for e, r in enumerate(H3.ranks) if r < 3]
    if low:
        raise ValueError(f"edge {low[0]} has rank {H3.ranks[low[0]]}; H3 holds ranks >= 3 only")
    actual = max(H3.degrees, default=0)
    if Delta < actual:
        raise ValueError(f"Delta={Delta} is below the maximum degree {actual}")
    return [
        VertexBalance(
            deficit=Delta - H3.degrees[x],
            excess=sum(H3.ranks[e] - 3 for e in H3.vertex_edges[x] if H3.ranks[e] >= 4),
        )
        for x in range(H3.n)
    ]
