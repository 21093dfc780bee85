import json
import logging
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, Optional, Tuple

import numpy as np

logger = logging.getLogger(__name__)

Edge = Tuple[int, ...]


@dataclass(frozen=True)
class Hypergraph:
    """Hypergraph on the vertices ``0 .. n-1`` with an ordered list of edges.

    Construction canonicalizes the input: vertex ids inside an edge are sorted
    and the edge list is sorted lexicographically, so that structural equality
    is set equality. Two edges equal as sets, empty edges, repeated vertices
    inside an edge and vertex ids outside ``[0, n)`` are rejected with a
    ``ValueError`` that names the input position.

    Parameters
    ----------
    n
        Number of vertices.
    edges
        Iterable of edges, each an iterable of vertex ids.
    positional
        If True, keep the given edge order instead of sorting it, and accept
        edges that repeat as sets. Only used by constructions where edge
        indices carry meaning (the dual, where edge ``j`` is vertex ``j`` of
        the primal, and uniformization). See :py:meth:`Hypergraph.positional_from`.
    """

    n: int
    edges: Tuple[Edge, ...]
    positional: bool = field(default=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = self.n
        if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 0:
            raise ValueError(f"n must be a non-negative integer, got {n!r}")
        n = int(n)

        edges = []
        for pos, raw in enumerate(self.edges):
            members = sorted(int(x) for x in raw)
            if not members:
                raise ValueError(f"edge {pos} is empty")
            if len(set(members)) != len(members):
                raise ValueError(f"edge {pos} repeats a vertex: {members}")
            for x in (members[0], members[-1]):
                if not 0 <= x < n:
                    raise ValueError(f"edge {pos}: vertex {x} out of range [0, {n})")
            edges.append(tuple(members))

        if not self.positional:
            first_seen: Dict[Edge, int] = {}
            for pos, edge in enumerate(edges):
                if edge in first_seen:
                    raise ValueError(
                        f"edges {first_seen[edge]} and {pos} are equal as sets: {list(edge)}"
                    )
                first_seen[edge] = pos
            edges.sort()

        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def positional_from(cls, n: int, edges: Iterable[Iterable[int]]) -> "Hypergraph":
        """Build a hypergraph whose edge ``i`` is exactly ``edges[i]``."""
        return cls(n, tuple(edges), positional=True)

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def ranks(self) -> Tuple[int, ...]:
        return tuple(len(e) for e in self.edges)

    @cached_property
    def edge_sets(self) -> Tuple[FrozenSet[int], ...]:
        return tuple(frozenset(e) for e in self.edges)

    @cached_property
    def vertex_edges(self) -> Tuple[Tuple[int, ...], ...]:
        """For every vertex, the indices of the edges that contain it."""
        incident = [[] for _ in range(self.n)]
        for i, edge in enumerate(self.edges):
            for x in edge:
                incident[x].append(i)
        return tuple(tuple(edges) for edges in incident)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(edges) for edges in self.vertex_edges)

    @property
    def is_canonical(self) -> bool:
        return list(self.edges) == sorted(set(self.edges))

    def canonical(self) -> "Hypergraph":
        """Return the canonical form (lexicographic edge order, no repeats)."""
        if not self.positional:
            return self
        return Hypergraph(self.n, self.edges)

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}


@dataclass(frozen=True)
class ValidationReport:
    rank1_edges: Tuple[int, ...]
    duplicate_edges: Tuple[Tuple[int, int], ...]
    out_of_range: bool
    linear: bool

    @property
    def conjecture_ready(self) -> bool:
        """True when the instance is linear with no rank-1 edges."""
        return self.linear and not self.rank1_edges and not self.duplicate_edges


@dataclass(frozen=True)
class AnalysisReport:
    n: int
    m: int
    delta_min: int
    Delta: int
    rho: int
    P: int
    maxD: int
    maxR: int
    uniform: bool
    regular: bool
    linear: bool


def parse_document(text: str) -> Tuple[Hypergraph, Optional[Dict[str, Any]]]:
    """Parse a canonical JSON document and return the hypergraph and its metadata.

    The document is ``{"n": <int>, "edges": [[<int>, ...], ...]}``, optionally
    with a ``"meta"`` object (written by the ``generate`` command to record the
    generator kind, parameters and seed).
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(
            f"malformed document at line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc

    if not isinstance(doc, dict):
        raise ValueError("malformed document: expected a JSON object with 'n' and 'edges'")
    for key in ("n", "edges"):
        if key not in doc:
            raise ValueError(f"malformed document: missing field {key!r}")

    n = doc["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ValueError(f"malformed document: 'n' must be a non-negative integer, got {n!r}")
    if not isinstance(doc["edges"], list):
        raise ValueError("malformed document: 'edges' must be a list")
    for pos, edge in enumerate(doc["edges"]):
        if not isinstance(edge, list) or any(
            isinstance(x, bool) or not isinstance(x, int) for x in edge
        ):
            raise ValueError(f"malformed document: edge {pos} must be a list of integers")

    meta = doc.get("meta")
    if meta is not None and not isinstance(meta, dict):
        raise ValueError("malformed document: 'meta' must be an object")
    return Hypergraph(n, tuple(doc["edges"])), meta


def parse(text: str) -> Hypergraph:
    """Parse a canonical JSON document into a canonical hypergraph."""
    return parse_document(text)[0]


def serialize(H: Hypergraph, meta: Optional[Dict[str, Any]] = None) -> str:
    """Serialize to compact canonical JSON, edges in canonical order."""
    doc = H.canonical().to_dict()
    if meta is not None:
        doc["meta"] = meta
    return json.dumps(doc, separators=(",", ":"))


def validate(H: Hypergraph) -> ValidationReport:
    """Report rank-1 edges, repeated edges, range problems and linearity.

    Linearity is decided by intersecting every pair of distinct edges.
    """
    rank1 = tuple(i for i, r in enumerate(H.ranks) if r == 1)
    duplicates = []
    linear = True
    for (i, a), (j, b) in combinations(enumerate(H.edge_sets), 2):
        if a == b:
            duplicates.append((i, j))
        if len(a & b) > 1:
            linear = False
    out_of_range = any(not 0 <= x < H.n for e in H.edges for x in e)
    return ValidationReport(
        rank1_edges=rank1,
        duplicate_edges=tuple(duplicates),
        out_of_range=out_of_range,
        linear=linear,
    )


def incidence_matrix(H: Hypergraph) -> np.ndarray:
    """The n x m 0/1 incidence matrix: rows are vertices, columns are edges."""
    matrix = np.zeros((H.n, H.m), dtype=np.int8)
    for j, edge in enumerate(H.edges):
        matrix[list(edge), j] = 1
    return matrix


def is_linear_minor(H: Hypergraph) -> bool:
    """True iff the incidence matrix has no 2x2 all-ones submatrix.

    Two columns hold a 2x2 all-ones minor exactly when their inner product is
    at least 2, so it is enough to inspect the off-diagonal of ``M^T M``.
    """
    if H.m < 2:
        return True
    matrix = incidence_matrix(H).astype(np.int64)
    overlap = matrix.T @ matrix
    np.fill_diagonal(overlap, 0)
    return bool(overlap.max() < 2)


def dual(H: Hypergraph) -> Hypergraph:
    """Transpose the incidence matrix.

    The dual has ``m`` vertices and ``n`` edges; edge ``j`` of the dual is the
    set of edges of ``H`` containing vertex ``j``. The edge order follows the
    vertex order of ``H``, which makes ``dual(dual(H)) == H`` hold exactly for
    canonical ``H``. Vertices lying on exactly the same edges become repeated
    edges of the dual.
    """
    for x, d in enumerate(H.degrees):
        if d == 0:
            raise ValueError(
                f"vertex {x} is isolated; strip isolated vertices before taking the dual"
            )
    matrix = incidence_matrix(H)
    return Hypergraph.positional_from(
        H.m, [np.flatnonzero(row).tolist() for row in matrix]
    )


def strip_isolated(H: Hypergraph) -> Tuple[Hypergraph, Tuple[int, ...]]:
    """Drop vertices of degree 0, relabelling the others densely.

    Returns the new hypergraph and, for each new vertex id, its old id.
    """
    kept = tuple(x for x, d in enumerate(H.degrees) if d > 0)
    relabel = {old: new for new, old in enumerate(kept)}
    edges = [[relabel[x] for x in e] for e in H.edges]
    if H.positional:
        return Hypergraph.positional_from(len(kept), edges), kept
    return Hypergraph(len(kept), edges), kept


def handshake(H: Hypergraph) -> Tuple[int, int]:
    """Return (sum of ranks, sum of degrees): column and row totals of the incidence matrix."""
    matrix = incidence_matrix(H)
    return int(matrix.sum(axis=0).sum()), int(matrix.sum(axis=1).sum())


def remove_edge(H: Hypergraph, e: int) -> Hypergraph:
    """Return ``H \\ e``: same vertices, edge ``e`` deleted, canonical form restored."""
    if not 0 <= e < H.m:
        raise ValueError(f"edge index {e} out of range [0, {H.m})")
    return Hypergraph(H.n, H.edges[:e] + H.edges[e + 1 :])

