import logging
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from .hcore import Hypergraph

logger = logging.getLogger(__name__)

RANDOM_SOURCE = "numpy.random.PCG64"
"""Algorithm behind every seeded draw; recorded next to seeds in reports."""

MAX_PLANE_ORDER = 13
MAX_STEINER_ORDER = 99


def _is_prime(q: int) -> bool:
    if q < 2:
        return False
    return all(q % d for d in range(2, int(q**0.5) + 1))


def _require_int(name: str, value: Any) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ValueError(f"{name} must be an integer, got {value!r}")
    return int(value)


def projective_plane(q: int) -> Hypergraph:
    """Projective plane of prime order ``q`` built over the integers mod ``q``.

    Points and lines are the normalized non-zero vectors of ``Z_q^3`` (first
    non-zero coordinate equal to 1); a point lies on a line when their dot
    product vanishes mod ``q``.
    """
    q = _require_int("q", q)
    if not _is_prime(q) or q > MAX_PLANE_ORDER:
        raise ValueError(
            f"q={q} is not supported: the order must be a prime <= {MAX_PLANE_ORDER}"
        )
    vectors = (
        [(1, a, b) for a in range(q) for b in range(q)]
        + [(0, 1, b) for b in range(q)]
        + [(0, 0, 1)]
    )
    points = np.array(vectors, dtype=np.int64)
    on_line = (points @ points.T) % q == 0
    return Hypergraph(len(vectors), [np.flatnonzero(row).tolist() for row in on_line])


def complete_graph_hypergraph(n: int) -> Hypergraph:
    """K_n as a rank-2 hypergraph."""
    n = _require_int("n", n)
    if n < 2:
        raise ValueError(f"complete graph needs n >= 2, got {n}")
    return Hypergraph(n, list(combinations(range(n), 2)))


def near_pencil(n: int) -> Hypergraph:
    """One edge ``{0, .., n-2}`` plus the rank-2 edges ``{i, n-1}``."""
    n = _require_int("n", n)
    if n < 3:
        raise ValueError(f"near-pencil needs n >= 3, got {n}")
    return Hypergraph(n, [tuple(range(n - 1))] + [(i, n - 1) for i in range(n - 1)])


def steiner_triple(n: int) -> Hypergraph:
    """Steiner triple system of order ``n = 6t + 3`` (Bose construction).

    The points are ``(x, i)`` with ``x`` in ``Z_v`` (``v = 2t + 1``) and ``i`` in
    ``{0, 1, 2}``, numbered ``x + i * v``. The blocks are the columns
    ``{(x, 0), (x, 1), (x, 2)}`` and, for ``x < y``, the triples
    ``{(x, i), (y, i), (x o y, i + 1)}`` where ``x o y = (x + y) / 2 mod v``.
    """
    n = _require_int("n", n)
    if n % 6 != 3 or not 3 <= n <= MAX_STEINER_ORDER:
        raise ValueError(
            f"n={n} is not supported: Steiner triple systems are built for "
            f"n = 3 (mod 6), n <= {MAX_STEINER_ORDER}"
        )
    v = n // 3
    half = (v + 1) // 2  # inverse of 2 mod v

    def point(x: int, i: int) -> int:
        return x + (i % 3) * v

    triples = [(point(x, 0), point(x, 1), point(x, 2)) for x in range(v)]
    for x, y in combinations(range(v), 2):
        z = (x + y) * half % v
        triples.extend((point(x, i), point(y, i), point(z, i + 1)) for i in range(3))
    return Hypergraph(n, triples)


def random_linear(
    n: int, m_target: int, rank_min: int, rank_max: int, seed: int
) -> Hypergraph:
    """Random linear hypergraph by rejection sampling.

    Each draw picks a rank uniformly in ``[rank_min, rank_max]`` and a uniform
    vertex set of that size; the draw is accepted when it meets every accepted
    edge in at most one vertex. Sampling stops at ``m_target`` edges or after
    ``1000 * m_target`` rejected draws, in which case fewer edges are returned
    and a warning is logged.

    Parameters
    ----------
    n
        Number of vertices.
    m_target
        Number of edges wanted.
    rank_min, rank_max
        Inclusive range of edge ranks, ``2 <= rank_min <= rank_max <= n``.
    seed
        Non-negative seed of ``numpy.random.default_rng`` (PCG64).
    """
    n, m_target = _require_int("n", n), _require_int("m_target", m_target)
    rank_min, rank_max = _require_int("rank_min", rank_min), _require_int("rank_max", rank_max)
    seed = _require_int("seed", seed)
    if not 2 <= rank_min <= rank_max <= n:
        raise ValueError(
            f"ranks must satisfy 2 <= rank_min <= rank_max <= n, got "
            f"rank_min={rank_min}, rank_max={rank_max}, n={n}"
        )
    if m_target < 0:
        raise ValueError(f"m_target must be non-negative, got {m_target}")
    if seed < 0:
        raise ValueError(f"seed must be non-negative, got {seed}")

    rng = np.random.default_rng(seed)
    accepted: List[FrozenSet[int]] = []
    rejected, max_rejected = 0, 1000 * m_target
    while len(accepted) < m_target and rejected < max_rejected:
        rank = int(rng.integers(rank_min, rank_max + 1))
        candidate = frozenset(rng.choice(n, size=rank, replace=False).tolist())
        if all(len(candidate & edge) <= 1 for edge in accepted):
            accepted.append(candidate)
        else:
            rejected += 1

    if len(accepted) < m_target:
        logger.warning(
            f"random_linear(n={n}, seed={seed}) stopped after {rejected} rejections "
            f"with {len(accepted)} of {m_target} edges"
        )
    return Hypergraph(n, [sorted(edge) for edge in accepted])


_KINDS: Dict[str, Tuple[Callable[..., Hypergraph], Tuple[str, ...]]] = {
    "projective_plane": (projective_plane, ("q",)),
    "complete_graph": (complete_graph_hypergraph, ("n",)),
    "near_pencil": (near_pencil, ("n",)),
    "steiner_triple": (steiner_triple, ("n",)),
    "random_linear": (random_linear, ("n", "m_target", "rank_min", "rank_max")),
}


@dataclass(frozen=True)
class GenSpec:
    """What to generate: a kind, its integer parameters and, for random kinds, a seed."""

    kind: str
    params: Dict[str, int] = field(default_factory=dict)
    seed: Optional[int] = None

    @property
    def is_random(self) -> bool:
        return self.kind == "random_linear"

    def validate(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"kind={self.kind!r} is invalid. Choose one of {sorted(_KINDS)}")
        required = _KINDS[self.kind][1]
        if set(self.params) != set(required):
            raise ValueError(
                f"{self.kind} takes parameters {list(required)}, got {sorted(self.params)}"
            )
        for name, value in self.params.items():
            _require_int(name, value)
        if self.is_random:
            if self.seed is None:
                raise ValueError(f"{self.kind} needs a seed")
            _require_int("seed", self.seed)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> "GenSpec":
        if not isinstance(doc, dict) or "kind" not in doc:
            raise ValueError(f"a generator spec needs a 'kind', got {doc!r}")
        spec = cls(kind=doc["kind"], params=dict(doc.get("params") or {}), seed=doc.get("seed"))
        spec.validate()
        return spec


@dataclass(frozen=True)
class Instance:
    hypergraph: Hypergraph
    spec: GenSpec
    partial: bool = False

    @property
    def meta(self) -> Dict[str, Any]:
        meta = self.spec.to_dict()
        if self.spec.is_random:
            meta["rng"] = RANDOM_SOURCE
        return meta


def generate(spec: GenSpec) -> Instance:
    """Validate ``spec`` and build its instance."""
    spec.validate()
    builder, names = _KINDS[spec.kind]
    args = [spec.params[name] for name in names]
    if spec.is_random:
        H = builder(*args, seed=spec.seed)
        return Instance(H, spec, partial=H.m < spec.params["m_target"])
    return Instance(builder(*args), spec)


def random_sweep_plan(
    count: int, n_min: int = 3, n_max: int = 8, seed: int = 0, rank_max: int = 3
) -> List[GenSpec]:
    """Deterministic stream of ``random_linear`` specs for conjecture sweeps.

    The sizes and per-instance seeds are drawn from ``default_rng(seed)``;
    ``m_target`` is drawn in ``[1, 2n]``.
    """
    if not 2 <= n_min <= n_max:
        raise ValueError(f"need 2 <= n_min <= n_max, got n_min={n_min}, n_max={n_max}")
    if rank_max < 2:
        raise ValueError(f"rank_max must be at least 2, got {rank_max}")
    rng = np.random.default_rng(seed)
    plan = []
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        params = {
            "n": n,
            "m_target": int(rng.integers(1, 2 * n + 1)),
            "rank_min": 2,
            "rank_max": int(rng.integers(2, min(rank_max, n) + 1)),
        }
        plan.append(GenSpec("random_linear", params, seed=int(rng.integers(0, 2**63 - 1))))
    return plan
