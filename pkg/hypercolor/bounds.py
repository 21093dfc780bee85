import logging
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Any, Dict, List, Optional, Union

from .coloring import deficit_excess
from .derived import clique_degrees, clique_ranks, line_graph, split_by_rank
from .hcore import Hypergraph, validate

logger = logging.getLogger(__name__)

Rational = Union[int, str, Fraction]

CONDITIONAL = "conditional on the supplied constant C"


@dataclass(frozen=True)
class TriangleCounts:
    """Triangles with side ``e``: concurrent (``t1``) and with three meeting points (``t2``)."""

    t1: int
    t2: int

    @property
    def t(self) -> int:
        return self.t1 + self.t2


@dataclass
class Theorem5Diagnostics:
    """The quantities of the large-rank list coloring bound, instantiated on one instance.

    Every quantity is an exact rational. ``R = r (k + 1 - r) / (r - 1)`` with
    ``k = Delta (r - 1)`` bounds the line-graph degree, ``1/f = 1/(2r) + (r-1)^2/(2R)``
    and the triangle bounds follow from ``R``. The measured maxima are compared
    against the bounds in the ``*_ok`` flags.
    """

    r: int
    Delta: int
    C: Fraction
    k: int
    R: Fraction
    degree_bound: Fraction
    degree_R_bound: Fraction
    k_le_R: bool
    inv_f: Optional[Fraction]
    f: Optional[Fraction]
    f_gt_1: bool
    t1_bound: Fraction
    t1_bound_clamped: bool
    t2_bound: Fraction
    t_bound: Optional[Fraction]
    hypothesis_holds: bool
    measured_max_R: int
    measured_max_degree: int
    measured_max_t1: int
    measured_max_t2: int
    measured_max_t: int
    R_ok: bool
    degree_ok: bool
    t1_ok: bool
    t2_ok: bool
    t_ok: bool
    conclusion: str = ""

    @property
    def chain_ok(self) -> bool:
        return self.R_ok and self.degree_ok and self.t1_ok and self.t2_ok and self.t_ok


@dataclass
class ConditionReport:
    """Outcome of a hypothesis checker.

    ``holds`` is None when the checker is not applicable to the instance;
    ``witness`` carries the instantiated numbers or the violating vertex/edge.
    """

    condition: str
    applicable: bool
    holds: Optional[bool]
    witness: Dict[str, Any] = field(default_factory=dict)
    conclusion: str = ""
    notes: List[str] = field(default_factory=list)


@dataclass(frozen=True)
class VuQuantities:
    R: int
    T: List[int]
    max_T: int
    f: Optional[Fraction]
    meaningful: bool


def _require_linear(H: Hypergraph) -> None:
    if not validate(H).linear:
        raise ValueError("the hypergraph is not linear")


def _require_no_rank1(H: Hypergraph) -> None:
    rank1 = [e for e, r in enumerate(H.ranks) if r == 1]
    if rank1:
        raise ValueError(f"edge {rank1[0]} has rank 1")


def _classify(H: Hypergraph, e: int, f: int, g: int) -> str:
    sets = H.edge_sets
    return "t1" if sets[e] & sets[f] & sets[g] else "t2"


def triangle_counts(H: Hypergraph) -> List[TriangleCounts]:
    """Per-edge triangle counts from pairs of adjacent neighbours in the line graph."""
    _require_linear(H)
    adjacency = line_graph(H).adjacency
    counts = []
    for e in range(H.m):
        tally = Counter(
            _classify(H, e, f, g)
            for f, g in combinations(sorted(adjacency[e]), 2)
            if g in adjacency[f]
        )
        counts.append(TriangleCounts(tally["t1"], tally["t2"]))
    return counts


def triangle_counts_brute_force(H: Hypergraph) -> List[TriangleCounts]:
    """Same counts by enumerating every triple of edges."""
    sets = H.edge_sets
    tally = [Counter() for _ in range(H.m)]
    for a, b, c in combinations(range(H.m), 3):
        if any(sets[x].isdisjoint(sets[y]) for x, y in ((a, b), (a, c), (b, c))):
            continue
        kind = _classify(H, a, b, c)
        for e in (a, b, c):
            tally[e][kind] += 1
    return [TriangleCounts(t["t1"], t["t2"]) for t in tally]


def theorem5_diagnostics(H: Hypergraph, C: Rational = 3) -> Theorem5Diagnostics:
    """Instantiate the proof chain of the large-rank bound ``q_list <= Delta (P - 1)``.

    Parameters
    ----------
    H
        Uniform linear hypergraph of rank ``r >= 3``; apply :py:func:`uniformize`
        first otherwise.
    C
        The universal constant of the bound. Its value is not known, so the
        hypothesis ``P >= C >= 3 and Delta >= C (P - 1)`` and the conclusion
        are reported relative to the value given here.
    """
    ranks = set(H.ranks)
    if len(ranks) > 1:
        raise ValueError(
            f"the hypergraph is not uniform (ranks {sorted(ranks)}); uniformize it first"
        )
    if not ranks or min(ranks) < 3:
        raise ValueError(f"rank must be at least 3, got {min(ranks, default=0)}")
    _require_linear(H)
    C = Fraction(C)

    r = ranks.pop()
    Delta = max(H.degrees)
    k = Delta * (r - 1)
    R = Fraction(r * (k + 1 - r), r - 1)
    degree_bound = Fraction(k, r - 1)
    degree_R_bound = R / r + 1

    if R > 0:
        inv_f = Fraction(1, 2 * r) + Fraction((r - 1) ** 2) / (2 * R)
        f = 1 / inv_f
        t_bound = R**2 / f
    else:
        inv_f = f = t_bound = None

    t1_raw = R / 2 * (R / r - 1)
    t1_bound = max(t1_raw, Fraction(0))
    t2_bound = R * (r - 1) ** 2 / 2

    measured_R = max(clique_ranks(H))
    triangles = triangle_counts(H)
    max_t1 = max(t.t1 for t in triangles)
    max_t2 = max(t.t2 for t in triangles)
    max_t = max(t.t for t in triangles)
    hypothesis = r >= C >= 3 and Delta >= C * (r - 1)

    diagnostics = Theorem5Diagnostics(
        r=r,
        Delta=Delta,
        C=C,
        k=k,
        R=R,
        degree_bound=degree_bound,
        degree_R_bound=degree_R_bound,
        k_le_R=k <= R,
        inv_f=inv_f,
        f=f,
        f_gt_1=f is not None and f > 1,
        t1_bound=t1_bound,
        t1_bound_clamped=t1_raw < 0,
        t2_bound=t2_bound,
        t_bound=t_bound,
        hypothesis_holds=hypothesis,
        measured_max_R=measured_R,
        measured_max_degree=Delta,
        measured_max_t1=max_t1,
        measured_max_t2=max_t2,
        measured_max_t=max_t,
        R_ok=measured_R <= R,
        degree_ok=Delta <= degree_R_bound,
        t1_ok=max_t1 <= t1_bound,
        t2_ok=max_t2 <= t2_bound,
        t_ok=max_t == 0 if t_bound is None else max_t <= t_bound,
    )
    if hypothesis:
        diagnostics.conclusion = f"q_list <= {Delta * (r - 1)}, {CONDITIONAL}"
    else:
        diagnostics.conclusion = "hypothesis fails, no conclusion"
    if not diagnostics.chain_ok:
        logger.warning(f"Measured quantities exceed their bounds: {diagnostics}")
    return diagnostics


def uniformize(H: Hypergraph) -> Hypergraph:
    """Pad every edge with fresh degree-1 vertices up to the maximum rank.

    Edge ``i`` of the result extends edge ``i`` of ``H``, so the line graph is
    unchanged. A uniform hypergraph is returned as is.
    """
    if len(set(H.ranks)) <= 1:
        return H
    P = max(H.ranks)
    fresh = H.n
    edges = []
    for edge in H.edges:
        padding = list(range(fresh, fresh + P - len(edge)))
        fresh += len(padding)
        edges.append(list(edge) + padding)
    return Hypergraph.positional_from(fresh, edges)


def pair_coverage(H: Hypergraph) -> bool:
    """True iff every pair of distinct vertices lies in exactly one edge."""
    pairs = Counter(pair for edge in H.edges for pair in combinations(edge, 2))
    return len(pairs) == comb(H.n, 2) and all(count == 1 for count in pairs.values())


def corollary6_condition(H: Hypergraph, C: Rational = 3) -> ConditionReport:
    """``P >= C >= 3``, ``Delta >= C (P - 1)`` and (uniform or ``n > Delta (P - 1)``)."""
    _require_no_rank1(H)
    C = Fraction(C)
    P, Delta, n = max(H.ranks, default=0), max(H.degrees, default=0), H.n
    uniform = len(set(H.ranks)) <= 1
    large_n = n > Delta * (P - 1)
    rank_ok = P >= C >= 3
    degree_ok = Delta >= C * (P - 1)
    holds = rank_ok and degree_ok and (uniform or large_n)
    disjunct = "uniform" if uniform else "n > Delta(P-1)" if large_n else None
    return ConditionReport(
        "corollary6",
        applicable=True,
        holds=holds,
        witness={
            "P": P,
            "Delta": Delta,
            "n": n,
            "C": C,
            "P >= C >= 3": rank_ok,
            "Delta >= C(P-1)": f"{Delta} >= {C * (P - 1)}: {degree_ok}",
            "disjunct": disjunct,
        },
        conclusion=f"q_list <= {n - 1}, {CONDITIONAL}" if holds else "",
    )


def theorem7_condition(H: Hypergraph) -> ConditionReport:
    """``n > (Delta - 1)^2`` or ``n < rho^2``."""
    _require_no_rank1(H)
    _require_linear(H)
    n, Delta, rho = H.n, max(H.degrees, default=0), min(H.ranks, default=0)
    above = n > (Delta - 1) ** 2
    below = n < rho**2
    return ConditionReport(
        "theorem7",
        applicable=True,
        holds=above or below,
        witness={
            "n > (Delta-1)^2": f"{n} > {(Delta - 1) ** 2}: {above}",
            "n < rho^2": f"{n} < {rho**2}: {below}",
        },
        conclusion=f"q_list <= {n}" if above or below else "",
    )


def theorem8_hypothesis(H: Hypergraph) -> ConditionReport:
    """Max degree of the rank-2 part at most ``n - 2 Delta(H3) - 1``."""
    split = split_by_rank(H)
    delta3 = max(split.h3.degrees, default=0)
    delta2 = max(split.h2.degrees, default=0)
    limit = H.n - 2 * delta3 - 1
    if not split.h2_edges:
        return ConditionReport(
            "theorem8",
            applicable=True,
            holds=True,
            witness={"Delta(H3)": delta3, "Delta(H2)": 0},
            notes=["no rank-2 edges"],
        )
    holds = delta2 <= limit
    return ConditionReport(
        "theorem8",
        applicable=True,
        holds=holds,
        witness={
            "Delta(H3)": delta3,
            "Delta(H2)": delta2,
            "Delta(H2) <= n - 2 Delta(H3) - 1": f"{delta2} <= {limit}: {holds}",
        },
        conclusion="any n list coloring of H3 extends to H, assuming list Vizing for graphs"
        if holds
        else "",
    )


def _inapplicable(condition: str) -> ConditionReport:
    return ConditionReport(
        condition,
        applicable=False,
        holds=None,
        notes=["some vertex pair is not covered by exactly one edge"],
    )


def corollary9_condition(H: Hypergraph) -> ConditionReport:
    """Every vertex has ``D(x, H3) >= 2 Delta(H3)``; needs complete pair coverage."""
    _require_no_rank1(H)
    if not pair_coverage(H):
        return _inapplicable("corollary9")
    split = split_by_rank(H)
    delta3 = max(split.h3.degrees, default=0)
    D3 = clique_degrees(split.h3)
    failing = [x for x, d in enumerate(D3) if d < 2 * delta3]
    witness = {"Delta(H3)": delta3, "min D(x, H3)": min(D3, default=0)}
    if failing:
        witness["vertex"] = failing[0]
        witness["D(x, H3)"] = D3[failing[0]]
    return ConditionReport("corollary9", applicable=True, holds=not failing, witness=witness)


def corollary10_condition(H: Hypergraph) -> ConditionReport:
    """H3 is regular; needs complete pair coverage."""
    _require_no_rank1(H)
    if not pair_coverage(H):
        return _inapplicable("corollary10")
    degrees = split_by_rank(H).h3.degrees
    regular = len(set(degrees)) <= 1
    witness: Dict[str, Any] = {"degrees of H3": sorted(set(degrees))}
    if not regular:
        low = min(range(H.n), key=lambda x: degrees[x])
        witness["vertex"] = low
        witness["d(x, H3)"] = degrees[low]
    return ConditionReport("corollary10", applicable=True, holds=regular, witness=witness)


def corollary11_condition(H: Hypergraph) -> ConditionReport:
    """Every vertex has excess at least twice its deficit in H3; needs complete pair coverage."""
    _require_no_rank1(H)
    if not pair_coverage(H):
        return _inapplicable("corollary11")
    h3 = split_by_rank(H).h3
    balance = deficit_excess(h3, max(h3.degrees, default=0))
    failing = [x for x, b in enumerate(balance) if b.excess < 2 * b.deficit]
    witness: Dict[str, Any] = {}
    if failing:
        x = failing[0]
        witness = {"vertex": x, "deficit": balance[x].deficit, "excess": balance[x].excess}
    return ConditionReport("corollary11", applicable=True, holds=not failing, witness=witness)


def vu_quantities(H: Hypergraph) -> VuQuantities:
    """Measured inputs of the locally sparse list coloring bound.

    ``f`` is the largest value with ``T(e) <= R^2 / f`` for every edge; it is
    None when there are no triangles (every ``f`` works).
    """
    R = max(clique_ranks(H), default=0)
    T = [t.t for t in triangle_counts(H)]
    max_T = max(T, default=0)
    f = Fraction(R**2, max_T) if max_T else None
    return VuQuantities(R=R, T=T, max_T=max_T, f=f, meaningful=f is None or f > 1)
