"""Desk-scale evidence for the list edge coloring conjectures on linear hypergraphs.

Bounds checked, for a linear hypergraph without rank-1 edges:

* ``EFL``: ``q(H) <= n``
* ``C1``: ``q_list(H) <= n``
* ``C2``: ``q_list(H) <= D(H) + 1``, where ``D(H)`` is the largest clique degree
* ``C3``: ``q_list(H) <= Delta P - max(Delta, P) + 1``
* ``C4``: ``q_list(G) <= Delta + 1`` for graphs

A verdict is ``violated`` only with a certificate, ``consistent`` when the
gathered evidence respects the bound and ``undecided`` otherwise. The
channels that produced the evidence are listed in every verdict.
"""
import logging
import math
import time
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import pandas as pd
from joblib import Parallel, delayed

from . import __version__
from .coloring import (
    CHOOSABILITY_MAX_EDGES,
    EXACT_MAX_EDGES,
    ChoosabilityStatus,
    ChoosabilityVerdict,
    ChromaticIndexResult,
    EdgeColoring,
    chromatic_index_bounds,
    chromatic_index_exact,
    is_k_choosable,
    is_proper,
    line_graph_degeneracy,
)
from .derived import analyze, clique_ranks, max_clique_degree
from .generators import RANDOM_SOURCE, GenSpec, Instance, generate
from .hcore import Hypergraph, remove_edge, serialize, validate
from .store import BaseStore
from .utils import Budget

logger = logging.getLogger(__name__)

EVIDENCE_MAX_K = 3
"""Largest list size for which verdicts attempt a choosability decision."""


class Conjecture(str, Enum):
    EFL = "EFL"
    C1 = "C1"
    C2 = "C2"
    C3 = "C3"
    C4 = "C4"


class Status(str, Enum):
    CONSISTENT = "consistent"
    VIOLATED = "violated"
    UNDECIDED = "undecided"


class CriticalStatus(str, Enum):
    VERIFIED = "verified"
    REFUTED = "refuted"
    UNDECIDED = "undecided"


@dataclass
class ConjectureVerdict:
    conjecture: Conjecture
    bound: int
    lower_evidence: int
    upper_evidence: int
    q_exact: Optional[int]
    status: Status
    choosability: Optional[ChoosabilityVerdict] = None
    list_bound_certified: bool = False
    channels: List[str] = field(default_factory=list)
    witness: Optional[Dict[str, Any]] = None
    limit_hit: bool = False
    notes: List[str] = field(default_factory=list)


@dataclass
class ClauseResult:
    status: CriticalStatus
    edge: Optional[int] = None
    evidence: str = ""


@dataclass
class CriticalityReport:
    """Which properties of a minimal counterexample to C2 the instance has.

    ``all_e_preserve_D``: removing any edge keeps ``D``. ``all_e_R_ge_D``: every
    clique rank is at least ``D``. Both are decided exactly. ``clause_i``
    (``q_list(H) > D + 1``) and ``clause_iii`` (``q_list(H \\ e) = D + 1`` for
    every ``e``) rest on solver evidence and may stay undecided.
    """

    D: int
    all_e_preserve_D: bool
    preserve_D_edge: Optional[int]
    all_e_R_ge_D: bool
    R_ge_D_edge: Optional[int]
    clause_i: ClauseResult
    clause_iii: ClauseResult
    removal_edge: Optional[int] = None
    removal_coloring: Optional[EdgeColoring] = None
    notes: List[str] = field(default_factory=list)

    @property
    def not_critical(self) -> bool:
        """True when the instance is certified not to be a minimal counterexample."""
        return (
            not self.all_e_preserve_D
            or not self.all_e_R_ge_D
            or self.clause_i.status is CriticalStatus.REFUTED
            or self.clause_iii.status is CriticalStatus.REFUTED
        )


@dataclass(frozen=True)
class BoundComparison:
    """The implications from C2 to C1 and C3, instantiated on an instance."""

    n: int
    Delta: int
    P: int
    maxD: int
    maxR: int
    bound_c1: int
    bound_c2: int
    bound_c3: int
    c2_le_c1: bool
    c3_case: str
    c3_case_holds: bool
    c2_le_c3: bool


class ConjectureViolation(Exception):
    """A sweep found a certified counterexample."""

    def __init__(self, row: Dict[str, Any], verdict: ConjectureVerdict, instance: Instance) -> None:
        super().__init__(
            f"{verdict.conjecture.value} violated on instance {row['instance_id']}: "
            f"bound {verdict.bound}, lower evidence {verdict.lower_evidence}"
        )
        self.row = row
        self.verdict = verdict
        self.instance = instance


def _as_conjecture(which: Union[str, Conjecture]) -> Conjecture:
    try:
        return Conjecture(which.upper() if isinstance(which, str) else which)
    except ValueError:
        raise ValueError(
            f"conjecture={which!r} is invalid. Choose one of {[c.value for c in Conjecture]}"
        ) from None


def _require_ready(H: Hypergraph) -> None:
    report = validate(H)
    if report.rank1_edges:
        raise ValueError(f"edge {report.rank1_edges[0]} has rank 1")
    if not report.linear:
        raise ValueError("the hypergraph is not linear")


def conjectured_bound(H: Hypergraph, which: Union[str, Conjecture]) -> int:
    """The upper bound on ``q`` (EFL) or ``q_list`` (C1-C4) the conjecture predicts for H."""
    which = _as_conjecture(which)
    _require_ready(H)
    Delta, P = max(H.degrees, default=0), max(H.ranks, default=0)
    if which in (Conjecture.EFL, Conjecture.C1):
        return H.n
    if which is Conjecture.C2:
        return max_clique_degree(H) + 1
    if which is Conjecture.C3:
        return Delta * P - max(Delta, P) + 1
    if any(r != 2 for r in H.ranks):
        raise ValueError("C4 applies to graphs only: every edge must have rank 2")
    return Delta + 1


def exact_or_bounds(H: Hypergraph, budget: Budget) -> ChromaticIndexResult:
    if H.m <= EXACT_MAX_EDGES:
        return chromatic_index_exact(H, budget)
    return chromatic_index_bounds(H)


def check_conjecture(
    H: Hypergraph,
    which: Union[str, Conjecture],
    budget: Optional[Budget] = None,
    exact: Optional[ChromaticIndexResult] = None,
) -> ConjectureVerdict:
    """Gather evidence for or against one conjecture on one instance.

    Channels:

    * ``exact``: the chromatic index (or its bounds when too large or out of
      budget). Since ``q <= q_list``, ``q > bound`` refutes every variant.
    * ``greedy_list``: greedy coloring in degeneracy order proves
      ``q_list <= degeneracy + 1``.
    * ``choosability``: ``is_k_choosable`` at ``k = bound`` when the instance
      is small enough.

    Parameters
    ----------
    exact
        A chromatic index result already computed for H, reused across
        conjectures.
    """
    which = _as_conjecture(which)
    bound = conjectured_bound(H, which)
    budget = budget or Budget()
    exact = exact or exact_or_bounds(H, budget)
    lower = exact.value if exact.exact else exact.lower
    verdict = ConjectureVerdict(
        conjecture=which,
        bound=bound,
        lower_evidence=lower,
        upper_evidence=exact.upper,
        q_exact=exact.value,
        status=Status.UNDECIDED,
        channels=["exact" if exact.exact else "bounds"],
        limit_hit=exact.limit_hit,
    )

    if lower > bound:
        verdict.status = Status.VIOLATED
        verdict.witness = {
            "instance": H.to_dict(),
            "certificate": "chromatic index" if exact.exact else "line-graph lower bound",
            "q_lower": lower,
            "clique": list(exact.clique),
        }
        logger.warning(f"{which.value} violated: q >= {lower} > {bound}")
        return verdict

    if which is not Conjecture.EFL:
        degeneracy = line_graph_degeneracy(H)
        if degeneracy + 1 <= bound:
            verdict.list_bound_certified = True
            verdict.channels.append("greedy_list")
        elif H.m <= CHOOSABILITY_MAX_EDGES and bound <= EVIDENCE_MAX_K:
            choosability = is_k_choosable(H, bound, budget)
            verdict.choosability = choosability
            verdict.channels.append("choosability")
            verdict.limit_hit = verdict.limit_hit or choosability.limit_hit
            if choosability.status is ChoosabilityStatus.NOT_CHOOSABLE:
                verdict.status = Status.VIOLATED
                verdict.witness = {
                    "instance": H.to_dict(),
                    "certificate": "uncolorable list assignment",
                    "lists": choosability.witness.to_json_dict(),
                }
                logger.warning(f"{which.value} violated: not {bound}-choosable")
                return verdict
            verdict.list_bound_certified = choosability.status is ChoosabilityStatus.CHOOSABLE
        else:
            verdict.notes.append("q_list not certified: choosability is out of reach")

    if verdict.list_bound_certified or exact.upper <= bound:
        verdict.status = Status.CONSISTENT
    return verdict


def bound_comparison(H: Hypergraph) -> BoundComparison:
    _require_ready(H)
    n, Delta, P = H.n, max(H.degrees, default=0), max(H.ranks, default=0)
    maxD, maxR = max_clique_degree(H), max(clique_ranks(H), default=0)
    c3 = Delta * P - max(Delta, P) + 1
    if P > Delta:
        case, case_holds = "P > Delta: greedy gives maxR + 1 <= Delta P - P + 1", maxR + 1 <= c3
    else:
        case, case_holds = "P <= Delta: maxD <= Delta P - Delta", maxD <= Delta * P - Delta
    return BoundComparison(
        n=n,
        Delta=Delta,
        P=P,
        maxD=maxD,
        maxR=maxR,
        bound_c1=n,
        bound_c2=maxD + 1,
        bound_c3=c3,
        c2_le_c1=maxD + 1 <= n,
        c3_case=case,
        c3_case_holds=case_holds,
        c2_le_c3=maxD + 1 <= c3,
    )


def _list_at_most(H: Hypergraph, k: int, budget: Budget) -> Optional[bool]:
    """Decide ``q_list(H) <= k`` when cheap evidence exists, None otherwise."""
    if line_graph_degeneracy(H) + 1 <= k:
        return True
    if H.m <= CHOOSABILITY_MAX_EDGES and 1 <= k <= EVIDENCE_MAX_K:
        status = is_k_choosable(H, k, budget).status
        if status is not ChoosabilityStatus.INCONCLUSIVE:
            return status is ChoosabilityStatus.CHOOSABLE
    if H.m <= EXACT_MAX_EDGES:
        result = chromatic_index_exact(H, budget)
        if result.lower > k:
            return False
    return None


def _removal_argument(
    H: Hypergraph, e: int, D: int, budget: Budget
) -> Tuple[Optional[EdgeColoring], str]:
    """Color ``H \\ e`` with ``D + 1`` colors and give ``e`` a color its neighbours leave free."""
    rest = remove_edge(H, e)
    if rest.m > EXACT_MAX_EDGES:
        return None, f"H \\ e has {rest.m} edges, beyond the exact solver"
    result = chromatic_index_exact(rest, budget)
    if result.upper > D + 1:
        return None, f"no coloring of H \\ e with {D + 1} colors found"
    # edges of H \ e keep their order, shifted past e
    colors = {i if i < e else i + 1: c for i, c in result.coloring.colors.items()}
    blocked = {colors[f] for x in H.edges[e] for f in H.vertex_edges[x] if f != e}
    colors[e] = min(set(range(1, D + 2)) - blocked)
    coloring = EdgeColoring(colors)
    if not is_proper(H, coloring):
        raise RuntimeError("removal argument produced an improper coloring")
    return coloring, f"H colored with {coloring.n_colors} <= {D + 1} colors"


def critical_check(H: Hypergraph, budget: Optional[Budget] = None) -> CriticalityReport:
    """Test an instance against the properties of a minimal counterexample to C2."""
    _require_ready(H)
    H = H.canonical()
    budget = budget or Budget()
    D = max_clique_degree(H)
    ranks = clique_ranks(H)
    removed = [remove_edge(H, e) for e in range(H.m)]

    preserve_edge = next(
        (e for e, rest in enumerate(removed) if max_clique_degree(rest) != D), None
    )
    R_edge = next((e for e, R in enumerate(ranks) if R < D), None)

    # clause i: q_list(H) > D + 1
    at_most = _list_at_most(H, D + 1, budget)
    if at_most is True:
        clause_i = ClauseResult(CriticalStatus.REFUTED, evidence=f"q_list <= {D + 1}")
    elif at_most is False:
        clause_i = ClauseResult(CriticalStatus.VERIFIED, evidence=f"q_list > {D + 1}")
    else:
        clause_i = ClauseResult(CriticalStatus.UNDECIDED, evidence="no certificate either way")

    # clause iii: q_list(H \ e) = D + 1 for every e
    clause_iii = ClauseResult(
        CriticalStatus.VERIFIED, evidence="q_list(H \\ e) = D + 1 for every e"
    )
    for e, rest in enumerate(removed):
        below = _list_at_most(rest, D, budget)
        above = _list_at_most(rest, D + 1, budget)
        if below is True or above is False:
            clause_iii = ClauseResult(
                CriticalStatus.REFUTED,
                edge=e,
                evidence=f"q_list(H \\ e) {'<= ' + str(D) if below else '> ' + str(D + 1)}",
            )
            break
        if below is None or above is None:
            clause_iii = ClauseResult(CriticalStatus.UNDECIDED, edge=e, evidence="no certificate")

    report = CriticalityReport(
        D=D,
        all_e_preserve_D=preserve_edge is None,
        preserve_D_edge=preserve_edge,
        all_e_R_ge_D=R_edge is None,
        R_ge_D_edge=R_edge,
        clause_i=clause_i,
        clause_iii=clause_iii,
    )
    if R_edge is not None:
        report.removal_edge = R_edge
        report.removal_coloring, note = _removal_argument(H, R_edge, D, budget)
        report.notes.append(note)
    return report


COLUMNS = [
    "instance_id",
    "kind",
    "seed",
    "n",
    "m",
    "delta",
    "Delta",
    "rho",
    "P",
    "maxD",
    "maxR",
    "linear",
    "uniform",
    "regular",
    "q_exact",
    "q_lower",
    "q_upper",
    "bound_efl",
    "bound_c2",
    "bound_c3",
    "verdict_c1",
    "verdict_c2",
    "verdict_c3",
    "notes",
]
SWEEP_CONJECTURES = (Conjecture.C1, Conjecture.C2, Conjecture.C3)
SPEC_NOTE_PREFIXES = ("rng=", "partial:")


def _empty_row(index: int, spec: GenSpec) -> Dict[str, Any]:
    row = dict.fromkeys(COLUMNS)
    row.update(instance_id=index, kind=spec.kind, seed=spec.seed)
    return row


def _spec_notes(spec: GenSpec, instance: Instance) -> List[str]:
    """Notes that depend on the GenSpec rather than on the generated hypergraph."""
    notes = []
    if spec.is_random:
        notes.append(f"rng={RANDOM_SOURCE}")
    if instance.partial:
        notes.append(f"partial: {instance.hypergraph.m} of {spec.params['m_target']} edges")
    return notes


def _evaluate(
    index: int, spec: GenSpec, instance: Instance, which: Sequence[Conjecture], budget: Budget
) -> Tuple[Dict[str, Any], Optional[ConjectureVerdict], float]:
    """One sweep row and the first violated verdict, if any."""
    start_time = time.time()
    H = instance.hypergraph
    stats = analyze(H)
    row = _empty_row(index, spec)
    row.update(
        n=stats.n,
        m=stats.m,
        delta=stats.delta_min,
        Delta=stats.Delta,
        rho=stats.rho,
        P=stats.P,
        maxD=stats.maxD,
        maxR=stats.maxR,
        linear=stats.linear,
        uniform=stats.uniform,
        regular=stats.regular,
    )
    notes = _spec_notes(spec, instance)

    exact = exact_or_bounds(H, budget)
    row.update(q_exact=exact.value, q_lower=exact.lower, q_upper=exact.upper)
    if exact.limit_hit:
        notes.append("exact search budget exhausted")

    violation = None
    if validate(H).conjecture_ready:
        if stats.maxD + 1 > stats.n:
            raise RuntimeError(
                f"maxD + 1 = {stats.maxD + 1} exceeds n = {stats.n} on a linear instance"
            )
        row.update(
            bound_efl=conjectured_bound(H, Conjecture.EFL),
            bound_c2=conjectured_bound(H, Conjecture.C2),
            bound_c3=conjectured_bound(H, Conjecture.C3),
        )
        for conjecture in which:
            verdict = check_conjecture(H, conjecture, budget, exact=exact)
            row[f"verdict_{conjecture.value.lower()}"] = verdict.status.value
            if verdict.status is Status.VIOLATED and violation is None:
                violation = verdict
            if verdict.limit_hit and "search budget exhausted" not in notes:
                notes.append("search budget exhausted")
    else:
        notes.append("not linear or has rank-1 edges; conjectures skipped")

    row["notes"] = "; ".join(notes)
    return row, violation, time.time() - start_time


def sweep(
    specs: Iterable[GenSpec],
    which: Iterable[Union[str, Conjecture]] = SWEEP_CONJECTURES,
    budget: Optional[Budget] = None,
    jobs: int = 1,
    store: Optional[BaseStore] = None,
    force: bool = False,
    cache: bool = True,
) -> pd.DataFrame:
    """Generate every instance of ``specs`` and check the conjectures on it.

    Parameters
    ----------
    specs
        Generator specs, one row per spec in the given order.
    which
        Conjectures among C1, C2 and C3 to check.
    budget
        Search budget of every solver call.
    jobs
        Number of joblib workers. Rows keep the order of ``specs``.
    store
        Optional :py:class:`~hypercolor.store.FileStore` caching finished rows,
        keyed by the instance and the run parameters.
    force
        If True, ignore existing cache and recompute.
    cache
        If False, neither read nor write the cache.

    Returns
    -------
    pd.DataFrame
        The report with columns :py:data:`COLUMNS`.

    Raises
    ------
    ConjectureViolation
        On the first violated verdict, in instance order.
    """
    which = [_as_conjecture(c) for c in which]
    unsupported = [c.value for c in which if c not in SWEEP_CONJECTURES]
    if unsupported:
        raise ValueError(f"sweeps check C1, C2 and C3 only, got {unsupported}")
    budget = budget or Budget()
    params = f"{','.join(c.value for c in which)};{budget.describe()}"
    specs = list(specs)
    use_cache = store is not None and cache

    rows: List[Optional[Dict[str, Any]]] = [None] * len(specs)
    pending = []
    for index, spec in enumerate(specs):
        try:
            instance = generate(spec)
        except ValueError as exc:
            rows[index] = _empty_row(index, spec)
            rows[index]["notes"] = f"error: {exc}"
            continue
        text = serialize(instance.hypergraph)
        if use_cache and not force and store.exists(text, params):
            cached, metadata = store.load(text, params)
            row = {column: _plain(value) for column, value in cached.iloc[0].to_dict().items()}
            row.update(instance_id=index, kind=spec.kind, seed=spec.seed)
            # the cache key ignores the GenSpec, so its notes are rebuilt
            computed = [
                note
                for note in (row["notes"] or "").split("; ")
                if note and not note.startswith(SPEC_NOTE_PREFIXES)
            ]
            row["notes"] = "; ".join(_spec_notes(spec, instance) + computed)
            rows[index] = row
            logger.info(
                f"Instance {index} loaded from cache (computed on {metadata['executed_at']})"
            )
            continue
        pending.append((index, spec, instance, text))

    logger.info(f"Sweeping {len(pending)} instances, {len(specs) - len(pending)} cached or invalid")
    if jobs == 1:
        results = (
            _evaluate(index, spec, instance, which, budget)
            for index, spec, instance, _ in pending
        )
    else:
        results = Parallel(n_jobs=jobs, return_as="generator")(
            delayed(_evaluate)(index, spec, instance, which, budget)
            for index, spec, instance, _ in pending
        )

    for (index, spec, instance, text), (row, violation, duration) in zip(pending, results):
        if violation is not None:
            raise ConjectureViolation(row, violation, instance)
        rows[index] = row
        if use_cache:
            metadata = {
                "hypercolor": __version__,
                "executed_at": datetime.now().isoformat(),
                "duration": duration,
            }
            store.dump(text, params, pd.DataFrame([row], columns=COLUMNS), metadata)
            logger.debug(f"Instance {index} stored in cache after {timedelta(seconds=duration)}")

    return pd.DataFrame(rows, columns=COLUMNS, dtype=object)


def _plain(value: Any) -> Any:
    """numpy scalars and missing values from a cached frame back to Python values."""
    if hasattr(value, "item"):
        value = value.item()
    if value is None or (isinstance(value, float) and math.isnan(value)):
        return None
    return value
