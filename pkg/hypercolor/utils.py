import logging
import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

from .hcore import parse, serialize

logger = logging.getLogger(__name__)


@lru_cache(maxsize=1024)
def normalize_instance(text: str, max_length: int = 2_000_000) -> str:
    """Normalize an instance document to canonical compact JSON.

    Normalization makes cache keys independent from formatting:

    * whitespace and key order of the JSON document
    * vertex order inside an edge
    * edge order
    * the optional ``meta`` object, which is dropped
    """
    if len(text) > max_length:
        logger.debug(
            "The instance is too big and would take too much time to normalize. Using it as is"
        )
        return text
    return serialize(parse(text))


class BudgetExhausted(Exception):
    """Raised by :py:meth:`BudgetClock.tick` once a search runs out of budget."""


@dataclass(frozen=True)
class Budget:
    """Search budget shared by the exact solvers.

    Parameters
    ----------
    limit_ms
        Wall-clock limit in milliseconds. None means no time limit.
    limit_nodes
        Limit on search nodes. None means no node limit.
    """

    limit_ms: Optional[int] = None
    limit_nodes: Optional[int] = 10_000_000

    def start(self) -> "BudgetClock":
        return BudgetClock(self)

    def describe(self) -> str:
        return f"limit_ms={self.limit_ms},limit_nodes={self.limit_nodes}"


class BudgetClock:
    """Counts search nodes and elapsed time against a :py:class:`Budget`."""

    _time_check_every = 256

    def __init__(self, budget: Budget) -> None:
        self.budget = budget
        self.nodes = 0
        self.exhausted = False
        self._started = time.perf_counter()
        self._next_time_check = self._time_check_every

    @property
    def elapsed(self) -> float:
        """Seconds since the clock was started."""
        return time.perf_counter() - self._started

    def tick(self, nodes: int = 1) -> None:
        self.nodes += nodes
        limit_nodes, limit_ms = self.budget.limit_nodes, self.budget.limit_ms
        if limit_nodes is not None and self.nodes > limit_nodes:
            self.exhausted = True
            raise BudgetExhausted(f"node limit {limit_nodes} exceeded")
        if limit_ms is not None and self.nodes >= self._next_time_check:
            self._next_time_check = self.nodes + self._time_check_every
            if self.elapsed * 1000 > limit_ms:
                self.exhausted = True
                raise BudgetExhausted(f"time limit of {limit_ms} ms exceeded")
