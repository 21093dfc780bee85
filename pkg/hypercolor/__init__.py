# ruff: noqa: F401
__version__ = "0.1.0"
import logging

from .coloring import (
    ChoosabilityVerdict,
    EdgeColoring,
    ListAssignment,
    chromatic_index_exact,
    greedy_color,
    greedy_list_color,
    is_k_choosable,
)
from .conjectures import ConjectureViolation, check_conjecture, critical_check, sweep
from .generators import GenSpec, generate
from .hcore import Hypergraph, parse, serialize
from .utils import Budget

logging.getLogger(__name__).addHandler(logging.NullHandler())
