"""Exact leaky zero forcing: closures under vertex, edge, arc and mixed leaks,
minimum leaky forcing numbers with certificates, and a theorem-checking suite."""

from .forcing import (
    ClosureResult,
    ContractError,
    Force,
    MalformedProcessError,
    closure,
    is_forcing_process,
    is_zero_forcing_set,
    obtainable,
    possible_forces,
    restrict_process,
    splice_processes,
    valid_forces,
    validate_process,
)
from .graph import Graph, emit_graph6, generate_family, load_graph, parse_edge_list, parse_graph6
from .leaks import (
    Leak,
    LeakBudget,
    LeakPattern,
    LeakSet,
    active_leaks,
    disables,
    enumerate_leak_sets,
    enumerate_placements,
    independence_number,
    is_independent,
    parse_leak_string,
    split_by_touch,
    tails_heads,
)
from .solver import (
    NumberResult,
    Verdict,
    check_leaky_set,
    check_pattern_leaky_set,
    check_via_characterization,
    leaky_number,
    pattern_leaky_number,
)
from .verify import SuiteReport, possible_forces_oracle, run_theorem_suite

__version__ = "0.1.0"
