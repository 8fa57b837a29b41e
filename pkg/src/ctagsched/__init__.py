"""Commutativity-aware QAOA circuit scheduling for constrained qubit topologies."""

from ctagsched.graphs import (
    Architecture,
    GraphFormatError,
    Mapping,
    ProblemGraph,
    clique,
    density,
    grid,
    ibm20,
    ibm27,
    identity_mapping,
    linear,
    load_problem_graph,
    make_architecture,
    make_problem_graph,
    random_graph,
    random_initial_mapping,
    save_problem_graph,
    shortest_dist,
)
from ctagsched.pattern import (
    Gate,
    ScheduledCircuit,
    generate_2xn_pattern,
    generate_clique_pattern,
    interaction_ranks,
    meet_cycle,
    position_at,
    prune_pattern,
)
from ctagsched.embedding import (
    LineEmbedding,
    find_line_embedding,
    hilbert_embedding,
    multi_embeddings,
)
from ctagsched.initial_mapping import (
    astar_initial_mapping,
    iso_initial_mapping,
    pattern_graph,
)
from ctagsched.scheduler import SchedulerConfig, partial_pattern_cycles, schedule
from ctagsched.verify import (
    Metrics,
    VerificationReport,
    brute_force_optimal,
    metrics,
    verify,
)

__all__ = [
    "Architecture",
    "Gate",
    "GraphFormatError",
    "LineEmbedding",
    "Mapping",
    "Metrics",
    "ProblemGraph",
    "ScheduledCircuit",
    "SchedulerConfig",
    "VerificationReport",
    "astar_initial_mapping",
    "brute_force_optimal",
    "clique",
    "density",
    "find_line_embedding",
    "generate_2xn_pattern",
    "generate_clique_pattern",
    "grid",
    "hilbert_embedding",
    "ibm20",
    "ibm27",
    "identity_mapping",
    "interaction_ranks",
    "iso_initial_mapping",
    "linear",
    "load_problem_graph",
    "make_architecture",
    "make_problem_graph",
    "meet_cycle",
    "metrics",
    "multi_embeddings",
    "partial_pattern_cycles",
    "pattern_graph",
    "position_at",
    "prune_pattern",
    "random_graph",
    "random_initial_mapping",
    "save_problem_graph",
    "schedule",
    "shortest_dist",
    "verify",
]
