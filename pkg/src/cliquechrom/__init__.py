"""Clique chromatic number: exact and heuristic colouring, proof certificates, bound calculators."""

__version__ = "0.1.0"

from .graph import (
    GENERATOR_ID,
    Graph,
    GraphFormatError,
    VertexSet,
    gen_gnp,
    induced_subgraph,
    make_rng,
    non_neighbor_count,
    nonadjacent_to_all,
    read_graph,
    write_graph,
)
from .cliques import (
    CliqueLimitExceeded,
    extend_to_maximal,
    find_clique_in,
    is_maximal_clique,
    maximal_cliques,
)
from .coloring import (
    Coloring,
    Verdict,
    chi_c_bruteforce,
    chi_c_exact,
    greedy_clique_coloring,
    verify_coloring,
)
from .certificates import (
    DESK,
    PAPER,
    CliqueWitness,
    ConstructionFailure,
    ParameterProfile,
    RefutationOutcome,
    SignificanceReport,
    check_lemma21,
    check_lemma22,
    construct_covering_clique,
    is_significant,
    refute_coloring,
    resolve_thresholds,
)
from .bounds import (
    BoundReport,
    LogProb,
    chernoff_upper,
    hypergeometric_tail,
    janson_report,
    lemma21_bounds,
    lemma22_bounds,
    lower_bound_coefficient,
)
