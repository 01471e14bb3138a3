"""Signed-graph spectral toolkit: switching, balance, frustration, negative
cycles, the index and extremal searches over unbalanced signed graphs."""

from .bounds import BoundReport, edge_budget_check, gamma1_margin, hong_bound, stanic_bound
from .constructions import gamma1, is_gamma1, signed_complete, signed_cycle
from .cycles import (
    CycleWitness,
    FrustrationResult,
    cycle_sign,
    double_cover,
    frustration_index,
    has_negative_cycle_of_length,
    is_balanced,
    negative_girth,
    shortest_negative_cycle,
)
from .graph import (
    SignedGraph,
    SwitchSet,
    from_line,
    is_switching_equivalent,
    is_switching_isomorphic,
    make_signed_graph,
    relabel,
    switch,
    to_line,
)
from .search import (
    ExtremalReport,
    SearchRecord,
    audit_winner,
    enumerate_switching_classes,
    exhaustive_extremal,
    local_search,
    zero_component_survey,
)
from .spectra import (
    SpectralResult,
    adjacency_matrix,
    index,
    normalize_nonnegative,
    perturb_and_compare,
    zero_components,
)

__version__ = "0.1.0"
