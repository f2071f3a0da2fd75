"""C4-free edge decompositions of graphs with bounded maximum degree."""

from .graphs import (
    EdgeColouring,
    GenerationError,
    Graph,
    GraphFormatError,
    VertexColouring,
    complete_graph,
    erdos_renyi,
    load_colouring,
    load_edge_list,
    random_regular,
    save_colouring,
    save_edge_list,
)
from .frugal import (
    FrugalParams,
    FrugalResult,
    frugal_colour,
    maxcut_bipartition,
    phase1_colour,
    phase2_complete,
)
from .kernels import BACKEND
from .pipeline import (
    PipelineConfig,
    PipelineStats,
    decompose,
    degeneracy_ordering,
    forest_partition,
    greedy_decompose,
    peel_low_degree,
    pullback_decompose,
)
from .frugal import PreconditionError
from .sidon import (
    ConstructionError,
    QuadExtField,
    SidonPartition,
    bose_sidon,
    build_field,
    complete_c4_free_colouring,
    next_prime_with,
    sidon_partition,
)
from .verify import (
    OracleCapExceeded,
    VerificationReport,
    ex_c4_upper_bound,
    exact_ex_c4,
    exact_phi_c4,
    exact_phi_c4_witness,
    find_c4,
    is_sidon,
    phi_lower_bound,
    sum_graph,
    verify_c4_free_colouring,
    verify_frugal_proper,
)

__version__ = "0.1.0"
