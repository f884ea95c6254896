"""prodnet: production networks from input-output requirement tables.

Build a directed weighted industry network, sweep edge cut-off
thresholds, compare degree distributions against matched random and
scale-free null models with a two-sample KS statistic, and rank
industries by weighted out-strength and reversed weighted PageRank.
"""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    ConvergenceError,
    DuplicateCodeError,
    EmptySampleError,
    FitError,
    MetricMismatchError,
    ProdnetError,
    RangeError,
    ShapeError,
)
from .ingest import (
    IndustryMeta,
    InputOutputTable,
    TableSummary,
    attach_names,
    load_metadata,
    parse_table,
    summary,
    write_metadata,
    write_table,
)
from .graph_core import (
    DegreeVector,
    ProductionNetwork,
    build_network,
    degrees,
    prune,
    reverse,
    scale_weights,
    write_edge_list,
    write_node_list,
)
from .stats import (
    BinnedDistribution,
    KSResult,
    degree_sample,
    ks_two_sample,
    log_binned,
)
from .nullmodels import (
    FALLBACK_PARAMS,
    GeneratedGraph,
    ParamFit,
    ScaleFreeParams,
    TailFit,
    fit_params,
    fit_params_record,
    fit_tail_exponent,
    gen_random,
    gen_scale_free,
    solve_growth_params,
)
from .centrality import (
    CentralityReport,
    CentralityScore,
    DriftRow,
    DriftTable,
    pagerank,
    pagerank_reversed,
    rank,
    ranking_drift,
)
from .sweep import (
    SweepRecord,
    ThresholdGrid,
    child_seed,
    emit_report,
    explicit_grid,
    make_grid,
    parse_report,
    run_sweep,
)

__all__ = [name for name in dir() if not name.startswith("_")]
