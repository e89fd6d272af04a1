"""Preferential attachment multigraphs under k-sample local majority dynamics.

Generation (pa_graph), protocol simulation (dynamics), threshold numerics
(threshold), structural certificates (structure), and a seeded experiment
harness (harness).  Hot kernels run compiled when the extension is built and
fall back to pure numpy otherwise; the two are bit-identical (BACKEND says
which is active, PAMP_PURE=1 forces the fallback).
"""

from ._kernels import BACKEND
from .dynamics import (
    ColourState,
    ProtocolConfig,
    Trace,
    default_max_steps,
    init_colours,
    run,
    sample_poll,
    step,
    voter_step,
)
from .harness import (
    CellResult,
    ConfigError,
    ExperimentSpec,
    SweepResult,
    TrialRecord,
    emit,
    load_sweep_json,
    run_sweep,
)
from .pa_graph import (
    DegreeStats,
    GraphFormatError,
    PAGraph,
    PAParams,
    contract,
    degree_evolution_urn,
    degree_stats,
    generate_pa,
    generate_pa1,
    hill_exponent,
    load,
    save,
)
from .rng import make_generator, stable_seed
from .structure import (
    CATEGORIES,
    Ball,
    RootRecord,
    StructureParams,
    StructureScan,
    TruncatedBall,
    ball,
    light_cycle_census,
    outer_core_degree_check,
    scan_structure,
    short_paths_into_core,
    truncated_ball,
)
from .threshold import (
    ConvergenceSchedule,
    MajorityMap,
    TreeBound,
    alpha_star,
    binom_tail,
    binom_tail_exact,
    binprop_check,
    effective_d,
    f_envelope,
    schedule_constant,
    tau_star,
    tree_recursion_exact,
    tree_root_red_bound,
)

__version__ = "0.1.0"
