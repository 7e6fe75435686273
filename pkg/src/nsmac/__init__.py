"""Non-signaling-assisted coding bounds for two-sender multiple-access channels.

The package computes optimal and relaxed non-signaling (NS) assisted success
probabilities for finite multiple-access channels via linear programming,
exploits permutation symmetry of tensor-power channels to keep the LPs
polynomial-size, and turns LP solutions into achievable rate pairs
(zero-error frontiers and concatenated-code inner bounds).  It also evaluates
single-letter capacity regions and one-shot hypothesis-testing converses.
"""

__version__ = "0.1.0"

from .channels import (
    Channel,
    CodeTables,
    make_bac,
    make_noisy_bac,
    tensor,
    tensor_power,
    brute_force_success,
    p2p_success,
    read_channel,
    write_channel,
    random_channel,
)
from .orbits import OrbitTable, OrbitSystem, enumerate_orbits, project_orbit, channel_value_on_orbit
from .lp import (
    LinearProgram,
    LpSolution,
    solve,
    check_value_is_one,
    dump_lp,
    set_external_solver,
)
from .programs import (
    NsCode,
    IndepNsStrategy,
    build_ns_lp_element,
    build_ns_lp_orbit,
    build_relaxed_lp,
    solve_ns,
    solve_relaxed,
    reconstruct_box,
    box_ns_residuals,
    box_success,
    indep_ns_sum,
    build_ns_sum_lp,
    nssr_factor,
    check_nssr_inequality,
)
from .regions import (
    JointDist,
    RatePoint,
    Frontier,
    mutual_informations,
    classical_region,
    classical_corner,
    relaxed_region,
    bac_relaxed_closed_form,
    bac_relaxed_closed_form_frontier,
    beta_hypothesis,
    one_shot_converse,
    binary_entropy,
)
from .concat import (
    InducedChannelStats,
    induced_stats,
    corner_rates,
    concat_scan,
    induced_channel_explicit,
)
from .frontier import (
    ScanConfig,
    FrontierPoint,
    FrontierScan,
    zero_error_frontier,
)
from .cli import cli_dispatch
