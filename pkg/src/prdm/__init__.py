"""Budget-limited reward distribution on invitation networks.

A sponsor spreads a task through a social network; agents report a
capacity and whom they invited. Rewards flow layer by layer: each layer
splits the remaining budget by reported capacity shares, and every
invitee passes a fixed fraction of her weight back to her inviters. The
package computes the allocation exactly (all rationals), and ships an
adversarial harness that searches for profitable misreports and Sybil
attacks to check the mechanism's incentive properties.
"""

from .attacks import (
    DEFAULT_TEMPLATES,
    AttackError,
    ParallelSybilAttack,
    SybilAttack,
    apply_attack,
    capacity_grid,
    enumerate_attacks,
    enumerate_misreports,
    validate_attack,
)
from .formats import (
    FormatError,
    attack_from_json,
    attack_to_json,
    dump_attack,
    dump_instance,
    dump_outcome,
    instance_from_json,
    instance_to_json,
    jsonify,
    load_attack,
    load_instance,
    load_outcome,
    outcome_to_json,
    read_sweep_csv,
    verdict_to_json,
    write_outcome_csv,
    write_sweep_csv,
)
from .generators import (
    GeneratedInstance,
    GeneratorConfig,
    GeneratorError,
    balanced_tree_network,
    chain_network,
    gen_random,
    random_suite,
    reference_instance,
    standard_families,
    star_network,
)
from .mechanism import (
    MechanismError,
    MechanismOutcome,
    MechanismParams,
    RewardParts,
    contribution_phase,
    propagation_phase,
    propagation_transfers,
    residual_budget_closed_form,
    run_equal_split_baseline,
    run_prdm,
)
from .network import (
    SPONSOR_ID,
    AgentId,
    AgentType,
    LayeredActiveNetwork,
    NetworkError,
    Report,
    ReportProfile,
    SocialNetwork,
    build_active_network,
    truthful_report,
    validate_profile,
    validate_report,
)
from .properties import (
    AssumptionEntry,
    MajorityAssumptionReport,
    PropertyVerdict,
    SweepRow,
    check_abb_trend,
    check_baseline_invariance,
    check_budget_identity,
    check_gamma_sp,
    check_ic,
    check_ir,
    check_psp,
    majority_assumption_report,
    sweep_attack_utility,
)
from .rationals import format_decimal, parse_rational

__version__ = "0.1.0"

__all__ = [
    "AgentId",
    "AgentType",
    "AssumptionEntry",
    "AttackError",
    "DEFAULT_TEMPLATES",
    "FormatError",
    "GeneratedInstance",
    "GeneratorConfig",
    "GeneratorError",
    "LayeredActiveNetwork",
    "MajorityAssumptionReport",
    "MechanismError",
    "MechanismOutcome",
    "MechanismParams",
    "NetworkError",
    "ParallelSybilAttack",
    "PropertyVerdict",
    "Report",
    "ReportProfile",
    "RewardParts",
    "SPONSOR_ID",
    "SocialNetwork",
    "SweepRow",
    "SybilAttack",
    "apply_attack",
    "attack_from_json",
    "attack_to_json",
    "balanced_tree_network",
    "build_active_network",
    "capacity_grid",
    "chain_network",
    "check_abb_trend",
    "check_baseline_invariance",
    "check_budget_identity",
    "check_gamma_sp",
    "check_ic",
    "check_ir",
    "check_psp",
    "contribution_phase",
    "dump_attack",
    "dump_instance",
    "dump_outcome",
    "enumerate_attacks",
    "enumerate_misreports",
    "format_decimal",
    "gen_random",
    "instance_from_json",
    "instance_to_json",
    "jsonify",
    "load_attack",
    "load_instance",
    "load_outcome",
    "majority_assumption_report",
    "outcome_to_json",
    "parse_rational",
    "propagation_phase",
    "propagation_transfers",
    "random_suite",
    "read_sweep_csv",
    "reference_instance",
    "residual_budget_closed_form",
    "run_equal_split_baseline",
    "run_prdm",
    "standard_families",
    "star_network",
    "sweep_attack_utility",
    "truthful_report",
    "validate_attack",
    "validate_profile",
    "validate_report",
    "verdict_to_json",
    "write_outcome_csv",
    "write_sweep_csv",
]
