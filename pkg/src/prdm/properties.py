"""Mechanism property checks by exhaustive bounded adversarial search.

Each check runs the mechanism under every candidate deviation from a
deterministic enumeration and compares exact rationals, so a verdict of
"holds" means no counterexample exists in the searched slice, and a
failing verdict carries a replayable witness with the exact margin.

Checked properties: individual rationality, the budget accounting
identities, the vanishing-residual trend under capacity scaling,
incentive compatibility (with reward monotonicity in capacity and in
invited children), parallel Sybil-proofness, and the bounded-gain form of
general Sybil-proofness (coalition reward at most 1/(1-beta) times the
truthful reward) for agents whose capacity is below the majority
threshold, plus its two supporting bounds: coalition weight never beats
the truthful weight, and coalition receipts from outside the coalition
never beat 1/(1-beta) times the truthful receipts.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import (
    Dict,
    Iterable,
    Iterator,
    List,
    Mapping,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
)

from .attacks import (
    DEFAULT_TEMPLATES,
    SybilAttack,
    apply_attack,
    capacity_grid,
    enumerate_attacks,
    enumerate_misreports,
)
from .mechanism import (
    MechanismOutcome,
    MechanismParams,
    propagation_transfers,
    residual_budget_closed_form,
    run_equal_split_baseline,
    run_prdm,
)
from .network import (
    AgentId,
    AgentType,
    Report,
    ReportProfile,
    SocialNetwork,
    build_active_network,
    sorted_ids,
    truthful_report,
)

ZERO = Fraction(0)


@dataclass(frozen=True)
class PropertyVerdict:
    """Outcome of one property check.

    `margin` is the best adversarial gain found (a nonpositive margin
    backs `holds`); `witness` is a replayable description of the worst
    counterexample when one exists. `details` carries check-specific
    byproducts such as monotonicity flags or residual trails.
    """

    name: str
    holds: bool
    margin: Optional[Fraction] = None
    witness: Optional[dict] = None
    details: Mapping[str, object] = field(default_factory=dict)


class AssumptionEntry(NamedTuple):
    """Majority-threshold status of one active agent."""

    capacity: Fraction
    threshold: Fraction  # 30-digit rational approximation, display only
    satisfied: bool  # decided exactly, by squaring


@dataclass(frozen=True)
class MajorityAssumptionReport:
    """Which active agents hold a minority share of their layer's context.

    An agent satisfies the assumption when her true capacity is at most
    (sqrt(1/(1-beta)) - 1) times the cumulative capacity above her layer
    plus the rest of her own layer. The flag is computed exactly via
    (1-beta) * (capacity + base)^2 <= base^2; the stored threshold is an
    approximation for reporting.
    """

    beta: Fraction
    entries: Mapping[AgentId, AssumptionEntry]

    @property
    def satisfied_agents(self) -> Tuple[AgentId, ...]:
        return sorted_ids(i for i, e in self.entries.items() if e.satisfied)

    @property
    def violating_agents(self) -> Tuple[AgentId, ...]:
        return sorted_ids(i for i, e in self.entries.items() if not e.satisfied)


class SweepRow(NamedTuple):
    """One point of a capacity-transfer sweep: scenario label, transferred
    amount, and the attacker coalition's total reward."""

    scenario: str
    delta: Fraction
    utility: Fraction


def check_ir(
    network: SocialNetwork, profile: ReportProfile, params: MechanismParams
) -> PropertyVerdict:
    """No agent ever pays: rewards are nonnegative, active ones positive."""
    outcome = run_prdm(network, profile, params)
    active = outcome.layered.active_agents
    witness = None
    holds = True
    for i in sorted_ids(network.agents):
        r = outcome.rewards[i]
        bad = r < 0 or (i in active and r <= 0)
        if bad and witness is None:
            holds = False
            witness = {"agent": i, "reward": r, "active": i in active}
    margin = min((outcome.rewards[i] for i in active), default=None)
    return PropertyVerdict(
        name="individual-rationality",
        holds=holds,
        margin=margin,
        witness=witness,
        details={"active_agents": len(active), "residual": outcome.residual_budget},
    )


def check_budget_identity(
    network: SocialNetwork, profile: ReportProfile, params: MechanismParams
) -> PropertyVerdict:
    """Exact budget accounting.

    Checks, all with equality: rewards plus residual equal the budget;
    every layer's spend equals the drop in remaining budget; and each
    remaining budget equals the telescoped closed form
    sponsor_capacity * budget / cumulative_capacity.
    """
    outcome = run_prdm(network, profile, params)
    total = outcome.total_rewards()
    problems = []
    if total + outcome.residual_budget != params.budget:
        problems.append(
            {
                "check": "rewards-plus-residual",
                "total_rewards": total,
                "residual": outcome.residual_budget,
            }
        )
    for k in range(outcome.layered.num_layers):
        layer_spend = sum(
            (outcome.weights[i] for i in outcome.layered.layers[k]), ZERO
        )
        if layer_spend != outcome.layer_budgets[k] - outcome.layer_budgets[k + 1]:
            problems.append({"check": "layer-spend", "layer": k + 1})
        closed = (
            params.sponsor_capacity
            * params.budget
            / outcome.cumulative_capacities[k]
        )
        if outcome.layer_budgets[k + 1] != closed:
            problems.append({"check": "closed-form-budget", "layer": k + 1})
    residual_budget_closed_form(outcome)  # raises on internal inconsistency
    discrepancy = total + outcome.residual_budget - params.budget
    return PropertyVerdict(
        name="budget-identity",
        holds=not problems,
        margin=discrepancy,
        witness=problems[0] if problems else None,
        details={
            "total_rewards": total,
            "residual": outcome.residual_budget,
            "residual_positive": outcome.residual_budget > 0,
        },
    )


def _scaled_instance(
    network: SocialNetwork, profile: ReportProfile, factor: Fraction
) -> Tuple[SocialNetwork, ReportProfile]:
    agents = {
        i: AgentType(t.children, t.capacity * factor)
        for i, t in network.agents.items()
    }
    reports = {
        i: Report(r.reported_children, r.reported_capacity * factor)
        for i, r in profile.reports.items()
    }
    return SocialNetwork(network.sponsor_children, agents), ReportProfile(reports)


def check_abb_trend(
    network: SocialNetwork,
    profile: ReportProfile,
    params: MechanismParams,
    scale_factors: Sequence[Fraction],
) -> PropertyVerdict:
    """Residual budget vanishes as reported capacities scale up.

    Scaling every capacity by an increasing factor must shrink the exact
    residual sponsor_capacity * budget / (sponsor_capacity + factor *
    active capacity) strictly, and each run must match that closed form
    exactly.
    """
    factors = [Fraction(f) for f in scale_factors]
    if any(f <= 0 for f in factors):
        raise ValueError("scale factors must be positive")
    if any(b <= a for a, b in zip(factors, factors[1:])):
        raise ValueError("scale factors must be strictly increasing")
    layered = build_active_network(network, profile)
    active_capacity = sum(
        (profile.reports[i].reported_capacity for i in layered.depth), ZERO
    )
    rows = []
    exact = True
    witness = None
    for factor in factors:
        snet, sprof = _scaled_instance(network, profile, factor)
        outcome = run_prdm(snet, sprof, params)
        expected = (
            params.sponsor_capacity
            * params.budget
            / (params.sponsor_capacity + factor * active_capacity)
        )
        if outcome.residual_budget != expected:
            exact = False
            if witness is None:
                witness = {
                    "factor": factor,
                    "residual": outcome.residual_budget,
                    "expected": expected,
                }
        rows.append((factor, outcome.residual_budget))
    diffs = [b[1] - a[1] for a, b in zip(rows, rows[1:])]
    decreasing = all(d < 0 for d in diffs) if active_capacity > 0 else True
    if not decreasing and witness is None:
        worst = max(range(len(diffs)), key=lambda k: diffs[k])
        witness = {
            "factor_pair": (rows[worst][0], rows[worst + 1][0]),
            "residual_pair": (rows[worst][1], rows[worst + 1][1]),
        }
    return PropertyVerdict(
        name="vanishing-residual",
        holds=exact and decreasing,
        margin=max(diffs) if diffs else None,
        witness=witness,
        details={"residuals": rows, "active_capacity": active_capacity},
    )


def check_ic(
    network: SocialNetwork,
    params: MechanismParams,
    grid_divisor: int = 4,
    others_profile: Optional[ReportProfile] = None,
) -> PropertyVerdict:
    """Grid search for a profitable single-agent misreport.

    For every agent, sweeps all children subsets crossed with a capacity
    grid of step capacity/grid_divisor and compares her reward against
    reporting truthfully, holding the rest of the profile fixed
    (truthful by default). Also verifies the reward is monotone: never
    decreasing in reported capacity, never decreased by reporting one
    more true child.
    """
    if grid_divisor < 1:
        raise ValueError("grid_divisor must be at least 1")
    base_profile = (
        others_profile if others_profile is not None else ReportProfile.truthful(network)
    )
    margin = None
    witness = None
    cap_monotone = True
    cap_witness = None
    child_monotone = True
    child_witness = None
    reports_checked = 0
    for i in sorted_ids(network.agents):
        t = network.agents[i]
        truthful_profile = base_profile.with_report(i, truthful_report(t))
        truthful_reward = run_prdm(network, truthful_profile, params).rewards[i]
        grid = capacity_grid(t.capacity, t.capacity / grid_divisor)
        rewards_by_report: Dict[Tuple[frozenset, Fraction], Fraction] = {}
        for report in enumerate_misreports(t, grid):
            outcome = run_prdm(network, base_profile.with_report(i, report), params)
            r = outcome.rewards[i]
            rewards_by_report[(report.reported_children, report.reported_capacity)] = r
            reports_checked += 1
            gain = r - truthful_reward
            if margin is None or gain > margin:
                margin = gain
                if gain > 0:
                    witness = {
                        "agent": i,
                        "report": report,
                        "truthful_reward": truthful_reward,
                        "deviant_reward": r,
                    }
        subsets = sorted(
            {s for s, _ in rewards_by_report}, key=lambda s: (len(s), sorted_ids(s))
        )
        caps = sorted({c for _, c in rewards_by_report})
        for s in subsets:
            for lo, hi in zip(caps, caps[1:]):
                if rewards_by_report[(s, hi)] < rewards_by_report[(s, lo)]:
                    cap_monotone = False
                    if cap_witness is None:
                        cap_witness = {
                            "agent": i,
                            "children": sorted_ids(s),
                            "capacities": (lo, hi),
                            "rewards": (
                                rewards_by_report[(s, lo)],
                                rewards_by_report[(s, hi)],
                            ),
                        }
        for c in caps:
            for s in subsets:
                for extra in sorted_ids(t.children - s):
                    grown = s | {extra}
                    if rewards_by_report[(grown, c)] < rewards_by_report[(s, c)]:
                        child_monotone = False
                        if child_witness is None:
                            child_witness = {
                                "agent": i,
                                "children": sorted_ids(s),
                                "added_child": extra,
                                "capacity": c,
                                "rewards": (
                                    rewards_by_report[(s, c)],
                                    rewards_by_report[(grown, c)],
                                ),
                            }
    return PropertyVerdict(
        name="incentive-compatibility",
        holds=margin is None or margin <= 0,
        margin=margin,
        witness=witness,
        details={
            "reports_checked": reports_checked,
            "capacity_monotone": cap_monotone,
            "capacity_monotonicity_witness": cap_witness,
            "child_monotone": child_monotone,
            "child_monotonicity_witness": child_witness,
        },
    )


def majority_assumption_report(
    network: SocialNetwork, profile: ReportProfile, params: MechanismParams
) -> MajorityAssumptionReport:
    """Exact majority-threshold status for every active agent."""
    from .rationals import approx_sqrt

    outcome = run_prdm(network, profile, params)
    layered = outcome.layered
    one_minus = 1 - params.beta
    sqrt_factor = (
        approx_sqrt(Fraction(1) / one_minus) if one_minus > 0 else Fraction(0)
    )
    entries = {}
    for i in sorted_ids(layered.depth):
        k = layered.depth[i]
        above = (
            params.sponsor_capacity
            if k == 1
            else outcome.cumulative_capacities[k - 2]
        )
        peers = sum(
            (
                profile.reports[m].reported_capacity
                for m in layered.layers[k - 1]
                if m != i
            ),
            ZERO,
        )
        base = above + peers
        capacity = network.agents[i].capacity
        satisfied = one_minus * (capacity + base) ** 2 <= base**2
        entries[i] = AssumptionEntry(
            capacity=capacity,
            threshold=(sqrt_factor - 1) * base,
            satisfied=satisfied,
        )
    return MajorityAssumptionReport(beta=params.beta, entries=entries)


def _attacked_runs(
    network: SocialNetwork,
    profile: ReportProfile,
    params: MechanismParams,
    attacker: AgentId,
    templates: Tuple[str, ...],
    max_fakes: int,
    grid_divisor: int,
) -> Iterator[Tuple[SybilAttack, SocialNetwork, ReportProfile, MechanismOutcome]]:
    t = network.agents[attacker]
    grid = capacity_grid(t.capacity, t.capacity / grid_divisor)
    for attack in enumerate_attacks(attacker, t, templates, max_fakes, grid):
        attacked_network, attacked_profile = apply_attack(network, profile, attack)
        outcome = run_prdm(attacked_network, attacked_profile, params)
        yield attack, attacked_network, attacked_profile, outcome


def check_psp(
    network: SocialNetwork,
    params: MechanismParams,
    grid_divisor: int = 4,
    max_fakes: int = 2,
) -> PropertyVerdict:
    """No parallel Sybil attack beats reporting truthfully.

    Enumerates attacks that plant fakes beside the attacker (invited by
    her true inviters) over ordered capacity splits, and compares the
    coalition's total reward to the attacker's truthful reward.
    """
    profile = ReportProfile.truthful(network)
    base = run_prdm(network, profile, params)
    margin = None
    witness = None
    attacks_checked = 0
    for i in sorted_ids(base.layered.active_agents):
        for attack, _, _, outcome in _attacked_runs(
            network, profile, params, i, ("parallel",), max_fakes, grid_divisor
        ):
            attacks_checked += 1
            coalition = sum(
                (outcome.rewards.get(j, ZERO) for j in attack.identities), ZERO
            )
            gain = coalition - base.rewards[i]
            if margin is None or gain > margin:
                margin = gain
                if gain > 0:
                    witness = {
                        "agent": i,
                        "attack": attack,
                        "coalition_reward": coalition,
                        "truthful_reward": base.rewards[i],
                    }
    return PropertyVerdict(
        name="parallel-sybil-proofness",
        holds=margin is None or margin <= 0,
        margin=margin,
        witness=witness,
        details={"attacks_checked": attacks_checked},
    )


def check_gamma_sp(
    network: SocialNetwork,
    params: MechanismParams,
    grid_divisor: int = 4,
    max_fakes: int = 2,
    templates: Tuple[str, ...] = DEFAULT_TEMPLATES,
) -> Tuple[PropertyVerdict, MajorityAssumptionReport]:
    """Bounded-gain Sybil-proofness plus its two supporting inequalities.

    For every active agent and every enumerated attack: the coalition's
    total contribution-phase weight must not exceed the attacker's
    truthful weight (checked unconditionally); and, for agents under the
    majority threshold (all agents when beta is zero, where the bound is
    plain Sybil-proofness), the coalition's total reward must not exceed
    1/(1-beta) times the truthful reward, nor its receipts from outside
    the coalition exceed 1/(1-beta) times the truthful receipts. Agents
    over the threshold are exempt from the reward bounds and listed in
    the verdict details.
    """
    profile = ReportProfile.truthful(network)
    base = run_prdm(network, profile, params)
    assumption = majority_assumption_report(network, profile, params)
    gamma = Fraction(1) / (1 - params.beta)
    sp_margin = None
    weight_margin = None
    receipt_margin = None
    witness = None
    weight_witness = None
    receipt_witness = None
    attacks_checked = 0
    bounded_agents = []
    for i in sorted_ids(base.layered.active_agents):
        bounded = params.beta == 0 or assumption.entries[i].satisfied
        if bounded:
            bounded_agents.append(i)
        for attack, _, attacked_profile, outcome in _attacked_runs(
            network, profile, params, i, templates, max_fakes, grid_divisor
        ):
            attacks_checked += 1
            coalition = frozenset(attack.identities)
            coalition_weight = sum(
                (outcome.weights.get(j, ZERO) for j in coalition), ZERO
            )
            weight_gain = coalition_weight - base.weights[i]
            if weight_margin is None or weight_gain > weight_margin:
                weight_margin = weight_gain
                if weight_gain > 0:
                    weight_witness = {
                        "agent": i,
                        "attack": attack,
                        "coalition_weight": coalition_weight,
                        "truthful_weight": base.weights[i],
                    }
            if not bounded:
                continue
            coalition_reward = sum(
                (outcome.rewards.get(j, ZERO) for j in coalition), ZERO
            )
            sp_gain = coalition_reward - gamma * base.rewards[i]
            if sp_margin is None or sp_gain > sp_margin:
                sp_margin = sp_gain
                if sp_gain > 0:
                    witness = {
                        "agent": i,
                        "attack": attack,
                        "coalition_reward": coalition_reward,
                        "truthful_reward": base.rewards[i],
                        "gamma": gamma,
                    }
            if params.beta > 0 and outcome.layered.num_layers > 1:
                transfers = propagation_transfers(
                    outcome.layered, attacked_profile, outcome.weights, params
                )
                outside_receipts = sum(
                    (
                        amount
                        for (payer, inviter), amount in transfers.items()
                        if inviter in coalition and payer not in coalition
                    ),
                    ZERO,
                )
            else:
                outside_receipts = ZERO
            receipt_gain = outside_receipts - gamma * base.reward_parts[i].received
            if receipt_margin is None or receipt_gain > receipt_margin:
                receipt_margin = receipt_gain
                if receipt_gain > 0:
                    receipt_witness = {
                        "agent": i,
                        "attack": attack,
                        "outside_receipts": outside_receipts,
                        "truthful_receipts": base.reward_parts[i].received,
                        "gamma": gamma,
                    }
    reward_ok = sp_margin is None or sp_margin <= 0
    weight_ok = weight_margin is None or weight_margin <= 0
    receipt_ok = receipt_margin is None or receipt_margin <= 0
    verdict = PropertyVerdict(
        name="bounded-sybil-gain",
        holds=reward_ok and weight_ok and receipt_ok,
        margin=sp_margin,
        witness=witness or weight_witness or receipt_witness,
        details={
            "gamma": gamma,
            "attacks_checked": attacks_checked,
            "bounded_agents": sorted_ids(bounded_agents),
            "exempt_agents": assumption.violating_agents
            if params.beta > 0
            else (),
            "coalition_weight_bounded": weight_ok,
            "coalition_weight_margin": weight_margin,
            "coalition_weight_witness": weight_witness,
            "outside_receipt_bounded": receipt_ok,
            "outside_receipt_margin": receipt_margin,
            "outside_receipt_witness": receipt_witness,
        },
    )
    return verdict, assumption


def check_baseline_invariance(
    network: SocialNetwork,
    params: MechanismParams,
    grid_divisor: int = 4,
    max_fakes: int = 2,
) -> PropertyVerdict:
    """The equal-split baseline ignores everything agents do.

    Under any enumerated misreport or Sybil attack: every real agent's
    equal-split reward is unchanged, and the attacking coalition's total
    equals the attacker's truthful baseline reward (fakes never enter the
    seed set). Non-participation by non-seed agents is also checked.
    """
    profile = ReportProfile.truthful(network)
    base = run_equal_split_baseline(network, profile, params.budget)
    witness = None
    attacks_checked = 0
    for i in sorted_ids(network.agents):
        t = network.agents[i]
        grid = capacity_grid(t.capacity, t.capacity / grid_divisor)
        for attack in enumerate_attacks(i, t, DEFAULT_TEMPLATES, max_fakes, grid):
            attacked_network, attacked_profile = apply_attack(network, profile, attack)
            attacks_checked += 1
            after = run_equal_split_baseline(
                attacked_network, attacked_profile, params.budget
            )
            changed = [j for j in network.agents if after[j] != base[j]]
            coalition = sum((after.get(j, ZERO) for j in attack.identities), ZERO)
            if changed or coalition != base[i]:
                if witness is None:
                    witness = {
                        "agent": i,
                        "attack": attack,
                        "changed_agents": sorted_ids(changed),
                        "coalition_reward": coalition,
                        "truthful_reward": base[i],
                    }
        if i not in network.sponsor_children:
            after = run_equal_split_baseline(
                network, profile.without(i), params.budget
            )
            if any(after[j] != base[j] for j in network.agents) and witness is None:
                witness = {"agent": i, "attack": "non-participation"}
    return PropertyVerdict(
        name="baseline-invariance",
        holds=witness is None,
        margin=ZERO if witness is None else None,
        witness=witness,
        details={"attacks_checked": attacks_checked},
    )


def sweep_attack_utility(
    network: SocialNetwork,
    params: MechanismParams,
    attacker: AgentId,
    deltas: Sequence[Fraction],
    scenarios: Optional[Sequence[Tuple[str, Iterable[AgentId]]]] = None,
) -> List[SweepRow]:
    """Coalition reward as a function of capacity handed to one fake child.

    For each scenario (a label and the subset of true children the
    attacker keeps reporting) and each transfer amount delta, the
    attacker reports capacity - delta and one fake child reporting delta;
    delta zero means no fake at all. Rows are ordered scenario-major,
    delta ascending.
    """
    if attacker not in network.agents:
        raise ValueError(f"unknown attacker {attacker!r}")
    t = network.agents[attacker]
    profile = ReportProfile.truthful(network)
    if attacker not in build_active_network(network, profile).depth:
        raise ValueError(f"attacker {attacker!r} is not active under truthful reports")
    if scenarios is None:
        scenarios = (("all-children", t.children),)
    amounts = sorted(set(Fraction(d) for d in deltas))
    rows = []
    for label, kept in scenarios:
        kept = frozenset(kept)
        stray = kept - t.children
        if stray:
            raise ValueError(f"scenario {label!r} keeps non-children {sorted_ids(stray)!r}")
        for delta in amounts:
            if not 0 <= delta < t.capacity:
                raise ValueError(
                    f"delta must lie in [0, {t.capacity}), got {delta}"
                )
            if delta == 0:
                attack = SybilAttack(
                    attacker,
                    (attacker,),
                    {attacker: Report(kept, t.capacity)},
                    template="children",
                )
            else:
                fake = f"{attacker}~f1"
                attack = SybilAttack(
                    attacker,
                    (attacker, fake),
                    {
                        attacker: Report(kept | {fake}, t.capacity - delta),
                        fake: Report(frozenset(), delta),
                    },
                    template="children",
                )
            attacked_network, attacked_profile = apply_attack(network, profile, attack)
            outcome = run_prdm(attacked_network, attacked_profile, params)
            utility = sum(
                (outcome.rewards.get(j, ZERO) for j in attack.identities), ZERO
            )
            rows.append(SweepRow(label, delta, utility))
    return rows
