"""The propagation reward distribution mechanism, exactly.

Two phases over the layered active network. Contribution: layer by layer,
each agent's weight is her reported share of the cumulative capacity seen
so far, times the budget remaining when her layer is reached. Propagation:
layer-1 agents keep their whole weight; every deeper agent keeps a
(1 - beta) slice and passes the beta slice up, split among her active
inviters in proportion to their reported capacities.

All arithmetic is `fractions.Fraction`, so the budget identities hold with
equality, not within a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, NamedTuple, Tuple

from .network import (
    AgentId,
    LayeredActiveNetwork,
    ReportProfile,
    SocialNetwork,
    build_active_network,
    id_sort_key,
)


class MechanismError(ValueError):
    """Invalid mechanism parameters or inconsistent outcome state."""


@dataclass(frozen=True)
class MechanismParams:
    """Budget, sponsor capacity, and the propagation share beta."""

    budget: Fraction
    sponsor_capacity: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "budget", Fraction(self.budget))
        object.__setattr__(self, "sponsor_capacity", Fraction(self.sponsor_capacity))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.budget <= 0:
            raise MechanismError(f"budget must be positive, got {self.budget}")
        if self.sponsor_capacity <= 0:
            raise MechanismError(
                f"sponsor capacity must be positive, got {self.sponsor_capacity}"
            )
        if not (0 <= self.beta <= Fraction(1, 2)):
            raise MechanismError(f"beta must lie in [0, 1/2], got {self.beta}")


class RewardParts(NamedTuple):
    """Reward split into the kept slice and the received inviter shares."""

    retained: Fraction
    received: Fraction

    @property
    def total(self) -> Fraction:
        return self.retained + self.received


@dataclass(frozen=True)
class MechanismOutcome:
    """Everything the mechanism computed for one run.

    `layer_budgets` is (B_1, ..., B_{d+1}): the budget available to each
    layer followed by the unspent residual. `cumulative_capacities` is the
    per-layer running total of sponsor capacity plus all reported
    capacities with depth <= k. Rewards and weights cover every agent of
    the network; inactive agents hold exact zeros.
    """

    params: MechanismParams
    layered: LayeredActiveNetwork
    weights: Mapping[AgentId, Fraction]
    layer_budgets: Tuple[Fraction, ...]
    cumulative_capacities: Tuple[Fraction, ...]
    rewards: Mapping[AgentId, Fraction]
    reward_parts: Mapping[AgentId, RewardParts]

    @property
    def residual_budget(self) -> Fraction:
        return self.layer_budgets[-1]

    def total_rewards(self) -> Fraction:
        return sum(self.rewards.values(), Fraction(0))


def contribution_phase(
    layered: LayeredActiveNetwork, profile: ReportProfile, params: MechanismParams
) -> Tuple[Dict[AgentId, Fraction], Tuple[Fraction, ...], Tuple[Fraction, ...]]:
    """Per-agent weights, per-layer budgets, and cumulative capacities."""
    weights: Dict[AgentId, Fraction] = {}
    budgets = [params.budget]
    cumulative = []
    running = params.sponsor_capacity
    for index in range(layered.num_layers):
        layer = layered.sorted_layer(index)
        running += sum(
            (profile.reports[i].reported_capacity for i in layer), Fraction(0)
        )
        cumulative.append(running)
        available = budgets[-1]
        spent = Fraction(0)
        for i in layer:
            w = profile.reports[i].reported_capacity / running * available
            weights[i] = w
            spent += w
        budgets.append(available - spent)
    return weights, tuple(budgets), tuple(cumulative)


def propagation_transfers(
    layered: LayeredActiveNetwork,
    profile: ReportProfile,
    weights: Mapping[AgentId, Fraction],
    params: MechanismParams,
) -> Dict[Tuple[AgentId, AgentId], Fraction]:
    """Upward transfers keyed by (payer, inviter).

    Each agent at depth >= 2 sends beta * weight upward, split among her
    active inviters proportionally to their reported capacities. Exposed
    separately because coalition accounting needs per-edge amounts, not
    just per-agent totals.
    """
    transfers: Dict[Tuple[AgentId, AgentId], Fraction] = {}
    for index in range(1, layered.num_layers):
        for i in layered.sorted_layer(index):
            inviters = sorted(layered.parents[i], key=id_sort_key)
            if not inviters:
                raise MechanismError(
                    f"agent {i!r} at depth {index + 1} has no active inviter"
                )
            denom = sum(
                (profile.reports[j].reported_capacity for j in inviters), Fraction(0)
            )
            pool = params.beta * weights[i]
            for j in inviters:
                transfers[(i, j)] = (
                    profile.reports[j].reported_capacity / denom * pool
                )
    return transfers


def propagation_phase(
    layered: LayeredActiveNetwork,
    profile: ReportProfile,
    weights: Mapping[AgentId, Fraction],
    params: MechanismParams,
) -> Dict[AgentId, RewardParts]:
    """Split every active agent's reward into retained and received parts."""
    retained: Dict[AgentId, Fraction] = {}
    received: Dict[AgentId, Fraction] = {i: Fraction(0) for i in layered.depth}
    for i in layered.depth:
        if layered.depth[i] == 1:
            retained[i] = weights[i]
        else:
            retained[i] = (1 - params.beta) * weights[i]
    for (payer, inviter), amount in propagation_transfers(
        layered, profile, weights, params
    ).items():
        received[inviter] += amount
    return {i: RewardParts(retained[i], received[i]) for i in layered.depth}


def run_prdm(
    network: SocialNetwork, profile: ReportProfile, params: MechanismParams
) -> MechanismOutcome:
    """Run both phases and assemble the outcome for every network agent."""
    layered = build_active_network(network, profile)
    weights: Dict[AgentId, Fraction] = {i: Fraction(0) for i in network.agents}
    rewards: Dict[AgentId, Fraction] = {i: Fraction(0) for i in network.agents}
    parts: Dict[AgentId, RewardParts] = {
        i: RewardParts(Fraction(0), Fraction(0)) for i in network.agents
    }
    if layered.num_layers == 0:
        return MechanismOutcome(
            params=params,
            layered=layered,
            weights=weights,
            layer_budgets=(params.budget,),
            cumulative_capacities=(),
            rewards=rewards,
            reward_parts=parts,
        )
    active_weights, budgets, cumulative = contribution_phase(layered, profile, params)
    active_parts = propagation_phase(layered, profile, active_weights, params)
    weights.update(active_weights)
    for i, p in active_parts.items():
        parts[i] = p
        rewards[i] = p.total
    return MechanismOutcome(
        params=params,
        layered=layered,
        weights=weights,
        layer_budgets=budgets,
        cumulative_capacities=cumulative,
        rewards=rewards,
        reward_parts=parts,
    )


def residual_budget_closed_form(outcome: MechanismOutcome) -> Fraction:
    """Residual after the last layer via the telescoped product.

    Each layer k multiplies the remaining budget by the previous
    cumulative capacity over the current one, so the residual collapses
    to sponsor_capacity * budget / (final cumulative capacity). Cross-
    checked against the iteratively computed residual; a mismatch means
    an internal bug, not bad input.
    """
    params = outcome.params
    if not outcome.cumulative_capacities:
        expected = params.budget
    else:
        expected = (
            params.sponsor_capacity * params.budget / outcome.cumulative_capacities[-1]
        )
    if expected != outcome.residual_budget:
        raise MechanismError(
            "closed-form residual disagrees with the iterative run: "
            f"{expected} vs {outcome.residual_budget}"
        )
    return expected


def run_equal_split_baseline(
    network: SocialNetwork, profile: ReportProfile, budget: Fraction
) -> Dict[AgentId, Fraction]:
    """Reference mechanism: split the budget equally over the seed set.

    Every reporting seed agent gets budget / |seed set|; everyone else
    gets zero and nothing propagates. Useful as the incentive-trivial
    baseline: rewards depend only on the sponsor's own invite list.
    """
    budget = Fraction(budget)
    if budget <= 0:
        raise MechanismError(f"budget must be positive, got {budget}")
    share = budget / len(network.sponsor_children)
    rewards = {i: Fraction(0) for i in network.agents}
    for i in network.sponsor_children:
        if i in profile.reports:
            rewards[i] = share
    return rewards
