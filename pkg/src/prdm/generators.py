"""Instance generators: the reference example, fixed families, random graphs.

Random generation is fully deterministic given the config: capacities are
drawn first in id order, then directed edges in sorted pair order, from a
single `random.Random(seed)`. Capacities land on a quarter-unit grid so
instances stay exact rationals end to end.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, NamedTuple, Tuple

from .mechanism import MechanismParams
from .network import AgentType, ReportProfile, SocialNetwork


class GeneratorError(ValueError):
    """Invalid generator configuration."""


@dataclass(frozen=True)
class GeneratorConfig:
    """Knobs for `gen_random`.

    capacity_range bounds are inclusive; draws land on multiples of 1/4.
    seed_set_size picks how many of the lowest ids the sponsor invites.
    """

    seed: int
    agent_count: int
    edge_probability: Fraction = Fraction(1, 3)
    capacity_range: Tuple[Fraction, Fraction] = (Fraction(1), Fraction(10))
    seed_set_size: int = 1

    def __post_init__(self):
        object.__setattr__(self, "edge_probability", Fraction(self.edge_probability))
        lo, hi = self.capacity_range
        object.__setattr__(self, "capacity_range", (Fraction(lo), Fraction(hi)))
        if self.agent_count < 1:
            raise GeneratorError("agent_count must be at least 1")
        if not (0 <= self.edge_probability <= 1):
            raise GeneratorError("edge_probability must lie in [0, 1]")
        lo, hi = self.capacity_range
        if not (0 < lo <= hi):
            raise GeneratorError("capacity_range must satisfy 0 < low <= high")
        if not (1 <= self.seed_set_size <= self.agent_count):
            raise GeneratorError("seed_set_size must lie in [1, agent_count]")


def gen_random(config: GeneratorConfig) -> SocialNetwork:
    """Random directed invitation graph over agents 1..agent_count."""
    rng = random.Random(config.seed)
    n = config.agent_count
    lo, hi = config.capacity_range
    quarter_steps = int((hi - lo) * 4)
    capacities = {
        i: lo + Fraction(rng.randint(0, quarter_steps), 4) for i in range(1, n + 1)
    }
    threshold = float(config.edge_probability)
    children = {i: set() for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            if i != j and rng.random() < threshold:
                children[i].add(j)
    agents = {
        i: AgentType(frozenset(children[i]), capacities[i]) for i in range(1, n + 1)
    }
    seeds = frozenset(range(1, config.seed_set_size + 1))
    return SocialNetwork(seeds, agents)


def chain_network(length: int, capacity: Fraction = Fraction(10)) -> SocialNetwork:
    """A single invitation line: sponsor -> 1 -> 2 -> ... -> length."""
    if length < 1:
        raise GeneratorError("length must be at least 1")
    agents = {
        i: AgentType(frozenset({i + 1}) if i < length else frozenset(), capacity)
        for i in range(1, length + 1)
    }
    return SocialNetwork(frozenset({1}), agents)


def star_network(leaves: int, capacity: Fraction = Fraction(10)) -> SocialNetwork:
    """A hub invited by the sponsor, inviting `leaves` leaf agents."""
    if leaves < 0:
        raise GeneratorError("leaves must be nonnegative")
    agents = {1: AgentType(frozenset(range(2, leaves + 2)), capacity)}
    for i in range(2, leaves + 2):
        agents[i] = AgentType(frozenset(), capacity)
    return SocialNetwork(frozenset({1}), agents)


def balanced_tree_network(size: int, capacity: Fraction = Fraction(10)) -> SocialNetwork:
    """Heap-shaped binary tree on agents 1..size, rooted at agent 1."""
    if size < 1:
        raise GeneratorError("size must be at least 1")
    agents = {}
    for i in range(1, size + 1):
        kids = frozenset(c for c in (2 * i, 2 * i + 1) if c <= size)
        agents[i] = AgentType(kids, capacity)
    return SocialNetwork(frozenset({1}), agents)


def reference_instance() -> Tuple[SocialNetwork, ReportProfile, MechanismParams]:
    """The canonical 8-agent example used across docs and tests.

    Three seed agents, two of whom share a grandchild, capacities all 10;
    budget 100, sponsor capacity 20, propagation share 1/5.
    """
    ten = Fraction(10)
    agents = {
        1: AgentType(frozenset({4, 5}), ten),
        2: AgentType(frozenset({6}), ten),
        3: AgentType(frozenset({6}), ten),
        4: AgentType(frozenset({7}), ten),
        5: AgentType(frozenset(), ten),
        6: AgentType(frozenset({8}), ten),
        7: AgentType(frozenset(), ten),
        8: AgentType(frozenset(), ten),
    }
    network = SocialNetwork(frozenset({1, 2, 3}), agents)
    profile = ReportProfile.truthful(network)
    params = MechanismParams(
        budget=Fraction(100), sponsor_capacity=Fraction(20), beta=Fraction(1, 5)
    )
    return network, profile, params


class GeneratedInstance(NamedTuple):
    name: str
    network: SocialNetwork
    profile: ReportProfile


def standard_families() -> List[GeneratedInstance]:
    """Small fixed-shape instances: a chain, a star, a balanced tree."""
    nets = [
        ("chain-5", chain_network(5)),
        ("star-4", star_network(4)),
        ("tree-7", balanced_tree_network(7)),
    ]
    return [
        GeneratedInstance(name, net, ReportProfile.truthful(net)) for name, net in nets
    ]


def random_suite(
    count: int,
    base_seed: int,
    min_agents: int = 3,
    max_agents: int = 10,
) -> List[GeneratedInstance]:
    """Deterministic batch of random instances with varied shape knobs."""
    if count < 0:
        raise GeneratorError("count must be nonnegative")
    if not (1 <= min_agents <= max_agents):
        raise GeneratorError("need 1 <= min_agents <= max_agents")
    densities = (Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))
    out = []
    span = max_agents - min_agents + 1
    for k in range(count):
        agent_count = min_agents + (k % span)
        config = GeneratorConfig(
            seed=base_seed * 1_000_003 + k,
            agent_count=agent_count,
            edge_probability=densities[k % len(densities)],
            seed_set_size=min(1 + (k % 3), agent_count),
        )
        net = gen_random(config)
        out.append(
            GeneratedInstance(f"random-{k}", net, ReportProfile.truthful(net))
        )
    return out
