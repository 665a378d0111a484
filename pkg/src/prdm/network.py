"""Invitation-network model: agent types, reports, and the layered view.

An instance is a sponsor with a seed set of directly invited agents plus,
for every agent, a private type: the set of agents she can invite
(children) and a positive capacity. Agents act by reporting a children
subset and a capacity; the mechanism only ever sees reports.

The mechanism operates on the *layered active network*: agents who filed
a report and are reachable from the sponsor through reported invitations,
arranged by BFS depth. Only edges between consecutive layers are kept;
same-layer and skip-layer invitations carry no weight or propagation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Mapping, Tuple, Union

AgentId = Union[int, str]

#: Reserved id for the sponsor. Never appears as an agent or an invitee.
SPONSOR_ID = "sponsor"


class NetworkError(ValueError):
    """A social network, report, or profile is malformed."""


def id_sort_key(agent_id: AgentId):
    """Total order over mixed int/str ids: ints first, then strings."""
    if isinstance(agent_id, str):
        return (1, agent_id, 0)
    return (0, "", agent_id)


def sorted_ids(ids: Iterable[AgentId]) -> Tuple[AgentId, ...]:
    return tuple(sorted(ids, key=id_sort_key))


def _freeze_children(raw: Iterable[AgentId], owner: str) -> FrozenSet[AgentId]:
    items = list(raw)
    frozen = frozenset(items)
    if len(frozen) != len(items):
        raise NetworkError(f"duplicate children in {owner}: {items!r}")
    if SPONSOR_ID in frozen:
        raise NetworkError(f"{owner} lists the sponsor as a child")
    return frozen


@dataclass(frozen=True)
class AgentType:
    """True private type: invitable children and positive capacity."""

    children: FrozenSet[AgentId]
    capacity: Fraction

    def __post_init__(self):
        object.__setattr__(self, "children", _freeze_children(self.children, "agent type"))
        object.__setattr__(self, "capacity", Fraction(self.capacity))
        if self.capacity <= 0:
            raise NetworkError(f"capacity must be positive, got {self.capacity}")


@dataclass(frozen=True)
class Report:
    """A strategic report: some children subset and a positive capacity."""

    reported_children: FrozenSet[AgentId]
    reported_capacity: Fraction

    def __post_init__(self):
        object.__setattr__(
            self, "reported_children", _freeze_children(self.reported_children, "report")
        )
        object.__setattr__(self, "reported_capacity", Fraction(self.reported_capacity))
        if self.reported_capacity <= 0:
            raise NetworkError(
                f"reported capacity must be positive, got {self.reported_capacity}"
            )


def truthful_report(agent_type: AgentType) -> Report:
    return Report(agent_type.children, agent_type.capacity)


def validate_report(true_type: AgentType, report: Report) -> list:
    """Constraint violations of a single report against the true type.

    A valid report never invents invitees: reported children must be a
    subset of the true children. Capacity may be under- or over-reported
    (the mechanism is judged on whether that ever helps), so only
    positivity is enforced, and that already happened at construction.
    """
    problems = []
    extra = report.reported_children - true_type.children
    if extra:
        problems.append(f"reported children not invitable: {sorted_ids(extra)!r}")
    return problems


@dataclass(frozen=True)
class SocialNetwork:
    """Sponsor seed set plus the true type of every agent.

    Instances are immutable: mappings are copied at construction and must
    not be mutated afterwards. Ids may be ints or strings; the reserved
    sponsor id is neither an agent nor anyone's child.
    """

    sponsor_children: FrozenSet[AgentId]
    agents: Mapping[AgentId, AgentType]

    def __post_init__(self):
        seeds = frozenset(self.sponsor_children)
        agents = {i: self.agents[i] for i in sorted_ids(self.agents)}
        object.__setattr__(self, "sponsor_children", seeds)
        object.__setattr__(self, "agents", agents)
        if SPONSOR_ID in agents:
            raise NetworkError("the sponsor id is reserved and cannot be an agent")
        if SPONSOR_ID in seeds:
            raise NetworkError("the sponsor cannot invite itself")
        if not seeds:
            raise NetworkError("sponsor seed set is empty")
        for seed in seeds:
            if seed not in agents:
                raise NetworkError(f"seed agent {seed!r} has no type")
        for i, t in agents.items():
            if i in t.children:
                raise NetworkError(f"agent {i!r} invites itself")
            for child in t.children:
                if child not in agents:
                    raise NetworkError(f"agent {i!r} invites unknown agent {child!r}")

    def parents_of(self, agent_id: AgentId) -> FrozenSet[AgentId]:
        """True inviters of an agent (sponsor excluded; see sponsor_children)."""
        return frozenset(i for i, t in self.agents.items() if agent_id in t.children)


@dataclass(frozen=True)
class ReportProfile:
    """Reports of the agents who chose to participate.

    Agents absent from the mapping filed nothing and are treated as
    outside the active network, as are agents only reachable through
    them.
    """

    reports: Mapping[AgentId, Report]

    def __post_init__(self):
        object.__setattr__(self, "reports", {i: self.reports[i] for i in sorted_ids(self.reports)})
        if SPONSOR_ID in self.reports:
            raise NetworkError("the sponsor does not report")

    @classmethod
    def truthful(cls, network: SocialNetwork) -> "ReportProfile":
        return cls({i: truthful_report(t) for i, t in network.agents.items()})

    def with_report(self, agent_id: AgentId, report: Report) -> "ReportProfile":
        updated = dict(self.reports)
        updated[agent_id] = report
        return ReportProfile(updated)

    def without(self, agent_id: AgentId) -> "ReportProfile":
        updated = dict(self.reports)
        updated.pop(agent_id, None)
        return ReportProfile(updated)


def validate_profile(network: SocialNetwork, profile: ReportProfile) -> list:
    """Violations of a profile against the network's true types."""
    problems = []
    for i, report in profile.reports.items():
        if i not in network.agents:
            problems.append(f"report from unknown agent {i!r}")
            continue
        for problem in validate_report(network.agents[i], report):
            problems.append(f"agent {i!r}: {problem}")
    return problems


@dataclass(frozen=True)
class LayeredActiveNetwork:
    """BFS layering of the active agents under a report profile.

    layers[k-1] holds the agents at depth k (depth 1 = reported seed
    agents). `parents` maps each active agent to its active inviters one
    layer up; `retained_edges` are exactly the reported invitations that
    cross consecutive layers downward.
    """

    layers: Tuple[FrozenSet[AgentId], ...]
    depth: Mapping[AgentId, int]
    parents: Mapping[AgentId, FrozenSet[AgentId]]
    retained_edges: FrozenSet[Tuple[AgentId, AgentId]]

    @property
    def num_layers(self) -> int:
        return len(self.layers)

    @property
    def active_agents(self) -> FrozenSet[AgentId]:
        return frozenset(self.depth)

    def sorted_layer(self, index: int) -> Tuple[AgentId, ...]:
        """Agents of layers[index] in deterministic id order."""
        return sorted_ids(self.layers[index])


def build_active_network(
    network: SocialNetwork, profile: ReportProfile
) -> LayeredActiveNetwork:
    """Layer the reporting agents reachable from the sponsor.

    Depth is shortest reported-invitation distance from the sponsor.
    Non-reporters are skipped entirely: they are not placed in a layer
    and their reported-by-others invitations lead nowhere. Reported
    children pointing at non-reporters or at already-shallower agents are
    dropped, which is what confines edges to consecutive layers.
    """
    reports = profile.reports
    for i in reports:
        if i not in network.agents:
            raise NetworkError(f"report from unknown agent {i!r}")

    depth: Dict[AgentId, int] = {}
    layers = []
    frontier = sorted_ids(i for i in network.sponsor_children if i in reports)
    level = 1
    while frontier:
        layers.append(frozenset(frontier))
        for i in frontier:
            depth[i] = level
        nxt = set()
        for i in frontier:
            for child in reports[i].reported_children:
                if child in reports and child not in depth:
                    nxt.add(child)
        frontier = sorted_ids(nxt)
        level += 1

    parents: Dict[AgentId, FrozenSet[AgentId]] = {}
    retained = set()
    for i in depth:
        if depth[i] == 1:
            parents[i] = frozenset()
            continue
        ps = frozenset(
            j
            for j in depth
            if depth[j] == depth[i] - 1 and i in reports[j].reported_children
        )
        parents[i] = ps
        retained.update((j, i) for j in ps)
    return LayeredActiveNetwork(
        layers=tuple(layers),
        depth=depth,
        parents=parents,
        retained_edges=frozenset(retained),
    )
