"""Sybil attacks: representation, validation, application, enumeration.

An attack by one agent replaces her single report with a set of identities
(herself plus fake ids) and a report for each. Constraints mirror what a
real attacker could do: the identities' reported capacities sum to at most
her true capacity, and identities only invite her true children or each
other. A parallel attack additionally wires the fakes as children of the
attacker's true inviters, which is the one sanctioned way an attack leaks
into other agents' reports.

`enumerate_attacks` walks a bounded but adversarially chosen slice of this
space: capacity misreports, fake chains below the attacker, fakes as
direct children, parallel fakes beside her, and re-hangs of her true
children onto fakes, over a configurable capacity grid.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, Iterator, Mapping, Optional, Tuple

from .network import (
    SPONSOR_ID,
    AgentId,
    AgentType,
    NetworkError,
    Report,
    ReportProfile,
    SocialNetwork,
    id_sort_key,
    sorted_ids,
    truthful_report,
)

DEFAULT_TEMPLATES = ("misreport", "chain", "children", "parallel", "rehang")


class AttackError(ValueError):
    """An attack violates the feasibility constraints."""


@dataclass(frozen=True)
class SybilAttack:
    """One agent's identity set and the report filed by each identity.

    `identities` starts with the attacker herself; the rest are fake ids
    that must not exist in the network the attack is applied to. The
    attack never touches other agents' reports.
    """

    attacker: AgentId
    identities: Tuple[AgentId, ...]
    identity_reports: Mapping[AgentId, Report]
    template: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "identities", tuple(self.identities))
        object.__setattr__(
            self,
            "identity_reports",
            {i: self.identity_reports[i] for i in sorted_ids(self.identity_reports)},
        )

    @property
    def fake_ids(self) -> Tuple[AgentId, ...]:
        return self.identities[1:]

    def total_reported_capacity(self) -> Fraction:
        return sum(
            (r.reported_capacity for r in self.identity_reports.values()), Fraction(0)
        )


@dataclass(frozen=True)
class ParallelSybilAttack(SybilAttack):
    """Sybil attack whose fakes are invited by the attacker's true inviters.

    `inviter_subsets` optionally restricts which true parents invite each
    fake; None means every true parent invites every fake. Parents who
    report the attacker get the fakes appended to their reported children
    when the attack is applied.
    """

    inviter_subsets: Optional[Mapping[AgentId, FrozenSet[AgentId]]] = None

    def __post_init__(self):
        super().__post_init__()
        if self.inviter_subsets is not None:
            frozen = {
                f: frozenset(ps)
                for f, ps in sorted(
                    self.inviter_subsets.items(), key=lambda kv: id_sort_key(kv[0])
                )
            }
            object.__setattr__(self, "inviter_subsets", frozen)


def validate_attack(
    true_type: AgentType,
    attack: SybilAttack,
    network: Optional[SocialNetwork] = None,
) -> list:
    """Feasibility violations of an attack against the attacker's type.

    Type-local constraints are always checked. Passing the network also
    checks cross-network ones: fake ids must be genuinely new, and
    parallel inviter subsets must be true parents of the attacker.
    Returns a list of human-readable violations, empty when feasible.
    """
    problems = []
    ids = attack.identities
    if not ids:
        return ["attack has no identities"]
    if ids[0] != attack.attacker:
        problems.append("identities must start with the attacker")
    if len(set(ids)) != len(ids):
        problems.append(f"duplicate identities: {ids!r}")
    id_set = frozenset(ids)
    report_keys = frozenset(attack.identity_reports)
    if report_keys != id_set:
        problems.append(
            f"identity reports {sorted_ids(report_keys)!r} do not match "
            f"identities {sorted_ids(id_set)!r}"
        )
        return problems
    total = attack.total_reported_capacity()
    if total > true_type.capacity:
        problems.append(
            f"identities report {total} capacity in total, above the true {true_type.capacity}"
        )
    allowed = true_type.children | id_set
    for ident in ids:
        report = attack.identity_reports[ident]
        if ident in report.reported_children:
            problems.append(f"identity {ident!r} invites itself")
        stray = report.reported_children - allowed
        if stray:
            problems.append(
                f"identity {ident!r} invites {sorted_ids(stray)!r}, outside the "
                "attacker's true children and her identities"
            )
    if network is not None:
        if attack.attacker not in network.agents:
            problems.append(f"attacker {attack.attacker!r} is not in the network")
        for fake in attack.fake_ids:
            if fake in network.agents or fake == SPONSOR_ID:
                problems.append(f"fake id {fake!r} collides with an existing agent")
    if isinstance(attack, ParallelSybilAttack) and attack.inviter_subsets is not None:
        stray_fakes = frozenset(attack.inviter_subsets) - frozenset(attack.fake_ids)
        if stray_fakes:
            problems.append(
                f"inviter subsets given for non-fake ids {sorted_ids(stray_fakes)!r}"
            )
        if network is not None and attack.attacker in network.agents:
            true_parents = network.parents_of(attack.attacker)
            for fake, parents in attack.inviter_subsets.items():
                bad = frozenset(parents) - true_parents
                if bad:
                    problems.append(
                        f"fake {fake!r} assigned inviters {sorted_ids(bad)!r} that are "
                        "not true parents of the attacker"
                    )
    return problems


def apply_attack(
    network: SocialNetwork, profile: ReportProfile, attack: SybilAttack
) -> Tuple[SocialNetwork, ReportProfile]:
    """Augmented network and profile with the attack in effect.

    Fake identities become real nodes whose types equal their reports; the
    attacker's type gains the fakes as invitable children. For parallel
    attacks, the attacker's true parents additionally gain the fakes, both
    in their types and (for parents who report the attacker) in their
    reported children. All other reports are untouched. Raises AttackError
    if the attack is infeasible.
    """
    problems = validate_attack(network.agents[attack.attacker], attack, network)
    if problems:
        raise AttackError("; ".join(problems))

    fakes = attack.fake_ids
    agents: Dict[AgentId, AgentType] = dict(network.agents)
    old = agents[attack.attacker]
    agents[attack.attacker] = AgentType(old.children | frozenset(fakes), old.capacity)
    for fake in fakes:
        report = attack.identity_reports[fake]
        agents[fake] = AgentType(report.reported_children, report.reported_capacity)

    reports: Dict[AgentId, Report] = dict(profile.reports)
    for ident in attack.identities:
        reports[ident] = attack.identity_reports[ident]

    if isinstance(attack, ParallelSybilAttack):
        true_parents = network.parents_of(attack.attacker)
        for fake in fakes:
            if attack.inviter_subsets is None:
                inviters = true_parents
            else:
                inviters = attack.inviter_subsets.get(fake, true_parents)
            for parent in inviters:
                ptype = agents[parent]
                agents[parent] = AgentType(ptype.children | {fake}, ptype.capacity)
                pr = reports.get(parent)
                if pr is not None and attack.attacker in pr.reported_children:
                    reports[parent] = Report(
                        pr.reported_children | {fake}, pr.reported_capacity
                    )

    try:
        attacked_network = SocialNetwork(network.sponsor_children, agents)
        attacked_profile = ReportProfile(reports)
    except NetworkError as exc:  # e.g. a fake invites an agent nobody defined
        raise AttackError(str(exc)) from exc
    return attacked_network, attacked_profile


def capacity_grid(capacity: Fraction, step: Fraction) -> Tuple[Fraction, ...]:
    """Positive multiples of `step` up to `capacity`, always ending at it.

    The grid is what enumeration draws misreported capacities and fake
    capacity splits from; it always contains the smallest step and the
    true capacity itself.
    """
    capacity = Fraction(capacity)
    step = Fraction(step)
    if capacity <= 0 or step <= 0:
        raise ValueError("capacity and step must be positive")
    values = []
    k = 1
    while step * k < capacity:
        values.append(step * k)
        k += 1
    values.append(capacity)
    return tuple(values)


def _child_subsets(children: FrozenSet[AgentId]) -> Iterator[FrozenSet[AgentId]]:
    """All subsets, smallest first, deterministic within each size."""
    ordered = sorted_ids(children)
    for size in range(len(ordered) + 1):
        for combo in combinations(ordered, size):
            yield frozenset(combo)


def enumerate_misreports(
    true_type: AgentType, grid: Iterable[Fraction]
) -> Iterator[Report]:
    """Every (children subset) x (grid capacity) single-agent report.

    The truthful report appears iff the grid contains the true capacity,
    which `capacity_grid` guarantees.
    """
    caps = tuple(sorted(set(Fraction(c) for c in grid)))
    for cap in caps:
        if cap <= 0:
            raise ValueError(f"grid capacities must be positive, got {cap}")
    for subset in _child_subsets(true_type.children):
        for cap in caps:
            yield Report(subset, cap)


def _fake_ids_for(attacker: AgentId, count: int) -> Tuple[str, ...]:
    return tuple(f"{attacker}~f{k}" for k in range(1, count + 1))


def _capacity_splits(
    grid: Tuple[Fraction, ...], fakes: int, capacity: Fraction
) -> Iterator[Tuple[Fraction, ...]]:
    """Ordered grid tuples for the fakes, keeping the attacker positive."""
    for combo in product(grid, repeat=fakes):
        if sum(combo) < capacity:
            yield combo


def enumerate_attacks(
    attacker: AgentId,
    true_type: AgentType,
    templates: Tuple[str, ...] = DEFAULT_TEMPLATES,
    max_fakes: int = 2,
    grid: Optional[Iterable[Fraction]] = None,
) -> Iterator[SybilAttack]:
    """Bounded deterministic stream of candidate attacks by one agent.

    Always starts with the truthful no-op. The "misreport" template adds
    every single-identity deviation from `enumerate_misreports`. Each
    remaining template, for 1..max_fakes fakes and every ordered capacity
    split from the grid (total strictly below the true capacity, the
    remainder kept by the attacker), contributes:

    - "chain":    fakes in a line below the attacker;
    - "children": fakes as direct children of the attacker;
    - "parallel": fakes beside the attacker, invited by her true parents;
    - "rehang":   fakes as children, with every way of reassigning at
                  least one true child to some fake.

    Identical report payloads can appear under different templates; the
    stream is not deduplicated.
    """
    if max_fakes < 0:
        raise ValueError("max_fakes must be nonnegative")
    unknown = set(templates) - set(DEFAULT_TEMPLATES)
    if unknown:
        raise ValueError(f"unknown templates: {sorted(unknown)!r}")
    caps = tuple(
        sorted(set(Fraction(c) for c in (grid if grid is not None else ())))
    ) or capacity_grid(true_type.capacity, true_type.capacity / 4)

    truthful = truthful_report(true_type)
    yield SybilAttack(attacker, (attacker,), {attacker: truthful}, template="truthful")

    if "misreport" in templates:
        for report in enumerate_misreports(true_type, caps):
            if report == truthful:
                continue
            yield SybilAttack(attacker, (attacker,), {attacker: report}, template="misreport")

    children = sorted_ids(true_type.children)
    for count in range(1, max_fakes + 1):
        fakes = _fake_ids_for(attacker, count)
        identities = (attacker,) + fakes
        for split in _capacity_splits(caps, count, true_type.capacity):
            kept = true_type.capacity - sum(split)
            if "chain" in templates:
                reports = {
                    attacker: Report(true_type.children | {fakes[0]}, kept)
                }
                for k, fake in enumerate(fakes):
                    below = frozenset({fakes[k + 1]}) if k + 1 < count else frozenset()
                    reports[fake] = Report(below, split[k])
                yield SybilAttack(attacker, identities, reports, template="chain")
            if "children" in templates:
                reports = {
                    attacker: Report(true_type.children | frozenset(fakes), kept)
                }
                for k, fake in enumerate(fakes):
                    reports[fake] = Report(frozenset(), split[k])
                yield SybilAttack(attacker, identities, reports, template="children")
            if "parallel" in templates:
                reports = {attacker: Report(true_type.children, kept)}
                for k, fake in enumerate(fakes):
                    reports[fake] = Report(frozenset(), split[k])
                yield ParallelSybilAttack(
                    attacker, identities, reports, template="parallel"
                )
            if "rehang" in templates and children:
                for assignment in product(range(count + 1), repeat=len(children)):
                    if not any(assignment):
                        continue  # nothing moved: same as "children"
                    moved = {fake: set() for fake in fakes}
                    kept_children = set()
                    for child, slot in zip(children, assignment):
                        if slot == 0:
                            kept_children.add(child)
                        else:
                            moved[fakes[slot - 1]].add(child)
                    reports = {
                        attacker: Report(
                            frozenset(kept_children) | frozenset(fakes), kept
                        )
                    }
                    for k, fake in enumerate(fakes):
                        reports[fake] = Report(frozenset(moved[fake]), split[k])
                    yield SybilAttack(attacker, identities, reports, template="rehang")
