"""External interfaces: instance/outcome/attack JSON and CSV exports.

All numbers cross the boundary exactly. On the way in, decimal literals
are parsed to Fractions before any float exists; strings accept "10",
"2.5", and "5/2"; mappings accept {"num": ..., "den": ...}. On the way
out, every quantity is written as numerator/denominator plus a 12-place
decimal rendering.

Agent ids are ints or strings. JSON object keys are always strings, so a
key that is a canonical integer literal ("7", "-3", "0") is read back as
an int; anything else ("007", "alice") stays a string.
"""

from __future__ import annotations

import csv
import json
import re
from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .attacks import ParallelSybilAttack, SybilAttack
from .mechanism import MechanismOutcome, MechanismParams
from .network import (
    AgentId,
    AgentType,
    NetworkError,
    Report,
    ReportProfile,
    SocialNetwork,
    id_sort_key,
    sorted_ids,
)
from .properties import (
    AssumptionEntry,
    MajorityAssumptionReport,
    PropertyVerdict,
    SweepRow,
)
from .rationals import format_decimal, parse_rational, rational_fields

PathLike = Union[str, Path]

_CANONICAL_INT = re.compile(r"^(0|-?[1-9][0-9]*)$")


class FormatError(ValueError):
    """A file or JSON payload does not match the documented format."""


def _id_from_json(value) -> AgentId:
    if isinstance(value, bool):
        raise FormatError(f"invalid agent id {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        if _CANONICAL_INT.match(value):
            return int(value)
        return value
    raise FormatError(f"invalid agent id {value!r}")


def _id_to_json(agent_id: AgentId):
    return agent_id


def _reject_duplicate_keys(pairs):
    seen = set()
    for key, _ in pairs:
        if key in seen:
            raise FormatError(f"duplicate key {key!r}")
        seen.add(key)
    return dict(pairs)


def _loads(text: str) -> dict:
    try:
        return json.loads(
            text, parse_float=Fraction, object_pairs_hook=_reject_duplicate_keys
        )
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from exc


def _read(path: PathLike) -> str:
    return Path(path).read_text(encoding="utf-8")


def _write(path: PathLike, payload: dict) -> None:
    Path(path).write_text(
        json.dumps(payload, indent=2, sort_keys=False, default=_json_default) + "\n",
        encoding="utf-8",
    )


def _json_default(value):
    raise TypeError(f"not JSON serializable: {value!r}")


def _capacity_out(value: Fraction) -> str:
    return str(Fraction(value))


# ---------------------------------------------------------------------------
# instances


def instance_to_json(
    network: SocialNetwork,
    profile: Optional[ReportProfile] = None,
    metadata: Optional[dict] = None,
) -> dict:
    """Canonical JSON form of an instance.

    The reports array is omitted when the profile is exactly truthful,
    which is also what loading defaults to.
    """
    payload = {
        "sponsor_children": [_id_to_json(i) for i in sorted_ids(network.sponsor_children)],
        "agents": {
            str(i): {
                "children": [_id_to_json(c) for c in sorted_ids(t.children)],
                "capacity": _capacity_out(t.capacity),
            }
            for i, t in network.agents.items()
        },
    }
    if profile is not None and profile != ReportProfile.truthful(network):
        payload["reports"] = [
            {
                "agent": _id_to_json(i),
                "children": [_id_to_json(c) for c in sorted_ids(r.reported_children)],
                "capacity": _capacity_out(r.reported_capacity),
            }
            for i, r in profile.reports.items()
        ]
    if metadata:
        payload["metadata"] = metadata
    return payload


def instance_from_json(payload: dict) -> Tuple[SocialNetwork, ReportProfile]:
    if not isinstance(payload, dict):
        raise FormatError("instance payload must be a JSON object")
    for key in ("sponsor_children", "agents"):
        if key not in payload:
            raise FormatError(f"missing required field {key!r}")
    raw_agents = payload["agents"]
    if not isinstance(raw_agents, dict):
        raise FormatError("agents: must be an object keyed by agent id")
    agents: Dict[AgentId, AgentType] = {}
    for raw_id, spec in raw_agents.items():
        agent_id = _id_from_json(raw_id)
        if not isinstance(spec, dict):
            raise FormatError(f"agents.{raw_id}: must be an object")
        try:
            children = [_id_from_json(c) for c in spec.get("children", [])]
            capacity = parse_rational(spec["capacity"])
        except KeyError as exc:
            raise FormatError(f"agents.{raw_id}: missing {exc.args[0]!r}") from exc
        except ValueError as exc:
            raise FormatError(f"agents.{raw_id}: {exc}") from exc
        if agent_id in agents:
            raise FormatError(f"agents: duplicate id {raw_id!r}")
        try:
            agents[agent_id] = AgentType(children, capacity)
        except NetworkError as exc:
            raise FormatError(f"agents.{raw_id}: {exc}") from exc
    try:
        seeds = [_id_from_json(i) for i in payload["sponsor_children"]]
        network = SocialNetwork(frozenset(seeds), agents)
    except NetworkError as exc:
        raise FormatError(str(exc)) from exc

    if "reports" in payload:
        raw_reports = payload["reports"]
        if not isinstance(raw_reports, list):
            raise FormatError("reports: must be an array")
        reports: Dict[AgentId, Report] = {}
        for index, entry in enumerate(raw_reports):
            if not isinstance(entry, dict) or "agent" not in entry:
                raise FormatError(f"reports[{index}]: must be an object with 'agent'")
            agent_id = _id_from_json(entry["agent"])
            if agent_id in reports:
                raise FormatError(f"reports[{index}]: duplicate report for {agent_id!r}")
            if agent_id not in agents:
                raise FormatError(f"reports[{index}]: unknown agent {agent_id!r}")
            try:
                children = [_id_from_json(c) for c in entry.get("children", [])]
                capacity = parse_rational(entry["capacity"])
                reports[agent_id] = Report(children, capacity)
            except (KeyError, ValueError) as exc:
                raise FormatError(f"reports[{index}]: {exc}") from exc
        profile = ReportProfile(reports)
    else:
        profile = ReportProfile.truthful(network)
    return network, profile


def load_instance(path: PathLike) -> Tuple[SocialNetwork, ReportProfile]:
    return instance_from_json(_loads(_read(path)))


def dump_instance(
    network: SocialNetwork,
    profile: Optional[ReportProfile],
    path: PathLike,
    metadata: Optional[dict] = None,
) -> None:
    _write(path, instance_to_json(network, profile, metadata))


# ---------------------------------------------------------------------------
# outcomes


def outcome_to_json(outcome: MechanismOutcome) -> dict:
    layered = outcome.layered
    rows = []
    ordered = sorted(
        outcome.rewards,
        key=lambda i: (layered.depth.get(i, 10**9), *_sort_key_tuple(i)),
    )
    for i in ordered:
        parts = outcome.reward_parts[i]
        rows.append(
            {
                "agent": _id_to_json(i),
                "depth": layered.depth.get(i),
                "weight": rational_fields(outcome.weights[i]),
                "retained": rational_fields(parts.retained),
                "received": rational_fields(parts.received),
                "reward": rational_fields(outcome.rewards[i]),
            }
        )
    return {
        "params": {
            "budget": rational_fields(outcome.params.budget),
            "sponsor_capacity": rational_fields(outcome.params.sponsor_capacity),
            "beta": rational_fields(outcome.params.beta),
        },
        "layers": [
            [_id_to_json(i) for i in layered.sorted_layer(k)]
            for k in range(layered.num_layers)
        ],
        "layer_budgets": [rational_fields(b) for b in outcome.layer_budgets],
        "cumulative_capacities": [
            rational_fields(c) for c in outcome.cumulative_capacities
        ],
        "residual": rational_fields(outcome.residual_budget),
        "total_rewards": rational_fields(outcome.total_rewards()),
        "agents": rows,
    }


def _sort_key_tuple(agent_id: AgentId):
    return id_sort_key(agent_id)


def dump_outcome(outcome: MechanismOutcome, path: PathLike) -> None:
    _write(path, outcome_to_json(outcome))


def load_outcome(path: PathLike) -> dict:
    """Parse an outcome file back into exact values.

    Returns a plain dict: params (MechanismParams), layers (list of id
    lists), and id-keyed Fraction maps for weights, retained, received,
    rewards, plus layer_budgets, cumulative_capacities, residual and
    total_rewards.
    """
    payload = _loads(_read(path))
    try:
        params = MechanismParams(
            budget=parse_rational(payload["params"]["budget"]),
            sponsor_capacity=parse_rational(payload["params"]["sponsor_capacity"]),
            beta=parse_rational(payload["params"]["beta"]),
        )
        rows = payload["agents"]
        out = {
            "params": params,
            "layers": [
                [_id_from_json(i) for i in layer] for layer in payload["layers"]
            ],
            "layer_budgets": tuple(
                parse_rational(b) for b in payload["layer_budgets"]
            ),
            "cumulative_capacities": tuple(
                parse_rational(c) for c in payload["cumulative_capacities"]
            ),
            "residual": parse_rational(payload["residual"]),
            "total_rewards": parse_rational(payload["total_rewards"]),
            "depth": {},
            "weights": {},
            "retained": {},
            "received": {},
            "rewards": {},
        }
        for row in rows:
            i = _id_from_json(row["agent"])
            out["depth"][i] = row["depth"]
            out["weights"][i] = parse_rational(row["weight"])
            out["retained"][i] = parse_rational(row["retained"])
            out["received"][i] = parse_rational(row["received"])
            out["rewards"][i] = parse_rational(row["reward"])
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed outcome file: {exc}") from exc
    return out


def write_outcome_csv(outcome: MechanismOutcome, path: PathLike) -> None:
    """Per-agent table: agent, weight, retained, received, reward."""
    layered = outcome.layered
    ordered = sorted(
        outcome.rewards,
        key=lambda i: (layered.depth.get(i, 10**9), *_sort_key_tuple(i)),
    )
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["agent", "weight", "retained", "received", "reward"])
        for i in ordered:
            parts = outcome.reward_parts[i]
            writer.writerow(
                [
                    i,
                    format_decimal(outcome.weights[i]),
                    format_decimal(parts.retained),
                    format_decimal(parts.received),
                    format_decimal(outcome.rewards[i]),
                ]
            )


# ---------------------------------------------------------------------------
# attacks


def attack_to_json(attack: SybilAttack) -> dict:
    payload = {
        "type": "parallel" if isinstance(attack, ParallelSybilAttack) else "sybil",
        "attacker": _id_to_json(attack.attacker),
        "identities": [_id_to_json(i) for i in attack.identities],
        "template": attack.template,
        "reports": {
            str(i): {
                "children": [_id_to_json(c) for c in sorted_ids(r.reported_children)],
                "capacity": _capacity_out(r.reported_capacity),
            }
            for i, r in attack.identity_reports.items()
        },
    }
    if isinstance(attack, ParallelSybilAttack):
        payload["inviter_subsets"] = (
            None
            if attack.inviter_subsets is None
            else {
                str(f): [_id_to_json(p) for p in sorted_ids(ps)]
                for f, ps in attack.inviter_subsets.items()
            }
        )
    return payload


def attack_from_json(payload: dict) -> SybilAttack:
    try:
        attacker = _id_from_json(payload["attacker"])
        identities = tuple(_id_from_json(i) for i in payload["identities"])
        reports = {
            _id_from_json(i): Report(
                frozenset(_id_from_json(c) for c in spec.get("children", [])),
                parse_rational(spec["capacity"]),
            )
            for i, spec in payload["reports"].items()
        }
        template = payload.get("template", "custom")
        if payload.get("type") == "parallel":
            raw_subsets = payload.get("inviter_subsets")
            subsets = (
                None
                if raw_subsets is None
                else {
                    _id_from_json(f): frozenset(_id_from_json(p) for p in ps)
                    for f, ps in raw_subsets.items()
                }
            )
            return ParallelSybilAttack(
                attacker, identities, reports, template, subsets
            )
        return SybilAttack(attacker, identities, reports, template)
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed attack payload: {exc}") from exc


def dump_attack(attack: SybilAttack, path: PathLike) -> None:
    _write(path, attack_to_json(attack))


def load_attack(path: PathLike) -> SybilAttack:
    return attack_from_json(_loads(_read(path)))


# ---------------------------------------------------------------------------
# verdicts and sweeps


def jsonify(value):
    """Recursive JSON form for verdict payloads: exact values kept exact."""
    if isinstance(value, Fraction):
        return rational_fields(value)
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        raise TypeError("floats must not reach serialization")
    if isinstance(value, SybilAttack):
        return attack_to_json(value)
    if isinstance(value, Report):
        return {
            "children": [_id_to_json(c) for c in sorted_ids(value.reported_children)],
            "capacity": _capacity_out(value.reported_capacity),
        }
    if isinstance(value, PropertyVerdict):
        return {
            "name": value.name,
            "holds": value.holds,
            "margin": jsonify(value.margin),
            "witness": jsonify(value.witness),
            "details": jsonify(dict(value.details)),
        }
    if isinstance(value, MajorityAssumptionReport):
        return {
            "beta": jsonify(value.beta),
            "entries": {
                str(i): jsonify(e._asdict()) for i, e in value.entries.items()
            },
        }
    if isinstance(value, (AssumptionEntry, SweepRow)):
        return jsonify(value._asdict())
    if isinstance(value, dict):
        return {str(k): jsonify(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return [jsonify(v) for v in sorted_ids(value)]
    if isinstance(value, (list, tuple)):
        return [jsonify(v) for v in value]
    raise TypeError(f"cannot serialize {value!r}")


def verdict_to_json(verdict: PropertyVerdict) -> dict:
    return jsonify(verdict)


def dump_verdicts(payload: dict, path: PathLike) -> None:
    _write(path, jsonify(payload))


def write_sweep_csv(rows: Sequence[SweepRow], path: PathLike) -> None:
    """Sweep table: scenario, delta, utility (12-place decimals) plus the
    exact values as num/den strings for lossless reloading."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["scenario", "delta", "utility", "delta_rational", "utility_rational"]
        )
        for row in rows:
            writer.writerow(
                [
                    row.scenario,
                    format_decimal(row.delta),
                    format_decimal(row.utility),
                    str(Fraction(row.delta)),
                    str(Fraction(row.utility)),
                ]
            )


def read_sweep_csv(path: PathLike) -> List[SweepRow]:
    """Exact reload of a sweep table written by `write_sweep_csv`."""
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"scenario", "delta", "utility"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise FormatError(
                f"sweep CSV must have columns {sorted(required)}, got {reader.fieldnames}"
            )
        for record in reader:
            delta = record.get("delta_rational") or record["delta"]
            utility = record.get("utility_rational") or record["utility"]
            rows.append(
                SweepRow(
                    record["scenario"], parse_rational(delta), parse_rational(utility)
                )
            )
    return rows
