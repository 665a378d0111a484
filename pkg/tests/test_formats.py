import csv
import json
from fractions import Fraction

import pytest

from prdm import (
    AgentType,
    FormatError,
    ParallelSybilAttack,
    Report,
    ReportProfile,
    SocialNetwork,
    SweepRow,
    SybilAttack,
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
    read_sweep_csv,
    run_prdm,
    verdict_to_json,
    write_outcome_csv,
    write_sweep_csv,
    check_ir,
)

F = Fraction


class TestInstanceJson:
    def test_truthful_round_trip_omits_reports(self, reference, tmp_path):
        network, profile, _ = reference
        payload = instance_to_json(network, profile)
        assert "reports" not in payload
        path = tmp_path / "inst.json"
        dump_instance(network, profile, path)
        net2, prof2 = load_instance(path)
        assert net2 == network and prof2 == profile

    def test_partial_profile_round_trip(self, reference, tmp_path):
        network, profile, _ = reference
        partial = profile.without(6).with_report(4, Report([], F(7, 3)))
        path = tmp_path / "inst.json"
        dump_instance(network, partial, path)
        net2, prof2 = load_instance(path)
        assert net2 == network and prof2 == partial

    def test_metadata_round_trip(self, reference, tmp_path):
        network, profile, _ = reference
        path = tmp_path / "inst.json"
        dump_instance(network, profile, path, metadata={"seed": 99, "note": "x"})
        raw = json.loads(path.read_text())
        assert raw["metadata"] == {"seed": 99, "note": "x"}
        # metadata never affects the parsed instance
        net2, _ = load_instance(path)
        assert net2 == network

    def test_decimal_capacity_parses_exactly(self):
        payload = {
            "sponsor_children": [1],
            "agents": {"1": {"children": [], "capacity": 0.1}},
        }
        # through the file path JSON floats become exact tenths, not
        # binary doubles; inline dicts take the same parse_rational route
        text = json.dumps(payload)
        import prdm.formats as formats

        network, _ = instance_from_json(formats._loads(text))
        assert network.agents[1].capacity == F(1, 10)

    def test_string_fraction_capacity(self):
        payload = {
            "sponsor_children": [1],
            "agents": {"1": {"children": [], "capacity": "7/3"}},
        }
        network, _ = instance_from_json(payload)
        assert network.agents[1].capacity == F(7, 3)

    def test_canonical_integer_keys(self):
        payload = {
            "sponsor_children": ["3"],
            "agents": {"3": {"children": ["007"], "capacity": "1"},
                       "007": {"children": [], "capacity": "1"}},
        }
        network, _ = instance_from_json(payload)
        assert 3 in network.agents
        assert "007" in network.agents
        assert network.agents[3].children == frozenset({"007"})

    def test_duplicate_json_keys_rejected(self, tmp_path):
        path = tmp_path / "dup.json"
        path.write_text(
            '{"sponsor_children": [1], "agents": {'
            '"1": {"children": [], "capacity": "1"},'
            '"1": {"children": [], "capacity": "2"}}}'
        )
        with pytest.raises(FormatError, match="duplicate key"):
            load_instance(path)

    def test_diagnostics_name_the_field(self):
        with pytest.raises(FormatError, match="missing required field"):
            instance_from_json({"agents": {}})
        with pytest.raises(FormatError, match=r"agents\.1: missing 'capacity'"):
            instance_from_json(
                {"sponsor_children": [1], "agents": {"1": {"children": []}}}
            )
        with pytest.raises(FormatError, match=r"agents\.1:"):
            instance_from_json(
                {
                    "sponsor_children": [1],
                    "agents": {"1": {"children": [], "capacity": "-2"}},
                }
            )
        with pytest.raises(FormatError, match=r"reports\[0\]: unknown agent"):
            instance_from_json(
                {
                    "sponsor_children": [1],
                    "agents": {"1": {"children": [], "capacity": "1"}},
                    "reports": [{"agent": 9, "children": [], "capacity": "1"}],
                }
            )
        with pytest.raises(FormatError, match=r"reports\[1\]: duplicate"):
            instance_from_json(
                {
                    "sponsor_children": [1],
                    "agents": {"1": {"children": [], "capacity": "1"}},
                    "reports": [
                        {"agent": 1, "children": [], "capacity": "1"},
                        {"agent": 1, "children": [], "capacity": "1"},
                    ],
                }
            )

    def test_invalid_json_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(FormatError, match="invalid JSON"):
            load_instance(path)

    def test_boolean_id_rejected(self):
        with pytest.raises(FormatError, match="invalid agent id"):
            instance_from_json(
                {
                    "sponsor_children": [True],
                    "agents": {"1": {"children": [], "capacity": "1"}},
                }
            )


class TestOutcomeFiles:
    def test_json_round_trip_is_lossless(self, reference, tmp_path):
        network, profile, params = reference
        outcome = run_prdm(network, profile, params)
        path = tmp_path / "outcome.json"
        dump_outcome(outcome, path)
        loaded = load_outcome(path)
        assert loaded["params"] == params
        assert loaded["rewards"] == dict(outcome.rewards)
        assert loaded["weights"] == dict(outcome.weights)
        assert loaded["layer_budgets"] == outcome.layer_budgets
        assert loaded["cumulative_capacities"] == outcome.cumulative_capacities
        assert loaded["residual"] == outcome.residual_budget
        assert loaded["total_rewards"] == outcome.total_rewards()
        assert loaded["layers"] == [[1, 2, 3], [4, 5, 6], [7, 8]]
        assert loaded["depth"][7] == 3 and loaded["depth"][1] == 1

    def test_json_uses_exact_rational_fields(self, reference, tmp_path):
        network, profile, params = reference
        outcome = run_prdm(network, profile, params)
        path = tmp_path / "outcome.json"
        dump_outcome(outcome, path)
        raw = json.loads(path.read_text())
        by_agent = {row["agent"]: row for row in raw["agents"]}
        assert by_agent[2]["reward"] == {
            "num": "41",
            "den": "2",
            "decimal": "20.5",
        }

    def test_csv_table(self, reference, tmp_path):
        network, profile, params = reference
        outcome = run_prdm(network, profile, params)
        path = tmp_path / "outcome.csv"
        write_outcome_csv(outcome, path)
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert [r["agent"] for r in rows] == ["1", "2", "3", "4", "5", "6", "7", "8"]
        first = rows[0]
        assert first["weight"] == "20"
        assert first["retained"] == "20"
        assert first["received"] == "2"
        assert first["reward"] == "22"
        assert rows[1]["reward"] == "20.5"
        assert rows[6]["reward"] == "2"

    def test_malformed_outcome_file(self, tmp_path):
        path = tmp_path / "outcome.json"
        path.write_text('{"params": {}}')
        with pytest.raises(FormatError, match="malformed outcome"):
            load_outcome(path)


class TestAttackFiles:
    def test_plain_attack_round_trip(self, tmp_path):
        attack = SybilAttack(
            1,
            (1, "1~f1"),
            {1: Report(["1~f1"], F(5)), "1~f1": Report([4], F(5))},
            template="chain",
        )
        path = tmp_path / "attack.json"
        dump_attack(attack, path)
        loaded = load_attack(path)
        assert loaded == attack
        assert not isinstance(loaded, ParallelSybilAttack)

    def test_parallel_attack_round_trip(self, tmp_path):
        attack = ParallelSybilAttack(
            6,
            (6, "6~f1"),
            {6: Report([8], F(5)), "6~f1": Report([], F(5))},
            template="parallel",
            inviter_subsets={"6~f1": frozenset({2})},
        )
        path = tmp_path / "attack.json"
        dump_attack(attack, path)
        loaded = load_attack(path)
        assert isinstance(loaded, ParallelSybilAttack)
        assert loaded == attack

    def test_parallel_without_subsets(self):
        attack = ParallelSybilAttack(
            6, (6, "x"), {6: Report([], F(5)), "x": Report([], F(5))}
        )
        assert attack_from_json(attack_to_json(attack)) == attack

    def test_malformed_attack(self):
        with pytest.raises(FormatError, match="malformed attack"):
            attack_from_json({"attacker": 1})


class TestJsonify:
    def test_fractions_become_rational_fields(self):
        assert jsonify(F(1, 3)) == {
            "num": "1",
            "den": "3",
            "decimal": "0.333333333333",
        }
        assert jsonify({"x": [F(1, 2)]}) == {
            "x": [{"num": "1", "den": "2", "decimal": "0.5"}]
        }

    def test_floats_are_rejected(self):
        with pytest.raises(TypeError, match="float"):
            jsonify(0.5)
        with pytest.raises(TypeError, match="float"):
            jsonify({"x": [1.25]})

    def test_verdict_serialization(self, reference):
        network, profile, params = reference
        verdict = check_ir(network, profile, params)
        payload = verdict_to_json(verdict)
        assert payload["name"] == "individual-rationality"
        assert payload["holds"] is True
        assert payload["margin"] == {"num": "2", "den": "1", "decimal": "2"}
        json.dumps(payload)  # must be pure JSON types


class TestSweepCsv:
    def test_round_trip_is_exact(self, tmp_path):
        rows = [
            SweepRow("all-children", F(1, 2), F(2125, 99)),
            SweepRow("all-children", F(19, 2), F(775, 81)),
            SweepRow("without-4", F(1, 3), F(1, 7)),
        ]
        path = tmp_path / "sweep.csv"
        write_sweep_csv(rows, path)
        assert read_sweep_csv(path) == rows

    def test_column_layout(self, tmp_path):
        path = tmp_path / "sweep.csv"
        write_sweep_csv([SweepRow("s", F(1, 2), F(1, 3))], path)
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            row = next(reader)
        assert header == [
            "scenario",
            "delta",
            "utility",
            "delta_rational",
            "utility_rational",
        ]
        assert row == ["s", "0.5", "0.333333333333", "1/2", "1/3"]

    def test_reads_plain_decimal_files(self, tmp_path):
        path = tmp_path / "plain.csv"
        path.write_text("scenario,delta,utility\na,0.5,21.25\na,1,20\n")
        rows = read_sweep_csv(path)
        assert rows == [
            SweepRow("a", F(1, 2), F(85, 4)),
            SweepRow("a", F(1), F(20)),
        ]

    def test_missing_columns_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("scenario,delta\na,0.5\n")
        with pytest.raises(FormatError, match="columns"):
            read_sweep_csv(path)
