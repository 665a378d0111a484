from fractions import Fraction

import pytest

from prdm import ReportProfile, build_active_network, run_prdm
from prdm.generators import (
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

F = Fraction


class TestReferenceInstance:
    def test_shape(self):
        network, profile, params = reference_instance()
        assert network.sponsor_children == frozenset({1, 2, 3})
        assert network.agents[1].children == frozenset({4, 5})
        assert network.agents[2].children == frozenset({6})
        assert network.agents[3].children == frozenset({6})
        assert network.agents[4].children == frozenset({7})
        assert network.agents[6].children == frozenset({8})
        assert all(t.capacity == F(10) for t in network.agents.values())
        assert profile == ReportProfile.truthful(network)
        assert (params.budget, params.sponsor_capacity, params.beta) == (
            F(100),
            F(20),
            F(1, 5),
        )

    def test_fresh_copies(self):
        a, _, _ = reference_instance()
        b, _, _ = reference_instance()
        assert a == b and a is not b


class TestFixedFamilies:
    def test_chain_layers(self):
        network = chain_network(5)
        layered = build_active_network(network, ReportProfile.truthful(network))
        assert layered.num_layers == 5
        assert [layered.sorted_layer(k) for k in range(5)] == [
            (1,),
            (2,),
            (3,),
            (4,),
            (5,),
        ]

    def test_star_layers(self):
        network = star_network(4)
        layered = build_active_network(network, ReportProfile.truthful(network))
        assert layered.sorted_layer(0) == (1,)
        assert layered.sorted_layer(1) == (2, 3, 4, 5)

    def test_balanced_tree_layers(self):
        network = balanced_tree_network(7)
        layered = build_active_network(network, ReportProfile.truthful(network))
        assert [len(layered.sorted_layer(k)) for k in (0, 1, 2)] == [1, 2, 4]

    def test_custom_capacity(self):
        network = chain_network(3, capacity=F(5, 2))
        assert all(t.capacity == F(5, 2) for t in network.agents.values())

    def test_size_validation(self):
        for bad in (0, -1):
            with pytest.raises(GeneratorError):
                chain_network(bad)
            with pytest.raises(GeneratorError):
                balanced_tree_network(bad)
        with pytest.raises(GeneratorError):
            star_network(-1)
        # a star with no leaves is just the hub
        assert star_network(0).agents[1].children == frozenset()

    def test_standard_families_run(self):
        fams = standard_families()
        assert [f.name for f in fams] == ["chain-5", "star-4", "tree-7"]
        from prdm import MechanismParams

        params = MechanismParams(F(100), F(20), F(1, 5))
        for _, network, profile in fams:
            outcome = run_prdm(network, profile, params)
            assert outcome.total_rewards() + outcome.residual_budget == F(100)


class TestRandomGeneration:
    def test_deterministic_for_a_seed(self):
        cfg = GeneratorConfig(seed=7, agent_count=6, seed_set_size=2)
        assert gen_random(cfg) == gen_random(cfg)

    def test_different_seeds_differ(self):
        a = gen_random(GeneratorConfig(seed=1, agent_count=8))
        b = gen_random(GeneratorConfig(seed=2, agent_count=8))
        assert a != b

    def test_capacities_on_quarter_grid_within_range(self):
        cfg = GeneratorConfig(
            seed=11, agent_count=10, capacity_range=(F(2), F(6))
        )
        network = gen_random(cfg)
        for t in network.agents.values():
            assert F(2) <= t.capacity <= F(6)
            assert (t.capacity * 4).denominator == 1

    def test_seed_set_is_lowest_ids(self):
        cfg = GeneratorConfig(seed=3, agent_count=5, seed_set_size=3)
        assert gen_random(cfg).sponsor_children == frozenset({1, 2, 3})

    def test_config_validation(self):
        with pytest.raises(GeneratorError, match="agent_count"):
            GeneratorConfig(seed=1, agent_count=0)
        with pytest.raises(GeneratorError, match="edge_probability"):
            GeneratorConfig(seed=1, agent_count=3, edge_probability=F(3, 2))
        with pytest.raises(GeneratorError, match="capacity_range"):
            GeneratorConfig(seed=1, agent_count=3, capacity_range=(F(0), F(1)))
        with pytest.raises(GeneratorError, match="capacity_range"):
            GeneratorConfig(seed=1, agent_count=3, capacity_range=(F(5), F(2)))
        with pytest.raises(GeneratorError, match="seed_set_size"):
            GeneratorConfig(seed=1, agent_count=3, seed_set_size=4)


class TestRandomSuite:
    def test_count_and_names(self):
        suite = random_suite(5, base_seed=1234, min_agents=3, max_agents=6)
        assert len(suite) == 5
        assert [inst.name for inst in suite] == [f"random-{k}" for k in range(5)]

    def test_sizes_within_bounds(self):
        suite = random_suite(12, base_seed=99, min_agents=3, max_agents=7)
        for inst in suite:
            assert 3 <= len(inst.network.agents) <= 7

    def test_reproducible(self):
        a = random_suite(4, base_seed=42, min_agents=3, max_agents=5)
        b = random_suite(4, base_seed=42, min_agents=3, max_agents=5)
        assert a == b

    def test_profiles_are_truthful(self):
        for inst in random_suite(3, base_seed=7, min_agents=3, max_agents=5):
            assert inst.profile == ReportProfile.truthful(inst.network)

    def test_every_instance_runs(self):
        from prdm import MechanismParams

        params = MechanismParams(F(100), F(20), F(1, 4))
        for inst in random_suite(10, base_seed=2024, min_agents=3, max_agents=8):
            outcome = run_prdm(inst.network, inst.profile, params)
            assert outcome.total_rewards() + outcome.residual_budget == F(100)
