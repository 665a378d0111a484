"""Command-line front end.

Subcommands: run an instance file, check property suites over generated
instances, sweep an attacker's capacity transfer, generate instance
files, and replay a serialized attack against an instance.

Exit codes: 0 success (and, for check, all properties hold), 1 a checked
property failed, 2 bad usage or malformed input.
"""

from __future__ import annotations

import argparse
import random as _stdlib_random
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .attacks import AttackError, apply_attack
from .formats import (
    FormatError,
    dump_instance,
    dump_outcome,
    dump_verdicts,
    jsonify,
    load_attack,
    load_instance,
    write_outcome_csv,
    write_sweep_csv,
)
from .generators import (
    GeneratedInstance,
    GeneratorConfig,
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
    MechanismParams,
    run_prdm,
)
from .network import (
    NetworkError,
    ReportProfile,
    id_sort_key,
    validate_profile,
)
from .properties import (
    check_abb_trend,
    check_baseline_invariance,
    check_budget_identity,
    check_gamma_sp,
    check_ic,
    check_ir,
    check_psp,
    sweep_attack_utility,
)
from .rationals import format_decimal, parse_rational

ABB_FACTORS = (Fraction(1), Fraction(10), Fraction(100), Fraction(1000))

SUITES = ("ir", "budget", "abb", "ic", "psp", "gamma-sp", "baseline", "all")


def _parse_id(text: str):
    return int(text) if text.lstrip("-").isdigit() else text


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--budget", default="100", help="total budget (default 100)")
    parser.add_argument(
        "--sponsor-capacity",
        default="20",
        help="sponsor's own capacity (default 20)",
    )
    parser.add_argument(
        "--beta",
        default="1/5",
        help="propagation share in [0, 1/2] (default 1/5)",
    )


def _params(args: argparse.Namespace) -> MechanismParams:
    return MechanismParams(
        budget=parse_rational(args.budget),
        sponsor_capacity=parse_rational(args.sponsor_capacity),
        beta=parse_rational(args.beta),
    )


def _fmt(value: Fraction) -> str:
    return format_decimal(value, 6)


def _print_outcome(outcome) -> None:
    layered = outcome.layered
    print(
        f"{'agent':>10} {'depth':>5} {'weight':>12} {'retained':>12}"
        f" {'received':>12} {'reward':>12}"
    )
    ordered = sorted(
        outcome.rewards,
        key=lambda i: (layered.depth.get(i, 10**9), *id_sort_key(i)),
    )
    for i in ordered:
        parts = outcome.reward_parts[i]
        depth = layered.depth.get(i)
        print(
            f"{str(i):>10} {depth if depth is not None else '-':>5}"
            f" {_fmt(outcome.weights[i]):>12} {_fmt(parts.retained):>12}"
            f" {_fmt(parts.received):>12} {_fmt(outcome.rewards[i]):>12}"
        )
    budgets = " -> ".join(_fmt(b) for b in outcome.layer_budgets)
    print(f"layer budgets: {budgets}")
    print(f"total rewards: {_fmt(outcome.total_rewards())}")
    print(f"residual budget: {_fmt(outcome.residual_budget)}")


def cmd_run(args: argparse.Namespace) -> int:
    network, profile = load_instance(args.instance)
    problems = validate_profile(network, profile)
    if problems:
        for problem in problems:
            print(f"error: {problem}", file=sys.stderr)
        return 2
    outcome = run_prdm(network, profile, _params(args))
    _print_outcome(outcome)
    if args.output:
        dump_outcome(outcome, args.output)
        print(f"wrote outcome to {args.output}")
    if args.csv:
        write_outcome_csv(outcome, args.csv)
        print(f"wrote per-agent table to {args.csv}")
    return 0


def _check_instances(args: argparse.Namespace) -> List[GeneratedInstance]:
    net, profile, _ = reference_instance()
    cases = [GeneratedInstance("reference", net, profile)]
    cases.extend(standard_families())
    cases.extend(random_suite(args.instances, args.seed, 3, 7))
    return cases


def cmd_check(args: argparse.Namespace) -> int:
    params = _params(args)
    if args.seed is None:
        args.seed = _stdlib_random.SystemRandom().randrange(2**32)
        print(f"seed: {args.seed} (drawn fresh; pass --seed to reproduce)")
    else:
        print(f"seed: {args.seed}")
    suites = list(SUITES[:-1]) if args.suite == "all" else [args.suite]
    cases = _check_instances(args)
    results: Dict[str, dict] = {}
    failures = []
    exempt_lines = []
    for case in cases:
        per_instance = {}
        for suite in suites:
            if suite == "ir":
                verdict = check_ir(case.network, case.profile, params)
            elif suite == "budget":
                verdict = check_budget_identity(case.network, case.profile, params)
            elif suite == "abb":
                verdict = check_abb_trend(
                    case.network, case.profile, params, ABB_FACTORS
                )
            elif suite == "ic":
                verdict = check_ic(case.network, params, args.grid_divisor)
            elif suite == "psp":
                verdict = check_psp(
                    case.network, params, args.grid_divisor, args.max_fakes
                )
            elif suite == "gamma-sp":
                verdict, assumption = check_gamma_sp(
                    case.network, params, args.grid_divisor, args.max_fakes
                )
                exempt = assumption.violating_agents
                if params.beta > 0 and exempt:
                    exempt_lines.append(
                        f"  {case.name}: agents over majority threshold "
                        f"(exempt from reward bound): {list(exempt)}"
                    )
            elif suite == "baseline":
                verdict = check_baseline_invariance(
                    case.network, params, args.grid_divisor, args.max_fakes
                )
            else:  # pragma: no cover - argparse restricts choices
                raise ValueError(suite)
            per_instance[verdict.name] = verdict
            if not verdict.holds:
                failures.append((case.name, verdict.name))
        results[case.name] = per_instance
    names = sorted({name for per in results.values() for name in per})
    for name in names:
        verdicts = [(inst, per[name]) for inst, per in results.items() if name in per]
        held = sum(1 for _, v in verdicts if v.holds)
        margins = [v.margin for _, v in verdicts if v.margin is not None]
        # IR's margin is the smallest reward (higher is better); the other
        # checks report an adversarial gain (higher is worse).
        pick = min if name == "individual-rationality" else max
        worst = pick(margins) if margins else None
        status = "HOLDS" if held == len(verdicts) else "FAILS"
        worst_text = f"worst margin {_fmt(worst)}" if worst is not None else "no margin"
        print(f"{name:<28} {status}  {held}/{len(verdicts)} instances  {worst_text}")
    for line in exempt_lines:
        print(line)
    if args.abb_csv:
        _write_abb_csv(args.abb_csv, params)
        print(f"wrote residual-vs-scale table to {args.abb_csv}")
    payload = {
        "seed": args.seed,
        "suites": suites,
        "params": {
            "budget": params.budget,
            "sponsor_capacity": params.sponsor_capacity,
            "beta": params.beta,
        },
        "results": results,
    }
    dump_verdicts(payload, args.output)
    print(f"wrote verdict report to {args.output}")
    if failures:
        print(
            f"{len(failures)} failing checks; witnesses are in {args.output}",
            file=sys.stderr,
        )
        return 1
    return 0


def _write_abb_csv(path: str, params: MechanismParams) -> None:
    import csv

    network, profile, _ = reference_instance()
    verdict = check_abb_trend(network, profile, params, ABB_FACTORS)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["scale", "residual", "scale_rational", "residual_rational"])
        for factor, residual in verdict.details["residuals"]:
            writer.writerow(
                [
                    format_decimal(factor),
                    format_decimal(residual),
                    str(factor),
                    str(residual),
                ]
            )


def cmd_sweep(args: argparse.Namespace) -> int:
    network, profile = load_instance(args.instance)
    if profile != ReportProfile.truthful(network):
        print(
            "error: sweep expects an instance without a reports section",
            file=sys.stderr,
        )
        return 2
    params = _params(args)
    attacker = _parse_id(args.attacker)
    if attacker not in network.agents:
        print(f"error: unknown attacker {attacker!r}", file=sys.stderr)
        return 2
    t = network.agents[attacker]
    scenarios: List[Tuple[str, frozenset]] = [("all-children", t.children)]
    for raw in args.drop_child or []:
        child = _parse_id(raw)
        if child not in t.children:
            print(
                f"error: --drop-child {child!r} is not a child of {attacker!r}",
                file=sys.stderr,
            )
            return 2
        scenarios.append((f"without-{child}", t.children - {child}))
    step = parse_rational(args.delta_step)
    if step <= 0 or step >= t.capacity:
        print(
            f"error: --delta-step must lie in (0, {t.capacity}), got {step}",
            file=sys.stderr,
        )
        return 2
    deltas = []
    if args.include_zero:
        deltas.append(Fraction(0))
    k = 1
    while step * k < t.capacity:
        deltas.append(step * k)
        k += 1
    rows = sweep_attack_utility(network, params, attacker, deltas, scenarios)
    write_sweep_csv(rows, args.output)
    print(
        f"wrote {len(rows)} rows ({len(scenarios)} scenarios x {len(deltas)} deltas)"
        f" to {args.output}"
    )
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    metadata = {"generator": args.kind}
    if args.kind == "example":
        network, profile, _ = reference_instance()
    elif args.kind == "random":
        if args.seed is None:
            args.seed = _stdlib_random.SystemRandom().randrange(2**32)
            print(f"seed: {args.seed} (drawn fresh; pass --seed to reproduce)")
        config = GeneratorConfig(
            seed=args.seed,
            agent_count=args.agents,
            edge_probability=parse_rational(args.edge_prob),
            capacity_range=(
                parse_rational(args.cap_min),
                parse_rational(args.cap_max),
            ),
            seed_set_size=args.seeds,
        )
        network = gen_random(config)
        profile = ReportProfile.truthful(network)
        metadata.update(
            {
                "seed": args.seed,
                "agents": args.agents,
                "edge_probability": str(config.edge_probability),
                "capacity_range": [
                    str(config.capacity_range[0]),
                    str(config.capacity_range[1]),
                ],
                "seed_set_size": args.seeds,
            }
        )
    else:
        capacity = parse_rational(args.capacity)
        if args.kind == "chain":
            network = chain_network(args.size, capacity)
        elif args.kind == "star":
            network = star_network(args.size, capacity)
        else:
            network = balanced_tree_network(args.size, capacity)
        profile = ReportProfile.truthful(network)
        metadata.update({"size": args.size, "capacity": str(capacity)})
    dump_instance(network, profile, args.output, metadata)
    print(f"wrote {args.kind} instance ({len(network.agents)} agents) to {args.output}")
    return 0


def cmd_replay_attack(args: argparse.Namespace) -> int:
    network, profile = load_instance(args.instance)
    attack = load_attack(args.attack)
    params = _params(args)
    truthful = run_prdm(network, ReportProfile.truthful(network), params)
    attacked_network, attacked_profile = apply_attack(network, profile, attack)
    outcome = run_prdm(attacked_network, attacked_profile, params)
    coalition = sum(
        (outcome.rewards.get(j, Fraction(0)) for j in attack.identities), Fraction(0)
    )
    base = truthful.rewards.get(attack.attacker, Fraction(0))
    gain = coalition - base
    print(f"attacker: {attack.attacker}  template: {attack.template}")
    print(f"identities: {list(attack.identities)}")
    print(f"truthful reward:  {_fmt(base)}")
    print(f"coalition reward: {_fmt(coalition)}")
    print(f"gain: {_fmt(gain)} ({'profitable' if gain > 0 else 'not profitable'})")
    if args.output:
        dump_outcome(outcome, args.output)
        print(f"wrote attacked outcome to {args.output}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prdm",
        description=(
            "Budget-limited propagation reward distribution on invitation "
            "networks: run instances, check incentive properties, sweep "
            "attacks, generate instance files."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the mechanism on an instance file")
    p_run.add_argument("instance", help="instance JSON path")
    p_run.add_argument("--output", help="write outcome JSON here")
    p_run.add_argument("--csv", help="write per-agent CSV here")
    _add_param_flags(p_run)
    p_run.set_defaults(func=cmd_run)

    p_check = sub.add_parser(
        "check", help="run a property suite over generated instances"
    )
    p_check.add_argument("suite", choices=SUITES)
    p_check.add_argument(
        "--instances", type=int, default=20, help="random instances (default 20)"
    )
    p_check.add_argument(
        "--seed", type=int, default=None, help="suite seed (default: fresh, printed)"
    )
    p_check.add_argument(
        "--grid-divisor",
        type=int,
        default=4,
        help="capacity grid step divisor (default 4)",
    )
    p_check.add_argument(
        "--max-fakes", type=int, default=2, help="fake identities per attack (default 2)"
    )
    p_check.add_argument(
        "--output", default="verdicts.json", help="verdict report path"
    )
    p_check.add_argument(
        "--abb-csv", help="also write residual-vs-scale CSV for the reference instance"
    )
    _add_param_flags(p_check)
    p_check.set_defaults(func=cmd_check)

    p_sweep = sub.add_parser(
        "sweep", help="sweep capacity transferred to one fake child"
    )
    p_sweep.add_argument("instance", help="instance JSON path (truthful reports)")
    p_sweep.add_argument("--attacker", required=True, help="attacking agent id")
    p_sweep.add_argument(
        "--delta-step", default="1/2", help="grid step for the transfer (default 1/2)"
    )
    p_sweep.add_argument(
        "--drop-child",
        action="append",
        help="add a scenario where the attacker stops reporting this child",
    )
    p_sweep.add_argument(
        "--include-zero",
        action="store_true",
        help="include the no-fake point delta=0",
    )
    p_sweep.add_argument("--output", default="sweep.csv", help="CSV output path")
    _add_param_flags(p_sweep)
    p_sweep.set_defaults(func=cmd_sweep)

    p_gen = sub.add_parser("gen", help="generate an instance file")
    p_gen.add_argument("kind", choices=("example", "random", "chain", "star", "tree"))
    p_gen.add_argument("--output", default=None, help="output path (default KIND.json)")
    p_gen.add_argument("--agents", type=int, default=8, help="random: agent count")
    p_gen.add_argument("--seed", type=int, default=None, help="random: RNG seed")
    p_gen.add_argument(
        "--edge-prob", default="1/3", help="random: invitation probability"
    )
    p_gen.add_argument("--cap-min", default="1", help="random: capacity lower bound")
    p_gen.add_argument("--cap-max", default="10", help="random: capacity upper bound")
    p_gen.add_argument(
        "--seeds", type=int, default=1, help="random: sponsor seed set size"
    )
    p_gen.add_argument(
        "--size", type=int, default=7, help="chain/star/tree: agent count"
    )
    p_gen.add_argument(
        "--capacity", default="10", help="chain/star/tree: uniform capacity"
    )
    p_gen.set_defaults(func=cmd_gen)

    p_replay = sub.add_parser(
        "replay-attack", help="apply a serialized attack and report the gain"
    )
    p_replay.add_argument("instance", help="instance JSON path")
    p_replay.add_argument("attack", help="attack JSON path")
    p_replay.add_argument("--output", help="write attacked outcome JSON here")
    _add_param_flags(p_replay)
    p_replay.set_defaults(func=cmd_replay_attack)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "gen" and args.output is None:
        args.output = f"{args.kind}.json"
    try:
        return args.func(args)
    except (FormatError, NetworkError, MechanismError, AttackError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
