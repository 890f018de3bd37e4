"""Command-line surface: impact, scenario, schedule, frontier, decision-map,
mechanism, anchors.

Exit codes: 0 success, 2 flag/config validation, 3 unknown entity, 4
computation error. Output is deterministic for identical (config, seed)
pairs; the seed comes from --seed or the OVERHANG_SEED environment variable.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import random
import sys
from typing import Optional, Sequence

from overhang import decisions, frontier, impact, ledger, mechanisms, scenarios, schedule
from overhang.config import ConfigError, load_config, parse_quality, scenario_to_json
from overhang.ledger import ShareBasis, format_percent

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_UNKNOWN = 3
EXIT_COMPUTATION = 4

A2_EPSILONS = (1.5, 0.7, 0.3)


class UnknownEntityError(ValueError):
    pass


def _emit(rows: list[dict], fmt: str, out) -> None:
    """Render rows as an aligned table, CSV, JSON, or a markdown table."""
    if not rows:
        return
    if fmt == "json":
        json.dump(rows, out, indent=2)
        out.write("\n")
        return
    headers = list(rows[0].keys())
    if fmt == "csv":
        writer = csv.DictWriter(out, fieldnames=headers)
        writer.writeheader()
        writer.writerows(rows)
        return
    cells = [[_cell(r[h]) for h in headers] for r in rows]
    widths = [
        max(len(h), *(len(row[i]) for row in cells)) for i, h in enumerate(headers)
    ]
    if fmt == "markdown":
        out.write("| " + " | ".join(h.ljust(w) for h, w in zip(headers, widths)) + " |\n")
        out.write("|" + "|".join("-" * (w + 2) for w in widths) + "|\n")
        for row in cells:
            out.write("| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |\n")
        return
    out.write("  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip() + "\n")
    for row in cells:
        out.write("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() + "\n")


def _cell(value) -> str:
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _format_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--json", action="store_true", help="emit JSON")
    parser.add_argument("--csv", action="store_true", help="emit CSV")
    parser.add_argument("--markdown", action="store_true", help="emit a markdown table")


def _chosen_format(args: argparse.Namespace) -> str:
    if getattr(args, "json", False):
        return "json"
    if getattr(args, "csv", False):
        return "csv"
    if getattr(args, "markdown", False):
        return "markdown"
    return "table"


def _resolve_seed(args: argparse.Namespace) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    return int(os.environ.get("OVERHANG_SEED", "0"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="overhang",
        description="Disposition-space scenario toolkit for a large dormant position.",
    )
    parser.add_argument("--seed", type=int, default=None, help="deterministic seed")
    sub = parser.add_subparsers(dest="command", required=True)

    p_impact = sub.add_parser("impact", help="permanent impact and friction bands")
    p_impact.add_argument("--share", type=float, default=0.07)
    p_impact.add_argument("--epsilon", type=float, default=0.7)
    p_impact.add_argument("--quality", default="disciplined-otc")
    p_impact.add_argument("--participation", type=float, default=0.0017)
    p_impact.add_argument("--table", action="store_true", help="all reference elasticities")
    _format_flag(p_impact)

    p_scen = sub.add_parser("scenario", help="run a named scenario or a sweep")
    p_scen.add_argument("name", nargs="?", default=None, help="A, B, C, or 'sweep'")
    p_scen.add_argument("--config", help="config file (INI sections or JSON)")
    p_scen.add_argument("--volume", type=float, default=schedule.DEFAULT_DAILY_VOLUME_USD)
    p_scen.add_argument("--nominal", action="store_true", help="use the nominal share basis")
    p_scen.add_argument("--default-grid", action="store_true")
    p_scen.add_argument("--epsilons", help="comma-separated elasticity grid")
    p_scen.add_argument("--horizons", help="comma-separated horizon grid (years)")
    p_scen.add_argument("--allow-out-of-range", action="store_true")
    p_scen.add_argument("--emit-config", action="store_true", help="emit the run as JSON config")
    _format_flag(p_scen)

    p_sched = sub.add_parser("schedule", help="uniform selldown schedule and tranches")
    p_sched.add_argument("--position", type=float, default=ledger.DEFAULT_POSITION_BTC)
    p_sched.add_argument("--horizon", type=float, default=10)
    p_sched.add_argument("--volume", type=float, default=schedule.DEFAULT_DAILY_VOLUME_USD)
    p_sched.add_argument("--price", type=float, default=ledger.DEFAULT_REFERENCE_PRICE_USD)
    p_sched.add_argument("--tranches-per-year", type=int, default=None)
    p_sched.add_argument("--start", type=int, default=0, help="first unlock epoch")
    _format_flag(p_sched)

    p_front = sub.add_parser("frontier", help="optimal-execution frontier")
    p_front.add_argument("--lambdas", default="0", help="comma-separated risk aversions")
    p_front.add_argument("--total", type=float, default=100.0)
    p_front.add_argument("--periods", type=int, default=10)
    p_front.add_argument("--tau", type=float, default=1.0)
    p_front.add_argument("--sigma", type=float, default=1600.0)
    p_front.add_argument("--gamma", type=float, default=0.1)
    p_front.add_argument("--eta", type=float, default=1.0)
    _format_flag(p_front)

    p_dec = sub.add_parser("decision-map", help="terminal-state ranking and matrix")
    p_dec.add_argument("--retention-variant", action="store_true")
    p_dec.add_argument("--bear-bound", type=float, default=None)
    _format_flag(p_dec)

    p_mech = sub.add_parser("mechanism", help="disposition mechanism simulation")
    mech_sub = p_mech.add_subparsers(dest="action", required=True)
    p_sim = mech_sub.add_parser("simulate")
    p_sim.add_argument("--terminal", required=True,
                       choices=["dormancy", "burn", "adversarial", "liquidation"])
    p_sim.add_argument("--retention", type=float, default=0.0)
    p_sim.add_argument("--interval", type=int, default=30)
    p_sim.add_argument("--grace", type=int, default=3)
    p_sim.add_argument("--position", type=float, default=ledger.DEFAULT_POSITION_BTC)
    p_sim.add_argument("--horizon", type=int, default=3650, help="clock horizon, epochs")
    p_sim.add_argument("--program-years", type=float, default=10)
    p_sim.add_argument("--tranches-per-year", type=int, default=1)
    p_split = mech_sub.add_parser("split")
    p_split.add_argument("--secret-hex", required=True)
    p_split.add_argument("--threshold", "-k", type=int, required=True)
    p_split.add_argument("--shares", "-n", type=int, required=True)
    p_rec = mech_sub.add_parser("reconstruct")
    p_rec.add_argument("--threshold", "-k", type=int, required=True)
    p_rec.add_argument("share_lines", nargs="+", help="shares as index:hex")

    p_anchors = sub.add_parser("anchors", help="built-in empirical anchor events")
    _format_flag(p_anchors)

    return parser


def _impact_rows(share: float, epsilon: float, quality_text: str,
                 participation: float, table: bool) -> list[dict]:
    quality = parse_quality(quality_text)
    epsilons = A2_EPSILONS if table else (epsilon,)
    rows = []
    for eps in epsilons:
        permanent = impact.permanent_impact(share, impact.ElasticityModel(eps))
        band = impact.friction_band(quality, participation)
        result = impact.combine(permanent, band)
        rows.append({
            "epsilon": eps,
            "permanent": permanent,
            "permanent_pct": format_percent(permanent),
            "friction_pp": f"{band.low:g}-{band.high:g}",
            "friction_extrapolated": band.extrapolated,
            "total_low": result.total_low,
            "total_high": result.total_high,
            "total_pct": f"{format_percent(result.total_low)} to {format_percent(result.total_high)}",
        })
    return rows


def _scenario_row(result: scenarios.ScenarioResult) -> dict:
    return {
        "scenario": result.scenario_name,
        "annual_btc": float(result.schedule.annual_btc),
        "daily_btc": float(result.schedule.daily_btc),
        "daily_usd": result.schedule.daily_usd,
        "participation": result.schedule.participation,
        "participation_pct": format_percent(result.schedule.participation, decimals=2),
        "permanent": result.permanent,
        "friction_pp": f"{result.friction.low:g}-{result.friction.high:g}",
        "total_low": result.total[0],
        "total_high": result.total[1],
        "total_pct": f"{format_percent(result.total[0])} to {format_percent(result.total[1])}",
        "anchor_class": result.anchor_class,
    }


def _cmd_scenario(args: argparse.Namespace, out) -> int:
    run_ledger = ledger.SupplyLedger.from_btc()
    scenario = None
    volume = args.volume
    if args.config:
        with open(args.config, encoding="utf-8") as handle:
            cfg = load_config(handle.read())
        run_ledger = cfg.ledger
        scenario = cfg.scenario
        if cfg.volume != schedule.DEFAULT_DAILY_VOLUME_USD:
            volume = cfg.volume

    if args.name == "sweep":
        eps_grid = scenarios.DEFAULT_EPSILON_GRID
        horizon_grid = scenarios.DEFAULT_HORIZON_GRID
        if args.epsilons:
            eps_grid = tuple(float(v) for v in args.epsilons.split(","))
        if args.horizons:
            horizon_grid = tuple(float(v) for v in args.horizons.split(","))
        summary = scenarios.sensitivity_sweep(
            run_ledger,
            epsilon_grid=eps_grid,
            horizon_grid=horizon_grid,
            volume=volume,
            allow_out_of_range=args.allow_out_of_range,
        )
        rows = [_scenario_row(r) for r in summary.results]
        rows.append({
            "scenario": "BOUNDS",
            "annual_btc": "",
            "daily_btc": "",
            "daily_usd": "",
            "participation": "",
            "participation_pct": "",
            "permanent": "",
            "friction_pp": "",
            "total_low": -summary.max_abs_total,
            "total_high": -summary.min_abs_total,
            "total_pct": f"max |total| {format_percent(summary.max_abs_total)}",
            "anchor_class": "",
        })
        _emit(rows, _chosen_format(args), out)
        return EXIT_OK

    if scenario is None:
        if args.name is None:
            raise UnknownEntityError("no scenario name or config given")
        by_name = {s.name: s for s in scenarios.builtin_scenarios()}
        if args.name not in by_name:
            raise UnknownEntityError(f"unknown scenario {args.name!r}")
        scenario = by_name[args.name]

    if args.emit_config:
        out.write(scenario_to_json(scenario, run_ledger) + "\n")
        return EXIT_OK

    basis = ShareBasis.NOMINAL if args.nominal else ShareBasis.EFFECTIVE
    result = scenarios.run_scenario(scenario, run_ledger, volume, basis=basis)
    _emit([_scenario_row(result)], _chosen_format(args), out)
    return EXIT_OK


def _cmd_schedule(args: argparse.Namespace, out) -> int:
    params = schedule.ScheduleParams(
        position=args.position,
        horizon=args.horizon,
        reference_daily_volume=args.volume,
        price=args.price,
    )
    sched = schedule.build_uniform_schedule(params)
    if args.tranches_per_year:
        program = schedule.to_tranche_program(
            sched, granularity=args.tranches_per_year, start=args.start
        )
        rows = [
            {
                "tranche": i,
                "unlock_epoch": condition.value,
                "amount_btc": ledger.sats_to_btc(amount),
            }
            for i, (condition, amount) in enumerate(program.tranches)
        ]
    else:
        rows = schedule.schedule_rows(sched)
    _emit(rows, _chosen_format(args), out)
    return EXIT_OK


def _cmd_frontier(args: argparse.Namespace, out) -> int:
    lambdas = [float(v) for v in args.lambdas.split(",")]
    model = frontier.ExecutionModel(
        total_units=args.total,
        periods=args.periods,
        period_length=args.tau,
        volatility=args.sigma,
        permanent_coeff=args.gamma,
        temporary_coeff=args.eta,
    )
    points = frontier.frontier(model, lambdas)
    rows = [
        {
            "risk_aversion": p.risk_aversion,
            "expected_cost": p.expected_cost,
            "cost_variance": p.cost_variance,
        }
        for p in points
    ]
    _emit(rows, _chosen_format(args), out)
    if len(lambdas) == 1:
        variant = frontier.ExecutionModel(
            total_units=args.total,
            periods=args.periods,
            period_length=args.tau,
            volatility=args.sigma,
            permanent_coeff=args.gamma,
            temporary_coeff=args.eta,
            risk_aversion=lambdas[0],
        )
        trajectory = frontier.optimal_trajectory(variant)
        out.write("holdings: " + ", ".join(f"{x:.6g}" for x in trajectory.holdings) + "\n")
    return EXIT_OK


def _cmd_decision_map(args: argparse.Namespace, out) -> int:
    matrix = decisions.consistency_matrix(retention_variant=args.retention_variant)
    ranking = decisions.rank_terminal_states(matrix)
    run_ledger = ledger.SupplyLedger.from_btc()
    bear_bound = args.bear_bound
    if bear_bound is None:
        builtin = {s.name: s for s in scenarios.builtin_scenarios()}
        bear_bound = scenarios.run_scenario(builtin["C"], run_ledger).total[0]
    rows = []
    for rank, kind in enumerate(ranking, start=1):
        effect = decisions.supply_effect(
            decisions.TerminalState(kind=kind), run_ledger, bear_bound
        )
        rows.append({
            "rank": rank,
            "terminal_state": kind.value,
            "delta_effective_float_btc": effect.delta_effective_float,
            "market_sign": effect.market_sign.value,
            "bound": "" if effect.bound is None else effect.bound,
        })
    _emit(rows, _chosen_format(args), out)
    out.write("\n")
    matrix_rows = []
    for preference in decisions.PreferenceSet:
        row = {"preference_set": preference.value}
        for kind in decisions.TerminalStateKind:
            row[kind.value] = matrix.mark(preference, kind).value
        matrix_rows.append(row)
    _emit(matrix_rows, _chosen_format(args), out)
    return EXIT_OK


def _cmd_mechanism(args: argparse.Namespace, out, seed: int) -> int:
    if args.action == "split":
        secret = bytes.fromhex(args.secret_hex)
        shares = mechanisms.split(secret, args.threshold, args.shares, random.Random(seed))
        for share in shares:
            out.write(share.serialize() + "\n")
        return EXIT_OK
    if args.action == "reconstruct":
        shares = [mechanisms.Share.deserialize(line) for line in args.share_lines]
        secret = mechanisms.reconstruct(shares, args.threshold)
        out.write(secret.hex() + "\n")
        return EXIT_OK

    terminal_map = {
        "dormancy": decisions.TerminalStateKind.DORMANCY_NON_RECOVERY,
        "burn": decisions.TerminalStateKind.SILENT_BURN,
        "adversarial": decisions.TerminalStateKind.ADVERSARIAL_SWITCH,
        "liquidation": decisions.TerminalStateKind.PATIENT_LIQUIDATION,
    }
    kind = terminal_map[args.terminal]
    retention = args.retention if kind is decisions.TerminalStateKind.SILENT_BURN else 0.0
    terminal = decisions.TerminalState(kind=kind, retention_fraction=retention)
    action = (
        mechanisms.DmsAction.DESTROY_SHARDS
        if kind is decisions.TerminalStateKind.DORMANCY_NON_RECOVERY
        else mechanisms.DmsAction.PUBLISH_SHARDS
    )
    config = mechanisms.DmsConfig(
        heartbeat_interval=args.interval, grace_missed=args.grace, action=action
    )
    program = None
    if kind is decisions.TerminalStateKind.PATIENT_LIQUIDATION:
        sched = schedule.build_uniform_schedule(
            schedule.ScheduleParams(position=args.position, horizon=args.program_years)
        )
        program = schedule.to_tranche_program(sched, granularity=args.tranches_per_year)
    events = mechanisms.simulate_disposition(
        terminal,
        config,
        tranche_program=program,
        clock_horizon=args.horizon,
        position_btc=args.position,
    )
    for event in events:
        out.write(event.to_json() + "\n")
    out.write(f"# events: {len(events)}\n")
    return EXIT_OK


def _cmd_anchors(args: argparse.Namespace, out) -> int:
    rows = []
    for anchor in scenarios.builtin_anchors():
        band = anchor.observed_impact
        rows.append({
            "name": anchor.name,
            "amount_btc": anchor.amount_btc,
            "impact_low": "" if band is None else band[0],
            "impact_high": "" if band is None else band[1],
            "execution_class": anchor.execution_class.value,
            "note": anchor.note,
        })
    _emit(rows, _chosen_format(args), out)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = _resolve_seed(args)
    header_fmt = _chosen_format(args)
    try:
        if header_fmt not in ("json", "csv"):
            out.write(f"# seed {seed}\n")
        if args.command == "impact":
            if args.epsilon <= 0 or not 0 <= args.share:
                parser.error(f"invalid impact flags: epsilon={args.epsilon}")
            rows = _impact_rows(
                args.share, args.epsilon, args.quality, args.participation, args.table
            )
            _emit(rows, header_fmt, out)
            return EXIT_OK
        if args.command == "scenario":
            return _cmd_scenario(args, out)
        if args.command == "schedule":
            return _cmd_schedule(args, out)
        if args.command == "frontier":
            return _cmd_frontier(args, out)
        if args.command == "decision-map":
            return _cmd_decision_map(args, out)
        if args.command == "mechanism":
            return _cmd_mechanism(args, out, seed)
        if args.command == "anchors":
            return _cmd_anchors(args, out)
        parser.error(f"unknown command {args.command}")
    except UnknownEntityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN
    except (ConfigError,) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
