"""Command-line front end.

Subcommands: ``profit`` (closed-form shares and RERs), ``simulate`` (Monte
Carlo), ``tables`` (reference-grid reproduction to CSV + figure), ``sweep``
(strategy maps / minimal-attracted-power maps to CSV + figure), ``miner``
(rational-miner verdict), ``econ`` (attack economics calculators), and
``report`` (full verification harness).

Conventions
-----------
* ``--format {text|json|csv}`` on every subcommand.  Text output rounds
  percentages to two decimals; machine formats carry 17 significant digits.
* An optional ``--config FILE`` supplies flat ``key = value`` defaults
  mirroring the long flag names; explicit flags win.
* ``FORKBENCH_SEED`` provides the default seed; the ``--seed`` flag wins.
* Exit codes: 0 success, 2 invalid parameters, 1 internal error or failed
  verification checks.
* File-emitting subcommands write deterministic CSV (UTF-8, LF, header row)
  and render a matplotlib figure next to each CSV.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import analytic, decision, economics, harness, reference
from .errors import ForkbenchError
from .harness import simulate_table_percent
from .model import (
    AttackerStrategy,
    PowerSplit,
    RevenueBreakdown,
    Scenario,
    rer,
)
from .montecarlo import SimConfig, SimVariant, simulate

__all__ = ["main", "build_parser"]


# ---------------------------------------------------------------------------
# Output rendering
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _flatten(prefix: str, obj, out: dict[str, str]) -> None:
    if isinstance(obj, dict):
        for key, val in obj.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), val, out)
    elif isinstance(obj, float):
        out[prefix] = _fmt(obj)
    else:
        out[prefix] = str(obj)


def _emit(record: dict, fmt: str, text_lines: list[str]) -> None:
    if fmt == "json":
        print(json.dumps(record, indent=2, sort_keys=True))
    elif fmt == "csv":
        flat: dict[str, str] = {}
        _flatten("", record, flat)
        print(",".join(flat))
        print(",".join(flat.values()))
    else:
        for line in text_lines:
            print(line)


def _pct(value: float) -> str:
    return f"{100.0 * value:.2f}%"


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _load_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ForkbenchError(f"config line without '=': {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        values[key.replace("-", "_")] = val
    return values


def _apply_config(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    """Fill flag values left at None from the config file, then from
    hard defaults registered on the parser."""
    config = _load_config(args.config) if args.config else {}
    hard = getattr(parser, "_hard_defaults", {})
    for key, val in config.items():
        if not hasattr(args, key):
            raise ForkbenchError(f"unknown config key: {key}")
        if getattr(args, key) is None:
            caster = getattr(parser, "_casters", {}).get(key, str)
            setattr(args, key, caster(val))
    for key, val in hard.items():
        if getattr(args, key, None) is None:
            setattr(args, key, val)


def _add_option(parser, name: str, *, type=float, default=None, required=False, choices=None, help=""):
    """Register a flag whose default is resolved after config merging."""
    parser.add_argument(
        f"--{name}", dest=name.replace("-", "_"), type=type, default=None,
        choices=choices, help=help,
    )
    key = name.replace("-", "_")
    parser._casters = getattr(parser, "_casters", {})
    parser._casters[key] = type
    if default is not None:
        parser._hard_defaults = getattr(parser, "_hard_defaults", {})
        parser._hard_defaults[key] = default
    if required:
        parser._required_keys = getattr(parser, "_required_keys", [])
        parser._required_keys.append(key)


def _check_required(args, parser) -> None:
    for key in getattr(parser, "_required_keys", []):
        if getattr(args, key) is None:
            parser.error(f"missing required option --{key.replace('_', '-')}")


def _default_seed() -> int:
    env = os.environ.get("FORKBENCH_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ForkbenchError(f"FORKBENCH_SEED={env!r} is not an integer") from exc
    return 1


def _common(sub) -> None:
    sub.add_argument("--format", choices=("text", "json", "csv"), default="text")
    sub.add_argument("--config", default=None, help="flat key = value defaults file")


# ---------------------------------------------------------------------------
# Figures
# ---------------------------------------------------------------------------


def _figure_path(csv_path: Path) -> Path:
    return csv_path.with_suffix(".png")


def _render_table_figure(csv_path: Path, table_id: int, rows: list[tuple]) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    spec = reference.TABLES[table_id]
    for gamma in reference.GAMMAS:
        pts = [(r[1], r[2], r[3]) for r in rows if r[0] == gamma]
        cols = [p[0] for p in pts]
        ax.plot(cols, [p[2] for p in pts], "-", label=f"analytic, γ={gamma:g}")
        ax.plot(cols, [p[1] for p in pts], "o", markersize=4)
    ax.set_xlabel(spec.column_name)
    ax.set_ylabel("RER (%)")
    ax.set_title(spec.description)
    ax.legend(fontsize=7)
    out = _figure_path(csv_path)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def _render_sweep_figure(csv_path: Path, mode: str, rows: list[tuple]) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    if mode == "verdict":
        colors = {"honest": "tab:green", "selfish": "tab:red",
                  "psm": "tab:blue", "apsm": "tab:purple"}
        for best in sorted({r[-1] for r in rows}):
            xs = [r[0] for r in rows if r[-1] == best]
            ys = [r[1] for r in rows if r[-1] == best]
            ax.scatter(xs, ys, s=12, color=colors.get(best, "gray"), label=best)
        ax.set_xlabel("alpha_a")
        ax.set_ylabel("gamma")
        ax.set_title("best attacker strategy")
        ax.legend(fontsize=7)
    else:
        gammas = sorted({r[1] for r in rows})
        for g in gammas:
            pts = [(r[0], r[2]) for r in rows if r[1] == g and r[2] == r[2]]
            ax.plot([p[0] for p in pts], [p[1] for p in pts], label=f"γ={g:g}")
        ax.set_xlabel("alpha_a")
        ax.set_ylabel("minimal alpha_i")
        ax.set_title("attracted power needed for A-PSM to beat honest and selfish")
        ax.legend(fontsize=7)
    out = _figure_path(csv_path)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


def _render_report_figure(csv_path: Path, results) -> Path:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    groups: dict[str, list[int]] = {}
    for r in results:
        group = r.check_id.split("-")[0]
        groups.setdefault(group, [0, 0])
        groups[group][0 if r.passed else 1] += 1
    names = sorted(groups)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.bar(names, [groups[n][0] for n in names], label="pass", color="tab:green")
    ax.bar(
        names,
        [groups[n][1] for n in names],
        bottom=[groups[n][0] for n in names],
        label="fail",
        color="tab:red",
    )
    ax.set_ylabel("checks")
    ax.set_title("verification summary")
    ax.legend()
    out = _figure_path(csv_path)
    fig.tight_layout()
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return out


# ---------------------------------------------------------------------------
# Subcommand implementations
# ---------------------------------------------------------------------------


def _profit_breakdown(
    strategy: AttackerStrategy, powers: PowerSplit, gamma: float
) -> RevenueBreakdown:
    if strategy is AttackerStrategy.PSM:
        return analytic.psm_profits(powers, gamma)
    if strategy is AttackerStrategy.APSM:
        return analytic.apsm_profits(powers, gamma)
    if strategy is AttackerStrategy.HONEST:
        return RevenueBreakdown.from_rates(
            powers.alpha_a, powers.alpha_i, powers.alpha_h
        )
    # classic selfish: the would-be attracted miners mine publicly and split
    # the non-attacker revenue pro rata with the honest majority
    share = analytic.selfish_profit(powers.alpha_a, gamma)
    rest = 1.0 - share
    public = powers.alpha_i + powers.alpha_h
    att = rest * powers.alpha_i / public if public > 0.0 else 0.0
    return RevenueBreakdown.from_rates(share, att, rest - att)


def _cmd_profit(args) -> int:
    strategy = AttackerStrategy(args.strategy)
    powers = PowerSplit.from_attack(args.alpha_a, args.alpha_i)
    bd = _profit_breakdown(strategy, powers, args.gamma)
    results = {
        "share_attacker": bd.share_attacker,
        "share_attracted": bd.share_attracted,
        "share_honest": bd.share_honest,
    }
    if powers.alpha_a > 0.0:
        results["rer_vs_honest"] = rer(bd.share_attacker, powers.alpha_a)
        selfish = analytic.selfish_profit(powers.alpha_a, args.gamma)
        if selfish > 0.0:
            results["rer_vs_selfish"] = rer(bd.share_attacker, selfish)
    record = {
        "command": "profit",
        "params": {
            "strategy": strategy.value,
            "alpha_a": args.alpha_a,
            "alpha_i": args.alpha_i,
            "gamma": args.gamma,
        },
        "results": results,
    }
    lines = [
        f"strategy        {strategy.value}",
        f"share attacker  {bd.share_attacker:.6f}",
        f"share attracted {bd.share_attracted:.6f}",
        f"share honest    {bd.share_honest:.6f}",
    ]
    if "rer_vs_honest" in results:
        lines.append(f"RER vs honest   {_pct(results['rer_vs_honest'])}")
    if "rer_vs_selfish" in results:
        lines.append(f"RER vs selfish  {_pct(results['rer_vs_selfish'])}")
    _emit(record, args.format, lines)
    return 0


_SIM_VARIANTS = {
    "honest": SimVariant.HONEST,
    "selfish": SimVariant.SELFISH,
    "psm": SimVariant.PSM_ATTACKER,
    "apsm": SimVariant.APSM_ATTACKER,
    "psm-miner": SimVariant.PSM_MINER,
    "apsm-miner": SimVariant.APSM_MINER,
}


def _cmd_simulate(args) -> int:
    variant = _SIM_VARIANTS[args.strategy]
    powers = PowerSplit.from_attack(args.alpha_a, args.alpha_i)
    cfg = SimConfig(args.rounds, args.seed, args.workers, variant)
    rep = simulate(powers, args.gamma, cfg)
    record = {
        "command": "simulate",
        "params": {
            "strategy": args.strategy,
            "alpha_a": args.alpha_a,
            "alpha_i": args.alpha_i,
            "gamma": args.gamma,
            "rounds": args.rounds,
        },
        "seed": args.seed,
        "results": {
            "blocks_attacker": rep.blocks_attacker,
            "blocks_attracted": rep.blocks_attracted,
            "blocks_honest": rep.blocks_honest,
            "share_attacker": rep.share_attacker,
            "share_attracted": rep.share_attracted,
            "share_honest": rep.share_honest,
        },
        "error_bounds": {
            "stderr_attacker": rep.stderr_attacker,
            "stderr_attracted": rep.stderr_attracted,
            "stderr_honest": rep.stderr_honest,
        },
    }
    lines = [
        f"variant         {args.strategy}",
        f"rounds          {rep.rounds}   seed {rep.seed}",
        f"share attacker  {rep.share_attacker:.6f} ± {rep.stderr_attacker:.6f}",
        f"share attracted {rep.share_attracted:.6f} ± {rep.stderr_attracted:.6f}",
        f"share honest    {rep.share_honest:.6f} ± {rep.stderr_honest:.6f}",
    ]
    _emit(record, args.format, lines)
    return 0


def _cmd_tables(args) -> int:
    spec = reference.TABLES.get(args.table)
    if spec is None:
        raise ForkbenchError(f"unknown table id {args.table}")
    out = Path(args.out)
    rows = []
    for gamma in reference.GAMMAS:
        for column in spec.columns:
            sim = simulate_table_percent(
                args.table, column, gamma, args.rounds, args.seed
            )
            if args.table == 1:
                # the committed miner grid is a race-window approximation
                # with no matching event process; pair the simulated RER
                # with the exact chain value instead
                ana = 100.0 * analytic.psm_miner_rer(
                    column, spec.fixed_value, gamma
                )
            else:
                ana = reference.table_analytic_percent(args.table, column, gamma)
            rows.append((gamma, column, sim, ana, abs(sim - ana)))
    lines = ["gamma,alpha_param,simulated,analytic,abs_diff"]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    fig = _render_table_figure(out, args.table, rows)
    record = {
        "command": "tables",
        "params": {"table": args.table, "rounds": args.rounds},
        "seed": args.seed,
        "results": {
            "csv": str(out),
            "figure": str(fig),
            "max_abs_diff": max(r[4] for r in rows),
        },
    }
    _emit(
        record,
        args.format,
        [
            f"table {args.table}: {len(rows)} cells -> {out} (figure {fig})",
            f"max |simulated - analytic| = {max(r[4] for r in rows):.4f} pp",
        ],
    )
    return 0


def _parse_range(text: str) -> tuple[float, float]:
    parts = text.split(":")
    if len(parts) != 2:
        raise ForkbenchError(f"range {text!r} must look like start:stop")
    return float(parts[0]), float(parts[1])


def _cmd_sweep(args) -> int:
    a_lo, a_hi = _parse_range(args.alpha_a_range)
    g_lo, g_hi = _parse_range(args.gamma_range)
    a_axis = decision.SweepAxis(a_lo, a_hi, args.step)
    g_axis = decision.SweepAxis(g_lo, g_hi, args.step if g_hi > g_lo else 1.0)
    out = Path(args.out)
    if args.mode == "verdict":
        grid = decision.SweepGrid(
            a_axis,
            g_axis,
            alpha_i=args.alpha_i if args.rational_fraction is None else 0.0,
            alpha_i_fraction=args.rational_fraction,
        )
        filled = decision.sweep(grid)
        lines = ["alpha_a,gamma,alpha_i,r_honest,r_selfish,r_psm,r_apsm,best"]
        rows = []
        for cell in filled.cells:
            p = cell.verdict.profits
            apsm = p.get(AttackerStrategy.APSM)
            row = (
                cell.alpha_a,
                cell.gamma,
                cell.alpha_i,
                p[AttackerStrategy.HONEST],
                p[AttackerStrategy.SELFISH],
                p[AttackerStrategy.PSM],
                apsm if apsm is not None else float("nan"),
                cell.verdict.best.value,
            )
            rows.append(row)
            lines.append(
                ",".join(_fmt(v) if isinstance(v, float) else v for v in row)
            )
        fig_rows = [(r[0], r[1], r[7]) for r in rows]
        n_cells = len(rows)
    else:
        cells = decision.min_alpha_i_sweep(a_axis, g_axis)
        lines = ["alpha_a,gamma,min_alpha_i"]
        rows = []
        for cell in cells:
            v = cell.min_alpha_i if cell.min_alpha_i is not None else float("nan")
            rows.append((cell.alpha_a, cell.gamma, v))
            lines.append(",".join(_fmt(x) for x in rows[-1]))
        fig_rows = rows
        n_cells = len(rows)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    fig = _render_sweep_figure(out, args.mode, fig_rows)
    record = {
        "command": "sweep",
        "params": {
            "mode": args.mode,
            "alpha_a_range": args.alpha_a_range,
            "gamma_range": args.gamma_range,
            "step": args.step,
        },
        "results": {"csv": str(out), "figure": str(fig), "cells": n_cells},
    }
    _emit(
        record,
        args.format,
        [f"sweep ({args.mode}): {n_cells} cells -> {out} (figure {fig})"],
    )
    return 0


def _cmd_miner(args) -> int:
    strategy = AttackerStrategy(args.attacker_strategy)
    if strategy is AttackerStrategy.PSM:
        greedy = analytic.psm_miner_greedy_profit(args.alpha_a, args.alpha_k)
        public = analytic.psm_miner_public_profit(args.alpha_a, args.alpha_k, args.gamma)
        margin = analytic.psm_miner_rer(args.alpha_a, args.alpha_k, args.gamma)
    elif strategy is AttackerStrategy.APSM:
        greedy = analytic.apsm_miner_greedy_profit(args.alpha_a, args.alpha_k, args.gamma)
        public = analytic.apsm_miner_public_profit(args.alpha_a, args.alpha_k, args.gamma)
        margin = analytic.apsm_miner_rer(args.alpha_a, args.alpha_k, args.gamma)
    else:
        greedy = public = args.alpha_k
        margin = 0.0
    verdict = decision.best_miner_strategy(
        args.alpha_a, args.alpha_k, args.gamma, strategy
    )
    threshold = analytic.join_threshold(args.alpha_a, args.gamma)
    record = {
        "command": "miner",
        "params": {
            "alpha_a": args.alpha_a,
            "alpha_k": args.alpha_k,
            "gamma": args.gamma,
            "attacker_strategy": strategy.value,
        },
        "results": {
            "profit_greedy": greedy,
            "profit_public": public,
            "rer_greedy_vs_public": margin,
            "join_threshold": threshold,
            "verdict": verdict.value,
        },
    }
    lines = [
        f"profit greedy   {greedy:.6f}",
        f"profit public   {public:.6f}",
        f"RER             {_pct(margin)}",
        f"join threshold  {threshold:.6f}",
        f"verdict         {verdict.value}",
    ]
    _emit(record, args.format, lines)
    return 0


def _cmd_econ(args) -> int:
    net = economics.NetworkParams(args.difficulty, args.t_avg, args.p_e)
    topic = args.econ_command
    if topic == "hashrate":
        results = {"hashrate": economics.hashrate_from_difficulty(net)}
        lines = [f"network hashrate {results['hashrate']:.6e} H/s"]
    elif topic == "search-time":
        t = economics.secret_search_time(args.bytes, args.fraction, net)
        results = {"seconds": t}
        lines = [f"expected search time {t:.6g} s"]
    elif topic == "hidden-bytes":
        b = economics.required_hidden_bytes(args.t, args.fraction, net)
        results = {"bytes": b}
        lines = [f"required hidden bytes {b:.6g}"]
    elif topic == "find-prob":
        p = economics.find_probability(args.t, args.alpha_e, net)
        results = {"probability": p}
        lines = [f"find probability {p:.6g}"]
    else:  # dos
        scenario = economics.DosScenario(
            args.n, args.tc, PowerSplit.from_attack(args.alpha_a, 0.0)
        )
        verdict = economics.dos_viability(scenario, net)
        results = {
            "viable": verdict.viable,
            "expected_blocks": verdict.expected_blocks,
            "threshold": verdict.threshold,
        }
        lines = [
            f"expected blocks {verdict.expected_blocks:.6g}"
            f" vs threshold {verdict.threshold:g}",
            f"viable          {verdict.viable}",
        ]
    record = {
        "command": f"econ {topic}",
        "params": {
            k: getattr(args, k)
            for k in ("difficulty", "t_avg", "p_e", "bytes", "fraction", "t",
                      "alpha_e", "n", "tc", "alpha_a")
            if getattr(args, k, None) is not None
        },
        "results": results,
    }
    _emit(record, args.format, lines)
    return 0


def _cmd_report(args) -> int:
    tables = tuple(int(t) for t in args.tables.split(",")) if args.tables else (1, 2, 3, 4, 5)
    results = harness.run_all(args.rounds, args.seed, args.points, tables)
    out = Path(args.out)
    failed = harness.write_report(results, out)
    fig = _render_report_figure(out, results)
    record = {
        "command": "report",
        "params": {"rounds": args.rounds, "points": args.points,
                   "tables": ",".join(str(t) for t in tables)},
        "seed": args.seed,
        "results": {
            "csv": str(out),
            "figure": str(fig),
            "checks": len(results),
            "failed": failed,
        },
    }
    lines = [f"{'PASS' if r.passed else 'FAIL'} {r.check_id}" for r in results if not r.passed]
    lines.append(
        f"report: {len(results) - failed}/{len(results)} checks passed -> {out} (figure {fig})"
    )
    _emit(record, args.format, lines)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="forkbench",
        description="Block-withholding strategy calculus: profits, simulations, sweeps.",
    )
    subs = parser.add_subparsers(dest="subcommand", required=True)

    p = subs.add_parser("profit", help="closed-form shares and RERs")
    _common(p)
    _add_option(p, "strategy", type=str, required=True,
                choices=("honest", "selfish", "psm", "apsm"))
    _add_option(p, "alpha-a", required=True)
    _add_option(p, "alpha-i", default=0.0)
    _add_option(p, "gamma", default=0.0)
    p.set_defaults(func=_cmd_profit, _parser=p)

    p = subs.add_parser("simulate", help="Monte Carlo share estimation")
    _common(p)
    _add_option(p, "strategy", type=str, required=True,
                choices=tuple(_SIM_VARIANTS))
    _add_option(p, "alpha-a", required=True)
    _add_option(p, "alpha-i", default=0.0)
    _add_option(p, "gamma", default=0.0)
    _add_option(p, "rounds", type=int, default=10**6)
    _add_option(p, "seed", type=int)
    _add_option(p, "workers", type=int, default=1)
    p.set_defaults(func=_cmd_simulate, _parser=p)

    p = subs.add_parser("tables", help="reproduce one reference grid")
    _common(p)
    _add_option(p, "table", type=int, required=True)
    _add_option(p, "rounds", type=int, default=10**6)
    _add_option(p, "seed", type=int)
    _add_option(p, "out", type=str, required=True)
    p.set_defaults(func=_cmd_tables, _parser=p)

    p = subs.add_parser("sweep", help="strategy maps over (alpha_a, gamma)")
    _common(p)
    _add_option(p, "mode", type=str, default="verdict",
                choices=("verdict", "min-alpha-i"))
    _add_option(p, "alpha-a-range", type=str, required=True)
    _add_option(p, "gamma-range", type=str, required=True)
    _add_option(p, "step", default=0.01)
    _add_option(p, "alpha-i", default=0.0)
    _add_option(p, "rational-fraction")
    _add_option(p, "out", type=str, required=True)
    p.set_defaults(func=_cmd_sweep, _parser=p)

    p = subs.add_parser("miner", help="rational miner verdict")
    _common(p)
    _add_option(p, "alpha-a", required=True)
    _add_option(p, "alpha-k", required=True)
    _add_option(p, "gamma", default=0.0)
    _add_option(p, "attacker-strategy", type=str, default="psm",
                choices=("honest", "selfish", "psm", "apsm"))
    p.set_defaults(func=_cmd_miner, _parser=p)

    p = subs.add_parser("econ", help="attack economics calculators")
    econ_subs = p.add_subparsers(dest="econ_command", required=True)
    for topic in ("hashrate", "search-time", "hidden-bytes", "find-prob", "dos"):
        q = econ_subs.add_parser(topic)
        _common(q)
        _add_option(q, "difficulty", default=31.25e12)
        _add_option(q, "t-avg", default=600.0)
        _add_option(q, "p-e", default=0.64)
        if topic == "search-time":
            _add_option(q, "bytes", required=True)
            _add_option(q, "fraction", required=True)
        elif topic == "hidden-bytes":
            _add_option(q, "t", required=True)
            _add_option(q, "fraction", required=True)
        elif topic == "find-prob":
            _add_option(q, "t", required=True)
            _add_option(q, "alpha-e", default=1.0)
        elif topic == "dos":
            _add_option(q, "n", type=int, required=True)
            _add_option(q, "tc", required=True)
            _add_option(q, "alpha-a", required=True)
        q.set_defaults(func=_cmd_econ, _parser=q)

    p = subs.add_parser("report", help="full verification harness")
    _common(p)
    _add_option(p, "rounds", type=int, default=10**7)
    _add_option(p, "seed", type=int)
    _add_option(p, "points", type=int, default=200)
    _add_option(p, "tables", type=str)
    _add_option(p, "out", type=str, default="report.csv")
    p.set_defaults(func=_cmd_report, _parser=p)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = args._parser
    try:
        _apply_config(args, sub)
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = _default_seed()
        _check_required(args, sub)
        return args.func(args)
    except ForkbenchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SystemExit:
        raise
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
