"""End-to-end acceptance checks.

Each test prints a single ``CRITERION n: PASS/FAIL`` line (bypassing pytest's
capture) before asserting.  Three criteria pin expectations that the committed
reference grids cannot meet; those print FAIL and are marked strict-xfail:

* criterion 1: the benchmark share at (1/3, 1/3, gamma=0) is exactly 1/3
  under every oracle here (closed form, chain solver, simulation), not the
  quoted 0.3403 (which this model attains at alpha_i = 1/2 instead);
* criterion 2: two cells of the committed miner grid (gamma=0.5,
  alpha_a in {0.1, 0.2}) repeat the simulated column instead of the
  generator's output;
* criterion 9: at the two quoted example coordinates a different strategy
  (weakly) dominates the partial-withholding one, so the verdict is not PSM.
"""

from __future__ import annotations

import inspect
import json
import math
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from forkbench import analytic, chains, decision, economics, harness
from forkbench.chains import ChainVariant, build_chain
from forkbench.model import AttackerStrategy, PowerSplit
from forkbench.montecarlo import SimConfig, SimVariant, simulate

ROUNDS = 10**7
SEED = 1


def announce(capsys, n: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"CRITERION {n}: {'PASS' if ok else 'FAIL'} — {detail}", flush=True)


@pytest.mark.xfail(
    strict=True,
    reason="the quoted benchmark value 0.3403 is attained at alpha_i=1/2, "
    "not at the quoted coordinates, where every oracle gives exactly 1/3",
)
def test_criterion_1_benchmark_point(capsys):
    powers = PowerSplit.from_attack(1.0 / 3.0, 1.0 / 3.0)
    t0 = time.perf_counter()
    share = analytic.psm_profits(powers, 0.0).share_attacker
    spec = build_chain(
        powers.alpha_a, 0.0, ChainVariant.PSM_ATTACKER, alpha_i=powers.alpha_i
    )
    chain_share = chains.reward_rates(spec, chains.stationary(spec)).share_attacker
    rep = simulate(powers, 0.0, SimConfig(ROUNDS, SEED, 4, SimVariant.PSM_ATTACKER))
    elapsed = time.perf_counter() - t0
    chain_ok = abs(share - chain_share) < 1e-9
    mc_ok = abs(rep.share_attacker - share) < 4.0 * max(rep.stderr_attacker, 1e-9)
    quoted_ok = abs(share - 0.3403) < 5e-5
    ok = chain_ok and mc_ok and quoted_ok and elapsed < 10.0
    announce(
        capsys, 1, ok,
        f"share={share:.6f} (quoted 0.3403), chain agree={chain_ok}, "
        f"mc agree={mc_ok}, {elapsed:.1f}s",
    )
    assert chain_ok
    assert mc_ok
    assert elapsed < 10.0
    assert quoted_ok


@pytest.mark.xfail(
    strict=True,
    reason="two committed miner-grid cells (gamma=0.5, alpha_a in {0.1, 0.2}) "
    "repeat the simulated column and sit 0.02-0.10pp off the generator",
)
def test_criterion_2_miner_grid(capsys):
    results = harness.run_table_checks(1, rounds=ROUNDS, seed=SEED)
    failed = sorted(r.check_id for r in results if not r.passed)
    ok = not failed
    announce(
        capsys, 2, ok,
        f"miner grid: {len(results) - len(failed)}/{len(results)} cells"
        + (f", failing {failed}" if failed else ""),
    )
    assert failed == []


def test_criterion_3_psm_grids(capsys):
    results = harness.run_table_checks(2, rounds=ROUNDS, seed=SEED)
    results += harness.run_table_checks(3, rounds=ROUNDS, seed=SEED)
    failed = [r for r in results if not r.passed]
    ok = not failed
    announce(
        capsys, 3, ok,
        f"PSM vs honest/selfish grids: {len(results) - len(failed)}/{len(results)} cells",
    )
    assert not failed, [(r.check_id, r.expected, r.computed) for r in failed]


def test_criterion_4_apsm_grids(capsys):
    results = harness.run_table_checks(4, rounds=ROUNDS, seed=SEED)
    results += harness.run_table_checks(5, rounds=ROUNDS, seed=SEED)
    failed = [r for r in results if not r.passed]
    zero_ok = all(
        abs(analytic.apsm_vs_selfish_rer(PowerSplit.from_attack(0.1, 0.0), g)) < 1e-9
        for g in (0.0, 0.25, 0.5, 0.75, 1.0)
    )
    ok = not failed and zero_ok
    announce(
        capsys, 4, ok,
        f"A-PSM grids: {len(results) - len(failed)}/{len(results)} cells, "
        f"zero column exact={zero_ok}",
    )
    assert not failed, [(r.check_id, r.expected, r.computed) for r in failed]
    assert zero_ok


def test_criterion_5_selfish_sanity(capsys):
    d1 = abs(analytic.selfish_profit(1.0 / 3.0, 0.0) - 1.0 / 3.0)
    d2 = abs(analytic.selfish_profit(0.25, 0.5) - 0.25)
    ok = d1 < 1e-12 and d2 < 1e-12
    announce(capsys, 5, ok, f"selfish thresholds: |d1|={d1:.1e}, |d2|={d2:.1e}")
    assert ok


def test_criterion_6_chain_equivalence(capsys):
    results = harness.run_equivalence_checks(points_per_variant=200, seed=SEED)
    worst = max(r.computed for r in results if r.check_id != "equiv-apsm-truncation")
    ok = all(r.passed for r in results)
    announce(capsys, 6, ok, f"4 variants x 200 points, worst |diff|={worst:.2e}")
    assert ok, [(r.check_id, r.computed) for r in results if not r.passed]


def test_criterion_7_apsm_dominance(capsys):
    worst = math.inf
    for ia in range(1, 50):
        for ii in range(0, 50 - ia):
            a = ia / 100.0
            powers = PowerSplit.from_attack(a, ii / 100.0)
            for g in (0.0, 0.5, 1.0):
                gap = (
                    analytic.apsm_profits(powers, g).share_attacker
                    - analytic.selfish_profit(a, g)
                )
                worst = min(worst, gap)
    ok = worst >= -1e-9
    announce(capsys, 7, ok, f"dominance grid (step 0.01): min(apsm - selfish)={worst:.2e}")
    assert ok


def test_criterion_8_join_threshold_roots(capsys):
    worst = 0.0
    for a in np.arange(0.05, 0.50, 0.05):
        for g in np.arange(0.0, 1.01, 0.25):
            k = analytic.join_threshold(float(a), float(g))
            if not 0.0 < k <= 0.5:
                continue
            worst = max(worst, abs(analytic.psm_miner_rer(float(a), k, float(g))))
    ok = worst < 1e-9
    announce(capsys, 8, ok, f"threshold roots: worst |RER at threshold|={worst:.2e}")
    assert ok


@pytest.mark.xfail(
    strict=True,
    reason="at both quoted example coordinates another strategy weakly "
    "dominates, so the verdict is not the partial-withholding one",
)
def test_criterion_9_strategy_regions(capsys):
    cells = decision.sweep(
        decision.SweepGrid(
            decision.SweepAxis(0.30, 0.37, 0.005), decision.SweepAxis(0.0, 0.0, 1.0)
        )
    ).cells
    selfish = [c.alpha_a for c in cells if c.verdict.best is AttackerStrategy.SELFISH]
    boundary_ok = abs(min(selfish) - 1.0 / 3.0) <= 0.005
    v1 = decision.best_attacker_strategy(PowerSplit.from_attack(0.09, 0.01), 0.9).best
    v2 = decision.best_attacker_strategy(PowerSplit.from_attack(0.25, 0.50), 0.0).best
    examples_ok = v1 is AttackerStrategy.PSM and v2 is AttackerStrategy.PSM
    ok = boundary_ok and examples_ok
    announce(
        capsys, 9, ok,
        f"boundary at 1/3={boundary_ok}; example verdicts {v1.value}/{v2.value} "
        "(expected psm/psm)",
    )
    assert boundary_ok
    assert examples_ok


def test_criterion_10_determinism(capsys, tmp_path):
    base = [
        sys.executable, "-m", "forkbench.cli", "simulate", "--strategy", "apsm",
        "--alpha-a", "0.3", "--alpha-i", "0.1", "--gamma", "0.5",
        "--rounds", "1000000", "--seed", "11", "--format", "json",
    ]
    outs = {
        w: subprocess.run(
            base + ["--workers", str(w)], capture_output=True, text=True, check=True
        ).stdout
        for w in (1, 3, 8)
    }
    sim_ok = outs[1] == outs[3] == outs[8]
    csvs = []
    for tag in ("a", "b"):
        out = tmp_path / f"sweep-{tag}.csv"
        subprocess.run(
            [
                sys.executable, "-m", "forkbench.cli", "sweep", "--mode", "verdict",
                "--alpha-a-range", "0.1:0.4", "--gamma-range", "0:1",
                "--step", "0.05", "--out", str(out),
            ],
            capture_output=True, text=True, check=True,
        )
        csvs.append(out.read_bytes())
    sweep_ok = csvs[0] == csvs[1]
    ok = sim_ok and sweep_ok
    announce(
        capsys, 10, ok,
        f"simulate byte-identical across workers={sim_ok}, sweep repeatable={sweep_ok}",
    )
    assert ok
    assert json.loads(outs[1])["seed"] == 11


def test_criterion_11_economics(capsys):
    net = economics.NetworkParams(difficulty=31.25e12)
    p = economics.find_probability(net.t_avg, 1.0, net)
    prob_ok = p == 0.64
    rt_ok = all(
        abs(economics.required_hidden_bytes(
            economics.secret_search_time(b, fr, net), fr, net) - b) < 1e-9
        for b in range(1, 17)
        for fr in (0.001, 0.01, 0.1, 1.0)
    )
    flags = [
        economics.dos_viability(
            economics.DosScenario(5, tc, PowerSplit.from_attack(0.3, 0.0)), net
        ).viable
        for tc in (600.0, 6000.0, 60000.0, 600000.0)
    ]
    dos_ok = flags == sorted(flags)
    ok = prob_ok and rt_ok and dos_ok
    announce(
        capsys, 11, ok,
        f"find_probability(t_avg,1)={p} (exact 0.64={prob_ok}), "
        f"round-trip={rt_ok}, DoS monotone={dos_ok}",
    )
    assert ok


def test_criterion_12_desk_scale_documented(capsys):
    sig = inspect.signature(harness.run_all)
    default_ok = sig.parameters["rounds"].default == 10**7
    readme = (Path(__file__).resolve().parents[1] / "README.md").read_text(
        encoding="utf-8"
    )
    doc_ok = "long-run" in readme and "4" in readme and "desk" in readme.lower()
    ok = default_ok and doc_ok
    announce(
        capsys, 12, ok,
        f"default harness budget 1e7={default_ok}, long-run mode documented={doc_ok}",
    )
    assert ok
