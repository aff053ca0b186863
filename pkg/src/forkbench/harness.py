"""Reproduction harness: replicate the published validation grids, verify
chain-versus-closed-form equivalence, and check the headline values.

Statistical acceptance
----------------------
Simulated shares are accepted within four standard errors of the closed
form.  Because accepted blocks arrive in correlated bursts (one private
excursion settles many blocks at once), the per-block binomial error can
understate the true dispersion; the harness therefore estimates the
standard error empirically, by splitting each cell's budget across
:data:`REPLICATES` independently-seeded sub-runs and using the spread of
their share estimates.

Desk scale: the default budget is 10**7 rounds per cell, replacing the
10**9-round runs behind the published grids; pass larger ``rounds`` for a
long-run reproduction (tolerances shrink as 1/sqrt(rounds)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import analytic, reference
from .chains import ChainVariant, build_chain, reward_rates, stationary, stationary_truncated
from .errors import RangeError
from .model import PowerSplit
from .montecarlo import SimConfig, SimVariant, simulate

__all__ = [
    "REPLICATES",
    "CheckResult",
    "run_table_checks",
    "simulate_table_percent",
    "run_equivalence_checks",
    "run_headline_checks",
    "run_all",
    "write_report",
]

#: Independently-seeded sub-runs per simulated cell (empirical stderr).
REPLICATES = 25


@dataclass(frozen=True)
class CheckResult:
    """One verification: |expected - computed| <= tolerance.

    ``source`` tags where the expected value comes from: ``published-grid``
    (a committed table cell), ``closed-form`` (an analytic formula), or
    ``simulation`` (a Monte Carlo estimate checked against a closed form).
    """

    check_id: str
    expected: float
    computed: float
    tolerance: float
    source: str

    @property
    def passed(self) -> bool:
        return abs(self.expected - self.computed) <= self.tolerance


# ---------------------------------------------------------------------------
# Simulated-share helper
# ---------------------------------------------------------------------------


def _replicated_share(
    variant: SimVariant,
    powers: PowerSplit,
    gamma: float,
    slot: str,
    rounds: int,
    seed: int,
) -> tuple[float, float]:
    """Mean and empirical standard error of one share over
    :data:`REPLICATES` independently-seeded sub-runs."""
    sub_rounds = max(1, rounds // REPLICATES)
    shares = []
    for j in range(REPLICATES):
        cfg = SimConfig(sub_rounds, seed * 100_003 + j, variant=variant)
        shares.append(getattr(simulate(powers, gamma, cfg), f"share_{slot}"))
    arr = np.asarray(shares)
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(REPLICATES))


# ---------------------------------------------------------------------------
# Table checks
# ---------------------------------------------------------------------------


def _table_scenarios(
    table_id: int, column: float, gamma: float
) -> list[tuple[str, SimVariant, PowerSplit, float, str, float]]:
    """The simulated shares backing one table cell: a list of
    (role, variant, powers, gamma, share slot, closed-form value)."""
    if table_id == 1:
        a, k = column, reference.TABLES[1].fixed_value
        return [
            (
                "greedy",
                SimVariant.PSM_ATTACKER,
                PowerSplit.from_attack(a, k),
                gamma,
                "attracted",
                analytic.psm_miner_greedy_profit(a, k),
            ),
            (
                "public",
                SimVariant.PSM_MINER,
                PowerSplit.from_attack(a, k),
                gamma,
                "attracted",
                analytic.psm_miner_public_profit(a, k, gamma),
            ),
        ]
    if table_id in (2, 3):
        powers = PowerSplit.from_attack(0.2, column)
        rows = [
            (
                "psm",
                SimVariant.PSM_ATTACKER,
                powers,
                gamma,
                "attacker",
                analytic.psm_profits(powers, gamma).share_attacker,
            )
        ]
        if table_id == 3:
            rows.append(
                (
                    "selfish",
                    SimVariant.SELFISH,
                    PowerSplit.from_attack(0.2, 0.0),
                    gamma,
                    "attacker",
                    analytic.selfish_profit(0.2, gamma),
                )
            )
        return rows
    if table_id in (4, 5):
        powers = PowerSplit.from_attack(0.1, column)
        rows = [
            (
                "apsm",
                SimVariant.APSM_ATTACKER,
                powers,
                gamma,
                "attacker",
                analytic.apsm_profits(powers, gamma).share_attacker,
            )
        ]
        if table_id == 5:
            rows.append(
                (
                    "selfish",
                    SimVariant.SELFISH,
                    PowerSplit.from_attack(0.1, 0.0),
                    gamma,
                    "attacker",
                    analytic.selfish_profit(0.1, gamma),
                )
            )
        return rows
    raise RangeError(f"unknown table id {table_id}")


def run_table_checks(
    table_id: int, rounds: int = 10**7, seed: int = 1
) -> list[CheckResult]:
    """Verify one reference grid: every analytic cell against its committed
    value (±0.01 percentage points) and every backing simulated share
    against its closed form (±4 empirical standard errors)."""
    spec = reference.TABLES.get(table_id)
    if spec is None:
        raise RangeError(f"unknown table id {table_id}")
    results: list[CheckResult] = []
    sim_cache: dict[tuple, tuple[float, float]] = {}
    for row, gamma in enumerate(reference.GAMMAS):
        for col_idx, column in enumerate(spec.columns):
            cell_id = f"t{table_id}-g{gamma:g}-{spec.column_name}{column:g}"
            expected = spec.expected_percent[row][col_idx]
            computed = reference.table_analytic_percent(table_id, column, gamma)
            results.append(
                CheckResult(
                    f"{cell_id}-analytic", expected, computed, 0.01, "published-grid"
                )
            )
            for role, variant, powers, g, slot, closed in _table_scenarios(
                table_id, column, gamma
            ):
                key = (variant, powers, g, slot)
                if key not in sim_cache:
                    sim_cache[key] = _replicated_share(
                        variant, powers, g, slot, rounds, seed
                    )
                mean, stderr = sim_cache[key]
                results.append(
                    CheckResult(
                        f"{cell_id}-sim-{role}",
                        closed,
                        mean,
                        4.0 * stderr,
                        "simulation",
                    )
                )
    return results


def simulate_table_percent(
    table_id: int, column: float, gamma: float, rounds: int, seed: int
) -> float:
    """Simulated value of one grid cell, in percent, in the same
    normalization as the committed grids.

    For the miner grid this is the ratio of two simulated shares; for the
    attacker grids the simulated absolute revenue rate is scaled by the
    (deterministic) state-frequency constants of the matching chain so the
    estimate targets the grid's normalization exactly.
    """
    if table_id == 1:
        a, k = column, reference.TABLES[1].fixed_value
        powers = PowerSplit.from_attack(a, k)
        greedy = simulate(
            powers, gamma, SimConfig(rounds, 2 * seed, variant=SimVariant.PSM_ATTACKER)
        ).share_attracted
        public = simulate(
            powers, gamma, SimConfig(rounds, 2 * seed + 1, variant=SimVariant.PSM_MINER)
        ).share_attracted
        return 100.0 * (greedy / public - 1.0)
    if table_id in (2, 3):
        powers = PowerSplit.from_attack(0.2, column)
        share = simulate(
            powers, gamma, SimConfig(rounds, 2 * seed, variant=SimVariant.PSM_ATTACKER)
        ).share_attacker
        if table_id == 2:
            return 100.0 * (share / 0.2 - 1.0)
        return 100.0 * (share / _simulated_selfish_display(0.2, gamma, rounds, seed) - 1.0)
    if table_id in (4, 5):
        a = 0.1
        powers = PowerSplit.from_attack(a, column)
        share = simulate(
            powers, gamma, SimConfig(rounds, 2 * seed, variant=SimVariant.APSM_ATTACKER)
        ).share_attacker
        # rescale the simulated share to the grid's normalization: the grid
        # divides absolute attacker revenue by (1 + alpha_a) instead of the
        # true accepted-block total, a deterministic factor of the chain
        atk_u, att_u, hon_u, _ = analytic._apsm_units(powers, gamma)
        display = share * (atk_u + att_u + hon_u) / (1.0 + a)
        if table_id == 4:
            return 100.0 * (display / a - 1.0)
        return 100.0 * (display / _simulated_selfish_display(a, gamma, rounds, seed) - 1.0)
    raise RangeError(f"unknown table id {table_id}")


def _simulated_selfish_display(
    alpha_a: float, gamma: float, rounds: int, seed: int
) -> float:
    """Simulated selfish-mining revenue in the legacy grid normalization
    (true simulated share rescaled by the deterministic ratio between the
    exact and legacy denominators)."""
    a = alpha_a
    powers = PowerSplit.from_attack(a, 0.0)
    share = simulate(
        powers, gamma, SimConfig(rounds, 2 * seed + 1, variant=SimVariant.SELFISH)
    ).share_attacker
    exact_den = 1.0 - a * (1.0 + (2.0 - a) * a)
    return share * exact_den / ((1.0 + a) * (1.0 - 2.0 * a))


# ---------------------------------------------------------------------------
# Equivalence checks
# ---------------------------------------------------------------------------


def _closed_form_shares(
    variant: ChainVariant, a: float, second: float, g: float
) -> tuple[float, float, float]:
    if variant is ChainVariant.PSM_ATTACKER:
        bd = analytic.psm_profits(PowerSplit.from_attack(a, second), g)
        return bd.share_attacker, bd.share_attracted, bd.share_honest
    if variant is ChainVariant.APSM_ATTACKER:
        bd = analytic.apsm_profits(PowerSplit.from_attack(a, second), g)
        return bd.share_attacker, bd.share_attracted, bd.share_honest
    if variant is ChainVariant.PSM_MINER:
        k = second
        return (
            math.nan,  # the attacker's closed form is not separately exposed
            analytic.psm_miner_public_profit(a, k, g),
            math.nan,
        )
    return math.nan, analytic.apsm_miner_public_profit(a, second, g), math.nan


def run_equivalence_checks(
    points_per_variant: int = 200, seed: int = 7
) -> list[CheckResult]:
    """Chain-solver shares versus closed forms over random admissible
    points, one aggregated result per variant, plus the truncated-tail
    cross-check of the geometric solver."""
    rng = np.random.default_rng(seed)
    results: list[CheckResult] = []
    for variant in ChainVariant:
        worst = 0.0
        for _ in range(points_per_variant):
            a = float(rng.uniform(0.01, 0.45))
            g = float(rng.uniform(0.0, 1.0))
            if variant is ChainVariant.APSM_ATTACKER:
                second = float(rng.uniform(0.0, max(0.0, 0.49 - a)))
            else:
                second = float(rng.uniform(0.01, min(0.45, 0.99 - a)))
            kwargs = (
                {"alpha_i": second}
                if variant in (ChainVariant.PSM_ATTACKER, ChainVariant.APSM_ATTACKER)
                else {"alpha_k": second}
            )
            spec = build_chain(a, g, variant, **kwargs)
            bd = reward_rates(spec, stationary(spec))
            closed = _closed_form_shares(variant, a, second, g)
            got = (bd.share_attacker, bd.share_attracted, bd.share_honest)
            for c, s in zip(closed, got):
                if not math.isnan(c):
                    worst = max(worst, abs(c - s))
        results.append(
            CheckResult(f"equiv-{variant.value}", 0.0, worst, 1e-9, "closed-form")
        )
    # Truncated-matrix cross-check of the geometric-tail solver.
    worst = 0.0
    bound = 0.0
    for a, i, g in ((0.1, 0.2, 0.5), (0.2, 0.1, 0.0), (0.3, 0.1, 1.0)):
        spec = build_chain(a, g, ChainVariant.APSM_ATTACKER, alpha_i=i)
        exact = stationary(spec)
        trunc = stationary_truncated(spec, depth=64)
        diff = max(
            abs(exact.probabilities[s] - trunc.probabilities[s])
            for s in exact.probabilities
        )
        worst = max(worst, diff, abs(exact.tail_mass - trunc.tail_mass))
        bound = max(bound, spec.tail.ratio**62)
    results.append(
        CheckResult("equiv-apsm-truncation", 0.0, worst, bound + 1e-12, "closed-form")
    )
    return results


# ---------------------------------------------------------------------------
# Headline checks
# ---------------------------------------------------------------------------


def run_headline_checks() -> list[CheckResult]:
    """The headline revenue values.

    The benchmark share of 0.3403 is quoted for an attacker of power 1/3
    with attracted power 1/3; the closed form (and the chain, and the
    simulator) put that scenario at exactly 1/3, while 0.3403 = 49/144 is
    the share at attracted power 1/2.  Both checks are emitted: the quoted
    coordinates (which fail) and the locus that actually produces the
    value.
    """
    results = []
    third = 1.0 / 3.0
    share_quoted = analytic.psm_profits(
        PowerSplit.from_attack(third, third), 0.0
    ).share_attacker
    results.append(
        CheckResult(
            "headline-psm-benchmark-quoted-point",
            0.3403,
            share_quoted,
            5e-5,
            "published-grid",
        )
    )
    share_half = analytic.psm_profits(
        PowerSplit.from_attack(third, 0.5), 0.0
    ).share_attacker
    results.append(
        CheckResult(
            "headline-psm-benchmark-half-rational",
            0.3403,
            share_half,
            5e-5,
            "published-grid",
        )
    )
    # A-PSM headline gains at (alpha_a=0.1, alpha_i=0.3, gamma=1), in the
    # grid normalization of the committed tables.
    vs_honest = reference.table_analytic_percent(4, 0.3, 1.0)
    results.append(
        CheckResult("headline-apsm-vs-honest", 23.64, vs_honest, 0.01, "published-grid")
    )
    vs_selfish = reference.table_analytic_percent(5, 0.3, 1.0)
    results.append(
        CheckResult(
            "headline-apsm-vs-selfish", 13.10, vs_selfish, 0.02, "published-grid"
        )
    )
    # The PSM gains of 1.25% over honest and 9.79% over selfish at
    # (alpha_a=0.2, alpha_i=0.5) are quoted without a rushing ability;
    # locate the gamma that produces the first and check the second there.
    powers = PowerSplit.from_attack(0.2, 0.5)
    lo, hi = 0.0, 1.0
    for _ in range(60):  # rer is monotone increasing in gamma
        mid = 0.5 * (lo + hi)
        if analytic.psm_vs_honest_rer(powers, mid) < 0.0125:
            lo = mid
        else:
            hi = mid
    located = 0.5 * (lo + hi)
    results.append(
        CheckResult("headline-psm-located-gamma", 0.5, located, 0.01, "closed-form")
    )
    share = analytic.psm_profits(powers, located).share_attacker
    vs_selfish_pct = 100.0 * (
        share / reference.selfish_profit_reference(0.2, located) - 1.0
    )
    results.append(
        CheckResult(
            "headline-psm-vs-selfish-at-located-gamma",
            9.79,
            vs_selfish_pct,
            0.02,
            "published-grid",
        )
    )
    return results


# ---------------------------------------------------------------------------
# Full run and report emission
# ---------------------------------------------------------------------------


def run_all(
    rounds: int = 10**7,
    seed: int = 1,
    equivalence_points: int = 200,
    tables: tuple[int, ...] = (1, 2, 3, 4, 5),
) -> list[CheckResult]:
    """Every check, sorted by id; deterministic for a fixed seed."""
    results: list[CheckResult] = []
    for table_id in tables:
        results.extend(run_table_checks(table_id, rounds, seed))
    results.extend(run_equivalence_checks(equivalence_points, seed))
    results.extend(run_headline_checks())
    return sorted(results, key=lambda r: r.check_id)


def write_report(results: list[CheckResult], path: str | Path) -> int:
    """Write the CSV report plus a summary line; returns the number of
    failed checks."""
    lines = ["check_id,expected,computed,tolerance,passed,source"]
    failed = 0
    for r in results:
        if not r.passed:
            failed += 1
        lines.append(
            f"{r.check_id},{r.expected:.17g},{r.computed:.17g},"
            f"{r.tolerance:.17g},{r.passed},{r.source}"
        )
    lines.append(f"# summary: {len(results) - failed}/{len(results)} checks passed")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return failed
