"""Optimal-strategy selection, parameter-space sweeps, and the two-attacker
extension.

Verdicts rank the attacker's candidate strategies by profit share; exact
ties go to the earlier entry of :data:`forkbench.model.STRATEGY_PRECEDENCE`
(safer and simpler strategies first).  Ties only occur on measure-zero
parameter boundaries, so the precedence never hides a strictly better
strategy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import analytic, economics
from .errors import RangeError, SingularityError
from .model import (
    FRACTION_TOL,
    STRATEGY_PRECEDENCE,
    AttackerStrategy,
    MinerStrategy,
    PowerSplit,
    rer,
    validate_alpha_k,
    validate_gamma,
)

__all__ = [
    "StrategyVerdict",
    "SweepAxis",
    "SweepCell",
    "SweepGrid",
    "MinAlphaICell",
    "TwoAttackerScenario",
    "TwoAttackerRer",
    "best_attacker_strategy",
    "best_miner_strategy",
    "sweep",
    "min_alpha_i_sweep",
    "two_attacker_psm_rer",
    "two_attacker_apsm_rer",
    "early_release_bonus",
    "BISECTION_TOL",
]

#: Tolerance on alpha_i for the minimal-attracted-power bisection.
BISECTION_TOL = 1e-4


@dataclass(frozen=True)
class StrategyVerdict:
    """Ranked outcome of one scenario.

    ``profits`` maps each admissible strategy to the attacker's share;
    ``margins`` maps each to its RER versus the best strategy (zero for the
    best itself, negative or zero elsewhere).
    """

    best: AttackerStrategy
    profits: dict[AttackerStrategy, float]
    margins: dict[AttackerStrategy, float]


def best_attacker_strategy(powers: PowerSplit, gamma: float) -> StrategyVerdict:
    """Rank honest, selfish, PSM (and A-PSM when admissible) for the
    attacker at this power split."""
    gamma = validate_gamma(gamma)
    profits: dict[AttackerStrategy, float] = {
        AttackerStrategy.HONEST: analytic.honest_profit(powers.alpha_a),
        AttackerStrategy.SELFISH: analytic.selfish_profit(powers.alpha_a, gamma),
        AttackerStrategy.PSM: analytic.psm_profits(powers, gamma).share_attacker,
    }
    if powers.alpha_a + powers.alpha_i < 0.5:
        profits[AttackerStrategy.APSM] = analytic.apsm_profits(
            powers, gamma
        ).share_attacker
    best = None
    for strategy in STRATEGY_PRECEDENCE:
        if strategy not in profits:
            continue
        # a later (more complex) strategy must win by more than float noise
        # to displace an earlier one, so analytic ties (e.g. A-PSM equals
        # selfish exactly at alpha_i = 0) resolve by precedence
        if best is None or profits[strategy] > profits[best] + FRACTION_TOL:
            best = strategy
    top = profits[best]
    margins = {
        s: 0.0 if top == 0.0 else rer(p, top) for s, p in profits.items()
    }
    return StrategyVerdict(best, profits, margins)


def best_miner_strategy(
    alpha_a: float,
    alpha_k: float,
    gamma: float,
    attacker_strategy: AttackerStrategy,
) -> MinerStrategy:
    """Should rational miner k join the attacker's branch?

    Against an honest or classic-selfish attacker there is no shared branch
    to join, so the answer is always Public.
    """
    validate_alpha_k(alpha_k, alpha_a)
    validate_gamma(gamma)
    if attacker_strategy in (AttackerStrategy.HONEST, AttackerStrategy.SELFISH):
        return MinerStrategy.PUBLIC
    if attacker_strategy is AttackerStrategy.PSM:
        margin = analytic.psm_miner_rer(alpha_a, alpha_k, gamma)
    else:
        margin = analytic.apsm_miner_rer(alpha_a, alpha_k, gamma)
    return MinerStrategy.GREEDY if margin > 0.0 else MinerStrategy.PUBLIC


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SweepAxis:
    """A closed range sampled from ``start`` to ``stop`` in ``step``
    increments (endpoint included within 1e-12)."""

    start: float
    stop: float
    step: float

    def __post_init__(self) -> None:
        if self.step <= 0.0:
            raise RangeError(f"step={self.step} must be > 0")
        if self.stop < self.start:
            raise RangeError(f"stop={self.stop} below start={self.start}")

    def values(self) -> list[float]:
        n = int(math.floor((self.stop - self.start) / self.step + 1e-12))
        return [self.start + j * self.step for j in range(n + 1)]


@dataclass(frozen=True)
class SweepCell:
    alpha_a: float
    gamma: float
    alpha_i: float
    verdict: StrategyVerdict


@dataclass(frozen=True)
class SweepGrid:
    """Full-grid verdicts.  ``alpha_i_fraction`` expresses the attracted
    mass as a fraction of the non-attacker power, ``alpha_i = f * (1 -
    alpha_a)``; a fixed ``alpha_i`` may be given instead."""

    alpha_a_axis: SweepAxis
    gamma_axis: SweepAxis
    alpha_i: float = 0.0
    alpha_i_fraction: float | None = None
    cells: tuple[SweepCell, ...] = field(default=())

    def attracted_power(self, alpha_a: float) -> float:
        if self.alpha_i_fraction is not None:
            return self.alpha_i_fraction * (1.0 - alpha_a)
        return self.alpha_i


def sweep(grid: SweepGrid) -> SweepGrid:
    """Fill every (alpha_a, gamma) cell with a strategy verdict."""
    cells = []
    for a in grid.alpha_a_axis.values():
        i = grid.attracted_power(a)
        powers = PowerSplit.from_attack(a, i)
        for g in grid.gamma_axis.values():
            cells.append(SweepCell(a, g, i, best_attacker_strategy(powers, g)))
    return SweepGrid(
        grid.alpha_a_axis,
        grid.gamma_axis,
        grid.alpha_i,
        grid.alpha_i_fraction,
        tuple(cells),
    )


@dataclass(frozen=True)
class MinAlphaICell:
    alpha_a: float
    gamma: float
    min_alpha_i: float | None  # None when no admissible alpha_i works


def _apsm_beats_both(alpha_a: float, alpha_i: float, gamma: float) -> bool:
    powers = PowerSplit.from_attack(alpha_a, alpha_i)
    share = analytic.apsm_profits(powers, gamma).share_attacker
    return share > analytic.honest_profit(alpha_a) and share > analytic.selfish_profit(
        alpha_a, gamma
    )


def min_alpha_i_sweep(
    alpha_a_axis: SweepAxis, gamma_axis: SweepAxis
) -> list[MinAlphaICell]:
    """Minimal attracted power for A-PSM to strictly beat both honest and
    selfish mining, per grid cell (bisection to :data:`BISECTION_TOL`)."""
    cells = []
    for a in alpha_a_axis.values():
        if not 0.0 < a < 0.5:
            raise RangeError(f"alpha_a={a} outside (0, 0.5)")
        for g in gamma_axis.values():
            hi = 0.5 - a - 1e-9  # A-PSM admissibility cap
            if hi <= 0.0 or not _apsm_beats_both(a, hi, g):
                cells.append(MinAlphaICell(a, g, None))
                continue
            lo = 0.0
            if _apsm_beats_both(a, lo, g):
                cells.append(MinAlphaICell(a, g, 0.0))
                continue
            while hi - lo > BISECTION_TOL:
                mid = 0.5 * (lo + hi)
                if _apsm_beats_both(a, mid, g):
                    hi = mid
                else:
                    lo = mid
            cells.append(MinAlphaICell(a, g, 0.5 * (lo + hi)))
    return cells


# ---------------------------------------------------------------------------
# Two attackers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TwoAttackerScenario:
    """Two simultaneous attackers A and B plus a rational miner k.

    ``alpha_i`` is the attracted mass used by the A-PSM comparisons
    (including miner k); ``t_delta`` is the release-time gap exploited by
    the earlier-publishing attacker.  A single ``gamma`` applies to both
    attackers.
    """

    alpha_a: float
    alpha_b: float
    alpha_k: float
    alpha_i: float = 0.0
    gamma: float = 0.0
    t_delta: float = 0.0

    def __post_init__(self) -> None:
        for name in ("alpha_a", "alpha_b", "alpha_k", "alpha_i"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise RangeError(f"{name}={v} outside [0, 1]")
        if self.alpha_a + self.alpha_b + self.alpha_k > 1.0 + 1e-12:
            raise RangeError("alpha_a + alpha_b + alpha_k exceeds 1")
        validate_gamma(self.gamma)
        if self.t_delta < 0.0:
            raise RangeError(f"t_delta={self.t_delta} must be >= 0")


@dataclass(frozen=True)
class TwoAttackerRer:
    rer_vs_public: float
    rer_a_vs_b: float


def two_attacker_psm_rer(s: TwoAttackerScenario) -> TwoAttackerRer:
    """Miner k's RER for joining a PSM branch with two active attackers.

    Joining either attacker pays the same (their branches are symmetric for
    k), so the A-versus-B RER is identically zero.
    """
    h = 1.0 - s.alpha_a - s.alpha_b - s.alpha_k
    g, k = s.gamma, s.alpha_k
    vs_public = (1.0 - 2.0 * k - (1.0 - g) * h) / (2.0 * k + (2.0 - g) * h)
    return TwoAttackerRer(vs_public, 0.0)


def two_attacker_apsm_rer(s: TwoAttackerScenario) -> TwoAttackerRer:
    """Miner k's RERs when both attackers run A-PSM.

    ``rer_a_vs_b`` carries the sign of ``alpha_a - alpha_b``: joining the
    larger attacker pays more.
    """
    i = s.alpha_i
    den_a = 2.0 * i + 2.0 * s.alpha_a - 1.0
    den_b = 2.0 * i + 2.0 * s.alpha_b - 1.0
    if den_a == 0.0 or den_b == 0.0:
        raise SingularityError(
            "two-attacker A-PSM RER undefined at 2*alpha_i + 2*alpha = 1"
        )
    priv = s.alpha_a + i
    h = 1.0 - priv
    if h <= 0.0 or 2.0 * priv >= 1.0:
        raise SingularityError(
            "two-attacker A-PSM vs-public RER requires alpha_a + alpha_i < 0.5"
        )
    vs_public = (h + priv / (1.0 - 2.0 * priv) + 1.0) / (
        2.0 * i + (2.0 - s.gamma) * h
    ) - 1.0
    a_vs_b = (s.alpha_a - s.alpha_b) / (den_a * den_b)
    return TwoAttackerRer(vs_public, a_vs_b)


def early_release_bonus(
    s: TwoAttackerScenario,
    powers: PowerSplit,
    alpha_e: float = 1.0,
    net: economics.NetworkParams | None = None,
) -> float:
    """Expected extra revenue from publishing the partial block ``t_delta``
    seconds before a competing attacker: the attracted miners work the
    earlier branch exclusively during the gap."""
    if net is None:
        net = economics.NetworkParams(difficulty=1.0)
    r = economics.find_probability(s.t_delta, alpha_e, net)
    return powers.alpha_h * r * powers.alpha_i + powers.alpha_i * r
