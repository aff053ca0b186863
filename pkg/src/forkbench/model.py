"""Domain types shared by every other module.

Conventions
-----------
* All mining powers are fractions of the total network hash power.
* ``alpha_a`` is the attacker, ``alpha_i`` the combined attracted (rational)
  miners working on the attacker's branch, ``alpha_h`` the public remainder,
  and ``alpha_k`` a single rational miner under study.
* ``gamma`` is the attacker's rushing ability: the fraction of public miners
  that adopt the attacker's branch first when a race occurs.  It is admitted
  on the closed interval [0, 1] so the reference grids' endpoints are
  representable.
* Relative extra rewards (RER) are stored as signed fractions (0.05 = +5%).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import (
    ApsmPowerError,
    NormalizationError,
    RangeError,
    ZeroBaselineError,
)

#: Absolute tolerance for fraction comparisons (sum-to-one checks etc.).
FRACTION_TOL = 1e-12


class AttackerStrategy(enum.Enum):
    """Strategy of the block-withholding attacker."""

    HONEST = "honest"
    SELFISH = "selfish"
    PSM = "psm"
    APSM = "apsm"


class MinerStrategy(enum.Enum):
    """Strategy of a single rational miner."""

    PUBLIC = "public"
    GREEDY = "greedy"


#: Deterministic tie-break order for attacker verdicts (safer/simpler first).
STRATEGY_PRECEDENCE = (
    AttackerStrategy.HONEST,
    AttackerStrategy.SELFISH,
    AttackerStrategy.PSM,
    AttackerStrategy.APSM,
)


def _check_fraction(name: str, value: float, lo: float = 0.0, hi: float = 1.0) -> float:
    if not math.isfinite(value):
        raise RangeError(f"{name} must be finite, got {value!r}")
    if not (lo <= value <= hi):
        raise RangeError(f"{name}={value} outside [{lo}, {hi}]")
    return float(value)


def validate_gamma(gamma: float) -> float:
    """Validate a rushing ability; returns it as a float."""
    return _check_fraction("gamma", gamma)


def validate_alpha_k(alpha_k: float, alpha_a: float | None = None) -> float:
    """Validate a single rational miner's power (at most 0.5, and it must
    leave room for the attacker when one is given)."""
    value = _check_fraction("alpha_k", alpha_k, 0.0, 0.5)
    if alpha_a is not None and value > 1.0 - alpha_a + FRACTION_TOL:
        raise RangeError(f"alpha_k={value} exceeds 1 - alpha_a={1.0 - alpha_a}")
    return value


@dataclass(frozen=True)
class PowerSplit:
    """Normalized mining powers of the three actor classes.

    Invariants: powers sum to one; ``alpha_a < 0.5``; ``alpha_i <= 0.5``.
    """

    alpha_a: float
    alpha_i: float
    alpha_h: float

    def __post_init__(self) -> None:
        _check_fraction("alpha_a", self.alpha_a, 0.0, 1.0)
        if self.alpha_a >= 0.5:
            raise RangeError(f"alpha_a={self.alpha_a} must be < 0.5")
        _check_fraction("alpha_i", self.alpha_i, 0.0, 0.5)
        _check_fraction("alpha_h", self.alpha_h, 0.0, 1.0)
        total = self.alpha_a + self.alpha_i + self.alpha_h
        if abs(total - 1.0) > FRACTION_TOL:
            raise NormalizationError(f"powers sum to {total}, expected 1")

    @classmethod
    def from_attack(cls, alpha_a: float, alpha_i: float) -> "PowerSplit":
        """Build a split from attacker and attracted power; the public
        remainder is derived."""
        _check_fraction("alpha_a", alpha_a, 0.0, 1.0)
        _check_fraction("alpha_i", alpha_i, 0.0, 0.5)
        return cls(alpha_a, alpha_i, 1.0 - alpha_a - alpha_i)

    @property
    def alpha_rest(self) -> float:
        """Power of everyone but the attacker (selfish-mining baseline)."""
        return 1.0 - self.alpha_a


@dataclass(frozen=True)
class Scenario:
    """A validated (powers, gamma, strategy) triple."""

    powers: PowerSplit
    gamma: float
    strategy: AttackerStrategy


def validate_scenario(
    powers: PowerSplit, gamma: float, strategy: AttackerStrategy
) -> Scenario:
    """Check every invariant, including the A-PSM-only power cap.

    Returns the scenario unchanged if all invariants hold.
    """
    gamma = validate_gamma(gamma)
    if strategy is AttackerStrategy.APSM:
        combined = powers.alpha_a + powers.alpha_i
        if combined >= 0.5:
            raise ApsmPowerError(
                f"A-PSM requires alpha_a + alpha_i < 0.5, got {combined}"
            )
    return Scenario(powers, gamma, strategy)


@dataclass(frozen=True)
class RevenueBreakdown:
    """Absolute block-generation rates and normalized profit shares.

    ``rev_*`` are expected accepted blocks per state-machine step; each share
    is the corresponding rate divided by the total accepted rate.
    """

    rev_attacker: float
    rev_attracted: float
    rev_honest: float
    share_attacker: float
    share_attracted: float
    share_honest: float

    @classmethod
    def from_rates(
        cls, rev_attacker: float, rev_attracted: float, rev_honest: float
    ) -> "RevenueBreakdown":
        total = rev_attacker + rev_attracted + rev_honest
        if total <= 0.0:
            # Degenerate all-zero scenario (e.g. alpha_a = 1 impossible here);
            # report zero shares rather than dividing by zero.
            return cls(rev_attacker, rev_attracted, rev_honest, 0.0, 0.0, 0.0)
        return cls(
            rev_attacker,
            rev_attracted,
            rev_honest,
            rev_attacker / total,
            rev_attracted / total,
            rev_honest / total,
        )

    @property
    def total_rate(self) -> float:
        return self.rev_attacker + self.rev_attracted + self.rev_honest


def rer(candidate: float, baseline: float) -> float:
    """Relative extra reward of ``candidate`` over ``baseline``.

    Raises :class:`ZeroBaselineError` when the baseline revenue is zero.
    """
    if baseline == 0.0:
        raise ZeroBaselineError("RER undefined for zero baseline revenue")
    return (candidate - baseline) / baseline
