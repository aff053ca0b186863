"""Attack economics: network hashrate, secret brute-force cost, block-find
probability, and the denial-of-service collateral viability check.

The hidden-secret search formulas treat the network as a hash oracle: at
difficulty ``D`` the network performs about ``D * 2**32 / t_avg`` hashes per
second, so a miner controlling the fraction ``fr`` of that power needs
``2**(8 b) / (fr * D * 2**32 / t_avg)`` seconds on average to grind a hidden
``b``-byte secret.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import RangeError
from .model import PowerSplit

__all__ = [
    "NetworkParams",
    "DosScenario",
    "DosVerdict",
    "hashrate_from_difficulty",
    "secret_search_time",
    "required_hidden_bytes",
    "find_probability",
    "dos_viability",
]


@dataclass(frozen=True)
class NetworkParams:
    """Proof-of-work network constants.

    ``p_e`` is the probability that the whole network finds at least one
    block within one average interval ``t_avg``.
    """

    difficulty: float
    t_avg: float = 600.0
    p_e: float = 0.64

    def __post_init__(self) -> None:
        if not (math.isfinite(self.difficulty) and self.difficulty > 0.0):
            raise RangeError(f"difficulty={self.difficulty} must be > 0")
        if not (math.isfinite(self.t_avg) and self.t_avg > 0.0):
            raise RangeError(f"t_avg={self.t_avg} must be > 0")
        if not 0.0 < self.p_e < 1.0:
            raise RangeError(f"p_e={self.p_e} outside (0, 1)")


@dataclass(frozen=True)
class DosScenario:
    """A collateralized challenge: the attacker must out-mine a bond worth
    ``collateral_blocks`` blocks within the ``challenge_period``."""

    collateral_blocks: int
    challenge_period: float
    powers: PowerSplit

    def __post_init__(self) -> None:
        if self.collateral_blocks < 1:
            raise RangeError(
                f"collateral_blocks={self.collateral_blocks} must be >= 1"
            )
        if not (
            math.isfinite(self.challenge_period) and self.challenge_period > 0.0
        ):
            raise RangeError(
                f"challenge_period={self.challenge_period} must be > 0"
            )


@dataclass(frozen=True)
class DosVerdict:
    viable: bool
    expected_blocks: float
    threshold: float


def hashrate_from_difficulty(net: NetworkParams) -> float:
    """Total network hash power, in hashes per second."""
    return net.difficulty * 2.0**32 / net.t_avg


def secret_search_time(
    hidden_bytes: float, miner_fraction: float, net: NetworkParams
) -> float:
    """Average seconds for a miner with ``miner_fraction`` of the network
    power to brute-force a hidden secret of ``hidden_bytes`` bytes."""
    if hidden_bytes < 1:
        raise RangeError(f"hidden_bytes={hidden_bytes} must be >= 1")
    if not 0.0 < miner_fraction <= 1.0:
        raise RangeError(f"miner_fraction={miner_fraction} outside (0, 1]")
    return 2.0 ** (8.0 * hidden_bytes) / (
        miner_fraction * hashrate_from_difficulty(net)
    )


def required_hidden_bytes(
    target_time: float, miner_fraction: float, net: NetworkParams
) -> float:
    """Real-valued secret size whose brute-force time is ``target_time``.

    Exact inverse of :func:`secret_search_time`; callers wanting whole bytes
    should take the ceiling.
    """
    if not (math.isfinite(target_time) and target_time > 0.0):
        raise RangeError(f"target_time={target_time} must be > 0")
    if not 0.0 < miner_fraction <= 1.0:
        raise RangeError(f"miner_fraction={miner_fraction} outside (0, 1]")
    return math.log2(
        target_time * miner_fraction * hashrate_from_difficulty(net)
    ) / 8.0


def find_probability(elapsed: float, alpha_e: float, net: NetworkParams) -> float:
    """Probability that an entity with power fraction ``alpha_e`` finds at
    least one block within ``elapsed`` seconds."""
    if not (math.isfinite(elapsed) and elapsed >= 0.0):
        raise RangeError(f"elapsed={elapsed} must be >= 0")
    if not 0.0 <= alpha_e <= 1.0:
        raise RangeError(f"alpha_e={alpha_e} outside [0, 1]")
    return alpha_e * (1.0 - (1.0 - net.p_e) ** (elapsed / net.t_avg))


def dos_viability(s: DosScenario, net: NetworkParams) -> DosVerdict:
    """Is holding the collateral and stalling worth it for the attacker?

    Uses the expected attacker block count ``alpha_a * T_C / t_avg``; the
    attack pays only if that exceeds the bond plus one block.  The expected
    count is exposed so callers can substitute a Poisson tail if they want a
    probabilistic criterion.
    """
    expected = s.powers.alpha_a * s.challenge_period / net.t_avg
    threshold = float(s.collateral_blocks + 1)
    return DosVerdict(expected > threshold, expected, threshold)
