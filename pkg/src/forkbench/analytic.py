"""Closed-form profit and relative-extra-reward formulas.

Every function here is a low-degree rational function of the mining powers
and the rushing ability γ.  The Markov chains in :mod:`forkbench.chains` are
the ground truth; the test suite asserts each closed form against the chain
solver to 1e-9.

Model recap
-----------
PSM: the attacker shares a partially-redacted block so attracted miners can
mine on the private branch; the branch is published as soon as its lead
reaches two, so the attacker-side state machine has three states
(no lead / lead one / zero-lead race).

A-PSM: the attacker keeps the partial block withheld while the lead exceeds
two, matching the classic selfish-mining release schedule; the state machine
gains a geometric tail of lead-n states and requires
``alpha_a + alpha_i < 0.5``.
"""

from __future__ import annotations

from .errors import ApsmPowerError, RangeError
from .model import (
    AttackerStrategy,
    PowerSplit,
    RevenueBreakdown,
    rer,
    validate_alpha_k,
    validate_gamma,
    validate_scenario,
)

__all__ = [
    "honest_profit",
    "selfish_profit",
    "psm_profits",
    "psm_miner_greedy_profit",
    "psm_miner_public_profit",
    "psm_miner_rer",
    "join_threshold",
    "psm_vs_honest_rer",
    "psm_vs_selfish_rer",
    "apsm_profits",
    "apsm_miner_greedy_profit",
    "apsm_miner_public_profit",
    "apsm_miner_rer",
    "apsm_vs_honest_rer",
    "apsm_vs_selfish_rer",
]


def honest_profit(alpha_a: float) -> float:
    """Honest mining: revenue share equals hash-power share."""
    if not 0.0 <= alpha_a < 0.5:
        raise RangeError(f"alpha_a={alpha_a} outside [0, 0.5)")
    return float(alpha_a)


def selfish_profit(alpha_a: float, gamma: float) -> float:
    """Classic selfish-mining revenue share for an attacker of power
    ``alpha_a`` with rushing ability ``gamma``."""
    if not 0.0 <= alpha_a < 0.5:
        raise RangeError(f"alpha_a={alpha_a} outside [0, 0.5)")
    g = validate_gamma(gamma)
    a = alpha_a
    num = a * (1.0 - a) ** 2 * (4.0 * a + g * (1.0 - 2.0 * a)) - a**3
    den = 1.0 - a * (1.0 + (2.0 - a) * a)
    return num / den


# ---------------------------------------------------------------------------
# PSM: attacker-side three-state chain
# ---------------------------------------------------------------------------


def _psm_rates(powers: PowerSplit, gamma: float) -> tuple[float, float, float]:
    """Absolute accepted-block rates (attacker, attracted, honest) per step."""
    a, i, h = powers.alpha_a, powers.alpha_i, powers.alpha_h
    g = gamma
    # Stationary distribution: P1 = a*P0, P0' = a*h*P0, P0 normalizes.
    p0 = 1.0 / (1.0 + a + a * h)
    p1 = a * p0
    p0p = a * h * p0
    rev_atk = 2.0 * a * p1 + (2.0 * a + i + g * h) * p0p + i * p1
    rev_att = i  # attracted miners are credited in every state
    rev_hon = h * p0 + (g * h + 2.0 * (1.0 - g) * h) * p0p
    return rev_atk, rev_att, rev_hon


def psm_profits(powers: PowerSplit, gamma: float) -> RevenueBreakdown:
    """Revenue breakdown when the attacker runs PSM."""
    validate_scenario(powers, gamma, AttackerStrategy.PSM)
    return RevenueBreakdown.from_rates(*_psm_rates(powers, gamma))


def psm_miner_greedy_profit(alpha_a: float, alpha_k: float) -> float:
    """Share of rational miner k when it mines the attacker's branch.

    Worst-case stance: k assumes it is the only attracted miner, so the
    attracted mass equals ``alpha_k``.  The result is γ-free because races
    won by attracted miners settle their block either way.
    """
    k = validate_alpha_k(alpha_k, alpha_a)
    if not 0.0 <= alpha_a < 0.5:
        raise RangeError(f"alpha_a={alpha_a} outside [0, 0.5)")
    a = alpha_a
    h = 1.0 - a - k
    # attracted rate / total rate with total = (1 + a) * P0.
    return k * (1.0 + a + a * h) / (1.0 + a)


def psm_miner_public_profit(alpha_a: float, alpha_k: float, gamma: float) -> float:
    """Share of rational miner k when it stays on the public branch while a
    PSM attacker (with no other attracted miners) is active."""
    k = validate_alpha_k(alpha_k, alpha_a)
    if not 0.0 <= alpha_a < 0.5:
        raise RangeError(f"alpha_a={alpha_a} outside [0, 0.5)")
    g = validate_gamma(gamma)
    a = alpha_a
    h = 1.0 - a - k
    return k * (1.0 + 2.0 * a * (1.0 - a) - g * a * h) / (1.0 + a)


def psm_miner_rer(alpha_a: float, alpha_k: float, gamma: float) -> float:
    """RER of greedy over public mining for rational miner k under PSM.

    Positive exactly when ``alpha_k`` is below :func:`join_threshold`.
    """
    greedy = psm_miner_greedy_profit(alpha_a, alpha_k)
    public = psm_miner_public_profit(alpha_a, alpha_k, gamma)
    if alpha_k == 0.0:
        return 0.0
    return rer(greedy, public)


def join_threshold(alpha_a: float, gamma: float) -> float:
    """Largest miner power for which joining the PSM branch pays off."""
    if not 0.0 <= alpha_a < 0.5:
        raise RangeError(f"alpha_a={alpha_a} outside [0, 0.5)")
    g = validate_gamma(gamma)
    return (alpha_a - (alpha_a - 1.0) * g) / (1.0 + g)


def psm_vs_honest_rer(powers: PowerSplit, gamma: float) -> float:
    """RER of the PSM attacker share over honest mining."""
    share = psm_profits(powers, gamma).share_attacker
    return rer(share, honest_profit(powers.alpha_a))


def psm_vs_selfish_rer(powers: PowerSplit, gamma: float) -> float:
    """RER of the PSM attacker share over classic selfish mining."""
    share = psm_profits(powers, gamma).share_attacker
    return rer(share, selfish_profit(powers.alpha_a, gamma))


# ---------------------------------------------------------------------------
# A-PSM: geometric-tail chain
# ---------------------------------------------------------------------------


def _apsm_units(powers: PowerSplit, gamma: float) -> tuple[float, float, float, float]:
    """A-PSM accepted-block rates in units of P0, plus 1/P0.

    Returns ``(atk_units, att_units, hon_units, inv_p0)``; divide the unit
    rates by ``inv_p0`` to get per-step rates.
    """
    a, i, h = powers.alpha_a, powers.alpha_i, powers.alpha_h
    g = gamma
    if a + i >= 0.5:
        raise ApsmPowerError(f"A-PSM requires alpha_a + alpha_i < 0.5, got {a + i}")
    if a == 0.0:
        # no private branch: the attracted miners mine publicly
        return 0.0, i, h, 1.0
    ratio = (1.0 - h) / h  # tail decay of the lead-n states
    inv_p0 = 1.0 + a * (1.0 + h) + a * (1.0 - h) / (2.0 * h - 1.0)
    p0p = a * h  # race state
    p2 = a * ratio  # lead-2 state
    tail3 = p2 * ratio / (1.0 - ratio)  # total mass of lead >= 3
    own_atk = a / (a + i)  # attacker's share of private-branch blocks
    rev_atk = (
        (2.0 * a + i + g * h) * p0p
        + (1.0 + own_atk) * h * p2
        + own_atk * h * tail3
    )
    rev_att = i * inv_p0  # attracted rate is alpha_i per step
    rev_hon = h + (2.0 - g) * h * p0p
    return rev_atk, rev_att, rev_hon, inv_p0


def apsm_profits(powers: PowerSplit, gamma: float) -> RevenueBreakdown:
    """Revenue breakdown when the attacker runs A-PSM.

    With ``alpha_i = 0`` this reduces exactly to classic selfish mining.
    """
    validate_scenario(powers, gamma, AttackerStrategy.APSM)
    g = validate_gamma(gamma)
    atk_u, att_u, hon_u, inv_p0 = _apsm_units(powers, g)
    return RevenueBreakdown.from_rates(
        atk_u / inv_p0, att_u / inv_p0, hon_u / inv_p0
    )


def apsm_miner_greedy_profit(alpha_a: float, alpha_k: float, gamma: float) -> float:
    """Share of rational miner k on the A-PSM attacker's branch (worst case:
    k is the only attracted miner).  γ-free like the PSM analogue; the
    argument is accepted for interface symmetry."""
    k = validate_alpha_k(alpha_k, alpha_a)
    validate_gamma(gamma)
    powers = PowerSplit.from_attack(alpha_a, k)
    return apsm_profits(powers, 0.0).share_attracted


def apsm_miner_public_profit(alpha_a: float, alpha_k: float, gamma: float) -> float:
    """Share of rational miner k staying public while an A-PSM attacker with
    no attracted miners is active."""
    k = validate_alpha_k(alpha_k, alpha_a)
    g = validate_gamma(gamma)
    if not 0.0 <= alpha_a < 0.5:
        raise RangeError(f"alpha_a={alpha_a} outside [0, 0.5)")
    a = alpha_a
    num = (a * (1.0 - 2.0 * a) * k * (k + a - 1.0)) * g + (
        4.0 * a**3 - 6.0 * a**2 + 1.0
    ) * k
    den = a**3 - 2.0 * a**2 - a + 1.0
    return num / den


def apsm_miner_rer(alpha_a: float, alpha_k: float, gamma: float) -> float:
    """RER of greedy over public mining for rational miner k under A-PSM.

    Positive for every admissible input (verified over a grid in the test
    suite), so the greedy strategy always pays once an A-PSM attacker runs.
    """
    if alpha_k == 0.0:
        return 0.0
    greedy = apsm_miner_greedy_profit(alpha_a, alpha_k, gamma)
    public = apsm_miner_public_profit(alpha_a, alpha_k, gamma)
    return rer(greedy, public)


def apsm_vs_honest_rer(powers: PowerSplit, gamma: float) -> float:
    """RER of the A-PSM attacker share over honest mining."""
    share = apsm_profits(powers, gamma).share_attacker
    return rer(share, honest_profit(powers.alpha_a))


def apsm_vs_selfish_rer(powers: PowerSplit, gamma: float) -> float:
    """RER of the A-PSM attacker share over classic selfish mining."""
    share = apsm_profits(powers, gamma).share_attacker
    return rer(share, selfish_profit(powers.alpha_a, gamma))
