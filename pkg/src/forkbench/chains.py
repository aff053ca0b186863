"""Explicit Markov chains for each strategy/actor pairing.

Each chain is built as a list of labeled states and transitions carrying
integer block credits per actor class.  Races where a public find splits
γ : 1−γ are modeled as two separate transitions so every reward stays an
integer block count.  The A-PSM chains carry a geometric tail of lead-n
states (n ≥ 3) described by a :class:`TailSpec`; the stationary solver uses
the closed-form geometric sum, and a truncated-matrix solver is provided as
a cross-check.

Actor classes: ``attacker``, ``attracted``, ``honest`` for the attacker
chains; ``attacker``, ``miner_k``, ``honest`` for the single-miner chains
(``reward_rates`` maps miner k onto the "attracted" slot of the breakdown).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .errors import SingularChainError
from .model import (
    AttackerStrategy,
    PowerSplit,
    RevenueBreakdown,
    validate_alpha_k,
    validate_gamma,
    validate_scenario,
)

__all__ = [
    "ChainVariant",
    "Transition",
    "TailSpec",
    "ChainSpec",
    "StationaryDist",
    "build_chain",
    "stationary",
    "stationary_truncated",
    "reward_rates",
    "export_transition_table",
]

#: Destination label marking an ascent from the tail entry into the tail.
TAIL = "Sn"

ACTORS = ("attacker", "attracted", "honest")


class ChainVariant(enum.Enum):
    PSM_ATTACKER = "psm-attacker"
    PSM_MINER = "psm-miner"
    APSM_ATTACKER = "apsm-attacker"
    APSM_MINER = "apsm-miner"


@dataclass(frozen=True)
class Transition:
    src: str
    dst: str
    prob: float
    rewards: dict[str, int] = field(default_factory=dict)


@dataclass(frozen=True)
class TailSpec:
    """Geometric tail of lead-n states, n >= 3.

    ``P_n = ratio**(n-2) * P[entry]`` where ``entry`` is the explicit lead-2
    state.  Every tail state has the same ascend (n -> n+1) and descend
    (n -> n-1) transition patterns; a descent from n = 3 re-enters ``entry``.
    """

    entry: str
    ratio: float
    ascend: tuple[tuple[float, dict[str, int]], ...]
    descend: tuple[tuple[float, dict[str, int]], ...]


@dataclass(frozen=True)
class ChainSpec:
    variant: ChainVariant
    states: tuple[str, ...]
    transitions: tuple[Transition, ...]
    tail: TailSpec | None = None

    def __post_init__(self) -> None:
        out = {s: 0.0 for s in self.states}
        for t in self.transitions:
            out[t.src] += t.prob
        if self.tail is not None:
            for prob, _ in self.tail.ascend + self.tail.descend:
                pass  # tail rows are validated below
            tail_total = sum(p for p, _ in self.tail.ascend + self.tail.descend)
            if abs(tail_total - 1.0) > 1e-12:
                raise SingularChainError(
                    f"tail transition probabilities sum to {tail_total}"
                )
        for s, total in out.items():
            if abs(total - 1.0) > 1e-12:
                raise SingularChainError(
                    f"outgoing probabilities from {s} sum to {total}"
                )


@dataclass(frozen=True)
class StationaryDist:
    """Stationary probabilities of the explicit states plus aggregated tail
    mass (lead >= 3 states)."""

    probabilities: dict[str, float]
    tail_mass: float

    @property
    def total(self) -> float:
        return sum(self.probabilities.values()) + self.tail_mass


# ---------------------------------------------------------------------------
# Chain construction
# ---------------------------------------------------------------------------


def _psm_attacker_chain(powers: PowerSplit, gamma: float) -> ChainSpec:
    a, i, h = powers.alpha_a, powers.alpha_i, powers.alpha_h
    g = gamma
    trans = [
        # S0: single public branch; the attacker withholds its find.
        Transition("S0", "S1", a),
        Transition("S0", "S0", i, {"attracted": 1}),
        Transition("S0", "S0", h, {"honest": 1}),
        # S1: private lead one, partial block shared.  Lead two publishes.
        Transition("S1", "S0", a, {"attacker": 2}),
        Transition("S1", "S0", i, {"attacker": 1, "attracted": 1}),
        Transition("S1", "S0p", h),
        # S0': zero-lead race.
        Transition("S0p", "S0", a, {"attacker": 2}),
        Transition("S0p", "S0", i, {"attacker": 1, "attracted": 1}),
        Transition("S0p", "S0", g * h, {"attacker": 1, "honest": 1}),
        Transition("S0p", "S0", (1.0 - g) * h, {"honest": 2}),
    ]
    return ChainSpec(
        ChainVariant.PSM_ATTACKER,
        ("S0", "S1", "S0p"),
        tuple(t for t in trans if t.prob > 0.0),
    )


def _psm_miner_chain(alpha_a: float, alpha_k: float, gamma: float) -> ChainSpec:
    a, k = alpha_a, alpha_k
    h = 1.0 - a - k
    g = gamma
    trans = [
        Transition("S0", "S1", a),
        Transition("S0", "S0", k, {"miner_k": 1}),
        Transition("S0", "S0", h, {"honest": 1}),
        Transition("S1", "S0", a, {"attacker": 2}),
        Transition("S1", "S0p_k", k),
        Transition("S1", "S0p_o", h),
        # race triggered by miner k's block: k never abandons its own block.
        Transition("S0p_k", "S0", a, {"attacker": 2}),
        Transition("S0p_k", "S0", k, {"miner_k": 2}),
        Transition("S0p_k", "S0", g * h, {"attacker": 1, "honest": 1}),
        Transition("S0p_k", "S0", (1.0 - g) * h, {"miner_k": 1, "honest": 1}),
        # race triggered by another honest block: k γ-splits like the rest.
        Transition("S0p_o", "S0", a, {"attacker": 2}),
        Transition("S0p_o", "S0", g * k, {"attacker": 1, "miner_k": 1}),
        Transition("S0p_o", "S0", (1.0 - g) * k, {"miner_k": 1, "honest": 1}),
        Transition("S0p_o", "S0", g * h, {"attacker": 1, "honest": 1}),
        Transition("S0p_o", "S0", (1.0 - g) * h, {"honest": 2}),
    ]
    return ChainSpec(
        ChainVariant.PSM_MINER,
        ("S0", "S1", "S0p_o", "S0p_k"),
        tuple(t for t in trans if t.prob > 0.0),
    )


def _apsm_attacker_chain(powers: PowerSplit, gamma: float) -> ChainSpec:
    a, i, h = powers.alpha_a, powers.alpha_i, powers.alpha_h
    g = gamma
    priv = a + i
    own_atk = a / priv if priv > 0.0 else 1.0
    own_att = 1.0 - own_atk
    ratio = (1.0 - h) / h if h > 0.0 else 1.0
    trans = [
        Transition("S0", "S1", a),
        Transition("S0", "S0", i, {"attracted": 1}),
        Transition("S0", "S0", h, {"honest": 1}),
        # S1: lead one.  A private find withholds (lead two), a public find
        # races.
        Transition("S1", "S2", priv),
        Transition("S1", "S0p", h),
        Transition("S0p", "S0", a, {"attacker": 2}),
        Transition("S0p", "S0", i, {"attacker": 1, "attracted": 1}),
        Transition("S0p", "S0", g * h, {"attacker": 1, "honest": 1}),
        Transition("S0p", "S0", (1.0 - g) * h, {"honest": 2}),
        # S2: lead two.  A public find triggers the full release: the two
        # still-unsettled private blocks settle (the older one is always the
        # attacker's first withheld block; the newer one belongs to the
        # attacker or an attracted miner in proportion to their power).
        Transition("S2", TAIL, priv),
        Transition("S2", "S0", h * own_atk, {"attacker": 2}),
        Transition("S2", "S0", h * own_att, {"attacker": 1, "attracted": 1}),
    ]
    tail = TailSpec(
        entry="S2",
        ratio=ratio,
        ascend=((priv, {}),),
        # each descent settles the oldest unsettled private block
        descend=(
            (h * own_atk, {"attacker": 1}),
            (h * own_att, {"attracted": 1}),
        ),
    )
    return ChainSpec(
        ChainVariant.APSM_ATTACKER,
        ("S0", "S1", "S0p", "S2"),
        tuple(t for t in trans if t.prob > 0.0),
        tail=_prune_tail(tail),
    )


def _apsm_miner_chain(alpha_a: float, alpha_k: float, gamma: float) -> ChainSpec:
    a, k = alpha_a, alpha_k
    h = 1.0 - a - k
    g = gamma
    pub = 1.0 - a  # k and the other honest miners both mine publicly
    ratio = a / pub if pub > 0.0 else 1.0
    trans = [
        Transition("S0", "S1", a),
        Transition("S0", "S0", k, {"miner_k": 1}),
        Transition("S0", "S0", h, {"honest": 1}),
        Transition("S1", "S2", a),
        Transition("S1", "S0p_k", k),
        Transition("S1", "S0p_o", h),
        Transition("S0p_k", "S0", a, {"attacker": 2}),
        Transition("S0p_k", "S0", k, {"miner_k": 2}),
        Transition("S0p_k", "S0", g * h, {"attacker": 1, "honest": 1}),
        Transition("S0p_k", "S0", (1.0 - g) * h, {"miner_k": 1, "honest": 1}),
        Transition("S0p_o", "S0", a, {"attacker": 2}),
        Transition("S0p_o", "S0", g * k, {"attacker": 1, "miner_k": 1}),
        Transition("S0p_o", "S0", (1.0 - g) * k, {"miner_k": 1, "honest": 1}),
        Transition("S0p_o", "S0", g * h, {"attacker": 1, "honest": 1}),
        Transition("S0p_o", "S0", (1.0 - g) * h, {"honest": 2}),
        # lead two: any public find triggers the release of the two withheld
        # attacker blocks; the fresh public block is orphaned.
        Transition("S2", TAIL, a),
        Transition("S2", "S0", pub, {"attacker": 2}),
    ]
    tail = TailSpec(
        entry="S2",
        ratio=ratio,
        ascend=((a, {}),),
        descend=((pub, {"attacker": 1}),),
    )
    return ChainSpec(
        ChainVariant.APSM_MINER,
        ("S0", "S1", "S0p_o", "S0p_k", "S2"),
        tuple(t for t in trans if t.prob > 0.0),
        tail=_prune_tail(tail),
    )


def _prune_tail(tail: TailSpec) -> TailSpec:
    return TailSpec(
        tail.entry,
        tail.ratio,
        tuple((p, r) for p, r in tail.ascend if p > 0.0),
        tuple((p, r) for p, r in tail.descend if p > 0.0),
    )


def build_chain(
    alpha_a: float,
    gamma: float,
    variant: ChainVariant,
    *,
    alpha_i: float = 0.0,
    alpha_k: float = 0.0,
) -> ChainSpec:
    """Construct the chain for one strategy/actor pairing.

    Attacker variants use ``alpha_i`` (attracted mass); the single-miner
    variants use ``alpha_k`` and assume no other attracted miners (the
    worst case the miner plans for).
    """
    gamma = validate_gamma(gamma)
    if variant in (ChainVariant.PSM_ATTACKER, ChainVariant.APSM_ATTACKER):
        powers = PowerSplit.from_attack(alpha_a, alpha_i)
        strategy = (
            AttackerStrategy.PSM
            if variant is ChainVariant.PSM_ATTACKER
            else AttackerStrategy.APSM
        )
        validate_scenario(powers, gamma, strategy)
        if variant is ChainVariant.PSM_ATTACKER:
            return _psm_attacker_chain(powers, gamma)
        return _apsm_attacker_chain(powers, gamma)
    validate_alpha_k(alpha_k, alpha_a)
    powers = PowerSplit.from_attack(alpha_a, 0.0)
    if variant is ChainVariant.PSM_MINER:
        validate_scenario(powers, gamma, AttackerStrategy.PSM)
        return _psm_miner_chain(alpha_a, alpha_k, gamma)
    validate_scenario(powers, gamma, AttackerStrategy.APSM)
    return _apsm_miner_chain(alpha_a, alpha_k, gamma)


# ---------------------------------------------------------------------------
# Stationary solver
# ---------------------------------------------------------------------------


def stationary(spec: ChainSpec) -> StationaryDist:
    """Solve the balance equations of the explicit states; geometric tails
    are folded in through their closed-form sums."""
    states = list(spec.states)
    index = {s: j for j, s in enumerate(states)}
    n = len(states)
    ratio = 0.0
    if spec.tail is not None:
        ratio = spec.tail.ratio
        if not 0.0 <= ratio < 1.0:
            raise SingularChainError(f"tail ratio {ratio} must be in [0, 1)")

    # Balance: P_s = sum of inflows.  Rows: (inflow matrix - I) @ P = 0.
    mat = -np.eye(n)
    for t in spec.transitions:
        if t.dst == TAIL:
            continue  # flows into the tail leave the explicit system
        mat[index[t.dst], index[t.src]] += t.prob
    if spec.tail is not None:
        # Descents from the first tail state (P3 = ratio * P_entry) flow back
        # into the entry state.
        down = sum(p for p, _ in spec.tail.descend)
        mat[index[spec.tail.entry], index[spec.tail.entry]] += down * ratio

    # Replace the first row by normalization including the tail mass.
    mat[0, :] = 1.0
    rhs = np.zeros(n)
    rhs[0] = 1.0
    if spec.tail is not None:
        mat[0, index[spec.tail.entry]] += ratio / (1.0 - ratio)
    try:
        sol = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularChainError(f"degenerate balance system: {exc}") from exc
    if np.any(sol < -1e-10):
        raise SingularChainError(f"negative stationary probability: {sol}")
    probs = {s: float(sol[index[s]]) for s in states}
    tail_mass = 0.0
    if spec.tail is not None:
        tail_mass = probs[spec.tail.entry] * ratio / (1.0 - ratio)
    return StationaryDist(probs, tail_mass)


def stationary_truncated(spec: ChainSpec, depth: int = 64) -> StationaryDist:
    """Cross-check solver: expand the geometric tail into explicit lead-n
    states up to ``depth`` (ascents at the deepest state self-loop), then
    solve the finite system.  Agreement with :func:`stationary` is within
    O(ratio**depth)."""
    if spec.tail is None:
        return stationary(spec)
    if depth < 3:
        raise SingularChainError("truncation depth must be at least 3")
    states = list(spec.states)
    tail_states = [f"L{n}" for n in range(3, depth + 1)]
    all_states = states + tail_states
    index = {s: j for j, s in enumerate(all_states)}
    m = len(all_states)
    mat = -np.eye(m)
    up = sum(p for p, _ in spec.tail.ascend)
    down = sum(p for p, _ in spec.tail.descend)
    entry = spec.tail.entry
    for t in spec.transitions:
        dst = "L3" if t.dst == TAIL else t.dst
        mat[index[dst], index[t.src]] += t.prob
    for j, s in enumerate(tail_states):
        n_lead = j + 3
        below = entry if n_lead == 3 else f"L{n_lead - 1}"
        mat[index[below], index[s]] += down
        if n_lead < depth:
            mat[index[f"L{n_lead + 1}"], index[s]] += up
        else:
            mat[index[s], index[s]] += up  # self-loop at the truncation edge
    mat[0, :] = 1.0
    rhs = np.zeros(m)
    rhs[0] = 1.0
    try:
        sol = np.linalg.solve(mat, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularChainError(f"degenerate balance system: {exc}") from exc
    probs = {s: float(sol[index[s]]) for s in states}
    tail_mass = float(sum(sol[index[s]] for s in tail_states))
    return StationaryDist(probs, tail_mass)


# ---------------------------------------------------------------------------
# Reward rates
# ---------------------------------------------------------------------------


def reward_rates(spec: ChainSpec, dist: StationaryDist) -> RevenueBreakdown:
    """Expected accepted blocks per step per actor class, plus shares.

    For the single-miner variants, miner k is reported in the "attracted"
    slot of the breakdown.
    """
    rates = {"attacker": 0.0, "attracted": 0.0, "honest": 0.0, "miner_k": 0.0}
    for t in spec.transitions:
        p = dist.probabilities[t.src] * t.prob
        for actor, blocks in t.rewards.items():
            rates[actor] += p * blocks
    if spec.tail is not None:
        for prob, rewards in spec.tail.ascend + spec.tail.descend:
            for actor, blocks in rewards.items():
                rates[actor] += dist.tail_mass * prob * blocks
    attracted = rates["attracted"] + rates["miner_k"]
    return RevenueBreakdown.from_rates(rates["attacker"], attracted, rates["honest"])


def export_transition_table(spec: ChainSpec) -> str:
    """Plain-text transition table for documentation and debugging."""
    lines = [f"chain variant: {spec.variant.value}"]
    lines.append(f"{'from':8s} {'to':8s} {'prob':>12s}  rewards")
    for t in spec.transitions:
        rew = ", ".join(f"{actor}+{n}" for actor, n in t.rewards.items()) or "-"
        lines.append(f"{t.src:8s} {t.dst:8s} {t.prob:12.8f}  {rew}")
    if spec.tail is not None:
        lines.append(
            f"tail from {spec.tail.entry}: ratio={spec.tail.ratio:.8f} "
            f"(states n>=3, P_n = ratio^(n-2) * P_{spec.tail.entry})"
        )
        for prob, rewards in spec.tail.ascend:
            rew = ", ".join(f"{a}+{n}" for a, n in rewards.items()) or "-"
            lines.append(f"  n -> n+1  {prob:12.8f}  {rew}")
        for prob, rewards in spec.tail.descend:
            rew = ", ".join(f"{a}+{n}" for a, n in rewards.items()) or "-"
            lines.append(f"  n -> n-1  {prob:12.8f}  {rew}")
    return "\n".join(lines) + "\n"
