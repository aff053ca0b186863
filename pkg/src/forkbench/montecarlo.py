"""Seeded, worker-count-independent Monte Carlo simulation.

Design
------
* A "round" is one block-discovery event (one state-machine transition).
* The round space is split into fixed batches of :data:`BATCH_SIZE` events.
  Batch ``b`` of a simulation with salt ``s`` draws its uniforms from a
  dedicated Philox counter-based stream keyed ``[seed, s * 2**32 + b]``, so
  tallies are byte-identical for any worker count.  Each batch restarts the
  state machine at state 0; the bias from discarding inter-batch state is a
  boundary effect of order (expected excursion length) / BATCH_SIZE and is
  far below the statistical error at the supported round counts.
* One uniform drives each event.  γ-split races reuse the same uniform via
  conditional rescaling, which preserves exact per-event probabilities.
* The inner loop is compiled with numba when available; otherwise the very
  same Python function runs uncompiled, so results are bit-identical either
  way.
* A-PSM tracks per-block ownership of the private branch in a FIFO ring
  buffer (who mined each still-unsettled block), settling oldest-first on
  descents.  Leads are unbounded; the buffer capacity of 4096 is
  unreachable for any admissible power split.

Standard errors use the binomial variance of each share estimator,
``sqrt(s * (1 - s) / total_blocks)``.
"""

from __future__ import annotations

import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .chains import ChainVariant
from .errors import RangeError, ZeroBaselineError
from .model import (
    AttackerStrategy,
    PowerSplit,
    RevenueBreakdown,
    Scenario,
    validate_scenario,
)

__all__ = [
    "BATCH_SIZE",
    "SimVariant",
    "SimConfig",
    "SimReport",
    "RerEstimate",
    "simulate",
    "simulate_rer",
    "HAVE_NUMBA",
]

#: Events per RNG batch; fixed so results never depend on worker count.
BATCH_SIZE = 100_000

#: Ring-buffer capacity for unsettled private-branch blocks (A-PSM).
_OWN_CAP = 4096


class SimVariant(enum.Enum):
    """Simulated state machine.  The four chain variants plus the two
    baseline strategies used as RER denominators."""

    HONEST = "honest"
    SELFISH = "selfish"
    PSM_ATTACKER = "psm-attacker"
    PSM_MINER = "psm-miner"
    APSM_ATTACKER = "apsm-attacker"
    APSM_MINER = "apsm-miner"


_CODE = {
    SimVariant.HONEST: 0,
    SimVariant.PSM_ATTACKER: 1,
    SimVariant.SELFISH: 2,
    SimVariant.APSM_ATTACKER: 2,
    SimVariant.PSM_MINER: 3,
    SimVariant.APSM_MINER: 4,
}

_FROM_CHAIN = {
    ChainVariant.PSM_ATTACKER: SimVariant.PSM_ATTACKER,
    ChainVariant.PSM_MINER: SimVariant.PSM_MINER,
    ChainVariant.APSM_ATTACKER: SimVariant.APSM_ATTACKER,
    ChainVariant.APSM_MINER: SimVariant.APSM_MINER,
}

_STRATEGY_VARIANT = {
    AttackerStrategy.HONEST: SimVariant.HONEST,
    AttackerStrategy.SELFISH: SimVariant.SELFISH,
    AttackerStrategy.PSM: SimVariant.PSM_ATTACKER,
    AttackerStrategy.APSM: SimVariant.APSM_ATTACKER,
}


@dataclass(frozen=True)
class SimConfig:
    rounds: int
    seed: int
    workers: int = 1
    variant: SimVariant | ChainVariant = SimVariant.PSM_ATTACKER

    def __post_init__(self) -> None:
        if self.rounds < 1:
            raise RangeError(f"rounds={self.rounds} must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise RangeError(f"seed={self.seed} outside [0, 2**64)")
        if self.workers < 1:
            raise RangeError(f"workers={self.workers} must be >= 1")

    @property
    def sim_variant(self) -> SimVariant:
        if isinstance(self.variant, ChainVariant):
            return _FROM_CHAIN[self.variant]
        return self.variant


@dataclass(frozen=True)
class SimReport:
    """Per-actor accepted-block tallies and share estimates.

    For the single-miner variants the ``attracted`` slot holds miner k's
    tally.  ``stderr_*`` is the binomial standard error of each share.
    """

    blocks_attacker: int
    blocks_attracted: int
    blocks_honest: int
    rounds: int
    seed: int

    @property
    def total_blocks(self) -> int:
        return self.blocks_attacker + self.blocks_attracted + self.blocks_honest

    def _share(self, tally: int) -> float:
        total = self.total_blocks
        return tally / total if total else 0.0

    @property
    def share_attacker(self) -> float:
        return self._share(self.blocks_attacker)

    @property
    def share_attracted(self) -> float:
        return self._share(self.blocks_attracted)

    @property
    def share_honest(self) -> float:
        return self._share(self.blocks_honest)

    def _stderr(self, share: float) -> float:
        total = self.total_blocks
        if total == 0:
            return 0.0
        return float(np.sqrt(share * (1.0 - share) / total))

    @property
    def stderr_attacker(self) -> float:
        return self._stderr(self.share_attacker)

    @property
    def stderr_attracted(self) -> float:
        return self._stderr(self.share_attracted)

    @property
    def stderr_honest(self) -> float:
        return self._stderr(self.share_honest)

    def breakdown(self) -> RevenueBreakdown:
        """Shares as a :class:`RevenueBreakdown` (rates = blocks per round)."""
        r = self.rounds
        return RevenueBreakdown.from_rates(
            self.blocks_attacker / r,
            self.blocks_attracted / r,
            self.blocks_honest / r,
        )


@dataclass(frozen=True)
class RerEstimate:
    """A simulated relative extra reward with its propagated standard error."""

    value: float
    stderr: float


# ---------------------------------------------------------------------------
# Event kernel (numba-compiled when available, plain Python otherwise)
# ---------------------------------------------------------------------------


def _batch_kernel(u, code, a, i, g, own):  # pragma: no cover - exercised via wrappers
    """Run one batch of events from state 0.

    ``u`` holds one uniform per event; ``i`` is the attracted mass (attacker
    variants) or miner k's power (miner variants); ``own`` is uint8 scratch
    for A-PSM private-branch ownership (0 = attacker, 1 = attracted).
    Returns the (attacker, attracted, honest) accepted-block tallies.
    """
    atk = 0
    att = 0
    hon = 0
    ai = a + i
    h = 1.0 - ai
    state = 0  # 0: no lead, 1: lead one, 2: race (other), 3: race (miner k)
    lead = 0
    start = 0
    count = 0
    for n in range(u.shape[0]):
        x = u[n]
        if code == 0:  # honest: every block is accepted as found
            if x < a:
                atk += 1
            elif x < ai:
                att += 1
            else:
                hon += 1
        elif code == 1:  # PSM attacker
            if state == 0:
                if x < a:
                    state = 1
                elif x < ai:
                    att += 1
                else:
                    hon += 1
            elif state == 1:
                if x < a:
                    atk += 2
                    state = 0
                elif x < ai:
                    atk += 1
                    att += 1
                    state = 0
                else:
                    state = 2
            else:  # zero-lead race
                if x < a:
                    atk += 2
                elif x < ai:
                    atk += 1
                    att += 1
                else:
                    v = (x - ai) / h
                    if v < g:
                        atk += 1
                        hon += 1
                    else:
                        hon += 2
                state = 0
        elif code == 2:  # A-PSM attacker (classic selfish at i = 0)
            if state == 2:  # zero-lead race; sole private block is attacker's
                if x < a:
                    atk += 2
                elif x < ai:
                    atk += 1
                    att += 1
                else:
                    v = (x - ai) / h
                    if v < g:
                        atk += 1
                        hon += 1
                    else:
                        hon += 2
                state = 0
                lead = 0
                count = 0
            elif lead == 0:
                if x < a:
                    lead = 1
                    start = 0
                    count = 1
                    own[0] = 0
                elif x < ai:
                    att += 1
                else:
                    hon += 1
            elif lead == 1:
                if x < ai:
                    lead = 2
                    if count < _OWN_CAP:
                        own[(start + count) % _OWN_CAP] = 0 if x < a else 1
                    count += 1
                else:
                    state = 2
            else:  # lead >= 2
                if x < ai:
                    lead += 1
                    if count < _OWN_CAP:
                        own[(start + count) % _OWN_CAP] = 0 if x < a else 1
                    count += 1
                elif lead == 2:
                    # full release: both unsettled blocks settle, the fresh
                    # public block is orphaned
                    for _ in range(2):
                        if own[start % _OWN_CAP] == 0:
                            atk += 1
                        else:
                            att += 1
                        start += 1
                        count -= 1
                    lead = 0
                    start = 0
                    count = 0
                else:
                    # descent: the oldest unsettled private block settles
                    if own[start % _OWN_CAP] == 0:
                        atk += 1
                    else:
                        att += 1
                    start += 1
                    count -= 1
                    lead -= 1
        elif code == 3:  # PSM with a single rational miner k staying public
            if state == 0:
                if x < a:
                    state = 1
                elif x < ai:
                    att += 1
                else:
                    hon += 1
            elif state == 1:
                if x < a:
                    atk += 2
                    state = 0
                elif x < ai:
                    state = 3  # race triggered by k's own block
                else:
                    state = 2  # race triggered by another public block
            elif state == 2:
                if x < a:
                    atk += 2
                elif x < ai:
                    v = (x - a) / i
                    if v < g:
                        atk += 1
                        att += 1
                    else:
                        att += 1
                        hon += 1
                else:
                    v = (x - ai) / h
                    if v < g:
                        atk += 1
                        hon += 1
                    else:
                        hon += 2
                state = 0
            else:  # state == 3: k never abandons its own racing block
                if x < a:
                    atk += 2
                elif x < ai:
                    att += 2
                else:
                    v = (x - ai) / h
                    if v < g:
                        atk += 1
                        hon += 1
                    else:
                        att += 1
                        hon += 1
                state = 0
        else:  # code == 4: A-PSM with a single rational miner k staying public
            if state == 2 or state == 3:
                if x < a:
                    atk += 2
                elif x < ai:
                    if state == 3:
                        att += 2
                    else:
                        v = (x - a) / i
                        if v < g:
                            atk += 1
                            att += 1
                        else:
                            att += 1
                            hon += 1
                else:
                    v = (x - ai) / h
                    if v < g:
                        atk += 1
                        hon += 1
                    elif state == 3:
                        att += 1
                        hon += 1
                    else:
                        hon += 2
                state = 0
                lead = 0
            elif lead == 0:
                if x < a:
                    lead = 1
                elif x < ai:
                    att += 1
                else:
                    hon += 1
            elif lead == 1:
                if x < a:
                    lead = 2
                elif x < ai:
                    state = 3
                else:
                    state = 2
            else:  # lead >= 2: all private blocks are the attacker's
                if x < a:
                    lead += 1
                elif lead == 2:
                    atk += 2  # release both; the fresh public block orphans
                    lead = 0
                else:
                    atk += 1
                    lead -= 1
    return atk, att, hon


try:  # pragma: no cover - environment dependent
    from numba import njit

    _batch_kernel_compiled = njit(cache=True, nogil=True)(_batch_kernel)
    HAVE_NUMBA = True
except Exception:  # pragma: no cover
    _batch_kernel_compiled = _batch_kernel
    HAVE_NUMBA = False


def _run_batch(
    seed: int, salt: int, batch: int, length: int, code: int, a: float, i: float, g: float
) -> tuple[int, int, int]:
    key = np.array([seed, (salt << 32) | batch], dtype=np.uint64)
    u = np.random.Generator(np.random.Philox(key=key)).random(length)
    own = np.zeros(_OWN_CAP, dtype=np.uint8)
    return _batch_kernel_compiled(u, code, a, i, g, own)


def _simulate_salted(
    powers: PowerSplit, gamma: float, cfg: SimConfig, salt: int
) -> SimReport:
    variant = cfg.sim_variant
    code = _CODE[variant]
    a = powers.alpha_a
    if variant is SimVariant.SELFISH:
        i = 0.0  # the attracted mass mines publicly against a selfish attacker
    else:
        i = powers.alpha_i
    strategy = {
        SimVariant.HONEST: AttackerStrategy.HONEST,
        SimVariant.SELFISH: AttackerStrategy.SELFISH,
        SimVariant.PSM_ATTACKER: AttackerStrategy.PSM,
        SimVariant.PSM_MINER: AttackerStrategy.PSM,
        SimVariant.APSM_ATTACKER: AttackerStrategy.APSM,
        SimVariant.APSM_MINER: AttackerStrategy.APSM,
    }[variant]
    if variant in (SimVariant.SELFISH, SimVariant.PSM_MINER, SimVariant.APSM_MINER):
        # the non-attacker mass (attracted-turned-public, or miner k) mines
        # publicly, so the attracker-side power caps apply to alpha_a alone
        check_powers = PowerSplit.from_attack(a, 0.0)
    else:
        check_powers = powers
    validate_scenario(check_powers, gamma, strategy)

    n_batches = (cfg.rounds + BATCH_SIZE - 1) // BATCH_SIZE
    lengths = [
        min(BATCH_SIZE, cfg.rounds - b * BATCH_SIZE) for b in range(n_batches)
    ]

    def job(b: int) -> tuple[int, int, int]:
        return _run_batch(cfg.seed, salt, b, lengths[b], code, a, i, gamma)

    if cfg.workers == 1 or n_batches == 1:
        results = [job(b) for b in range(n_batches)]
    else:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            results = list(pool.map(job, range(n_batches)))

    atk = sum(r[0] for r in results)
    att = sum(r[1] for r in results)
    hon = sum(r[2] for r in results)
    return SimReport(atk, att, hon, cfg.rounds, cfg.seed)


def simulate(powers: PowerSplit, gamma: float, cfg: SimConfig) -> SimReport:
    """Walk the configured state machine for ``cfg.rounds`` block events.

    Deterministic: identical (seed, rounds, variant, scenario) produce
    identical tallies for any ``cfg.workers``.
    """
    return _simulate_salted(powers, gamma, cfg, salt=0)


def simulate_rer(
    scenario_a: Scenario, scenario_b: Scenario, cfg: SimConfig
) -> RerEstimate:
    """Simulated RER of scenario A's attacker share over scenario B's.

    The two runs use independent sub-streams of ``cfg.seed`` (identical
    scenarios share a stream, so the RER is then exactly zero).
    """
    report_a = _simulate_salted(
        scenario_a.powers,
        scenario_a.gamma,
        SimConfig(cfg.rounds, cfg.seed, cfg.workers, _STRATEGY_VARIANT[scenario_a.strategy]),
        salt=0,
    )
    salt_b = 0 if scenario_a == scenario_b else 1
    report_b = _simulate_salted(
        scenario_b.powers,
        scenario_b.gamma,
        SimConfig(cfg.rounds, cfg.seed, cfg.workers, _STRATEGY_VARIANT[scenario_b.strategy]),
        salt=salt_b,
    )
    if report_b.blocks_attacker == 0:
        raise ZeroBaselineError("baseline attacker tally is zero")
    sa, sb = report_a.share_attacker, report_b.share_attacker
    ea, eb = report_a.stderr_attacker, report_b.stderr_attacker
    value = (sa - sb) / sb
    stderr = float(np.sqrt((ea / sb) ** 2 + (sa * eb / sb**2) ** 2))
    return RerEstimate(value, stderr)
