"""forkbench: revenue calculus for partial block-withholding mining attacks.

Closed-form profit and relative-extra-reward formulas, exact Markov-chain
oracles, a deterministic parallel Monte Carlo simulator, strategy decision
helpers, attack economics, and a reproduction harness for the published
validation grids.
"""

from .analytic import (
    apsm_miner_greedy_profit,
    apsm_miner_public_profit,
    apsm_miner_rer,
    apsm_profits,
    apsm_vs_honest_rer,
    apsm_vs_selfish_rer,
    honest_profit,
    join_threshold,
    psm_miner_greedy_profit,
    psm_miner_public_profit,
    psm_miner_rer,
    psm_profits,
    psm_vs_honest_rer,
    psm_vs_selfish_rer,
    selfish_profit,
)
from .chains import ChainVariant, build_chain, reward_rates, stationary
from .decision import (
    StrategyVerdict,
    SweepAxis,
    SweepGrid,
    TwoAttackerScenario,
    best_attacker_strategy,
    best_miner_strategy,
    early_release_bonus,
    min_alpha_i_sweep,
    sweep,
    two_attacker_apsm_rer,
    two_attacker_psm_rer,
)
from .economics import (
    DosScenario,
    NetworkParams,
    dos_viability,
    find_probability,
    hashrate_from_difficulty,
    required_hidden_bytes,
    secret_search_time,
)
from .errors import (
    ApsmPowerError,
    ForkbenchError,
    NormalizationError,
    RangeError,
    SingularChainError,
    SingularityError,
    ZeroBaselineError,
)
from .model import (
    AttackerStrategy,
    MinerStrategy,
    PowerSplit,
    RevenueBreakdown,
    Scenario,
    rer,
    validate_scenario,
)
from .montecarlo import RerEstimate, SimConfig, SimReport, SimVariant, simulate, simulate_rer

__version__ = "0.1.0"
