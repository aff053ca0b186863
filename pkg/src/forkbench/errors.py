"""Exception hierarchy for forkbench.

All domain errors derive from :class:`ForkbenchError` so the CLI can map any
validation failure to a single exit code.
"""

from __future__ import annotations


class ForkbenchError(ValueError):
    """Base class for all forkbench domain errors."""


class NormalizationError(ForkbenchError):
    """Mining powers do not sum to one."""


class RangeError(ForkbenchError):
    """A parameter lies outside its admissible range."""


class ApsmPowerError(ForkbenchError):
    """A-PSM requires the attacker plus attracted power to stay below 0.5."""


class ZeroBaselineError(ForkbenchError):
    """Relative extra reward is undefined for a zero baseline revenue."""


class SingularChainError(ForkbenchError):
    """The balance equations of a chain are degenerate."""


class SingularityError(ForkbenchError):
    """A closed-form expression is evaluated at an excluded denominator."""
