"""Semantic exception hierarchy for the sociallearn package.

Every public function raises subclasses of :class:`SocialLearnError` for
contract violations instead of bare ``ValueError``; callers can catch the
base class to handle any domain failure.
"""

from __future__ import annotations


class SocialLearnError(Exception):
    """Base class for all errors raised by this package."""


# --- probability primitives -------------------------------------------------

class NegativeMassError(SocialLearnError):
    """A probability mass entry is negative."""


class NotNormalizedError(SocialLearnError):
    """Mass entries do not sum to one within the input tolerance."""


class AlphabetTooSmallError(SocialLearnError):
    """An observation alphabet needs at least two symbols."""


class AlphabetMismatchError(SocialLearnError):
    """Two PMFs that must share an alphabet have different sizes."""


class OutOfRangeError(SocialLearnError):
    """A scalar parameter lies outside its admissible open interval."""


class InfiniteDivergenceError(SocialLearnError):
    """KL divergence is infinite: p puts mass where q has none."""


# --- network ------------------------------------------------------------------

class IsolatedAgentError(SocialLearnError):
    """An agent has no neighbors (zero combination column)."""


class NoConvergenceError(SocialLearnError):
    """Power iteration failed to converge within the iteration cap."""


# --- learning -----------------------------------------------------------------

class ZeroLikelihoodError(SocialLearnError):
    """The realized symbol has zero likelihood under every hypothesis."""


# --- attacks ------------------------------------------------------------------

class UninformativeModelError(SocialLearnError):
    """The operation requires an informative observation model."""


class FloorViolationError(SocialLearnError):
    """A closed-form forged mass would fall below the epsilon floor."""


class DegeneratePairError(SocialLearnError):
    """The selected symbol pair has a vanishing likelihood determinant."""


class EmptyRegionError(SocialLearnError):
    """The distortion region admits no feasible construction point."""


class EpsilonTooLargeError(SocialLearnError):
    """Epsilon exceeds the feasibility bound of the construction."""


class AllUninformativeError(SocialLearnError):
    """Every adversary is uninformative; no deceptive plan exists."""


# --- analysis -----------------------------------------------------------------

class NoSignChangeError(SocialLearnError):
    """Bisection bracket endpoints have the same margin sign."""


# --- simulator ----------------------------------------------------------------

class ConfigParseError(SocialLearnError):
    """Configuration text is not well-formed."""


class ConfigValidationError(SocialLearnError):
    """Configuration parsed but violates the schema contract."""

    def __init__(self, violations: list[str]):
        self.violations = list(violations)
        super().__init__("invalid configuration:\n  " + "\n  ".join(self.violations))


class OutputIOError(SocialLearnError):
    """A result file could not be written."""
