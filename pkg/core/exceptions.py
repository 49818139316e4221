"""Error hierarchy shared by every package of the lab."""


class DetectionLabError(Exception):
    """Base class for all errors raised by the lab."""


# --- Simplex primitives ---

class InvalidBelief(DetectionLabError, ValueError):
    """A vector is not a point of the probability simplex."""


class AbsoluteContinuityViolation(DetectionLabError, ValueError):
    """KL divergence is infinite: mu puts mass where pi has none."""


class NonFiniteInput(DetectionLabError, ValueError):
    """A potential or weight is NaN or infinite."""


# --- Signal model ---

class InvalidLikelihood(DetectionLabError, ValueError):
    """A likelihood table is structurally malformed."""


class ZeroLikelihoodEntry(InvalidLikelihood):
    """Some likelihood entry is zero, so B is infinite."""


class BadRowSum(InvalidLikelihood):
    """A likelihood row does not sum to one."""


class NotIdentifiable(InvalidLikelihood):
    """A false state is observationally equivalent to the true one for every agent."""


# --- Network ---

class InvalidMixingMatrix(DetectionLabError, ValueError):
    """A matrix is not nonnegative, symmetric and row stochastic."""


class IsolatedAgent(DetectionLabError, ValueError):
    """Gossip needs every agent to have at least one neighbor."""


class NotConnected(DetectionLabError, ValueError):
    """The expected network is not connected."""


class NoConvergence(DetectionLabError, ArithmeticError):
    """An iterative method hit its iteration cap."""


class DimensionMismatch(DetectionLabError, ValueError):
    """Agent, state or time dimensions of two inputs disagree."""


class DegenerateNetwork(DetectionLabError, ValueError):
    """The network size or spectral gap leaves a formula undefined."""


# --- Analysis ---

class DegenerateInputs(DetectionLabError, ValueError):
    """Bound inputs fall outside the domain where the bound is stated."""


class UnderflowWindow(DetectionLabError, ArithmeticError):
    """The TV error reached zero inside a regression window."""


class InvalidScenario(DetectionLabError, ValueError):
    """A scenario cannot be used for the requested experiment."""


# --- Experiments ---

class ConfigInvalid(DetectionLabError, ValueError):
    """A scenario file failed validation."""

    def __init__(self, message, errors=None):
        super().__init__(message)
        self.errors = errors or {}
