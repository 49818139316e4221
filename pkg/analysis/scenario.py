"""A validated, runnable experiment: signal model, network process and run parameters."""
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property

from core.exceptions import InvalidScenario
from detection.engines import theorem1_learning_rate
from network.processes import expected_matrix
from network.spectral import sigma2
from signal_model.likelihoods import log_bound, second_state

logger = logging.getLogger(__name__)

LEARNING_RATE_MODES = ("auto", "unit", "theorem1", "explicit")
PURPOSES = ("simulate", "prop1", "theorem1")


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    model: object
    process: object
    horizon: int
    delta: float = 0.1
    checkpoints: tuple = ()
    trials: int = 1
    seed: int = 0
    learning_rate_mode: str = "auto"
    learning_rate_value: float = None
    rate_window: tuple = None
    mixing_times: tuple = (1, 10, 100, 1000)
    output_directory: str = None
    config_digest: str = ""
    source: dict = field(default=None, repr=False)

    def __post_init__(self):
        if self.model.n != self.process.n:
            raise InvalidScenario(f"signal model has {self.model.n} agents, network has {self.process.n}")
        if self.learning_rate_mode not in LEARNING_RATE_MODES:
            raise InvalidScenario(f"unknown learning-rate mode {self.learning_rate_mode!r}")
        if self.learning_rate_mode == "explicit" and not (self.learning_rate_value or 0) > 0:
            raise InvalidScenario("explicit learning rate needs a positive value")
        object.__setattr__(self, "checkpoints", tuple(int(t) for t in self.checkpoints))
        if self.rate_window is None:
            object.__setattr__(self, "rate_window", (max(1, math.ceil(self.horizon / 2)), self.horizon))

    @property
    def n(self):
        return self.model.n

    @property
    def m(self):
        return self.model.m

    @cached_property
    def B(self):
        return log_bound(self.model)

    @cached_property
    def second(self):
        """(index, I(theta_1, theta_2))."""
        return second_state(self.model)

    @property
    def rate(self):
        return self.second[1]

    @cached_property
    def sigma2(self):
        return sigma2(expected_matrix(self.process))

    def learning_rate(self, purpose):
        """eta for a run purpose: simulate, prop1 or theorem1."""
        if purpose not in PURPOSES:
            raise ValueError(f"unknown purpose {purpose!r}")
        mode = self.learning_rate_mode
        prescribed = mode == "theorem1" or (mode == "auto" and purpose == "theorem1")
        if prescribed:
            eta = theorem1_learning_rate(self.B, self.n, self.sigma2)
        else:
            eta = float(self.learning_rate_value if mode == "explicit" else 1.0)
        if purpose == "theorem1" and not prescribed:
            logger.warning("%s: cost verification with eta=%g instead of the prescribed rate", self.name, eta)
        if purpose == "prop1" and eta != 1.0:
            logger.warning("%s: TV error verification with eta=%g; the TV bound holds for eta=1", self.name, eta)
        return eta
