"""Monte Carlo check of the high-probability bounds.

Each trial owns two generators spawned from numpy.random.SeedSequence(base_seed,
spawn_key=(trial,)): the first drives signals, the second drives network draws.
Trial r therefore produces the same outcome whatever R is and however trials are
spread over workers.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from analysis.bounds import GAP_NOTE, BoundReport, prop1_log_tv_bound, prop1_log_tv_bound_curve, theorem1_bound
from analysis.trajectories import cost_curve, simulate_trajectory
from core.exceptions import InvalidScenario

logger = logging.getLogger(__name__)

MIN_TRIALS = 100
SLACK_SIGMAS = 3.0
BOUNDS = ("theorem1", "prop1")


@dataclass(frozen=True)
class CheckpointResult:
    t: int
    bound: BoundReport
    violations: int
    violation_rate: float
    passed: bool


@dataclass(frozen=True)
class MonteCarloReport:
    which: str
    trials: int
    violations: int
    violation_rate: float
    delta: float
    slack: float
    verdict: str
    bound: BoundReport
    eta: float
    seed: int
    checkpoints: tuple = ()
    diagnostics: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        report = asdict(self)
        report["bound"] = self.bound.to_dict()
        report["checkpoints"] = [
            {**asdict(c), "bound": c.bound.to_dict()} for c in self.checkpoints
        ]
        return report


def trial_seed(base_seed, trial):
    return np.random.SeedSequence(base_seed, spawn_key=(trial,))


def trial_generators(base_seed, trial):
    """(signal generator, network generator) for one trial."""
    signal_seq, network_seq = trial_seed(base_seed, trial).spawn(2)
    return np.random.default_rng(signal_seq), np.random.default_rng(network_seq)


def slack(delta, trials):
    """Allowed excess of the violation rate over delta: three binomial standard errors."""
    return SLACK_SIGMAS * math.sqrt(delta * (1.0 - delta) / trials)


def simulate_trial(task):
    """Full trajectory of one trial; task is (scenario, trial, base_seed, eta)."""
    scenario, trial, base_seed, eta = task
    signal_rng, network_rng = trial_generators(base_seed, trial)
    return simulate_trajectory(
        scenario.model, scenario.process, scenario.horizon, eta, signal_rng, network_rng,
        seed=base_seed, trial=trial, config_digest=scenario.config_digest,
    )


def run_trial(task):
    """One independent trial; returns only the numbers the verdict needs."""
    scenario, which, trial, base_seed, eta, horizon, curve = task
    signal_rng, network_rng = trial_generators(base_seed, trial)
    record = simulate_trajectory(
        scenario.model, scenario.process, horizon, eta, signal_rng, network_rng,
        seed=base_seed, trial=trial, config_digest=scenario.config_digest,
    )
    if which == "theorem1":
        cost = max(cost_curve(record, i)[-1] for i in range(record.n))
        logger.debug("trial %d: max cost %.6f", trial, cost)
        return {"trial": trial, "cost": float(cost)}

    worst = record.log_tv_error.max(axis=1)
    outcome = {
        "trial": trial,
        "log_tv": [float(worst[t - 1]) for t in scenario.checkpoints],
        "anytime_violation": bool(np.any(worst > curve)),
    }
    logger.debug("trial %d: worst log TV at checkpoints %s", trial, outcome["log_tv"])
    return outcome


def map_trials(function, tasks, workers=1):
    """Apply function to every task in order, in-process or on a pool of worker processes."""
    if workers <= 1:
        return [function(task) for task in tasks]
    chunksize = max(1, len(tasks) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(function, tasks, chunksize=chunksize))


def _check_scenario(scenario, which, trials):
    if which not in BOUNDS:
        raise InvalidScenario(f"unknown bound {which!r}; expected one of {BOUNDS}")
    if trials < MIN_TRIALS:
        raise InvalidScenario(f"verification needs at least {MIN_TRIALS} trials, got {trials}")
    if which == "theorem1" and scenario.process.kind != "fixed":
        raise InvalidScenario("the cost bound is stated for a fixed network; use kind fixed or metropolis")
    if which == "prop1":
        if not scenario.checkpoints:
            raise InvalidScenario("TV verification needs at least one checkpoint")
        if min(scenario.checkpoints) < 1:
            raise InvalidScenario(f"checkpoints must be positive, got {list(scenario.checkpoints)}")


def monte_carlo_verify(scenario, which, trials=None, seed=None, workers=1):
    """Estimate how often a bound is violated over independent seeded trials."""
    trials = scenario.trials if trials is None else trials
    seed = scenario.seed if seed is None else seed
    _check_scenario(scenario, which, trials)

    eta = scenario.learning_rate("theorem1" if which == "theorem1" else "prop1")
    args = (scenario.B, scenario.rate, scenario.m, scenario.n, scenario.delta, scenario.sigma2)
    allowed = slack(scenario.delta, trials)
    threshold = scenario.delta + allowed

    if which == "theorem1":
        horizon, curve = scenario.horizon, None
    else:
        horizon = max(scenario.checkpoints)
        curve = prop1_log_tv_bound_curve(*args, horizon)

    logger.info(
        "%s: verifying %s over %d trials (seed %d, eta %.6g, %d workers)",
        scenario.name, which, trials, seed, eta, workers,
    )
    tasks = [(scenario, which, r, seed, eta, horizon, curve) for r in range(trials)]
    outcomes = map_trials(run_trial, tasks, workers)

    if which == "theorem1":
        bound = theorem1_bound(*args)
        logger.warning("%s: %s", scenario.name, GAP_NOTE)
        costs = np.array([o["cost"] for o in outcomes])
        violations = int(np.sum(costs > bound.value))
        checkpoints = ()
        diagnostics = {"max_cost": float(costs.max()), "mean_cost": float(costs.mean())}
    else:
        log_tv = np.array([o["log_tv"] for o in outcomes])
        checkpoints = []
        for column, t in enumerate(scenario.checkpoints):
            report = prop1_log_tv_bound(*args, t)
            count = int(np.sum(log_tv[:, column] > report.value))
            checkpoints.append(CheckpointResult(
                t=t, bound=report, violations=count,
                violation_rate=count / trials, passed=count / trials <= threshold,
            ))
        worst = max(checkpoints, key=lambda c: c.violations)
        bound, violations, checkpoints = worst.bound, worst.violations, tuple(checkpoints)
        anytime = sum(o["anytime_violation"] for o in outcomes)
        diagnostics = {
            "anytime_violations": anytime,
            "anytime_violation_rate": anytime / trials,
            "max_log_tv": [float(v) for v in log_tv.max(axis=0)],
        }

    rate = violations / trials
    verdict = "pass" if rate <= threshold else "fail"
    logger.info(
        "%s: %s %s with %d/%d violations (rate %.4f, allowed %.4f)",
        scenario.name, which, verdict, violations, trials, rate, threshold,
    )
    return MonteCarloReport(
        which=which, trials=trials, violations=violations, violation_rate=rate,
        delta=scenario.delta, slack=allowed, verdict=verdict, bound=bound,
        eta=eta, seed=seed, checkpoints=checkpoints, diagnostics=diagnostics,
    )
